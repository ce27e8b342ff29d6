"""Deterministic random instances: involutions, metabolic idempotents, square-central elements.

All generators take a :class:`random.Random` and re-verify their output
against its defining properties before returning it.
"""

from __future__ import annotations

import random
from itertools import product
from typing import Any

from ..errors import ExceptionalCase, Infeasible, InvalidInvolution
from ..exactfield import FieldSpec
from ..idempotent import classify_idempotent, hyperbolize_metabolic
from ..involalg import InvolutionAlgebra, InvolutionType, Kind, classify_involution, compute_subspace
from ..matspace import Matrix, jordan_block_sum, nullspace, rank_of

ENUMERATION_LIMIT = 50_000

KINDS = ("metabolic-idempotent", "hyperbolic-idempotent", "skew-square-central", "symmetric-square-central")


def random_matrix(F: FieldSpec, n: int, rng: random.Random) -> Matrix:
    return Matrix(F, [[F.random(rng) for _ in range(n)] for _ in range(n)])


def random_invertible(F: FieldSpec, n: int, rng: random.Random) -> Matrix:
    while True:
        P = random_matrix(F, n, rng)
        if P.is_invertible():
            return P


def _fixed_random(F: FieldSpec, rng: random.Random, unitary: bool) -> Any:
    # element of the fixed field of the conjugation (the prime field for k = 2)
    return F.from_int(rng.randrange(F.char)) if unitary else F.random(rng)


def random_descriptor(F: FieldSpec, n: int, type_: InvolutionType | str, rng: random.Random) -> tuple[Matrix, Kind]:
    """Random invertible g whose involution has the requested type."""
    type_ = InvolutionType(type_)
    if type_ is InvolutionType.UNITARY:
        if not F.unitary:
            raise Infeasible("unitary", f"{F} has no conjugation")
        kind = Kind.UNITARY
    else:
        kind = Kind.FIRST
    if type_ is InvolutionType.SYMPLECTIC and n % 2:
        raise Infeasible("symplectic", "odd degree")
    for _ in range(1000):
        rows = [[F.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                a = F.random(rng)
                if i == j:
                    if type_ is InvolutionType.SYMPLECTIC:
                        a = F.zero
                    elif kind is Kind.UNITARY:
                        a = _fixed_random(F, rng, True)
                    rows[i][i] = a
                else:
                    rows[i][j] = a
                    if kind is Kind.UNITARY:
                        rows[j][i] = F.conj(a)
                    elif type_ is InvolutionType.SYMPLECTIC:
                        rows[j][i] = F.neg(a)
                    else:
                        rows[j][i] = a
        g = Matrix(F, rows)
        if not g.is_invertible():
            continue
        alg = InvolutionAlgebra(F, n, g, kind, check=False)
        if classify_involution(alg).type is type_:
            return g, kind
    raise Infeasible(type_.value, f"no descriptor found over {F} for n={n}")


def random_algebra(F: FieldSpec, n: int, type_: InvolutionType | str, rng: random.Random) -> InvolutionAlgebra:
    g, kind = random_descriptor(F, n, type_, rng)
    return InvolutionAlgebra(F, n, g, kind)


def _span_vectors(F: FieldSpec, basis: list[tuple], rng: random.Random) -> tuple:
    n = len(basis[0])
    v = [F.zero] * n
    for b in basis:
        c = F.random(rng)
        if c != F.zero:
            v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
    return tuple(v)


def random_lagrangian(alg: InvolutionAlgebra, rng: random.Random, tries: int = 200) -> list[tuple]:
    """Basis of a random totally isotropic subspace of dimension n/2 for the form h."""
    F, n = alg.field, alg.n
    if n % 2:
        raise Infeasible("metabolic-idempotent", "odd degree")
    L: list[tuple] = []
    G = alg.gram
    for _ in range(n // 2):
        rows = []
        for l in L:
            lc = [F.conj(a) for a in l] if alg.semilinear else list(l)
            rows.append(tuple(F.dot(lc, col) for col in G.columns()))
        W = nullspace(rows, F, width=n) if rows else [tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n)]
        r = len(L)

        def ok(v):
            return any(a != F.zero for a in v) and alg.form(v, v) == F.zero and rank_of(L + [v], F) > r

        found = None
        for _ in range(tries):
            v = _span_vectors(F, W, rng)
            if ok(v):
                found = v
                break
        if found is None and F.is_finite and F.order ** len(W) <= ENUMERATION_LIMIT:
            for cs in product(F.elements(), repeat=len(W)):
                v = tuple(F.dot(cs, col) for col in zip(*W))
                if ok(v):
                    found = v
                    break
        if found is None:
            raise Infeasible("metabolic-idempotent", "no isotropic extension found")
        L.append(found)
    return L


def random_metabolic(alg: InvolutionAlgebra, rng: random.Random) -> Matrix:
    """Projection onto a random Lagrangian along a random complement."""
    F, n = alg.field, alg.n
    L = random_lagrangian(alg, rng)
    while True:
        C = [tuple(F.random(rng) for _ in range(n)) for _ in range(n // 2)]
        B = Matrix.from_columns(F, L + C)
        if B.is_invertible():
            break
    D = Matrix(F, [[F.one if i == j < n // 2 else F.zero for j in range(n)] for i in range(n)])
    e = B @ D @ B.inverse()
    if not classify_idempotent(alg, e).is_metabolic:
        raise AssertionError("generated idempotent is not metabolic")
    return e


def random_hyperbolic(alg: InvolutionAlgebra, rng: random.Random) -> Matrix:
    e = random_metabolic(alg, rng)
    try:
        return hyperbolize_metabolic(alg, e)
    except ExceptionalCase as exc:
        raise Infeasible("hyperbolic-idempotent", "char 2 and sigma orthogonal") from exc


def _random_in(alg: InvolutionAlgebra, which: str, rng: random.Random) -> Matrix:
    F = alg.field
    basis = compute_subspace(alg, which).basis
    base = F.fixed_field() if alg.semilinear else F
    x = alg.zero()
    for b in basis:
        c = base.random(rng)
        if c:
            x = x + b.scale(c if not alg.semilinear else F.from_coords([c]))
    return x


def _half(x: Matrix) -> bool:
    return 2 * x.rank() == x.n


def random_skew_square_central(alg: InvolutionAlgebra, rng: random.Random, lam=None, tries: int = 200) -> tuple[Matrix, Any]:
    """u with sigma(u) = -u, u^2 = lam^2, sigma(lam) = lam and rank(lam+u) = n/2."""
    F = alg.field
    unitary = alg.semilinear
    # a skew u with u^2 = 0 and rank n/2 induces a nondegenerate alternating form in
    # dimension n/2 when sigma is orthogonal (char != 2), so n/2 must then be even
    zero_ok = not (F.char != 2 and (alg.n // 2) % 2 == 1
                   and classify_involution(alg).type is InvolutionType.ORTHOGONAL)
    if lam is None:
        lam = F.zero if zero_ok and rng.random() < 0.4 else _fixed_random(F, rng, unitary)
        if lam == F.zero and not zero_ok:
            lam = F.one
    elif lam == F.zero and not zero_ok:
        raise Infeasible("skew-square-central", "lambda = 0 needs n/2 even for orthogonal involutions")
    if alg.sigma_scalar(lam) != lam:
        raise Infeasible("skew-square-central", "sigma(lambda) != lambda")
    for _ in range(tries):
        e = random_metabolic(alg, rng)
        se = alg.sigma(e)
        if lam != F.zero and (F.char != 2 or rng.random() < 0.5):
            u = (e - se).scale(lam)
        else:
            y = _random_in(alg, "Skew", rng)
            u = e @ y @ se
            if lam != F.zero:
                u = u.plus_scalar(lam)
        if _check_square_central(alg, u, lam, -1):
            return u, lam
    raise Infeasible("skew-square-central", f"no instance after {tries} tries")


def random_symmetric_square_central(alg: InvolutionAlgebra, rng: random.Random, tries: int = 200) -> tuple[Matrix, Any]:
    """char 2, sigma orthogonal: u = u' + alpha with u' in Alt, sigma(u) = u, rank(lam+u) = n/2."""
    F = alg.field
    if F.char != 2 or classify_involution(alg).type is not InvolutionType.ORTHOGONAL:
        raise Infeasible("symmetric-square-central", "only char 2 orthogonal involutions")
    for _ in range(tries):
        e = random_metabolic(alg, rng)
        se = alg.sigma(e)
        mode = rng.randrange(3)
        if mode == 0:
            lam1 = F.random(rng) or F.one
            u1 = (e + se).scale(lam1)
        else:
            lam1 = F.zero
            y = _random_in(alg, "Alt" if mode == 1 else "Sym", rng)
            u1 = e @ y @ se
        alpha = F.random(rng)
        u, lam = u1.plus_scalar(alpha), F.add(lam1, alpha)
        if _check_square_central(alg, u, lam, +1):
            return u, lam
    raise Infeasible("symmetric-square-central", f"no instance after {tries} tries")


def _check_square_central(alg: InvolutionAlgebra, u: Matrix, lam, sign: int) -> bool:
    F = alg.field
    if u.is_scalar():
        return False
    if u @ u != Matrix.scalar(F, alg.n, F.mul(lam, lam)):
        return False
    su = alg.sigma(u)
    if su != (u if sign > 0 else -u):
        return False
    return _half(u.plus_scalar(lam))


def random_square_central(F: FieldSpec, n: int, rng: random.Random, half: bool | None = None) -> tuple[Matrix, Any]:
    """Random u with u^2 = lam^2 and u not scalar, conjugated from a block normal form.

    ``half`` forces (True) or forbids (False) rank(lam+u) = n/2; None picks at random.
    """
    if half is None:
        # in degree 2 every non-scalar square-central element has the half-rank property
        half = n == 2 or rng.random() < 0.5
    if half and n % 2:
        raise Infeasible("square-central", "odd degree")
    if not half and n < 3:
        raise Infeasible("square-central", "every non-scalar instance in degree 2 has half rank")
    for _ in range(1000):
        lam = F.zero if rng.random() < 0.3 else F.random(rng)
        if F.char != 2 and lam != F.zero:
            if half:
                m = n // 2
            else:
                m = rng.choice([i for i in range(1, n) if 2 * i != n])
            blocks = (m, n - m, 0)
        else:
            k = n // 2 if half else rng.randrange(1, (n + 1) // 2)
            blocks = (n - 2 * k, 0, k)
        C = jordan_block_sum(F, lam, *blocks)
        P = random_invertible(F, n, rng)
        u = P.inverse() @ C @ P
        if not u.is_scalar() and _half(u.plus_scalar(lam)) == half:
            return u, lam
    raise Infeasible("square-central", "no instance found")


def generate_instance(kind: str, alg: InvolutionAlgebra, seed: int | random.Random, lam=None):
    """Instance of ``kind`` for ``alg``.

    Idempotent kinds return a Matrix; element kinds return ``(u, lam)``.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if kind == "metabolic-idempotent":
        return random_metabolic(alg, rng)
    if kind == "hyperbolic-idempotent":
        if alg.field.char == 2 and classify_involution(alg).type is InvolutionType.ORTHOGONAL:
            raise Infeasible(kind, "hyperbolic idempotents do not exist for char 2 orthogonal involutions")
        return random_hyperbolic(alg, rng)
    if kind == "skew-square-central":
        return random_skew_square_central(alg, rng, lam)
    if kind == "symmetric-square-central":
        return random_symmetric_square_central(alg, rng)
    raise ValueError(f"unknown instance kind {kind!r}")


def feasible_algebra(F: FieldSpec, n: int, type_: str, rng: random.Random, attempts: int = 50) -> InvolutionAlgebra:
    """Random algebra of the given type that admits metabolic idempotents."""
    for _ in range(attempts):
        try:
            alg = random_algebra(F, n, type_, rng)
            random_lagrangian(alg, rng)
            return alg
        except (Infeasible, InvalidInvolution):
            continue
    raise Infeasible("metabolic-idempotent", f"no metabolic {type_} involution over {F}, n={n}")

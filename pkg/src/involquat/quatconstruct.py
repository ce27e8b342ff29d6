"""Decision procedures and constructions of (invariant, split) quaternion subalgebras.

Every constructor returns either a certified :class:`QuaternionSubalgebra`
or a :class:`NoSubalgebra` carrying the theorem that rules one out.
Inputs violating a hypothesis raise
:class:`~involquat.errors.PreconditionViolated` instead, so a negative
answer is never confused with bad input.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from typing import Any, Sequence

from .errors import (
    CertificationError,
    ExceptionalCase,
    NotHyperbolic,
    NotMetabolic,
    NotSquareCentral,
    NotSymmetric,
    PreconditionViolated,
    ScalarInput,
    SquareNotCentral,
)
from .exactfield import FieldSpec, Scalar
from .idempotent import (
    IdempotentReport,
    classify_idempotent,
    hyperbolize_metabolic,
    idempotent_generator,
    twist_metabolic,
)
from .involalg import (
    InvolutionAlgebra,
    InvolutionType,
    Kind,
    classify_involution,
    express_in_alt,
    find_half_unit,
    in_alt,
    linear_solver,
)
from .matspace import (
    Matrix,
    idempotent_normal_form,
    rank_of,
    rref,
    solve_system,
    square_central_normal_form,
)

NONE_BY_THEOREM = "none-by-theorem"
CONSTRUCTED = "constructed"
PRECONDITION_FAILED = "precondition-failed"


class SpanCoords:
    """Coordinates with respect to a list of matrices (one elimination, reused)."""

    def __init__(self, basis: Sequence[Matrix]):
        F = basis[0].field
        self.field = F
        self.k = k = len(basis)
        N = basis[0].n ** 2
        z, o = F.zero, F.one
        rows = [list(b.vec()) + [o if i == j else z for j in range(k)] for i, b in enumerate(basis)]
        R, self.pivots = rref(rows, F, ncols=N)
        self.independent = len(self.pivots) == k
        self.R = [r[:N] for r in R]
        self.Tr = [r[N:] for r in R]

    def coords(self, x: Matrix) -> tuple | None:
        F = self.field
        v = x.vec()
        d = [v[p] for p in self.pivots]
        add, mul, zero = F.add, F.mul, F.zero
        recon = [zero] * len(v)
        for dk, Rk in zip(d, self.R):
            if dk != zero:
                recon = [add(a, mul(dk, b)) for a, b in zip(recon, Rk)]
        if tuple(recon) != v:
            return None
        c = [zero] * self.k
        for dk, Tk in zip(d, self.Tr):
            if dk != zero:
                c = [add(a, mul(dk, b)) for a, b in zip(c, Tk)]
        return tuple(c)


@dataclass(frozen=True)
class NoSubalgebra:
    """Theorem-backed negative answer. Falsy."""

    reason: str
    decision: str = NONE_BY_THEOREM

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"decision": self.decision, "reason": self.reason}


@dataclass(frozen=True)
class QuaternionSubalgebra:
    """Four-dimensional split quaternion subalgebra of M_n(F) with certificates.

    ``table[i][j]`` holds the coordinates of ``basis[i] @ basis[j]``;
    ``sigma_images[i]`` the coordinates of ``sigma(basis[i])`` when the
    subalgebra is involution-invariant.
    """

    basis: tuple[Matrix, Matrix, Matrix, Matrix]
    table: tuple
    split_witness: Matrix
    witness_kind: str  # "idempotent" | "nilpotent"
    sigma_invariant: bool
    sigma_images: tuple | None
    contains: tuple[tuple[str, Matrix, tuple], ...]
    labels: tuple[str, str, str, str] = ("1", "b1", "b2", "b3")
    notes: dict = dc_field(default_factory=dict, compare=False)

    decision = CONSTRUCTED

    def __bool__(self) -> bool:
        return True

    @property
    def field(self) -> FieldSpec:
        return self.basis[0].field

    def coords(self, x: Matrix) -> tuple | None:
        return SpanCoords(self.basis).coords(x)

    def member(self, name: str) -> Matrix:
        return dict((k, m) for k, m, _ in self.contains)[name]

    def elements(self) -> list[Matrix]:
        """All elements of the span (finite fields only)."""
        F = self.field
        out = []
        for a in F.elements():
            for b in F.elements():
                for c in F.elements():
                    for d in F.elements():
                        m = Matrix.zeros(F, self.basis[0].n)
                        for coef, bi in zip((a, b, c, d), self.basis):
                            if coef != F.zero:
                                m = m + bi.scale(coef)
                        out.append(m)
        return out

    def to_json(self) -> dict:
        tj = self.field.to_json
        return {
            "decision": self.decision,
            "labels": list(self.labels),
            "basis": [b.to_json() for b in self.basis],
            "structure_constants": [[[tj(c) for c in cell] for cell in row] for row in self.table],
            "sigma_invariant": self.sigma_invariant,
            "sigma_images": None if self.sigma_images is None else [[tj(c) for c in v] for v in self.sigma_images],
            "split_witness": {"kind": self.witness_kind, "element": self.split_witness.to_json()},
            "contains": {name: [tj(c) for c in co] for name, _, co in self.contains},
            "notes": self.notes,
        }


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str]
    structure_constants: tuple | None = None
    sigma_images: tuple | None = None
    member_coords: dict = dc_field(default_factory=dict)


def _structure(basis: Sequence[Matrix], sc: SpanCoords) -> tuple[tuple | None, list[str]]:
    failures = []
    table = []
    for i, bi in enumerate(basis):
        row = []
        for j, bj in enumerate(basis):
            c = sc.coords(bi @ bj)
            if c is None:
                failures.append(f"product b{i}*b{j} not in span")
            row.append(c)
        table.append(tuple(row))
    return (tuple(table) if not failures else None), failures


def _center_dim(table, F: FieldSpec) -> int:
    # c with sum_i c_i [b_i, b_j] = 0 for all j
    eqs = []
    for j in range(4):
        for k in range(4):
            eqs.append([F.sub(table[i][j][k], table[j][i][k]) for i in range(4)])
    return 4 - rank_of(eqs, F)


def _azumaya_rank(table, F: FieldSpec) -> int:
    """Rank of {x -> b_i x b_j} inside End_F(Q); 16 iff Q is central simple."""
    mats = []
    add, mul = F.add, F.mul
    for i in range(4):
        for j in range(4):
            vec = []
            for l in range(4):
                left = table[i][l]
                for c in range(4):
                    acc = F.zero
                    for a in range(4):
                        if left[a] != F.zero:
                            acc = add(acc, mul(left[a], table[a][j][c]))
                    vec.append(acc)
            mats.append(vec)
    return rank_of(mats, F)


def validate_quaternion_subalgebra(
    alg: InvolutionAlgebra | None,
    Q: QuaternionSubalgebra,
    require_invariant: bool | None = None,
) -> ValidationReport:
    """Re-check every certificate of ``Q`` from scratch; report lists failures."""
    basis = Q.basis
    F = basis[0].field
    n = basis[0].n
    failures: list[str] = []
    if not basis[0].is_identity():
        failures.append("b0 is not the unit of A")
    sc = SpanCoords(basis)
    if not sc.independent:
        return ValidationReport(False, failures + ["basis is linearly dependent"])
    table, fails = _structure(basis, sc)
    failures += fails
    report = ValidationReport(False, failures, table)
    if table is None:
        return report
    if Q.table and Q.table != table:
        failures.append("stored structure constants differ from recomputed ones")
    if _center_dim(table, F) != 1:
        failures.append("center of span is not F*1")
    if _azumaya_rank(table, F) != 16:
        failures.append("span is not central simple (Q (x) Q^op -> End(Q) not onto)")
    w = Q.split_witness
    if sc.coords(w) is None:
        failures.append("split witness not in span")
    elif w.is_zero():
        failures.append("split witness is zero")
    elif Q.witness_kind == "idempotent":
        if w @ w != w or w.is_identity():
            failures.append("split witness is not a nontrivial idempotent")
    elif Q.witness_kind == "nilpotent":
        if not (w @ w).is_zero():
            failures.append("split witness does not square to zero")
    else:
        failures.append(f"unknown witness kind {Q.witness_kind!r}")
    check_inv = Q.sigma_invariant if require_invariant is None else require_invariant
    if check_inv:
        if alg is None:
            failures.append("invariance claimed without an involution")
        else:
            imgs = []
            for i, b in enumerate(basis):
                c = sc.coords(alg.sigma(b))
                if c is None:
                    failures.append(f"sigma(b{i}) not in span")
                imgs.append(c)
            report.sigma_images = tuple(imgs)
            if Q.sigma_images is not None and Q.sigma_images != report.sigma_images:
                failures.append("stored sigma images differ from recomputed ones")
    for name, m, co in Q.contains:
        c = sc.coords(m)
        report.member_coords[name] = c
        if c is None:
            failures.append(f"required element {name} not in span")
        elif co and c != co:
            failures.append(f"stored coordinates of {name} are wrong")
    report.ok = not failures
    return report


def certify(
    alg: InvolutionAlgebra | None,
    basis: Sequence[Matrix],
    witness: Matrix,
    witness_kind: str,
    contains: dict[str, Matrix],
    invariant: bool,
    labels: Sequence[str] = ("1", "b1", "b2", "b3"),
    notes: dict | None = None,
) -> QuaternionSubalgebra:
    """Assemble and validate; raise CertificationError on any failure."""
    basis = tuple(basis)
    sc = SpanCoords(basis)
    if not sc.independent:
        raise CertificationError("basis is linearly dependent")
    table, fails = _structure(basis, sc)
    if fails:
        raise CertificationError("; ".join(fails))
    sig = None
    if invariant:
        sig = tuple(sc.coords(alg.sigma(b)) for b in basis)
    members = tuple((k, m, sc.coords(m)) for k, m in contains.items())
    Q = QuaternionSubalgebra(basis, table, witness, witness_kind, invariant, sig, members, tuple(labels), notes or {})
    rep = validate_quaternion_subalgebra(alg, Q)
    if not rep.ok:
        raise CertificationError("; ".join(rep.failures))
    return Q


def with_members(alg: InvolutionAlgebra | None, Q: QuaternionSubalgebra, **extra: Matrix) -> QuaternionSubalgebra:
    contains = {k: m for k, m, _ in Q.contains}
    contains.update(extra)
    return certify(alg, Q.basis, Q.split_witness, Q.witness_kind, contains, Q.sigma_invariant, Q.labels, Q.notes)


# --- helpers ---------------------------------------------------------------------------


def _raw(field: FieldSpec, lam) -> Any:
    """Accept a Scalar, a raw value of ``field`` or anything ``field.coerce`` understands.

    Plain ints in ``range(field.order)`` are taken as raw encodings, so the
    generator t of GF(4) may be passed as ``2``.
    """
    if isinstance(lam, Scalar):
        if lam.field != field:
            raise PreconditionViolated("lambda in F", f"{lam.field} vs {field}")
        return lam.value
    if isinstance(lam, int) and not isinstance(lam, bool) and field.is_finite and 0 <= lam < field.order:
        return lam
    return field.coerce(lam)


def _square_central_lambda(u: Matrix, lam) -> Any:
    """Check u not scalar and u^2 = lam^2; recover lam by a square root when omitted."""
    F = u.field
    if u.is_scalar():
        raise ScalarInput("u lies in F*1")
    sq = (u @ u).scalar_value()
    if sq is None:
        raise NotSquareCentral("u^2 is not a scalar")
    if lam is None:
        lam = F.sqrt(sq)
        if lam is None:
            raise NotSquareCentral("u^2 is not a square in F")
        return lam
    lam = _raw(F, lam)
    if F.mul(lam, lam) != sq:
        raise NotSquareCentral("u^2 != lambda^2")
    return lam


def _half(x: Matrix) -> bool:
    n = x.n
    return 2 * n * x.rank() == n * n


def _check_element_hypotheses(alg: InvolutionAlgebra, u: Matrix, lam, sign: int) -> Any:
    """Standing hypotheses on u: sigma(u) = sign*u, u not in F, u^2 = lam^2, sigma(lam) = lam, half rank."""
    lam = _square_central_lambda(u, lam)
    su = alg.sigma(u)
    if sign < 0 and su != -u:
        raise PreconditionViolated("sigma(u)=-u")
    if sign > 0 and su != u:
        raise PreconditionViolated("sigma(u)=u")
    if alg.sigma_scalar(lam) != lam:
        raise PreconditionViolated("sigma(lambda)=lambda")
    if not _half(u.plus_scalar(lam)):
        raise PreconditionViolated("dim(lambda+u)A = dim A/2")
    return lam


# --- square-central elements without involution ------------------------------------------


def split_quaternion_containing(u: Matrix, lam=None) -> QuaternionSubalgebra | NoSubalgebra:
    """Split quaternion subalgebra of M_n(F) containing u, which exists iff dim(lam+u)A = dim A/2."""
    F, n = u.field, u.n
    lam = _square_central_lambda(u, lam)
    if not _half(u.plus_scalar(lam)):
        return NoSubalgebra("dim(lambda+u)A != dim A/2")
    cert = square_central_normal_form(u, lam)
    h = n // 2
    z, o = F.zero, F.one
    if F.char != 2 and lam != z:
        if cert.m != h or cert.n != h:
            raise CertificationError("eigenspaces of u are not of equal dimension")
        swap = Matrix(F, [[o if abs(i - j) == h else z for j in range(n)] for i in range(n)])
        proj = Matrix(F, [[o if i == j < h else z for j in range(n)] for i in range(n)])
        v = cert.P_inv @ swap @ cert.P
        witness = cert.P_inv @ proj @ cert.P
    else:
        if cert.m != 0 or cert.k != h:
            raise CertificationError("u is not a sum of J_2(lambda) blocks")
        rows = [[z] * n for _ in range(n)]
        for b in range(h):
            rows[2 * b + 1][2 * b] = o
        v = cert.P_inv @ Matrix(F, rows) @ cert.P
        witness = u @ v
    return certify(None, [Matrix.identity(F, n), u, v, u @ v], witness, "idempotent", {"u": u}, False,
                   ("1", "u", "v", "uv"))


def make_w(e: Matrix, u: Matrix, lam) -> Matrix:
    """w with w^2 = 0, ew = 0, we = w, uw = e - lam w and wu = lam w - e + 1."""
    F, n = e.field, e.n
    lam = _raw(F, lam)
    one = Matrix.identity(F, n)
    L = Matrix.scalar(F, n, lam)
    if u.is_zero():
        raise PreconditionViolated("u!=0")
    if e @ e != e:
        raise PreconditionViolated("e^2=e")
    if u @ u != Matrix.scalar(F, n, F.mul(lam, lam)):
        raise PreconditionViolated("u^2=lambda^2")
    if u @ e != e.scale(lam):
        raise PreconditionViolated("ue=lambda e")
    if e @ (u + L) != u + L:
        raise PreconditionViolated("e(lambda+u)=lambda+u")
    if not _half(e):
        raise PreconditionViolated("dim eA = dim A/2")
    if not _half(e @ (u - L)):
        raise PreconditionViolated("dim e(u-lambda)A = dim A/2")
    cert = idempotent_normal_form(e)
    m = cert.m
    U = cert.P @ u @ cert.P_inv
    W = Matrix(F, [row[m:] for row in U.rows[:m]])
    Winv = W.inverse()
    rows = [[F.zero] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            rows[m + i][j] = Winv.rows[i][j]
    w = cert.P_inv @ Matrix(F, rows) @ cert.P
    checks = {
        "w^2=0": (w @ w).is_zero(),
        "ew=0": (e @ w).is_zero(),
        "we=w": w @ e == w,
        "uw=e-lambda w": u @ w == e - w.scale(lam),
        "wu=lambda w-e+1": w @ u == w.scale(lam) - e + one,
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise CertificationError(f"make_w relations failed: {bad}")
    return w


# --- idempotents ---------------------------------------------------------------------


@dataclass(frozen=True)
class HyperbolicSplitting:
    """Concrete splitting V = S + T for a hyperbolic idempotent.

    ``S = im e`` and ``T = im sigma(e)`` are totally isotropic; ``pairing``
    is the matrix h(s_i, t_j) identifying S with the dual of T; ``theta`` is
    the Gram matrix of the auxiliary form on T (the standard dot product).
    """

    S_basis: tuple
    T_basis: tuple
    gram: Matrix
    theta: Matrix
    pairing: Matrix
    u: Matrix
    v: Matrix


def hyperbolic_splitting(alg: InvolutionAlgebra, e: Matrix) -> HyperbolicSplitting:
    F, n = alg.field, alg.n
    S = e.column_space()
    T = alg.sigma(e).column_space()
    m = len(S)
    if len(T) != m or 2 * m != n:
        raise CertificationError("hyperbolic splitting has unequal halves")
    H = Matrix(F, [[alg.form(s, t) for t in T] for s in S])
    Hs = alg.star(H)  # H^*
    Hs_inv = Hs.inverse()
    B = Matrix.from_columns(F, list(S) + list(T))
    Binv = B.inverse()
    z = F.zero
    u_rows = [[z] * n for _ in range(n)]
    v_rows = [[z] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            u_rows[i][m + j] = Hs_inv.rows[i][j]
            v_rows[m + i][j] = Hs.rows[i][j]
    u = B @ Matrix(F, u_rows) @ Binv
    v = B @ Matrix(F, v_rows) @ Binv
    return HyperbolicSplitting(tuple(S), tuple(T), alg.gram, Matrix.identity(F, m), H, u, v)


def invariant_quat_for_hyperbolic(alg: InvolutionAlgebra, e: Matrix) -> QuaternionSubalgebra:
    """sigma-invariant split quaternion subalgebra containing a hyperbolic idempotent."""
    if not classify_idempotent(alg, e).is_hyperbolic:
        raise NotHyperbolic()
    sp = hyperbolic_splitting(alg, e)
    one = alg.one()
    if sp.u @ sp.v != e or sp.v @ sp.u != one - e:
        raise CertificationError("u v != e or v u != sigma(e)")
    return certify(alg, [one, e, sp.u, sp.v], e, "idempotent", {"e": e, "sigma(e)": alg.sigma(e)}, True,
                   ("1", "e", "u", "v"))


def invariant_quat_with_nilpotent(alg: InvolutionAlgebra, e: Matrix, u: Matrix) -> QuaternionSubalgebra:
    """sigma-invariant quaternion subalgebra containing a hyperbolic e and a square-zero u."""
    if not classify_idempotent(alg, e).is_hyperbolic:
        raise PreconditionViolated("e hyperbolic")
    if not (u @ u).is_zero():
        raise PreconditionViolated("u^2=0")
    if not _half(u):
        raise PreconditionViolated("dim uA = dim A/2")
    if not (u @ e).is_zero():
        raise PreconditionViolated("ue=0")
    if e @ u != u:
        raise PreconditionViolated("eu=u")
    su = alg.sigma(u)
    if su == u:
        sign = 1
    elif su == -u:
        sign = -1
    else:
        raise PreconditionViolated("sigma(u)=+-u")
    w = make_w(e, u, alg.field.zero)
    sw = alg.sigma(w)
    if sw != (w if sign > 0 else -w):
        raise CertificationError("sigma(w) != +-w")
    return certify(alg, [alg.one(), e, u, w], e, "idempotent", {"u": u, "e": e}, True, ("1", "e", "u", "w"),
                   {"sigma(w)": "w" if sign > 0 else "-w"})


def invariant_quat_for_metabolic(alg: InvolutionAlgebra, e: Matrix) -> QuaternionSubalgebra | NoSubalgebra:
    """Invariant split quaternion subalgebra containing a metabolic e.

    Exists iff e is hyperbolic or dim e sigma(e) A = dim A / 2.
    """
    rep = classify_idempotent(alg, e)
    if not rep.is_metabolic:
        raise NotMetabolic()
    if rep.is_hyperbolic:
        return invariant_quat_for_hyperbolic(alg, e)
    u = rep.e_sigma_e
    if not _half(u):
        return NoSubalgebra("metabolic, not hyperbolic, and dim e sigma(e) A != dim A/2")
    F = alg.field
    one = alg.one()
    w = make_w(e, u, F.zero)
    se = alg.sigma(e)
    if se != one - e + u:
        raise CertificationError("sigma(e) != 1 - e + u")
    two_e = e.scale(F.from_int(2))
    if alg.sigma(w) != w + two_e - u - one:
        raise CertificationError("sigma(w) != w + 2e - u - 1")
    return certify(alg, [one, e, u, w], e, "idempotent", {"e": e}, True, ("1", "e", "u", "w"),
                   {"sigma(e)": "1-e+u", "sigma(w)": "w+2e-u-1"})


# --- square-central elements with involution ----------------------------------------------


def skew_to_metabolic(alg: InvolutionAlgebra, u: Matrix, lam=None) -> tuple[Matrix, IdempotentReport]:
    """Metabolic e with e(lam+u) = lam+u and ue = lam e, generating (lam+u)A."""
    lam = _check_element_hypotheses(alg, u, lam, -1)
    F = alg.field
    x = u.plus_scalar(lam)
    e = idempotent_generator(x)
    rep = classify_idempotent(alg, e)
    if not rep.is_metabolic:
        raise CertificationError("generator of (lambda+u)A is not metabolic")
    if e @ x != x or u @ e != e.scale(lam):
        raise CertificationError("e(lambda+u) != lambda+u or ue != lambda e")
    se = alg.sigma(e)
    lhs = e @ u @ se
    rhs = (e @ se).scale(lam) + u.plus_scalar(lam) - e.scale(F.mul(F.from_int(2), lam))
    if lhs != rhs:
        raise CertificationError("e u sigma(e) != lam e sigma(e) + lam + u - 2 lam e")
    return e, rep


@dataclass(frozen=True)
class AltIdempotent:
    e: Matrix  # generator of (lam+u)A
    e_prime: Matrix  # metabolic with e' - sigma(e') = u/lam
    x: Matrix  # x - sigma(x) = u/lam
    h: Matrix | None  # hyperbolic, char != 2 only


def skew_to_alt_idempotent(alg: InvolutionAlgebra, u: Matrix, lam=None) -> AltIdempotent:
    F = alg.field
    lam = _check_element_hypotheses(alg, u, lam, -1)
    if lam == F.zero:
        raise PreconditionViolated("lambda!=0")
    y = u.scale(F.inv(lam))
    x = express_in_alt(alg, y)
    if x is None:
        raise PreconditionViolated("u in Alt(A,sigma)")
    e, _ = skew_to_metabolic(alg, u, lam)
    e1 = twist_metabolic(alg, e, alg.sigma(x))
    se1 = alg.sigma(e1)
    if e1 - se1 != y:
        raise CertificationError("e' - sigma(e') != u/lambda")
    h = None
    if F.char == 2:
        if e1 @ se1 != y.plus_scalar(F.one):
            raise CertificationError("e' sigma(e') != 1 + u/lambda")
        if not _half(e1 @ se1):
            raise CertificationError("dim e' sigma(e') A != dim A/2")
    else:
        h = e1 - (e1 @ se1).scale(F.inv(F.from_int(2)))
        if not classify_idempotent(alg, h).is_hyperbolic or h - alg.sigma(h) != y:
            raise CertificationError("h is not hyperbolic with h - sigma(h) = u/lambda")
    return AltIdempotent(e, e1, x, h)


def _is_char2_orth(alg: InvolutionAlgebra) -> bool:
    return alg.field.char == 2 and classify_involution(alg).type is InvolutionType.ORTHOGONAL


def invariant_quat_for_alt_element(alg: InvolutionAlgebra, u: Matrix, lam=None) -> QuaternionSubalgebra | NoSubalgebra:
    """Invariant split quaternion subalgebra containing u in Alt(A, sigma).

    Exists except when char F = 2, lam = 0 and sigma is orthogonal; there
    none exists.
    """
    F = alg.field
    lam = _check_element_hypotheses(alg, u, lam, -1)
    if not in_alt(alg, u):
        raise PreconditionViolated("u in Alt(A,sigma)")
    if lam == F.zero and _is_char2_orth(alg):
        return NoSubalgebra("char 2, lambda = 0, sigma orthogonal: Alt of an invariant quaternion "
                            "subalgebra through u would contain no unit")
    if lam != F.zero:
        r = skew_to_alt_idempotent(alg, u, lam)
        if F.char != 2:
            Q = invariant_quat_for_hyperbolic(alg, r.h)
        else:
            Q = invariant_quat_for_metabolic(alg, r.e_prime)
            if not Q:
                raise CertificationError("metabolic criterion failed for e'")
        return with_members(alg, Q, u=u)
    e, _ = skew_to_metabolic(alg, u, lam)
    h = hyperbolize_metabolic(alg, e)
    if not (u @ h).is_zero() or h @ u != u:
        raise CertificationError("uh != 0 or hu != u")
    return invariant_quat_with_nilpotent(alg, h, u)


def invariant_quat_for_skew_element(alg: InvolutionAlgebra, u: Matrix, lam=None) -> QuaternionSubalgebra | NoSubalgebra:
    """Invariant split quaternion subalgebra containing a skew u (not char 2 orthogonal)."""
    F = alg.field
    lam = _check_element_hypotheses(alg, u, lam, -1)
    if _is_char2_orth(alg):
        raise ExceptionalCase()
    if F.char != 2 or alg.kind is Kind.UNITARY:
        if not in_alt(alg, u):
            raise CertificationError("skew element outside Alt although char != 2 or unitary")
        return invariant_quat_for_alt_element(alg, u, lam)
    # char 2, symplectic
    orig = u
    if lam == F.zero:
        u, lam = u.plus_scalar(F.one), F.one
    if in_alt(alg, u):
        Q = invariant_quat_for_alt_element(alg, u, lam)
        return with_members(alg, Q, u=orig)
    tau = alg.twisted(u)
    if classify_involution(tau).type is not InvolutionType.ORTHOGONAL:
        raise CertificationError("Int(u) o sigma is not orthogonal")
    if not in_alt(tau, u):
        raise CertificationError("u not in Alt(A, Int(u) o sigma)")
    Qt = invariant_quat_for_alt_element(tau, u, lam)
    if not Qt:
        raise CertificationError("no tau-invariant subalgebra found")
    contains = {"u": orig}
    notes = dict(Qt.notes, route="tau = Int(u) o sigma")
    return certify(alg, Qt.basis, Qt.split_witness, Qt.witness_kind, contains, True, Qt.labels, notes)


def quat_char2_alt_shift(Q: QuaternionSubalgebra, tau: InvolutionAlgebra, x: Matrix) -> Any:
    """alpha with x + alpha in Alt(Q, tau), for tau-symmetric x in Q with x^2 in F (char 2)."""
    F = tau.field
    if F.char != 2:
        raise PreconditionViolated("char F = 2")
    sc = SpanCoords(Q.basis)
    cx = sc.coords(x)
    if cx is None:
        raise PreconditionViolated("x in Q")
    if tau.sigma(x) != x:
        raise NotSymmetric()
    if not (x @ x).is_scalar():
        raise SquareNotCentral()
    diffs = []
    for b in Q.basis:
        c = sc.coords(b - tau.sigma(b))
        if c is None:
            raise PreconditionViolated("Q tau-invariant")
        diffs.append(c)
    # 1 not in Alt(Q, tau) <=> tau restricted to Q is orthogonal
    alt_rank = rank_of(diffs, F)
    if rank_of(diffs + [(F.one, F.zero, F.zero, F.zero)], F) == alt_rank:
        raise PreconditionViolated("tau orthogonal on Q")
    # sum_i c_i d_i - alpha*1 = x, unknowns (c_0..c_3, alpha)
    A = [[diffs[i][k] for i in range(4)] + [F.neg(F.one) if k == 0 else F.zero] for k in range(4)]
    sol = solve_system(A, list(cx), F, 5)
    if sol is None:
        raise CertificationError("no alpha with x + alpha in Alt(Q, tau)")
    alpha = sol[4]
    if rank_of(diffs + [sc.coords(x.plus_scalar(alpha))], F) != alt_rank:
        raise CertificationError("x + alpha not in Alt(Q, tau)")
    return alpha


def invariant_quat_for_symmetric_char2(alg: InvolutionAlgebra, u: Matrix, lam=None) -> QuaternionSubalgebra | NoSubalgebra:
    """char 2, sigma orthogonal, sigma(u) = u: exists iff u + alpha in Alt for some alpha != lam."""
    F = alg.field
    if not _is_char2_orth(alg):
        raise PreconditionViolated("char 2 and sigma orthogonal")
    lam = _check_element_hypotheses(alg, u, lam, +1)
    one = alg.one()
    sol = _solve_alt_shift(alg, u)
    if sol is None:
        return NoSubalgebra("u + alpha not in Alt(A,sigma) for every alpha")
    alpha = sol
    if alpha == lam:
        if in_alt(alg, one):
            alpha = F.add(lam, F.one)
        else:
            return NoSubalgebra("u + alpha in Alt(A,sigma) only for alpha = lambda")
    u1 = u.plus_scalar(alpha)
    Q = invariant_quat_for_alt_element(alg, u1, F.add(lam, alpha))
    if not Q:
        raise CertificationError("shifted element has no invariant subalgebra")
    return with_members(alg, Q, u=u)


def _solve_alt_shift(alg: InvolutionAlgebra, u: Matrix) -> Any | None:
    """Some alpha with u + alpha in Alt(A, sigma), or None."""
    res = linear_solver(alg, "alt-shift").solve([u])
    return None if res is None else res[1][0]

"""Matrix algebras with involution.

An involution on A = M_n(F) is given by a descriptor matrix ``g``:

* first kind: ``sigma(x) = g x^T g^-1`` with ``g^T = +-g``;
* unitary:    ``sigma(x) = g conj(x)^T g^-1`` with ``conj(g)^T = g``.

``sigma`` is then the adjoint involution of the (skew-)hermitian form with
Gram matrix ``G = g^-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidInvolution, SizeMismatch
from .exactfield import FieldSpec
from .matspace import LinearSolver, Matrix, linear_image_basis, linear_kernel_basis


class Kind(str, enum.Enum):
    FIRST = "first"
    UNITARY = "unitary"


class InvolutionType(str, enum.Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    UNITARY = "unitary"


@dataclass(frozen=True)
class InvolutionClass:
    kind: str  # "first" | "second"
    type: InvolutionType

    def to_json(self) -> dict:
        return {"kind": self.kind, "type": self.type.value}


@dataclass(frozen=True)
class SubspaceBasis:
    which: str
    basis: tuple[Matrix, ...]
    dimension: int
    over: str  # "F", or "F0" (fixed field) for unitary involutions


class InvolutionAlgebra:
    """(M_n(F), sigma) with sigma described by ``(kind, g)``."""

    def __init__(self, field: FieldSpec, n: int, g: Matrix | None = None, kind: Kind | str = Kind.FIRST,
                 check: bool = True):
        self.field = field
        self.n = n
        self.kind = Kind(kind)
        self.g = Matrix.identity(field, n) if g is None else g
        if self.g.n != n or self.g.field != field:
            raise SizeMismatch("descriptor g does not match the algebra")
        if not self.g.is_invertible():
            raise InvalidInvolution("descriptor g is singular")
        self.g_inv = self.g.inverse()
        self._memo: dict = {}  # per-algebra invariants: type, half-unit, subspaces
        if self.kind is Kind.UNITARY:
            if not field.unitary:
                raise InvalidInvolution(f"{field} has no unitary conjugation")
            if self.g.conj().T != self.g:
                raise InvalidInvolution("unitary descriptor must satisfy conj(g)^T = g")
        else:
            gt = self.g.T
            if gt != self.g and gt != -self.g:
                raise InvalidInvolution("first-kind descriptor must satisfy g^T = +-g")
        if check:
            self._check_involutive()

    def _check_involutive(self) -> None:
        F, n = self.field, self.n
        for i in range(n):
            for j in range(n):
                E = Matrix.unit(F, n, i, j)
                if self.sigma(self.sigma(E)) != E:
                    raise InvalidInvolution(f"sigma^2 != id on E_{i}{j}")

    @property
    def semilinear(self) -> bool:
        return self.kind is Kind.UNITARY

    @property
    def dim(self) -> int:
        return self.n * self.n

    @cached_property
    def gram(self) -> Matrix:
        """Gram matrix of the form sigma is adjoint to."""
        return self.g_inv

    def one(self) -> Matrix:
        return Matrix.identity(self.field, self.n)

    def zero(self) -> Matrix:
        return Matrix.zeros(self.field, self.n)

    def star(self, x: Matrix) -> Matrix:
        """Transpose, composed with conjugation for unitary involutions."""
        return x.conj().T if self.kind is Kind.UNITARY else x.T

    def sigma(self, x: Matrix) -> Matrix:
        if x.n != self.n or x.field != self.field:
            raise SizeMismatch("element does not belong to this algebra")
        return self.g @ self.star(x) @ self.g_inv

    def sigma_scalar(self, c):
        return self.field.conj(c) if self.kind is Kind.UNITARY else c

    def form(self, x, y):
        """h(x, y) = x^* G y for column vectors."""
        F = self.field
        xs = [F.conj(a) for a in x] if self.kind is Kind.UNITARY else list(x)
        Gy = self.gram.apply(y)
        return F.dot(xs, Gy)

    def twisted(self, u: Matrix) -> InvolutionAlgebra:
        """The involution Int(u) o sigma, i.e. descriptor ``u g``."""
        return InvolutionAlgebra(self.field, self.n, u @ self.g, self.kind)

    def descriptor(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "n": self.n,
            "involution": {"kind": self.kind.value, "g": self.g.to_json()},
        }

    def __repr__(self) -> str:
        return f"InvolutionAlgebra({self.field!r}, n={self.n}, {self.kind.value}, g={self.g!r})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, InvolutionAlgebra) and self.field == other.field and self.kind == other.kind
                and self.g == other.g)

    def __hash__(self) -> int:
        return hash((self.field, self.kind, self.g))


def apply_involution(alg: InvolutionAlgebra, x: Matrix) -> Matrix:
    return alg.sigma(x)


def express_in_alt(alg: InvolutionAlgebra, y: Matrix) -> Matrix | None:
    """Some x with ``x - sigma(x) = y``, or None when y is not in Alt(A, sigma)."""
    sol = linear_solver(alg, "alt").solve([y])
    return None if sol is None else sol[0]


def linear_solver(alg: InvolutionAlgebra, which: str) -> LinearSolver:
    """Cached solvers: ``alt`` for x - sigma(x), ``symd`` for x + sigma(x), ``alt-shift`` for x - sigma(x) - a*1."""
    F, n, sl = alg.field, alg.n, alg.semilinear
    one = alg.one()
    maps = {
        "alt": (lambda X, _: [X - alg.sigma(X)], 0),
        "symd": (lambda X, _: [X + alg.sigma(X)], 0),
        "alt-shift": (lambda X, al: [X - alg.sigma(X) - one.scale(al[0])], 1),
    }
    fn, k = maps[which]
    return _memoized(alg, ("solver", which), lambda: LinearSolver(fn, F, n, k, sl))


def in_alt(alg: InvolutionAlgebra, y: Matrix) -> bool:
    return express_in_alt(alg, y) is not None


def _memoized(alg: InvolutionAlgebra, key, compute):
    if key not in alg._memo:
        alg._memo[key] = compute()
    return alg._memo[key]


def classify_involution(alg: InvolutionAlgebra) -> InvolutionClass:
    return _memoized(alg, "class", lambda: _classify_involution(alg))


def _classify_involution(alg: InvolutionAlgebra) -> InvolutionClass:
    if alg.kind is Kind.UNITARY:
        return InvolutionClass("second", InvolutionType.UNITARY)
    if alg.field.char != 2:
        sym = alg.g.T == alg.g
        return InvolutionClass("first", InvolutionType.ORTHOGONAL if sym else InvolutionType.SYMPLECTIC)
    if in_alt(alg, alg.one()):
        return InvolutionClass("first", InvolutionType.SYMPLECTIC)
    return InvolutionClass("first", InvolutionType.ORTHOGONAL)


def is_char2_orthogonal(alg: InvolutionAlgebra) -> bool:
    return alg.field.char == 2 and classify_involution(alg).type is InvolutionType.ORTHOGONAL


def compute_subspace(alg: InvolutionAlgebra, which: str) -> SubspaceBasis:
    """Echelon basis of Sym, Symd, Alt (or Skew = {x : sigma(x) = -x})."""
    return _memoized(alg, ("subspace", which), lambda: _compute_subspace(alg, which))


def _compute_subspace(alg: InvolutionAlgebra, which: str) -> SubspaceBasis:
    F, n, sl = alg.field, alg.n, alg.semilinear
    if which == "Sym":
        basis = linear_kernel_basis(lambda x: x - alg.sigma(x), F, n, sl)
    elif which == "Skew":
        basis = linear_kernel_basis(lambda x: x + alg.sigma(x), F, n, sl)
    elif which == "Symd":
        basis = linear_image_basis(lambda x: x + alg.sigma(x), F, n, sl)
    elif which == "Alt":
        basis = linear_image_basis(lambda x: x - alg.sigma(x), F, n, sl)
    else:
        raise ValueError(f"unknown subspace {which!r}")
    return SubspaceBasis(which, tuple(basis), len(basis), "F0" if sl else "F")


def find_half_unit(alg: InvolutionAlgebra) -> Matrix | None:
    """Some x with ``x + sigma(x) = 1``; None exactly in the char 2 orthogonal case."""
    return _memoized(alg, "half-unit", lambda: _find_half_unit(alg))


def _find_half_unit(alg: InvolutionAlgebra) -> Matrix | None:
    F = alg.field
    if F.char != 2:
        return Matrix.scalar(F, alg.n, F.inv(F.from_int(2)))
    sol = linear_solver(alg, "symd").solve([alg.one()])
    return None if sol is None else sol[0]

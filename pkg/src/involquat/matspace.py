"""Dense exact matrices over a :class:`~involquat.exactfield.FieldSpec`.

Provides Gaussian elimination (rank, kernel, solve, inverse), right-ideal
dimensions in M_n(F), a generic affine solver for matrix unknowns, and
normal forms of square-central elements and idempotents together with
change-of-basis certificates.

Right ideals ``xA`` of M_n(F) are represented by the column space of ``x``:
``xA`` consists of all matrices whose columns lie in ``col(x)``, so
``dim_F xA = n * rank(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Sequence

from .errors import CertificationError, NotIdempotent, NotSquareCentral, SizeMismatch
from .exactfield import FieldSpec, Scalar

class Matrix:
    """Immutable square matrix of raw field values."""

    __slots__ = ("field", "rows", "n", "_hash")

    def __init__(self, field: FieldSpec, rows: Sequence[Sequence[Any]]):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        self._hash = None
        if any(len(r) != self.n for r in self.rows):
            raise SizeMismatch("matrix must be square")

    @classmethod
    def of(cls, field: FieldSpec, data: Sequence[Sequence[Any]]) -> Matrix:
        """Build from user values (ints, fractions, strings, coefficient lists)."""
        return cls(field, [[field.coerce(x) for x in row] for row in data])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> Matrix:
        return cls(field, [[field.zero] * n for _ in range(n)])

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c) -> Matrix:
        z = field.zero
        return cls(field, [[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field: FieldSpec, n: int, i: int, j: int, c=None) -> Matrix:
        rows = [[field.zero] * n for _ in range(n)]
        rows[i][j] = field.one if c is None else c
        return cls(field, rows)

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence[Any]]) -> Matrix:
        return cls(field, list(zip(*cols)))

    @classmethod
    def from_vec(cls, field: FieldSpec, n: int, vec: Sequence[Any]) -> Matrix:
        return cls(field, [vec[i * n:(i + 1) * n] for i in range(n)])

    def _check(self, other: Matrix) -> None:
        if other.n != self.n:
            raise SizeMismatch(f"{self.n}x{self.n} vs {other.n}x{other.n}")
        if other.field != self.field:
            raise SizeMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self.rows])

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check(other)
        return Matrix(self.field, self.field.matmul(self.rows, other.rows))

    def scale(self, c) -> Matrix:
        """Multiply every entry by the raw scalar ``c``."""
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in r] for r in self.rows])

    def plus_scalar(self, c) -> Matrix:
        """Return ``self + c*1``."""
        add = self.field.add
        return Matrix(self.field, [[add(a, c) if i == j else a for j, a in enumerate(r)] for i, r in enumerate(self.rows)])

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, list(zip(*self.rows)))

    def conj(self) -> Matrix:
        c = self.field.conj
        return Matrix(self.field, [[c(a) for a in r] for r in self.rows])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(self.field.fmt(a) for a in r) for r in self.rows)
        return f"Matrix[{self.field!r}]([{body}])"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for r in self.rows for a in r)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.field, self.n)

    def scalar_value(self):
        """Return c if ``self == c*1``, else None."""
        c = self.rows[0][0]
        return c if self == Matrix.scalar(self.field, self.n, c) else None

    def is_scalar(self) -> bool:
        return self.scalar_value() is not None

    def vec(self) -> tuple:
        return tuple(a for r in self.rows for a in r)

    def columns(self) -> list[tuple]:
        return list(zip(*self.rows))

    def rank(self) -> int:
        return len(rref(self.rows, self.field)[1])

    def inverse(self) -> Matrix:
        return Matrix(self.field, inverse_rows(self.rows, self.field))

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def trace(self):
        acc = self.field.zero
        for i in range(self.n):
            acc = self.field.add(acc, self.rows[i][i])
        return acc

    def column_space(self) -> list[tuple]:
        """Basis of col(self) in reduced column-echelon form."""
        R, _ = rref(list(zip(*self.rows)), self.field)
        return [tuple(r) for r in R]

    def kernel(self) -> list[tuple]:
        """Basis of {v : self v = 0}."""
        return nullspace(self.rows, self.field)

    def apply(self, v: Sequence[Any]) -> tuple:
        dot = self.field.dot
        return tuple(dot(r, v) for r in self.rows)

    def to_json(self) -> list:
        tj = self.field.to_json
        return [[tj(a) for a in r] for r in self.rows]


# --- elimination kernels over raw values -------------------------------------------------


def rref(rows: Sequence[Sequence[Any]], field: FieldSpec, ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form.

    Pivots are searched left to right in the first ``ncols`` columns (all by
    default); row operations act on the full width. Zero rows are dropped.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    width = len(M[0])
    if ncols is None:
        ncols = width
    zero = field.zero
    sub, mul, inv = field.sub, field.mul, field.inv
    pivots: list[int] = []
    r = 0
    m = len(M)
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if M[i][c] != zero:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        prow = M[r]
        a = prow[c]
        if a != field.one:
            ia = inv(a)
            prow = M[r] = [mul(ia, x) for x in prow]
        for i in range(m):
            if i != r:
                f = M[i][c]
                if f != zero:
                    row = M[i]
                    M[i] = [sub(x, mul(f, y)) if y != zero else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M[:r], pivots


def rank_of(rows: Sequence[Sequence[Any]], field: FieldSpec) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows: Sequence[Sequence[Any]], field: FieldSpec, width: int | None = None) -> list[tuple]:
    """Basis of the kernel of the matrix with the given rows."""
    if width is None:
        width = len(rows[0]) if rows else 0
    R, pivots = rref(rows, field) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for f in range(width):
        if f in pivset:
            continue
        v = [field.zero] * width
        v[f] = field.one
        for row, p in zip(R, pivots):
            v[p] = field.neg(row[f])
        basis.append(tuple(v))
    return basis


def solve_system(A: Sequence[Sequence[Any]], b: Sequence[Any], field: FieldSpec, width: int) -> tuple | None:
    """One solution of A x = b with free variables set to 0, or None."""
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    if not aug:
        return tuple([field.zero] * width)
    R, pivots = rref(aug, field, ncols=width)
    x = [field.zero] * width
    for row, p in zip(R, pivots):
        x[p] = row[width]
    # rows left without a pivot are dropped by rref, so consistency is checked by substitution
    for r, bi in zip(A, b):
        if field.dot(r, x) != bi:
            return None
    return tuple(x)


def inverse_rows(rows: Sequence[Sequence[Any]], field: FieldSpec) -> list[list]:
    n = len(rows)
    z, o = field.zero, field.one
    aug = [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug, field, ncols=n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in R]


def rank_right_ideal_dim(x: Matrix) -> tuple[int, int]:
    """Return ``(rank(x), dim_F xA)`` for A = M_n(F)."""
    r = x.rank()
    return r, x.n * r


def same_column_space(x: Matrix, y: Matrix) -> bool:
    return x.column_space() == y.column_space()


# --- affine solver over matrix unknowns -------------------------------------------------


class LinearFrame:
    """Coordinates of F over the subfield for which a system is linear.

    For first-kind problems this is F itself (one coordinate). Unitary
    involutions are only semilinear over F, so their systems are solved over
    the fixed field of the conjugation, with two coordinates per entry.
    """

    def __init__(self, field: FieldSpec, semilinear: bool = False):
        self.field = field
        if semilinear:
            self.base = field.fixed_field()
            self.d = field.degree
            self.basis = [field.from_coords([1 if i == j else 0 for j in range(self.d)]) for i in range(self.d)]
            self.coords = field.coords
            self.from_coords = field.from_coords
        else:
            self.base = field
            self.d = 1
            self.basis = [field.one]
            self.coords = lambda a: (a,)
            self.from_coords = lambda cs: cs[0]


def solve_linear(
    equations: Callable[[Matrix, tuple], Sequence[Matrix]],
    field: FieldSpec,
    n: int,
    n_scalars: int = 0,
    semilinear: bool = False,
) -> tuple[Matrix, tuple] | None:
    """Solve ``equations(X, alphas) == 0`` for a matrix X and scalars alphas.

    ``equations`` must be affine in (X, alphas) over the frame's base field and
    return a list of matrices that all have to vanish. The unknowns are the
    n*n entries of X (row-major) followed by the scalars. Free variables are
    set to 0; pivots are chosen at the lowest usable index. Returns
    ``(X, alphas)`` or None when inconsistent.
    """
    frame = LinearFrame(field, semilinear)
    d = frame.d
    Z = Matrix.zeros(field, n)
    zero_alphas = tuple([field.zero] * n_scalars)
    const = _flatten(equations(Z, zero_alphas), frame)
    nvars = (n * n + n_scalars) * d
    cols = []
    for idx in range(n * n + n_scalars):
        for b in frame.basis:
            if idx < n * n:
                X = Matrix.unit(field, n, idx // n, idx % n, b)
                out = equations(X, zero_alphas)
            else:
                al = list(zero_alphas)
                al[idx - n * n] = b
                out = equations(Z, tuple(al))
            vals = _flatten(out, frame)
            cols.append([frame.base.sub(v, c) for v, c in zip(vals, const)])
    base = frame.base
    A = [list(r) for r in zip(*cols)] if cols else []
    rhs = [base.neg(c) for c in const]
    sol = solve_system(A, rhs, base, nvars)
    if sol is None:
        return None
    entries = []
    for idx in range(n * n + n_scalars):
        entries.append(frame.from_coords(sol[idx * d:(idx + 1) * d]))
    X = Matrix.from_vec(field, n, entries[: n * n])
    alphas = tuple(entries[n * n:])
    # affine maps are exact; re-check anyway
    if any(not m.is_zero() for m in equations(X, alphas)):
        raise CertificationError("solve_linear produced a non-solution")
    return X, alphas


class LinearSolver:
    """Reusable solver for ``fn(X, alphas) == rhs`` with ``fn`` linear.

    The elimination of the coefficient matrix is done once; each
    :meth:`solve` then costs one matrix-vector product. Solutions coincide
    with those of :func:`solve_linear` (free variables 0, lowest pivots).
    """

    def __init__(self, fn: Callable[[Matrix, tuple], Sequence[Matrix]], field: FieldSpec, n: int,
                 n_scalars: int = 0, semilinear: bool = False):
        self.fn, self.field, self.n, self.n_scalars = fn, field, n, n_scalars
        self.frame = frame = LinearFrame(field, semilinear)
        base = frame.base
        zero_alphas = tuple([field.zero] * n_scalars)
        Z = Matrix.zeros(field, n)
        cols = []
        for idx in range(n * n + n_scalars):
            for b in frame.basis:
                if idx < n * n:
                    out = fn(Matrix.unit(field, n, idx // n, idx % n, b), zero_alphas)
                else:
                    al = list(zero_alphas)
                    al[idx - n * n] = b
                    out = fn(Z, tuple(al))
                cols.append(_flatten(out, frame))
        self.nvars = len(cols)
        A = [list(r) for r in zip(*cols)]
        m = len(A)
        z, o = base.zero, base.one
        aug = [row + [o if i == j else z for j in range(m)] for i, row in enumerate(A)]
        R, self.pivots = rref(aug, base, ncols=self.nvars)
        self.T = [r[self.nvars:] for r in R]
        self.A = A

    def solve(self, rhs: Sequence[Matrix]) -> tuple[Matrix, tuple] | None:
        frame, base, field, n = self.frame, self.frame.base, self.field, self.n
        b = _flatten(rhs, frame)
        x = [base.zero] * self.nvars
        for p, t in zip(self.pivots, self.T):
            x[p] = base.dot(t, b)
        if any(base.dot(row, x) != bi for row, bi in zip(self.A, b)):
            return None
        d = frame.d
        entries = [frame.from_coords(x[k * d:(k + 1) * d]) for k in range(n * n + self.n_scalars)]
        X = Matrix.from_vec(field, n, entries[: n * n])
        alphas = tuple(entries[n * n:])
        out = self.fn(X, alphas)
        if any(o != r for o, r in zip(out, rhs)):
            raise CertificationError("LinearSolver produced a non-solution")
        return X, alphas


def _flatten(mats: Sequence[Matrix], frame: LinearFrame) -> list:
    out = []
    co = frame.coords
    for m in mats:
        for r in m.rows:
            for a in r:
                out.extend(co(a))
    return out


def linear_image_basis(
    fn: Callable[[Matrix], Matrix], field: FieldSpec, n: int, semilinear: bool = False
) -> list[Matrix]:
    """Echelonized basis (over the frame's base field) of the image of a linear map on M_n(F)."""
    frame = LinearFrame(field, semilinear)
    vecs = []
    for i in range(n):
        for j in range(n):
            for b in frame.basis:
                vecs.append(_flatten([fn(Matrix.unit(field, n, i, j, b))], frame))
    R, _ = rref(vecs, frame.base)
    return [_unflatten(r, frame, n) for r in R]


def linear_kernel_basis(
    fn: Callable[[Matrix], Matrix], field: FieldSpec, n: int, semilinear: bool = False
) -> list[Matrix]:
    """Basis (over the frame's base field) of the kernel of a linear map on M_n(F)."""
    frame = LinearFrame(field, semilinear)
    cols = []
    inputs = []
    for i in range(n):
        for j in range(n):
            for b in frame.basis:
                inputs.append((i, j, b))
                cols.append(_flatten([fn(Matrix.unit(field, n, i, j, b))], frame))
    A = [list(r) for r in zip(*cols)]
    ker = nullspace(A, frame.base, width=len(cols))
    out = []
    for v in ker:
        M = Matrix.zeros(field, n)
        for coef, (i, j, b) in zip(v, inputs):
            if coef != frame.base.zero:
                M = M + Matrix.unit(field, n, i, j, field.mul(_embed(frame, coef), b))
        out.append(M)
    R, _ = rref([_flatten([m], frame) for m in out], frame.base) if out else ([], [])
    return [_unflatten(r, frame, n) for r in R]


def _embed(frame: LinearFrame, c) -> Any:
    # base-field value as an element of F
    if frame.d == 1:
        return c
    return frame.from_coords([c] + [0] * (frame.d - 1))


def _unflatten(vec: Sequence[Any], frame: LinearFrame, n: int) -> Matrix:
    d = frame.d
    entries = [frame.from_coords(vec[k * d:(k + 1) * d]) for k in range(n * n)]
    return Matrix.from_vec(frame.field, n, entries)


# --- normal forms ---------------------------------------------------------------------


@dataclass(frozen=True)
class NormalFormCertificate:
    """``P @ x @ P^-1 == canonical``, with block multiplicities.

    Square-central case: canonical = diag(lambda I_m, -lambda I_n, J_2(lambda)^k).
    In characteristic 2, or when lambda = 0, the -lambda block is merged into
    the lambda block (n = 0). Idempotent case: canonical = diag(I_m, 0), k = n = 0.
    """

    P: Matrix
    P_inv: Matrix
    canonical: Matrix
    m: int
    n: int = 0
    k: int = 0
    lam: Any = None
    extra: dict = dc_field(default_factory=dict)

    def verify(self, x: Matrix) -> bool:
        return (self.P @ self.P_inv).is_identity() and self.P @ x @ self.P_inv == self.canonical


def jordan_block_sum(field: FieldSpec, lam, m: int, n: int, k: int) -> Matrix:
    size = m + n + 2 * k
    z = field.zero
    rows = [[z] * size for _ in range(size)]
    for i in range(m):
        rows[i][i] = lam
    for i in range(m, m + n):
        rows[i][i] = field.neg(lam)
    for b in range(k):
        i = m + n + 2 * b
        rows[i][i] = rows[i + 1][i + 1] = lam
        rows[i][i + 1] = field.one
    return Matrix(field, rows)


def _extend_basis(current: list[tuple], candidates: Sequence[tuple], field: FieldSpec) -> list[tuple]:
    """Append candidates (in order) that increase the span of ``current``."""
    out = list(current)
    r = rank_of(out, field) if out else 0
    for v in candidates:
        if rank_of(out + [v], field) > r:
            out.append(v)
            r += 1
    return out


def square_central_normal_form(u: Matrix, lam) -> NormalFormCertificate:
    """Conjugate ``u`` with ``u^2 = lam^2`` to diag(lam I_m, -lam I_n, J_2(lam)^k)."""
    if isinstance(lam, Scalar):
        lam = lam.value
    F = u.field
    size = u.n
    if u @ u != Matrix.scalar(F, size, F.mul(lam, lam)):
        raise NotSquareCentral("u^2 != lambda^2")
    N = u.plus_scalar(F.neg(lam))
    if F.char != 2 and lam != F.zero:
        plus = N.kernel()
        minus = u.plus_scalar(lam).kernel()
        basis = plus + minus
        m, n, k = len(plus), len(minus), 0
    else:
        image = N.column_space()
        pre = []
        for b in image:
            v = solve_system(N.rows, b, F, size)
            assert v is not None, "image vector without preimage"
            pre.append(v)
        ker = N.kernel()
        # complement of im(N) inside ker(N)
        comp = _extend_basis(list(image), ker, F)[len(image):]
        basis = list(comp)
        for b, v in zip(image, pre):
            basis.extend([b, v])
        m, n, k = len(comp), 0, len(image)
    B = Matrix.from_columns(F, basis)
    P = B.inverse()
    cert = NormalFormCertificate(P=P, P_inv=B, canonical=jordan_block_sum(F, lam, m, n, k), m=m, n=n, k=k, lam=lam)
    if m + n + 2 * k != size or not cert.verify(u):
        raise CertificationError("square-central normal form failed to verify")
    return cert


def idempotent_normal_form(e: Matrix) -> NormalFormCertificate:
    """Conjugate an idempotent to diag(I_m, 0_n)."""
    F = e.field
    if e @ e != e:
        raise NotIdempotent("e^2 != e")
    image = e.column_space()
    ker = e.kernel()
    B = Matrix.from_columns(F, image + ker)
    m = len(image)
    canonical = Matrix(F, [[F.one if i == j < m else F.zero for j in range(e.n)] for i in range(e.n)])
    cert = NormalFormCertificate(P=B.inverse(), P_inv=B, canonical=canonical, m=m, n=e.n - m, lam=F.one)
    if not cert.verify(e):
        raise CertificationError("idempotent normal form failed to verify")
    return cert

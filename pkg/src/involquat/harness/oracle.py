"""Exhaustive search for quaternion subalgebras of M_n(GF(2)), n <= 4.

Any quaternion subalgebra Q containing a non-scalar r contains some y with
1, r, y, ry linearly independent, so Q = span{1, r, y, ry}.  Enumerating all
y in M_n(GF(2)) is therefore a complete search.  Candidates are bit-packed
into 16-bit codes and filtered with numpy; the (few, deduplicated) survivors
are then run through the full certificate check.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import FieldTooLarge, ScalarInput
from ..exactfield import GF
from ..involalg import InvolutionAlgebra
from ..matspace import Matrix
from ..quatconstruct import QuaternionSubalgebra, certify, validate_quaternion_subalgebra

MAX_ORACLE_N = 4

# XOR-combination masks of four basis vectors
_COMBOS = np.array([[(m >> i) & 1 for i in range(4)] for m in range(16)], dtype=np.uint8)


def _pack(M: np.ndarray, n: int) -> np.ndarray:
    """(..., n, n) 0/1 arrays -> integer codes, row-major, entry (0,0) is the low bit."""
    weights = 1 << np.arange(n * n, dtype=np.int64)
    flat = M.reshape(M.shape[:-2] + (n * n,)).astype(np.int64)
    return flat @ weights


@lru_cache(maxsize=None)
def _all_matrices(n: int) -> np.ndarray:
    codes = np.arange(1 << (n * n), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n * n)) & 1
    return bits.reshape(-1, n, n).astype(np.uint8)


def _mm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.matmul(A, B) & 1  # entries stay below n + 1, so uint8 cannot overflow


def _span_codes(basis_codes: np.ndarray) -> np.ndarray:
    """(N, 4) codes -> (N, 16) codes of all GF(2) combinations."""
    out = np.zeros((basis_codes.shape[0], 16), dtype=np.int64)
    for i in range(4):
        out ^= basis_codes[:, i:i + 1] * _COMBOS[None, :, i]
    return out


def _in_span(span: np.ndarray, z: np.ndarray) -> np.ndarray:
    return (span == z[:, None]).any(axis=1)


def _to_matrix(M: np.ndarray) -> Matrix:
    return Matrix(GF(2), [[int(a) for a in row] for row in M])


def _split_witness(basis: list[Matrix]) -> tuple[Matrix, str] | None:
    F = GF(2)
    one = basis[0]
    for mask in range(1, 16):
        m = Matrix.zeros(F, one.n)
        for i in range(4):
            if mask >> i & 1:
                m = m + basis[i]
        sq = m @ m
        if sq == m and m != one:
            return m, "idempotent"
        if sq.is_zero():
            return m, "nilpotent"
    return None


def brute_force_quat_oracle(alg: InvolutionAlgebra | None, required: Matrix) -> QuaternionSubalgebra | None:
    """First (in candidate order) quaternion subalgebra containing ``required``, or None.

    With ``alg`` given the subalgebra must also be sigma-invariant.
    """
    F, n = required.field, required.n
    if F != GF(2) or n > MAX_ORACLE_N:
        raise FieldTooLarge(f"oracle handles M_n(GF(2)) with n <= {MAX_ORACLE_N}, got {F}, n={n}")
    if alg is not None and (alg.field != F or alg.n != n):
        raise FieldTooLarge("algebra and element disagree")
    if required.is_scalar():
        raise ScalarInput("required element lies in F*1")
    g = None if alg is None else (alg.g, alg.g_inv)
    return _oracle_cached(required, g)


@lru_cache(maxsize=4096)
def _oracle_cached(required: Matrix, g) -> QuaternionSubalgebra | None:
    n = required.n
    r = np.array(required.rows, dtype=np.uint8)
    one = np.eye(n, dtype=np.uint8)
    Y = _all_matrices(n)
    RY = _mm(r[None], Y)
    N = Y.shape[0]
    c1 = np.full(N, _pack(one, n))
    cr = np.full(N, _pack(r, n))
    cy, cry = _pack(Y, n), _pack(RY, n)
    span = _span_codes(np.stack([c1, cr, cy, cry], axis=1))
    srt = np.sort(span, axis=1)
    keep = (np.diff(srt, axis=1) != 0).all(axis=1)  # 16 distinct combinations <=> independent
    R = r[None]
    # each filter is evaluated only on the candidates that survived the previous ones
    filters = [
        lambda Yk, RYk: _mm(Yk, R),
        lambda Yk, RYk: _mm(Yk, Yk),
        lambda Yk, RYk: _mm(Yk, RYk),
        lambda Yk, RYk: _mm(RYk, R),
        lambda Yk, RYk: _mm(RYk, Yk),
        lambda Yk, RYk: _mm(RYk, RYk),
        lambda Yk, RYk: np.broadcast_to(_mm(R, R), Yk.shape),
    ]
    if g is not None:
        G = np.array(g[0].rows, dtype=np.uint8)
        Gi = np.array(g[1].rows, dtype=np.uint8)

        def sig(X):
            return _mm(_mm(G[None], np.swapaxes(X, -1, -2)), Gi[None])

        filters += [
            lambda Yk, RYk: np.broadcast_to(sig(R), Yk.shape),
            lambda Yk, RYk: sig(Yk),
            lambda Yk, RYk: sig(RYk),
        ]
    idx = np.flatnonzero(keep)
    for f in filters:
        if idx.size == 0:
            break
        ok = _in_span(span[idx], _pack(f(Y[idx], RY[idx]), n))
        idx = idx[ok]
    seen = set()
    alg = None
    if g is not None:
        alg = InvolutionAlgebra(GF(2), n, g[0])
    for i in idx:
        key = tuple(srt[i])
        if key in seen:
            continue
        seen.add(key)
        basis = [_to_matrix(one), required, _to_matrix(Y[i]), _to_matrix(RY[i])]
        wit = _split_witness(basis)
        if wit is None:
            continue
        Q = QuaternionSubalgebra(tuple(basis), (), wit[0], wit[1], g is not None, None,
                                 (("required", required, ()),), ("1", "r", "y", "ry"))
        if validate_quaternion_subalgebra(alg, Q).ok:
            return certify(alg, basis, wit[0], wit[1], {"required": required}, g is not None,
                           ("1", "r", "y", "ry"), {"oracle_candidate": int(i)})
    return None


def oracle_verdict(alg: InvolutionAlgebra | None, required: Matrix) -> bool:
    return brute_force_quat_oracle(alg, required) is not None

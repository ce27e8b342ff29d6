import itertools
import random

import pytest
from hypothesis import given, strategies as st

from involquat.errors import NotIdempotent, NotSquareCentral, SizeMismatch
from involquat.exactfield import GF, QQ
from involquat.harness.fixtures import metabolic_counterexample, metabolic_counterexample_e_sigma_e, symmetric_counterexample
from involquat.matspace import (
    LinearSolver,
    Matrix,
    idempotent_normal_form,
    jordan_block_sum,
    linear_image_basis,
    linear_kernel_basis,
    rank_right_ideal_dim,
    same_column_space,
    solve_linear,
    square_central_normal_form,
)


def kernel_size_by_enumeration(M):
    F = M.field
    return sum(1 for v in itertools.product(F.elements(), repeat=M.n) if all(a == F.zero for a in M.apply(v)))


@pytest.mark.parametrize("F", [GF(2), GF(3), GF(5)], ids=str)
def test_counterexample_ranks(F):
    alg, e = metabolic_counterexample(F)
    assert rank_right_ideal_dim(e) == (2, 8)
    assert rank_right_ideal_dim(metabolic_counterexample_e_sigma_e(F)) == (1, 4)
    # rank via |ker| = q^(n - rank)
    assert kernel_size_by_enumeration(e) == F.order ** 2


def test_counterexample_ranks_over_rationals():
    _, e = metabolic_counterexample(QQ)
    assert e.rank() == 2


def test_solve_trivial_system_returns_zero():
    F = GF(5)
    X, alphas = solve_linear(lambda X, a: [X - X], F, 2)
    assert X.is_zero() and alphas == ()


def test_solve_x_plus_transpose():
    F = GF(3)
    one = Matrix.identity(F, 2)
    X, _ = solve_linear(lambda X, a: [X + X.T - one], F, 2)
    assert X + X.T == one
    assert X == Matrix.of(F, [[2, 0], [0, 2]])
    # no solution in characteristic 2: the diagonal of X + X^T vanishes
    assert solve_linear(lambda X, a: [X + X.T - Matrix.identity(GF(2), 2)], GF(2), 2) is None


def test_linear_solver_matches_solve_linear():
    rng = random.Random(7)
    F = GF(3)
    g = Matrix.of(F, [[0, 1], [-1, 0]])
    gi = g.inverse()

    def sigma(X):
        return g @ X.T @ gi

    solver = LinearSolver(lambda X, a: [X - sigma(X)], F, 2)
    for _ in range(20):
        x = Matrix.of(F, [[rng.randrange(3) for _ in range(2)] for _ in range(2)])
        y = x - sigma(x)
        got = solver.solve([y])
        ref = solve_linear(lambda X, a, y=y: [X - sigma(X) - y], F, 2)
        assert got is not None and got[0] == ref[0]


def test_image_and_kernel_dimensions_add_up():
    F = GF(2)
    image = linear_image_basis(lambda X: X - X.T, F, 3)
    kernel = linear_kernel_basis(lambda X: X - X.T, F, 3)
    assert len(image) == 3 and len(kernel) == 6
    assert len(image) + len(kernel) == 9


def test_same_column_space():
    F = GF(3)
    a = Matrix.of(F, [[1, 0], [0, 0]])
    assert same_column_space(a, a.scale(2))
    assert not same_column_space(a, Matrix.of(F, [[0, 0], [0, 1]]))


def test_symmetric_counterexample_normal_form():
    _, u, lam = symmetric_counterexample(GF(2))
    cert = square_central_normal_form(u, lam)
    assert (cert.m, cert.n, cert.k) == (0, 0, 2)
    assert cert.verify(u)


def test_eigen_split_normal_form():
    F = GF(5)
    u = Matrix.of(F, [[1, 0], [0, -1]])
    cert = square_central_normal_form(u, 1)
    assert (cert.m, cert.n, cert.k) == (1, 1, 0)
    assert cert.canonical == Matrix.of(F, [[1, 0], [0, 4]])


def test_nilpotent_normal_form():
    F = GF(3)
    u = jordan_block_sum(F, 0, 0, 0, 2)
    cert = square_central_normal_form(u, 0)
    assert cert.k == 2 and cert.m == 0 and cert.verify(u)


def test_idempotent_normal_form_example():
    F = GF(3)
    e = Matrix.of(F, [[1, 0], [1, 0]])
    cert = idempotent_normal_form(e)
    assert cert.m == 1 and cert.m + cert.n == 2
    assert cert.canonical == Matrix.of(F, [[1, 0], [0, 0]])
    assert cert.verify(e)


def test_normal_form_preconditions():
    F = GF(3)
    with pytest.raises(NotSquareCentral):
        square_central_normal_form(Matrix.of(F, [[1, 1], [0, 0]]), 1)
    with pytest.raises(NotIdempotent):
        idempotent_normal_form(Matrix.of(F, [[1, 1], [0, 2]]))


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        Matrix.identity(GF(3), 2) @ Matrix.identity(GF(3), 3)


def test_inverse_against_enumeration():
    F = GF(2)
    invertible = 0
    for bits in itertools.product((0, 1), repeat=4):
        M = Matrix.of(F, [bits[:2], bits[2:]])
        if M.is_invertible():
            invertible += 1
            assert (M @ M.inverse()).is_identity()
    assert invertible == 6  # |GL_2(F_2)|


@given(st.lists(st.integers(0, 4), min_size=9, max_size=9), st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_rank_subadditive_and_transpose_invariant(a, b):
    F = GF(5)
    A = Matrix.of(F, [a[0:3], a[3:6], a[6:9]])
    B = Matrix.of(F, [b[0:3], b[3:6], b[6:9]])
    assert A.rank() == A.T.rank()
    assert (A + B).rank() <= A.rank() + B.rank()
    assert (A @ B).rank() <= min(A.rank(), B.rank())

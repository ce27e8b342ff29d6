import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from involquat.errors import ExceptionalCase, NotMetabolic
from involquat.exactfield import GF
from involquat.harness.fixtures import metabolic_counterexample, symmetric_counterexample
from involquat.harness.generate import feasible_algebra, random_matrix, random_metabolic
from involquat.idempotent import (
    IdempotentClass,
    classify_idempotent,
    hyperbolize_metabolic,
    idempotent_generator,
    orth_complement_ideal,
    twist_metabolic,
)
from involquat.involalg import InvolutionAlgebra
from involquat.matspace import Matrix, same_column_space


def metabolic_by_enumeration(alg):
    F, n = alg.field, alg.n
    out = []
    for entries in itertools.product(F.elements(), repeat=n * n):
        e = Matrix(F, [entries[i * n:(i + 1) * n] for i in range(n)])
        if e @ e == e and (alg.sigma(e) @ e).is_zero() and 2 * n * e.rank() == n * n:
            out.append(e)
    return out


def test_counterexample_is_metabolic_not_hyperbolic():
    alg, e = metabolic_counterexample(GF(3))
    rep = classify_idempotent(alg, e)
    assert rep.cls is IdempotentClass.METABOLIC
    assert not rep.e_sigma_e.is_zero()


def test_swap_form_unit_idempotent_is_hyperbolic():
    F = GF(3)
    alg = InvolutionAlgebra(F, 2, Matrix.of(F, [[0, 1], [1, 0]]))
    e = Matrix.unit(F, 2, 0, 0)
    assert alg.sigma(e) == Matrix.unit(F, 2, 1, 1)
    assert classify_idempotent(alg, e).cls is IdempotentClass.HYPERBOLIC


def test_identity_is_plain():
    alg = InvolutionAlgebra(GF(5), 2)
    assert classify_idempotent(alg, alg.one()).cls is IdempotentClass.PLAIN


def test_non_idempotent_is_flagged():
    F = GF(5)
    rep = classify_idempotent(InvolutionAlgebra(F, 2), Matrix.of(F, [[2, 0], [0, 0]]))
    assert not rep.is_idempotent and rep.cls is IdempotentClass.NOT_IDEMPOTENT


def test_orth_complement_examples():
    alg = InvolutionAlgebra(GF(3), 3)
    assert orth_complement_ideal(alg, alg.zero())[1] == 9
    assert orth_complement_ideal(alg, alg.one())[1] == 0
    alg2, u, lam = symmetric_counterexample(GF(2))
    x = u.plus_scalar(lam)
    assert (alg2.sigma(x) @ x).is_zero()
    assert orth_complement_ideal(alg2, x)[1] == 8 == 4 * x.rank()


def test_idempotent_generator_examples():
    F = GF(3)
    assert idempotent_generator(Matrix.of(F, [[2, 0], [0, 0]])) == Matrix.unit(F, 2, 0, 0)
    x = Matrix.of(F, [[1, 0], [1, 0]])
    e = idempotent_generator(x)
    assert e @ e == e and same_column_space(e, x)


def test_idempotent_generator_on_square_central():
    alg, u, lam = symmetric_counterexample(GF(2))
    x = u.plus_scalar(lam)
    e = idempotent_generator(x)
    assert e @ x == x and u @ e == e.scale(lam)


def test_hyperbolize_in_symplectic_char2():
    F = GF(2)
    alg = InvolutionAlgebra(F, 2, Matrix.of(F, [[0, 1], [1, 0]]))
    mets = metabolic_by_enumeration(alg)
    assert mets
    for e in mets:
        h = hyperbolize_metabolic(alg, e)
        assert alg.sigma(h) + h == alg.one()


def test_hyperbolize_exceptional_case():
    alg, e = metabolic_counterexample(GF(2))
    with pytest.raises(ExceptionalCase):
        hyperbolize_metabolic(alg, e)


def test_hyperbolize_rejects_plain():
    alg = InvolutionAlgebra(GF(3), 2)
    with pytest.raises(NotMetabolic):
        hyperbolize_metabolic(alg, alg.one())


def test_twist_examples():
    F = GF(5)
    alg, e = metabolic_counterexample(F)
    assert twist_metabolic(alg, e, alg.zero()) == e
    e2 = twist_metabolic(alg, e, Matrix.unit(F, 4, 0, 1))
    assert (alg.sigma(e2) @ e2).is_zero() and same_column_space(e, e2)


def test_twist_random_instances():
    rng = random.Random(3)
    F = GF(3)
    alg = feasible_algebra(F, 4, "orthogonal", rng)
    for _ in range(10):
        e = random_metabolic(alg, rng)
        e2 = twist_metabolic(alg, e, random_matrix(F, 4, rng))
        rep = classify_idempotent(alg, e2)
        assert rep.is_metabolic and rep.dim_eA == 8


@pytest.mark.parametrize("F,g", [(GF(2), [[0, 1], [1, 0]]), (GF(3), [[0, 1], [1, 0]]), (GF(3), [[0, 1], [2, 0]])])
def test_hyperbolic_criterion_by_enumeration(F, g):
    alg = InvolutionAlgebra(F, 2, Matrix.of(F, g))
    for e in metabolic_by_enumeration(alg):
        rep = classify_idempotent(alg, e)
        assert rep.is_metabolic
        assert rep.is_hyperbolic == rep.e_sigma_e.is_zero() == (alg.sigma(e) == alg.one() - e)
        assert rep.sigma_e_e_zero == rep.alt_metabolic_zero


@settings(max_examples=40)
@given(st.sampled_from([GF(2), GF(3), GF(5)]), st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_orth_complement_dimension_formula(F, entries):
    alg = InvolutionAlgebra(F, 3)
    x = Matrix.of(F, [entries[0:3], entries[3:6], entries[6:9]])
    _, dperp = orth_complement_ideal(alg, x)
    assert 3 * x.rank() + dperp == 9

"""Idempotents of an algebra with involution.

An idempotent ``e`` is *hyperbolic* when ``sigma(e) = 1 - e`` and
*metabolic* when ``sigma(e) e = 0`` and ``dim eA = dim A / 2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import CertificationError, ExceptionalCase, NotMetabolic
from .involalg import InvolutionAlgebra, find_half_unit
from .matspace import Matrix, same_column_space


class IdempotentClass(str, enum.Enum):
    NOT_IDEMPOTENT = "not-idempotent"
    PLAIN = "plain"
    METABOLIC = "metabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class IdempotentReport:
    is_idempotent: bool
    dim_eA: int
    sigma_e_e_zero: bool
    alt_metabolic_zero: bool  # (1-e)(1-sigma(e)) == 0
    e_sigma_e: Matrix
    dim_e_sigma_e_A: int
    cls: IdempotentClass

    @property
    def is_metabolic(self) -> bool:
        return self.cls in (IdempotentClass.METABOLIC, IdempotentClass.HYPERBOLIC)

    @property
    def is_hyperbolic(self) -> bool:
        return self.cls is IdempotentClass.HYPERBOLIC

    def to_json(self) -> dict:
        return {
            "is_idempotent": self.is_idempotent,
            "dim_eA": self.dim_eA,
            "sigma_e_e_zero": self.sigma_e_e_zero,
            "alt_metabolic_zero": self.alt_metabolic_zero,
            "e_sigma_e": self.e_sigma_e.to_json(),
            "dim_e_sigma_e_A": self.dim_e_sigma_e_A,
            "class": self.cls.value,
        }


def classify_idempotent(alg: InvolutionAlgebra, e: Matrix) -> IdempotentReport:
    one = alg.one()
    se = alg.sigma(e)
    is_idem = e @ e == e
    dim_eA = alg.n * e.rank()
    sez = (se @ e).is_zero()
    alt_zero = ((one - e) @ (one - se)).is_zero()
    ese = e @ se
    half = 2 * dim_eA == alg.dim
    if not is_idem:
        cls = IdempotentClass.NOT_IDEMPOTENT
    elif se == one - e:
        cls = IdempotentClass.HYPERBOLIC
    elif sez and half:
        cls = IdempotentClass.METABOLIC
    else:
        cls = IdempotentClass.PLAIN
    report = IdempotentReport(is_idem, dim_eA, sez, alt_zero, ese, alg.n * ese.rank(), cls)
    if report.is_metabolic:
        # for metabolic e: hyperbolic <=> e sigma(e) = 0
        if report.is_hyperbolic != ese.is_zero():
            raise CertificationError("hyperbolicity disagrees with e sigma(e) = 0")
    return report


def orth_complement_ideal(alg: InvolutionAlgebra, x: Matrix) -> tuple[list[tuple], int]:
    """Column-space basis and dimension of (xA)^perp = {z : sigma(z) x = 0}.

    ``sigma(z) x = 0`` iff ``z^* G x = 0``, i.e. the columns of z lie in
    ``ker((G x)^*)``.
    """
    M = alg.star(alg.gram @ x)
    basis = M.kernel()
    return basis, alg.n * len(basis)


def idempotent_generator(x: Matrix) -> Matrix:
    """Idempotent e with eA = xA: projection onto col(x) along the non-pivot coordinates."""
    F, n = x.field, x.n
    cols = x.column_space()  # reduced column echelon basis
    rows = [[F.zero] * n for _ in range(n)]
    for b in cols:
        p = next(i for i, a in enumerate(b) if a != F.zero)
        for i in range(n):
            rows[i][p] = F.add(rows[i][p], b[i])
    e = Matrix(F, rows)
    if e @ e != e or e @ x != x or not same_column_space(e, x):
        raise CertificationError("idempotent generator failed to verify")
    return e


def hyperbolize_metabolic(alg: InvolutionAlgebra, e: Matrix) -> Matrix:
    """Turn a metabolic idempotent into a hyperbolic one via ``e - e x sigma(e)``."""
    if not classify_idempotent(alg, e).is_metabolic:
        raise NotMetabolic()
    x = find_half_unit(alg)
    if x is None:
        raise ExceptionalCase("no x with x + sigma(x) = 1: char 2 and sigma orthogonal")
    h = e - e @ x @ alg.sigma(e)
    if not classify_idempotent(alg, h).is_hyperbolic:
        raise CertificationError("hyperbolization did not produce a hyperbolic idempotent")
    return h


def twist_metabolic(alg: InvolutionAlgebra, e: Matrix, x: Matrix) -> Matrix:
    """Return the metabolic idempotent ``e - e x sigma(e)``; it generates the same right ideal."""
    if not classify_idempotent(alg, e).is_metabolic:
        raise NotMetabolic()
    e2 = e - e @ x @ alg.sigma(e)
    if not classify_idempotent(alg, e2).is_metabolic or not same_column_space(e, e2):
        raise CertificationError("twisted idempotent is not metabolic with the same ideal")
    return e2

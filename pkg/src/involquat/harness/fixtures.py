"""The two worked counterexamples, rebuilt over several fields and re-checked claim by claim.

* ``metabolic_counterexample``: sigma = Int(diag(1,-1,1,-1)) o transpose on
  M_4(F) and a metabolic idempotent e lying in no sigma-invariant quaternion
  subalgebra (any characteristic).
* ``symmetric_counterexample``: char 2, transpose on M_4(F) and a symmetric
  square-central u with the half-rank property, again in no invariant
  quaternion subalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from ..errors import CertificationError
from ..exactfield import GF, QQ, FieldSpec
from ..idempotent import IdempotentClass, classify_idempotent, orth_complement_ideal
from ..involalg import InvolutionAlgebra, compute_subspace, in_alt
from ..matspace import Matrix
from ..quatconstruct import NONE_BY_THEOREM, invariant_quat_for_metabolic, invariant_quat_for_symmetric_char2
from .oracle import brute_force_quat_oracle

METABOLIC_FIELDS = (GF(2), GF(3), GF(5), QQ)
SYMMETRIC_FIELDS = (GF(2), GF(2, 2))


def metabolic_counterexample(F: FieldSpec) -> tuple[InvolutionAlgebra, Matrix]:
    g = Matrix.of(F, [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])
    alg = InvolutionAlgebra(F, 4, g)
    e = Matrix.of(F, [[1, 0, 0, 0], [1, 0, 0, 0], [1, -1, 1, 0], [1, -1, 1, 0]])
    return alg, e


def metabolic_counterexample_e_sigma_e(F: FieldSpec) -> Matrix:
    """Expected value of e sigma(e): every row is (1, -1, 1, -1)."""
    return Matrix.of(F, [[1, -1, 1, -1]] * 4)


def symmetric_counterexample(F: FieldSpec, lam: Any = None) -> tuple[InvolutionAlgebra, Matrix, Any]:
    if F.char != 2:
        raise ValueError("the symmetric counterexample lives in characteristic 2")
    lam = F.one if lam is None else F.coerce(lam)
    z = F.zero
    u = Matrix(F, [[lam, z, lam, lam], [z, lam, lam, lam], [lam, lam, z, lam], [lam, lam, lam, z]])
    return InvolutionAlgebra(F, 4), u, lam


@dataclass
class ExampleReport:
    claims: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.claims)

    def check(self, name: str, cond: bool | Callable[[], bool]) -> None:
        ok = bool(cond() if callable(cond) else cond)
        self.claims.append({"claim": name, "ok": ok})
        if not ok:
            raise CertificationError(f"claim failed: {name}")

    def to_json(self) -> dict:
        return {"ok": self.ok, "n_claims": len(self.claims), "claims": self.claims}


def check_metabolic_counterexample(F: FieldSpec, report: ExampleReport, use_oracle: bool = True) -> None:
    tag = f"metabolic[{F}]"
    alg, e = metabolic_counterexample(F)
    rep = classify_idempotent(alg, e)
    report.check(f"{tag}: sigma is of the first kind and involutive", alg.sigma(alg.sigma(e)) == e)
    report.check(f"{tag}: e is idempotent", rep.is_idempotent)
    report.check(f"{tag}: dim eA = 8", rep.dim_eA == 8)
    report.check(f"{tag}: sigma(e) e = 0", rep.sigma_e_e_zero)
    report.check(f"{tag}: e is metabolic", rep.is_metabolic)
    report.check(f"{tag}: e is not hyperbolic", rep.cls is IdempotentClass.METABOLIC)
    report.check(f"{tag}: e sigma(e) equals the expected matrix", rep.e_sigma_e == metabolic_counterexample_e_sigma_e(F))
    report.check(f"{tag}: dim e sigma(e) A = 4", rep.dim_e_sigma_e_A == 4)
    verdict = invariant_quat_for_metabolic(alg, e)
    report.check(f"{tag}: constructor returns none-by-theorem", not verdict and verdict.decision == NONE_BY_THEOREM)
    if use_oracle and F == GF(2):
        report.check(f"{tag}: exhaustive search finds no invariant quaternion subalgebra",
                     lambda: brute_force_quat_oracle(alg, e) is None)


def check_symmetric_counterexample(F: FieldSpec, report: ExampleReport, use_oracle: bool = True) -> None:
    tag = f"symmetric[{F}]"
    alg, u, lam = symmetric_counterexample(F)
    one = alg.one()
    report.check(f"{tag}: u is symmetric", alg.sigma(u) == u)
    report.check(f"{tag}: u^2 = lambda^2", u @ u == one.scale(F.mul(lam, lam)))
    report.check(f"{tag}: dim (u+lambda)A = dim A / 2", 4 * u.plus_scalar(lam).rank() == 8)
    alt = compute_subspace(alg, "Alt")
    report.check(f"{tag}: Alt is the zero-diagonal symmetric matrices",
                 alt.dimension == 6 and all(b.T == b and all(b[i, i] == F.zero for i in range(4)) for b in alt.basis))
    report.check(f"{tag}: u + alpha not in Alt for every alpha",
                 all(not in_alt(alg, u.plus_scalar(a)) for a in F.elements()))
    _, dperp = orth_complement_ideal(alg, u.plus_scalar(lam))
    report.check(f"{tag}: ((u+lambda)A)^perp has dimension 8", dperp == 8)
    verdict = invariant_quat_for_symmetric_char2(alg, u, lam)
    report.check(f"{tag}: constructor returns none-by-theorem", not verdict and verdict.decision == NONE_BY_THEOREM)
    if use_oracle and F == GF(2):
        report.check(f"{tag}: exhaustive search finds no invariant quaternion subalgebra",
                     lambda: brute_force_quat_oracle(alg, u) is None)


def verify_worked_examples(use_oracle: bool = True) -> ExampleReport:
    """Rebuild both counterexamples over every supported field; raise on the first failed claim."""
    report = ExampleReport()
    for F in METABOLIC_FIELDS:
        check_metabolic_counterexample(F, report, use_oracle)
    for F in SYMMETRIC_FIELDS:
        check_symmetric_counterexample(F, report, use_oracle)
    return report

"""Randomized property checks of the decision procedures, one cell at a time.

A cell is ``(kind, field, n, involution type)``.  Each trial generates an
instance, runs the constructor, and independently re-derives the expected
verdict from the defining criterion.  Any disagreement, failed certificate
or unexpected exception is recorded as a violation.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

from ..errors import CertificationError, ExceptionalCase, Infeasible, InvolquatError
from ..exactfield import GF, FieldSpec, parse_field_name
from ..idempotent import classify_idempotent, hyperbolize_metabolic, twist_metabolic
from ..involalg import InvolutionAlgebra, InvolutionType, find_half_unit, in_alt, is_char2_orthogonal
from ..matspace import Matrix, idempotent_normal_form, square_central_normal_form
from ..quatconstruct import (
    QuaternionSubalgebra,
    SpanCoords,
    invariant_quat_for_alt_element,
    invariant_quat_for_metabolic,
    invariant_quat_for_skew_element,
    invariant_quat_for_symmetric_char2,
    quat_char2_alt_shift,
    skew_to_alt_idempotent,
    skew_to_metabolic,
    split_quaternion_containing,
    validate_quaternion_subalgebra,
)
from .generate import (
    feasible_algebra,
    random_hyperbolic,
    random_matrix,
    random_metabolic,
    random_skew_square_central,
    random_square_central,
    random_symmetric_square_central,
)
from .oracle import MAX_ORACLE_N, oracle_verdict

FUZZ_KINDS = ("metabolic", "square-central", "skew", "symmetric", "alt-shift")
DEFAULT_FIELDS = ("GF(2)", "GF(3)", "GF(5)", "GF(4)")
UNITARY_FIELDS = ("GF(4)u", "GF(9)u")
DEFAULT_DEGREES = (2, 4, 6)
ALGEBRA_REFRESH = 25  # trials between fresh random involutions
MAX_VIOLATIONS_KEPT = 20


@dataclass
class CellSummary:
    kind: str
    field: str
    n: int
    involution: str | None
    trials: int = 0
    positives: int = 0
    negatives: int = 0
    skipped: int = 0
    oracle_checks: int = 0
    violations: int = 0
    violation_samples: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    seconds: float = 0.0

    def violate(self, trial: int, what: str) -> None:
        self.violations += 1
        if len(self.violation_samples) < MAX_VIOLATIONS_KEPT:
            self.violation_samples.append({"trial": trial, "violation": what})

    def bump(self, key: str, by: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + by

    def to_json(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("seconds")
        return d


def cell_rng(seed: int, *key: Any) -> random.Random:
    return random.Random(":".join(str(k) for k in (seed,) + key))


def _oracle_ok(F: FieldSpec, n: int) -> bool:
    return F == GF(2) and n <= MAX_ORACLE_N


def _validated(alg: InvolutionAlgebra | None, Q: QuaternionSubalgebra, invariant: bool, **members: Matrix) -> str | None:
    rep = validate_quaternion_subalgebra(alg, Q, require_invariant=invariant)
    if not rep.ok:
        return "; ".join(rep.failures)
    sc = SpanCoords(Q.basis)
    for name, m in members.items():
        if sc.coords(m) is None:
            return f"{name} not in the returned subalgebra"
    return None


def _check_normal_form(cert, x: Matrix) -> str | None:
    if not cert.verify(x):
        return "P x P^-1 differs from the canonical form"
    if cert.m + cert.n + 2 * cert.k != x.n:
        return "multiplicities do not add up to the degree"
    return None


# --- metabolic idempotents -------------------------------------------------------------


def _trial_metabolic(s: CellSummary, t: int, alg: InvolutionAlgebra, rng: random.Random, oracle: str) -> None:
    F, n = alg.field, alg.n
    half_unit = find_half_unit(alg)
    if (half_unit is None) != is_char2_orthogonal(alg):
        s.violate(t, "half-unit exists exactly outside char 2 orthogonal failed")
    if half_unit is not None and t % 4 == 3:
        e = random_hyperbolic(alg, rng)
        s.bump("hyperbolized-instances")
    else:
        e = random_metabolic(alg, rng)
    rep = classify_idempotent(alg, e)
    if not rep.is_metabolic:
        s.violate(t, "generated idempotent is not metabolic")
        return
    if rep.sigma_e_e_zero != rep.alt_metabolic_zero:
        s.violate(t, "sigma(e)e = 0 and (1-e)(1-sigma(e)) = 0 disagree")
    expected = rep.is_hyperbolic or 2 * rep.dim_e_sigma_e_A == alg.dim
    Q = invariant_quat_for_metabolic(alg, e)
    if bool(Q) != expected:
        s.violate(t, f"verdict {bool(Q)} but criterion says {expected}")
    if Q:
        s.positives += 1
        err = _validated(alg, Q, True, e=e)
        if err:
            s.violate(t, err)
    else:
        s.negatives += 1
    if rep.is_hyperbolic:
        s.bump("hyperbolic")
    elif F.char != 2:
        s.bump("metabolic-not-hyperbolic-char-not-2")
        if len(s.witnesses) < 3:
            s.witnesses.append({"algebra": alg.descriptor(), "e": e.to_json(),
                                "e_sigma_e_rank": rep.e_sigma_e.rank()})
    if half_unit is not None:
        h = hyperbolize_metabolic(alg, e)
        if not classify_idempotent(alg, h).is_hyperbolic:
            s.violate(t, "hyperbolized idempotent is not hyperbolic")
        s.bump("hyperbolized")
    twist_metabolic(alg, e, random_matrix(F, n, rng))
    err = _check_normal_form(idempotent_normal_form(e), e)
    if err:
        s.violate(t, err)
    if _oracle_ok(F, n) and (oracle == "all" or (oracle == "negatives" and not Q)):
        s.oracle_checks += 1
        if oracle_verdict(alg, e) != bool(Q):
            s.violate(t, "oracle disagrees with the constructor")


# --- square-central elements without involution --------------------------------------------


def _trial_square_central(s: CellSummary, t: int, F: FieldSpec, n: int, rng: random.Random, oracle: str) -> None:
    u, lam = random_square_central(F, n, rng)
    expected = 2 * u.plus_scalar(lam).rank() == n
    Q = split_quaternion_containing(u, lam)
    if bool(Q) != expected:
        s.violate(t, f"verdict {bool(Q)} but criterion says {expected}")
    if Q:
        s.positives += 1
        err = _validated(None, Q, False, u=u)
        if err:
            s.violate(t, err)
    else:
        s.negatives += 1
    err = _check_normal_form(square_central_normal_form(u, lam), u)
    if err:
        s.violate(t, err)
    if _oracle_ok(F, n) and (oracle == "all" or (oracle == "negatives" and not Q)):
        s.oracle_checks += 1
        if oracle_verdict(None, u) != bool(Q):
            s.violate(t, "oracle disagrees with the constructor")


# --- skew square-central elements ---------------------------------------------------------


def _chain_identities(s: CellSummary, t: int, alg: InvolutionAlgebra, u: Matrix, lam) -> None:
    """Identities along the element -> metabolic -> hyperbolic chain."""
    F = alg.field
    e, rep = skew_to_metabolic(alg, u, lam)  # checks the e u sigma(e) identity itself
    se = alg.sigma(e)
    two_lam = F.mul(F.from_int(2), lam)
    if e @ u @ se != (e @ se).scale(lam) + u.plus_scalar(lam) - e.scale(two_lam):
        s.violate(t, "e u sigma(e) != lam e sigma(e) + lam + u - 2 lam e")
    if lam != F.zero and in_alt(alg, u):
        r = skew_to_alt_idempotent(alg, u, lam)
        y = u.scale(F.inv(lam))
        se1 = alg.sigma(r.e_prime)
        if r.e_prime - se1 != y:
            s.violate(t, "e' - sigma(e') != u / lam")
        if F.char == 2 and r.e_prime @ se1 != y.plus_scalar(F.one):
            s.violate(t, "e' sigma(e') != 1 + u / lam")
        s.bump("alt-chain")


def _trial_skew(s: CellSummary, t: int, alg: InvolutionAlgebra, rng: random.Random, oracle: str) -> None:
    F, n = alg.field, alg.n
    u, lam = random_skew_square_central(alg, rng)
    s.bump("lambda-zero" if lam == F.zero else "lambda-nonzero")
    _chain_identities(s, t, alg, u, lam)
    if is_char2_orthogonal(alg):
        try:
            invariant_quat_for_skew_element(alg, u, lam)
            s.violate(t, "skew-element constructor accepted the exceptional case")
        except ExceptionalCase:
            pass
        if in_alt(alg, u):
            expected = lam != F.zero
            Q = invariant_quat_for_alt_element(alg, u, lam)
            s.bump("exceptional-alt")
        else:
            expected = any(a != lam and in_alt(alg, u.plus_scalar(a)) for a in F.elements())
            Q = invariant_quat_for_symmetric_char2(alg, u, lam)
            s.bump("exceptional-symmetric")
    else:
        expected = True
        Q = invariant_quat_for_skew_element(alg, u, lam)
    if bool(Q) != expected:
        s.violate(t, f"verdict {bool(Q)} but expected {expected}")
    if Q:
        s.positives += 1
        err = _validated(alg, Q, True, u=u)
        if err:
            s.violate(t, err)
    else:
        s.negatives += 1
    err = _check_normal_form(square_central_normal_form(u, lam), u)
    if err:
        s.violate(t, err)
    if _oracle_ok(F, n) and (oracle == "all" or (oracle == "negatives" and not Q)):
        s.oracle_checks += 1
        if oracle_verdict(alg, u) != bool(Q):
            s.violate(t, "oracle disagrees with the constructor")


# --- symmetric elements, char 2 orthogonal ----------------------------------------------------


def _trial_symmetric(s: CellSummary, t: int, alg: InvolutionAlgebra, rng: random.Random, oracle: str) -> None:
    F, n = alg.field, alg.n
    u, lam = random_symmetric_square_central(alg, rng)
    expected = any(a != lam and in_alt(alg, u.plus_scalar(a)) for a in F.elements())
    Q = invariant_quat_for_symmetric_char2(alg, u, lam)
    if bool(Q) != expected:
        s.violate(t, f"verdict {bool(Q)} but criterion says {expected}")
    if Q:
        s.positives += 1
        err = _validated(alg, Q, True, u=u)
        if err:
            s.violate(t, err)
    else:
        s.negatives += 1
    err = _check_normal_form(square_central_normal_form(u, lam), u)
    if err:
        s.violate(t, err)
    if _oracle_ok(F, n) and (oracle == "all" or (oracle == "negatives" and not Q)):
        s.oracle_checks += 1
        if oracle_verdict(alg, u) != bool(Q):
            s.violate(t, "oracle disagrees with the constructor")


# --- alpha-shift into Alt(Q, tau) ------------------------------------------------------------


def random_orthogonal_quaternion(alg: InvolutionAlgebra, rng: random.Random, tries: int = 200) -> QuaternionSubalgebra:
    """A sigma-invariant quaternion subalgebra of a char 2 orthogonal (A, sigma)."""
    for _ in range(tries):
        u, lam = random_symmetric_square_central(alg, rng)
        Q = invariant_quat_for_symmetric_char2(alg, u, lam)
        if Q:
            return Q
    raise Infeasible("alt-shift", "no invariant quaternion subalgebra found")


def symmetric_square_central_in(Q: QuaternionSubalgebra, tau: InvolutionAlgebra) -> list[Matrix]:
    return [x for x in Q.elements() if tau.sigma(x) == x and (x @ x).is_scalar()]


def random_symmetric_square_central_in(Q: QuaternionSubalgebra, tau: InvolutionAlgebra, rng: random.Random) -> Matrix:
    return rng.choice(symmetric_square_central_in(Q, tau))


def _trial_alt_shift(s: CellSummary, t: int, alg: InvolutionAlgebra, rng: random.Random, cache: dict) -> None:
    key = (alg, t // ALGEBRA_REFRESH)
    if key not in cache:
        Q = random_orthogonal_quaternion(alg, rng)
        els = Q.elements()
        alt_q = {x - alg.sigma(x) for x in els}
        cands = [x for x in els if alg.sigma(x) == x and (x @ x).is_scalar()]
        cache.clear()
        cache[key] = (Q, alt_q, cands)
    Q, alt_q, cands = cache[key]
    x = rng.choice(cands)
    alpha = quat_char2_alt_shift(Q, alg, x)
    if x.plus_scalar(alpha) not in alt_q:
        s.violate(t, "x + alpha not in Alt(Q, tau)")
    s.positives += 1


# --- driver ----------------------------------------------------------------------------------


def run_cell(kind: str, field_name: str, n: int, involution: str | None, trials: int, seed: int,
             oracle: str = "negatives") -> CellSummary:
    """Run ``trials`` checks of ``kind`` in one cell; deterministic in ``seed``."""
    if kind not in FUZZ_KINDS:
        raise ValueError(f"unknown fuzz kind {kind!r}; choose from {', '.join(FUZZ_KINDS)}")
    F = parse_field_name(field_name)
    s = CellSummary(kind, field_name, n, involution)
    rng = cell_rng(seed, kind, field_name, n, involution)
    start = time.perf_counter()
    alg = None
    cache: dict = {}
    for t in range(trials):
        try:
            if kind == "square-central":
                _trial_square_central(s, t, F, n, rng, oracle)
            else:
                if alg is None or t % ALGEBRA_REFRESH == 0:
                    alg = feasible_algebra(F, n, involution, rng)
                if kind == "metabolic":
                    _trial_metabolic(s, t, alg, rng, oracle)
                elif kind == "skew":
                    _trial_skew(s, t, alg, rng, oracle)
                elif kind == "symmetric":
                    _trial_symmetric(s, t, alg, rng, oracle)
                else:
                    _trial_alt_shift(s, t, alg, rng, cache)
            s.trials += 1
        except Infeasible as exc:
            s.skipped += 1
            s.bump(f"infeasible: {exc.kind}")
        except CertificationError as exc:
            s.violate(t, f"certificate failure: {exc}")
        except InvolquatError as exc:
            s.violate(t, f"{type(exc).__name__}: {exc}")
    s.seconds = time.perf_counter() - start
    return s


def default_cells(kind: str, fields=None, degrees=None) -> list[tuple[str, int, str | None]]:
    fields = fields or DEFAULT_FIELDS
    degrees = degrees or DEFAULT_DEGREES
    cells: list[tuple[str, int, str | None]] = []
    for name in fields:
        F = parse_field_name(name)
        for n in degrees:
            if kind == "square-central":
                cells.append((name, n, None))
                continue
            if F.unitary:
                cells.append((name, n, InvolutionType.UNITARY.value))
                continue
            if kind in ("symmetric", "alt-shift"):
                if F.char == 2:
                    cells.append((name, n, InvolutionType.ORTHOGONAL.value))
                continue
            cells.append((name, n, InvolutionType.ORTHOGONAL.value))
            cells.append((name, n, InvolutionType.SYMPLECTIC.value))
    if kind in ("metabolic", "skew") and fields is DEFAULT_FIELDS:
        for name in UNITARY_FIELDS:
            for n in degrees:
                cells.append((name, n, InvolutionType.UNITARY.value))
    return cells


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("INVOLQUAT_THREADS", "1")))
    except ValueError:
        return 1


def _run_packed(args: tuple) -> CellSummary:
    return run_cell(*args)


def run_fuzz(kind: str, trials: int, seed: int, cells: list | None = None, oracle: str = "negatives",
             workers: int | None = None, progress: Callable[[CellSummary], None] | None = None) -> dict:
    """Run every cell and aggregate in cell order (independent of ``workers``)."""
    cells = default_cells(kind) if cells is None else cells
    jobs = [(kind, f, n, inv, trials, seed, oracle) for f, n, inv in cells]
    workers = thread_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_run_packed, jobs))
    else:
        summaries = []
        for job in jobs:
            summaries.append(_run_packed(job))
            if progress:
                progress(summaries[-1])
    return {
        "kind": kind,
        "seed": seed,
        "trials_per_cell": trials,
        "cells": summaries,
        "total_trials": sum(c.trials for c in summaries),
        "total_violations": sum(c.violations for c in summaries),
        "witness_log": [w for c in summaries for w in c.witnesses],
    }

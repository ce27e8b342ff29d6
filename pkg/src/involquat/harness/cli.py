"""Decide and construct quaternion subalgebras from JSON instance descriptors.

Reads an instance descriptor (file argument or standard input) and writes a
JSON result to standard output.  Exit status: 0 when the question was
decided, 2 on a precondition failure or malformed input, 1 when an internal
certificate failed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from ..errors import CertificationError, InvolquatError, PreconditionViolated
from ..idempotent import classify_idempotent
from ..involalg import classify_involution, compute_subspace, find_half_unit, is_char2_orthogonal
from ..quatconstruct import (
    invariant_quat_for_metabolic,
    invariant_quat_for_skew_element,
    invariant_quat_for_symmetric_char2,
    split_quaternion_containing,
)
from .fixtures import verify_worked_examples
from .fuzz import DEFAULT_DEGREES, FUZZ_KINDS, default_cells, run_fuzz
from .jsonio import InstanceDescriptor, MalformedDescriptor, dumps, loads_descriptor
from .oracle import brute_force_quat_oracle

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION = 0, 1, 2

FUZZ_ALIASES = {"metabolic-idempotent": "metabolic", "square-central-split": "square-central",
                "skew-square-central": "skew", "symmetric-square-central": "symmetric"}


def _read(path: str) -> InstanceDescriptor:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise MalformedDescriptor(f"cannot read {path}: {exc}") from exc
    return loads_descriptor(text)


def _need_algebra(d: InstanceDescriptor):
    if d.algebra is None:
        raise MalformedDescriptor("this task needs an involution in the descriptor")
    return d.algebra


def cmd_classify_involution(args) -> dict:
    alg = _need_algebra(_read(args.input))
    dims = {w: compute_subspace(alg, w).dimension for w in ("Sym", "Skew", "Symd", "Alt")}
    half = find_half_unit(alg)
    return {
        "task": "classify-involution",
        "classification": classify_involution(alg).to_json(),
        "subspace_dimensions": dims,
        "subspace_dimensions_over": "F0" if alg.semilinear else "F",
        "half_unit": None if half is None else half.to_json(),
    }


def cmd_classify_idempotent(args) -> dict:
    d = _read(args.input)
    alg = _need_algebra(d)
    return {"task": "classify-idempotent", "report": classify_idempotent(alg, d.element("e")).to_json()}


def _quat_for_element(d: InstanceDescriptor, split_only: bool):
    u = d.element("u")
    lam = d.scalars.get("lambda")
    if split_only or d.algebra is None:
        return "split", split_quaternion_containing(u, lam)
    alg = d.algebra
    su = alg.sigma(u)
    if is_char2_orthogonal(alg):
        if su != u:
            raise PreconditionViolated("sigma(u)=u")
        return "symmetric-char2", invariant_quat_for_symmetric_char2(alg, u, lam)
    if su != -u:
        raise PreconditionViolated("sigma(u)=-u", "invariant search handles skew elements outside char 2 orthogonal")
    return "skew", invariant_quat_for_skew_element(alg, u, lam)


def cmd_find_quat(args) -> dict:
    d = _read(args.input)
    if args.target == "idempotent":
        alg = _need_algebra(d)
        route, res = "metabolic", invariant_quat_for_metabolic(alg, d.element("e"))
    else:
        route, res = _quat_for_element(d, args.split_only)
    return {"task": f"find-quat-for-{args.target}", "route": route, **res.to_json()}


def cmd_verify_examples(args) -> dict:
    report = verify_worked_examples(use_oracle=not args.no_oracle)
    return {"task": "verify-examples", **report.to_json()}


def cmd_fuzz(args) -> tuple[dict, int]:
    kind = FUZZ_ALIASES.get(args.kind, args.kind)
    cells = default_cells(kind, tuple(args.field) if args.field else None, tuple(args.n) if args.n else None)
    res = run_fuzz(kind, args.trials, args.seed, cells, oracle=args.oracle)
    res["cells"] = [c.to_json(timing=args.timing) for c in res["cells"]]
    res["task"] = "fuzz"
    return res, EXIT_OK if res["total_violations"] == 0 else EXIT_INTERNAL


def cmd_oracle(args) -> dict:
    d = _read(args.input)
    required = d.element("required", "e", "u")
    alg = None if args.no_involution else d.algebra
    Q = brute_force_quat_oracle(alg, required)
    return {"task": "oracle", "decision": "exists" if Q else "none", "invariant": alg is not None,
            "subalgebra": None if Q is None else Q.to_json()}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="involquat", description=__doc__.splitlines()[0])
    p.add_argument("--compact", action="store_true", help="single-line JSON output")
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--compact", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def with_input(sp):
        sp.add_argument("input", nargs="?", default="-", help="descriptor file (default: standard input)")
        return sp

    with_input(sub.add_parser("classify-involution", help="type, Sym/Skew/Symd/Alt dimensions, half-unit"))
    with_input(sub.add_parser("classify-idempotent", help="plain / metabolic / hyperbolic report for element e"))
    fq = with_input(sub.add_parser("find-quat", help="decide and construct a quaternion subalgebra"))
    fq.add_argument("--for", dest="target", choices=("idempotent", "element"), required=True)
    fq.add_argument("--split-only", action="store_true", help="ignore the involution (element target only)")
    ve = sub.add_parser("verify-examples", help="re-check the built-in worked counterexamples")
    ve.add_argument("--no-oracle", action="store_true", help="skip the exhaustive cross-checks")
    fz = sub.add_parser("fuzz", help="randomized property checks")
    fz.add_argument("--kind", required=True, choices=FUZZ_KINDS + tuple(FUZZ_ALIASES))
    fz.add_argument("--trials", type=int, default=1000)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--field", action="append", help="restrict to a field, e.g. GF(3); repeatable")
    fz.add_argument("--n", action="append", type=int, help=f"restrict to a degree (default {DEFAULT_DEGREES})")
    fz.add_argument("--oracle", choices=("none", "negatives", "all"), default="negatives")
    fz.add_argument("--timing", action="store_true", help="include wall-clock seconds (breaks byte-determinism)")
    orc = with_input(sub.add_parser("oracle", help="exhaustive search over M_n(GF(2)), n <= 4"))
    orc.add_argument("--no-involution", action="store_true", help="do not require sigma-invariance")
    return p


COMMANDS = {
    "classify-involution": cmd_classify_involution,
    "classify-idempotent": cmd_classify_idempotent,
    "find-quat": cmd_find_quat,
    "verify-examples": cmd_verify_examples,
    "fuzz": cmd_fuzz,
    "oracle": cmd_oracle,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    indent = None if args.compact else 2
    try:
        out = COMMANDS[args.command](args)
        code = EXIT_OK
        if isinstance(out, tuple):
            out, code = out
    except CertificationError as exc:
        print(dumps({"error": "internal", "detail": str(exc)}, indent), file=sys.stdout)
        return EXIT_INTERNAL
    except PreconditionViolated as exc:
        print(dumps({"error": "precondition", "condition": exc.condition, "detail": str(exc)}, indent))
        return EXIT_PRECONDITION
    except InvolquatError as exc:
        print(dumps({"error": type(exc).__name__, "detail": str(exc)}, indent))
        return EXIT_PRECONDITION
    print(dumps(out, indent))
    return code


if __name__ == "__main__":
    sys.exit(main())

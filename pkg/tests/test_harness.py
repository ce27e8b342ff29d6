import json
import random
import subprocess
import sys

import pytest

from involquat.errors import FieldTooLarge, Infeasible, ScalarInput
from involquat.exactfield import GF, QQ, parse_field_name
from involquat.harness.cli import main
from involquat.harness.fixtures import metabolic_counterexample, symmetric_counterexample, verify_worked_examples
from involquat.harness.fuzz import FUZZ_KINDS, default_cells, run_cell, run_fuzz
from involquat.harness.generate import (
    feasible_algebra,
    generate_instance,
    random_algebra,
    random_square_central,
)
from involquat.harness.jsonio import MalformedDescriptor, descriptor_for, dumps, loads_descriptor
from involquat.harness.oracle import brute_force_quat_oracle
from involquat.idempotent import classify_idempotent
from involquat.involalg import InvolutionAlgebra, InvolutionType, classify_involution
from involquat.matspace import Matrix


def write_descriptor(tmp_path, payload, name="d.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


# --- oracle ------------------------------------------------------------------------------


def test_oracle_finds_whole_m2():
    F = GF(2)
    alg = InvolutionAlgebra(F, 2)
    Q = brute_force_quat_oracle(alg, Matrix.of(F, [[1, 0], [1, 0]]))
    assert Q is not None and len(set(Q.elements())) == 16


def test_oracle_without_involution_is_weaker():
    alg, e = metabolic_counterexample(GF(2))
    assert brute_force_quat_oracle(alg, e) is None
    assert brute_force_quat_oracle(None, e) is not None


def test_oracle_scope():
    with pytest.raises(FieldTooLarge):
        brute_force_quat_oracle(None, Matrix.unit(GF(3), 2, 0, 1))
    with pytest.raises(FieldTooLarge):
        brute_force_quat_oracle(None, Matrix.unit(GF(2), 5, 0, 1))
    with pytest.raises(ScalarInput):
        brute_force_quat_oracle(None, Matrix.identity(GF(2), 2))


# --- generators --------------------------------------------------------------------------


@pytest.mark.parametrize("name,type_", [("GF(3)", "orthogonal"), ("GF(3)", "symplectic"), ("GF(2)", "orthogonal"),
                                        ("GF(2)", "symplectic"), ("GF(4)u", "unitary")])
def test_random_algebra_has_requested_type(name, type_):
    rng = random.Random(1)
    alg = random_algebra(parse_field_name(name), 4, type_, rng)
    assert classify_involution(alg).type is InvolutionType(type_)


@pytest.mark.parametrize("name,type_", [("GF(3)", "orthogonal"), ("GF(5)", "symplectic"), ("GF(2)", "orthogonal"),
                                        ("GF(9)u", "unitary")])
def test_generated_idempotents(name, type_):
    rng = random.Random(2)
    alg = feasible_algebra(parse_field_name(name), 4, type_, rng)
    for seed in range(5):
        assert classify_idempotent(alg, generate_instance("metabolic-idempotent", alg, seed)).is_metabolic
        if alg.field.char != 2 or type_ != "orthogonal":
            assert classify_idempotent(alg, generate_instance("hyperbolic-idempotent", alg, seed)).is_hyperbolic


def test_no_hyperbolic_idempotents_in_char2_orthogonal():
    alg = InvolutionAlgebra(GF(2), 4)
    with pytest.raises(Infeasible):
        generate_instance("hyperbolic-idempotent", alg, 0)


def test_generated_skew_elements():
    rng = random.Random(4)
    alg = feasible_algebra(GF(5), 4, "symplectic", rng)
    for seed in range(5):
        u, lam = generate_instance("skew-square-central", alg, seed)
        assert alg.sigma(u) == -u and u @ u == alg.one().scale(lam * lam % 5)
        assert 2 * u.plus_scalar(lam).rank() == 4


@pytest.mark.parametrize("half", [True, False])
def test_random_square_central_half_flag(half):
    rng = random.Random(5)
    for F in (GF(2), GF(3), GF(2, 2)):
        u, lam = random_square_central(F, 4, rng, half=half)
        assert (u @ u).is_scalar() and not u.is_scalar()
        assert (2 * u.plus_scalar(lam).rank() == 4) == half


# --- worked examples ---------------------------------------------------------------------


def test_worked_examples_all_claims_hold():
    report = verify_worked_examples(use_oracle=False)
    assert report.ok and report.to_json()["n_claims"] >= 40


def test_symmetric_counterexample_needs_char2():
    with pytest.raises(ValueError):
        symmetric_counterexample(GF(3))


# --- JSON --------------------------------------------------------------------------------


@pytest.mark.parametrize("F", [GF(3), GF(2, 2), GF(3, 2, unitary=True), QQ], ids=str)
def test_descriptor_round_trip(F):
    rng = random.Random(6)
    type_ = "unitary" if F.unitary else "orthogonal"
    alg = random_algebra(F, 2, type_, rng) if F is not QQ else InvolutionAlgebra(QQ, 2)
    e = Matrix.of(F, [[1, 0], [1, 0]])
    text = dumps(descriptor_for(alg, {"e": e}, {"lambda": F.one}))
    d = loads_descriptor(text)
    assert d.algebra == alg and d.element("e") == e and d.scalars["lambda"] == F.one


def test_descriptor_extension_entries():
    d = loads_descriptor(json.dumps({"algebra": {"field": "GF(4)", "n": 2},
                                     "elements": {"u": [["t", 0], [0, "t+1"]], "v": [[[0, 1], 0], [0, 1]]}}))
    F = d.field
    assert d.element("u")[0, 0] == F.from_json("t")
    assert d.element("u")[1, 1] == F.from_json("t+1")
    assert d.element("v")[0, 0] == F.from_json("t")


@pytest.mark.parametrize("text", ["{", "[]", '{"algebra": {"n": 2}}', '{"schema": "other/9", "algebra": {"field": "GF(2)", "n": 2}}',
                                  '{"algebra": {"field": "GF(2)", "n": 2}, "elements": {"e": [[1, 0]]}}'])
def test_malformed_descriptors(text):
    with pytest.raises(MalformedDescriptor):
        loads_descriptor(text)


def test_dumps_is_stable_ascii():
    out = dumps({"b": 1, "a": "x"}, None)
    assert out == '{"a": "x", "b": 1, "schema": "involquat/1"}'


# --- CLI ---------------------------------------------------------------------------------


def test_cli_find_quat_counterexample(tmp_path, capsys):
    alg, e = metabolic_counterexample(GF(3))
    path = write_descriptor(tmp_path, descriptor_for(alg, {"e": e}))
    code, out = run_cli(capsys, "find-quat", "--for", "idempotent", path)
    assert code == 0 and out["decision"] == "none-by-theorem"


def test_cli_classify_commands(tmp_path, capsys):
    alg, e = metabolic_counterexample(GF(5))
    path = write_descriptor(tmp_path, descriptor_for(alg, {"e": e}))
    code, out = run_cli(capsys, "classify-involution", path)
    assert code == 0 and out["classification"]["type"] == "orthogonal"
    assert out["subspace_dimensions"] == {"Sym": 10, "Skew": 6, "Symd": 10, "Alt": 6}
    code, out = run_cli(capsys, "--compact", "classify-idempotent", path)
    assert code == 0 and out["report"]["class"] == "metabolic"


def test_cli_find_quat_for_element(tmp_path, capsys):
    F = GF(2)
    u = Matrix.of(F, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    path = write_descriptor(tmp_path, descriptor_for(InvolutionAlgebra(F, 4), {"u": u}, {"lambda": 1}))
    code, out = run_cli(capsys, "find-quat", "--for", "element", path, "--compact")
    assert code == 0 and out["route"] == "symmetric-char2" and out["decision"] == "constructed"
    code, out = run_cli(capsys, "find-quat", "--for", "element", "--split-only", path)
    assert code == 0 and out["route"] == "split"


def test_cli_oracle(tmp_path, capsys):
    alg, u, lam = symmetric_counterexample(GF(2))
    path = write_descriptor(tmp_path, descriptor_for(alg, {"u": u}))
    code, out = run_cli(capsys, "oracle", path)
    assert code == 0 and out["decision"] == "none"
    code, out = run_cli(capsys, "oracle", "--no-involution", path)
    assert code == 0 and out["decision"] == "exists"


def test_cli_precondition_exit_code(tmp_path, capsys):
    alg = InvolutionAlgebra(GF(3), 2)
    path = write_descriptor(tmp_path, descriptor_for(alg, {"e": alg.one()}))
    code, out = run_cli(capsys, "find-quat", "--for", "idempotent", path)
    assert code == 2 and out["error"] == "precondition" and out["condition"] == "e metabolic"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run_cli(capsys, "classify-involution", str(bad))
    assert code == 2


def test_cli_verify_examples(capsys):
    code, out = run_cli(capsys, "verify-examples", "--no-oracle")
    assert code == 0 and out["ok"]


def test_cli_fuzz_is_byte_deterministic(capsys):
    argv = ["fuzz", "--kind", "metabolic", "--trials", "6", "--seed", "3", "--field", "GF(3)", "--n", "2", "--compact"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["total_violations"] == 0


def test_module_entry_point_reads_stdin():
    alg, e = metabolic_counterexample(GF(3))
    res = subprocess.run([sys.executable, "-m", "involquat", "classify-idempotent"], input=json.dumps(descriptor_for(alg, {"e": e})),
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["report"]["dim_e_sigma_e_A"] == 4


# --- fuzz driver -------------------------------------------------------------------------


@pytest.mark.parametrize("kind", FUZZ_KINDS)
def test_every_fuzz_kind_runs_clean(kind):
    cells = default_cells(kind, ("GF(2)",), (2, 4))
    res = run_fuzz(kind, 4, seed=1, cells=cells)
    assert res["total_violations"] == 0
    assert res["total_trials"] > 0


def test_fuzz_parallel_matches_serial():
    cells = default_cells("square-central", ("GF(3)", "GF(2)"), (2, 4))
    a = run_fuzz("square-central", 10, 2, cells, workers=1)
    b = run_fuzz("square-central", 10, 2, cells, workers=2)
    assert [c.to_json() for c in a["cells"]] == [c.to_json() for c in b["cells"]]


def test_unknown_fuzz_kind():
    with pytest.raises(ValueError):
        run_cell("nope", "GF(2)", 2, None, 1, 0)


def test_split_negatives_match_oracle():
    res = run_fuzz("square-central", 120, 7, [("GF(2)", 4, None)], oracle="negatives")
    cell = res["cells"][0]
    assert res["total_violations"] == 0
    assert cell.negatives > 0 and cell.oracle_checks == cell.negatives

"""Command-line round trips: schemas, determinism, exit codes."""

import io
import json

import jsonschema

from sumsetcert.cli import run

DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["command", "provenance", "reports"],
    "properties": {
        "command": {"type": "string"},
        "provenance": {
            "type": "object",
            "required": ["version", "seed", "max_cells", "trials"],
        },
        "reports": {"type": "array", "items": {"type": "object"}},
    },
}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["verdict", "hypotheses_hold", "hypotheses"],
    "properties": {
        "verdict": {"enum": ["holds", "hypothesis-failed", "not-applicable",
                             "violated"]},
        "hypotheses_hold": {"type": "boolean"},
        "hypotheses": {"type": "array"},
    },
}


def invoke(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


def write(tmp_path, doc, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_verify_symm_holds(tmp_path):
    path = write(tmp_path, {"p": 3, "n": 1, "sets": [[[0], [1]]]})
    code, out = invoke(["verify-symm", path])
    doc = json.loads(out)
    jsonschema.validate(doc, DOCUMENT_SCHEMA)
    jsonschema.validate(doc["reports"][0], VERDICT_SCHEMA)
    assert code == 0
    assert doc["reports"][0]["verdict"] == "holds"


def test_verify_symm_failed_hypothesis_exits_2(tmp_path):
    path = write(tmp_path, {"p": 3, "n": 1, "sets": [[[0]]]})
    code, out = invoke(["verify-symm", path])
    assert code == 2
    assert json.loads(out)["reports"][0]["verdict"] == "hypothesis-failed"


def test_tight_example_report():
    code, out = invoke(["tight-example", "--p", "3", "--n", "2"])
    doc = json.loads(out)
    assert code == 0
    rep = doc["reports"][0]
    assert rep["verdict"] == "holds"
    assert len(rep["certificates"]["points"]) == 4
    assert rep["certificates"]["missing"] == 2


def test_nondeg_unit_square(tmp_path):
    path = write(tmp_path, {"p": 5, "n": 2,
                            "sets": [[[0, 0], [1, 0], [0, 1], [1, 1]]]})
    code, out = invoke(["nondeg", path])
    doc = json.loads(out)
    assert code == 0
    rep = doc["reports"][0]
    assert rep["nondeg_degree"] == 1
    assert rep["witness_degree_bound"] == 2
    assert rep["witness"]  # a conic through the four points


def test_deltas_subcommand(tmp_path):
    path = write(tmp_path, {"p": 5, "n": 2,
                            "sets": [[[0, 0], [1, 0], [0, 1], [1, 1]]]})
    code, out = invoke(["deltas", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert rep["dims"] == {"0": 1, "1": 2, "2": 1}
    assert rep["total_dim"] == rep["set_size"] == 4


def test_sumset_subcommand(tmp_path):
    path = write(tmp_path, {"p": 3, "n": 1, "sets": [[[0], [1]], [[0], [1]]]})
    code, out = invoke(["sumset", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert rep["cardinality"] == 3 and rep["is_full"]


def test_verify_q_requires_budgets(tmp_path):
    path = write(tmp_path, {"p": 3, "ell": 2, "n": 1,
                            "sets": [[[i] for i in range(6)]]})
    code, out = invoke(["verify-q", path])
    assert code == 1
    assert "budgets" in json.loads(out)["error"]["message"]


def test_verify_q_holds(tmp_path):
    path = write(tmp_path, {"p": 3, "ell": 2, "n": 1,
                            "sets": [[[i] for i in range(6)]] * 2,
                            "budgets": [4, 4]})
    code, out = invoke(["verify-q", path])
    assert code == 0
    assert json.loads(out)["reports"][0]["verdict"] == "holds"


def test_verify_2d_not_applicable_for_p2(tmp_path):
    path = write(tmp_path, {"p": 2, "n": 2,
                            "sets": [[[0, 0], [1, 0], [0, 1], [1, 1]]]})
    code, out = invoke(["verify-2d", path])
    assert code == 2
    assert json.loads(out)["reports"][0]["verdict"] == "not-applicable"


def test_egz_subcommand(tmp_path):
    path = write(tmp_path, {"p": 5, "n": 2,
                            "sets": [[[0, 0], [1, 0], [0, 1]]] * 2})
    code, out = invoke(["egz", path])
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["verdict"] == "holds" and rep["observed"] == 6


def test_phi_crosscheck_default_block(tmp_path):
    path = write(tmp_path, {
        "p": 3, "n": 2,
        "sets": [[[0, 0], [1, 0], [0, 1], [1, 1], [2, 2]]]})
    code, out = invoke(["phi-crosscheck", path])
    assert code == 0
    rep = json.loads(out)["reports"][0]
    assert rep["verdict"] == "holds"
    assert rep["certificates"]["ell"] == 2


def test_hash_stats_flags_weak_bound(tmp_path):
    path = write(tmp_path, {"p": 5, "n": 1, "sets": [],
                            "experiment": {"d": 2}})
    code, out = invoke(["hash-stats", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert rep["all_match_closed_forms"] is True
    assert rep["displayed_bound_dominates_everywhere"] is False
    assert rep["notes"]


def test_surjectivity_exact(tmp_path):
    path = write(tmp_path, {"p": 11, "n": 1,
                            "sets": [[[i] for i in range(11)]],
                            "experiment": {"d": 2}})
    code, out = invoke(["surjectivity", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert rep["rate"] == "1/1" or rep["rate"] == 1


def test_random_expansion_json_and_csv(tmp_path):
    doc = {"p": 11, "n": 2,
           "experiment": {"c": 0.5, "trials": 6, "seed": 2}}
    path = write(tmp_path, doc)
    code, out = invoke(["random-expansion", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert len(rep["records"]) == 6
    code2, out2 = invoke(["random-expansion", path, "--format", "csv"])
    lines = out2.strip().splitlines()
    assert lines[0] == "trial,success,covered"
    assert len(lines) == 7


def test_random_expansion_replay(tmp_path):
    doc = {"p": 31, "n": 2, "experiment": {"c": 0.5, "trials": 2, "seed": 2}}
    path = write(tmp_path, doc)
    code, out = invoke(["random-expansion", path, "--replay", "1"])
    rep = json.loads(out)["reports"][0]
    assert len(rep["replay"]) == 1
    assert [s["step"] for s in rep["replay"][0]["steps"]][0] == "affine-span"


def test_affine_span_subcommand(tmp_path):
    path = write(tmp_path, {"p": 5, "n": 2,
                            "experiment": {"trials": 500, "seed": 3}})
    code, out = invoke(["affine-span", path])
    rep = json.loads(out)["reports"][0]
    assert code == 0
    assert 0.5 < rep["rate"] <= 1.0


def test_malformed_json_exits_1(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, out = invoke(["verify-symm", str(path)])
    assert code == 1
    assert "malformed JSON" in json.loads(out)["error"]["message"]


def test_missing_fields_exit_1(tmp_path):
    path = write(tmp_path, {"p": 3})
    code, out = invoke(["verify-symm", str(path)])
    assert code == 1


def test_guard_violation_reports_name_and_limit(tmp_path):
    path = write(tmp_path, {"p": 3, "n": 2, "sets": [[[0, 0], [1, 1]]]})
    code, out = invoke(["sumset", path, "--max-cells", "4"])
    doc = json.loads(out)
    assert code == 1
    assert doc["error"]["guard"] == "max-cells"
    assert doc["error"]["limit"] == 4


def test_byte_identical_reruns(tmp_path):
    doc = {"p": 11, "n": 2, "experiment": {"c": 0.5, "trials": 5, "seed": 7}}
    path = write(tmp_path, doc)
    _, out1 = invoke(["random-expansion", path, "--seed", "7"])
    _, out2 = invoke(["random-expansion", path, "--seed", "7"])
    assert out1 == out2
    path2 = write(tmp_path, {"p": 3, "n": 1, "sets": [[[0], [1]]]}, "b.json")
    _, sym1 = invoke(["verify-symm", path2])
    _, sym2 = invoke(["verify-symm", path2])
    assert sym1 == sym2


def test_every_report_reparses(tmp_path):
    cases = [
        (["tight-example", "--p", "3", "--n", "2"], None),
        (["verify-symm"], {"p": 3, "n": 1, "sets": [[[0], [1]]]}),
        (["verify-main"], {"p": 3, "n": 1, "sets": [[[0], [1]], [[0], [1]]]}),
        (["hash-stats"], {"p": 5, "n": 1, "sets": [], "experiment": {"d": 2}}),
    ]
    for argv, doc in cases:
        if doc is not None:
            argv = argv + [write(tmp_path, doc, f"case{len(argv)}.json")]
        code, out = invoke(argv)
        parsed = json.loads(out)
        jsonschema.validate(parsed, DOCUMENT_SCHEMA)
        assert json.loads(json.dumps(parsed)) == parsed

"""Command-line interface: parsing, payloads, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from skewbrace.cli import EXIT_CAP, EXIT_CONFIG, EXIT_INVALID, EXIT_OK, main, parse_permutations

DEGRAAF3 = {
    "p": 3,
    "dim": 4,
    "labels": ["a", "b", "c", "d"],
    "products": [
        {"i": 0, "j": 0, "value": [0, 0, 1, 0]},
        {"i": 0, "j": 1, "value": [0, 0, 0, 1]},
    ],
}


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, *argv):
    code, out = run(capsys, "--format", "json", *argv)
    return code, (json.loads(out) if out else None)


# ---------------------------------------------------------------------------
# verify


def test_verify_algebra_file(tmp_path, capsys):
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(DEGRAAF3))
    code, report = run_json(capsys, "verify", str(path))
    assert code == EXIT_OK
    assert report["result"]["valid"] is True
    assert report["result"]["nilpotency_index"] == 3
    assert report["result"]["bi_skew"] is True


def test_verify_brace_file(tmp_path, capsys):
    z3 = [[(i + j) % 3 for j in range(3)] for i in range(3)]
    path = tmp_path / "brace.json"
    path.write_text(json.dumps({"star": z3, "circ": z3}))
    code, report = run_json(capsys, "verify", str(path))
    assert code == EXIT_OK
    assert report["result"]["bi_skew"] is True


def test_verify_mutated_brace_reports_witness(tmp_path, capsys):
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    bad = [row[:] for row in z4]
    bad[1][2] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"star": z4, "circ": bad}))
    code, report = run_json(capsys, "verify", str(path))
    assert code == EXIT_INVALID
    assert report["result"]["valid"] is False
    assert report["result"]["witness"] is not None


def test_verify_empty_file_is_parse_error(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("")
    code, _ = run(capsys, "verify", str(path))
    assert code == EXIT_CONFIG


# ---------------------------------------------------------------------------
# ratio


def test_ratio_semidirect_both_directions(capsys):
    code, report = run_json(
        capsys,
        "ratio",
        "--family", "semidirect", "--m", "9", "--n", "6", "--b", "2",
        "--direction", "both",
    )
    assert code == EXIT_OK
    ratios = {r["direction"]: (r["numerator"], r["denominator"]) for r in report["result"]["ratios"]}
    assert ratios == {"mult": (12, 36), "add": (9, 20)}


def test_ratio_algebra_circ_direction(tmp_path, capsys):
    code, report = run_json(
        capsys, "ratio", "--algebra", "degraaf", "--p", "3", "--direction", "circ"
    )
    assert code == EXIT_OK
    (payload,) = report["result"]["ratios"]
    assert (payload["numerator"], payload["denominator"]) == (23, 104)


def test_ratio_algebra_file_add_direction(tmp_path, capsys):
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(DEGRAAF3))
    code, report = run_json(
        capsys, "ratio", "--algebra", str(path), "--direction", "add"
    )
    assert code == EXIT_OK
    (payload,) = report["result"]["ratios"]
    assert (payload["numerator"], payload["denominator"]) == (32, 212)


def test_ratio_zappa_a5(capsys):
    code, report = run_json(capsys, "ratio", "--zappa-szep", "a5")
    assert code == EXIT_OK
    (payload,) = report["result"]["ratios"]
    assert (payload["numerator"], payload["denominator"]) == (4, 20)
    assert sorted(s["size"] for s in payload["stable_subgroups"]) == [1, 5, 10, 60]
    assert payload["provenance"] == "zappa_szep"


def test_ratio_zappa_custom(capsys):
    code, report = run_json(
        capsys,
        "ratio",
        "--zappa-szep", "custom",
        "--left-gens", "(1 2 3 4 5)",
        "--right-gens", "(1 2 3), (1 2)(3 4)",
    )
    assert code == EXIT_OK
    (payload,) = report["result"]["ratios"]
    assert (payload["numerator"], payload["denominator"]) == (4, 20)


def test_ratio_without_source_is_config_error(capsys):
    code, _ = run(capsys, "ratio")
    assert code == EXIT_CONFIG


def test_ratio_cap_exceeded(capsys):
    code, _ = run(
        capsys,
        "ratio", "--order-cap", "10",
        "--family", "semidirect", "--m", "9", "--n", "6", "--b", "2",
    )
    assert code == EXIT_CAP


def test_ratio_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("BRACE_ORDER_CAP", "10")
    code, _ = run(
        capsys, "ratio", "--family", "semidirect", "--m", "9", "--n", "6", "--b", "2"
    )
    assert code == EXIT_CAP


def test_ratio_invalid_action_is_validation_error(capsys):
    code, _ = run(
        capsys, "ratio", "--family", "semidirect", "--m", "9", "--n", "6", "--b", "3"
    )
    assert code == EXIT_INVALID


# ---------------------------------------------------------------------------
# ideals


def test_ideals_left_and_right(capsys):
    code, report = run_json(
        capsys, "ideals", "--algebra", "degraaf", "--p", "3", "--side", "left"
    )
    assert code == EXIT_OK
    assert report["result"]["count"] == 23
    code, report = run_json(
        capsys, "ideals", "--algebra", "degraaf", "--p", "3", "--side", "right"
    )
    assert code == EXIT_OK
    assert report["result"]["count"] == 32


def test_ideals_zero_algebra_file(tmp_path, capsys):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"p": 3, "dim": 2, "products": []}))
    for side in ("left", "right"):
        code, report = run_json(
            capsys, "ideals", "--algebra", str(path), "--side", side
        )
        assert code == EXIT_OK
        assert report["result"]["count"] == 6


# ---------------------------------------------------------------------------
# examples


def test_examples_default_all_pass(capsys):
    code, out = run(capsys, "examples")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert out.strip().endswith("rows passed")


def test_examples_byte_identical_across_jobs(capsys):
    code1, out1 = run(capsys, "examples", "--jobs", "1")
    code4, out4 = run(capsys, "examples", "--jobs", "4")
    assert code1 == code4 == EXIT_OK
    assert out1 == out4


def test_examples_grid_row(capsys):
    code, out = run(capsys, "examples", "--grid", "pq=31:5:2")
    assert code == EXIT_OK
    assert "pq-31-5-2" in out


def test_examples_prime_flag(capsys):
    code, out = run(capsys, "examples", "--p", "3")
    assert code == EXIT_OK
    assert "algebra-p3-ideals" in out
    assert "algebra-p3-power-formula" in out


def test_examples_row_errors_are_collected(capsys):
    # a tiny cap turns rows into recorded failures instead of aborting
    code, out = run(capsys, "examples", "--order-cap", "50")
    assert code == EXIT_INVALID
    assert "FAIL" in out and "rows passed" in out


# ---------------------------------------------------------------------------
# family sweeps


def test_family_csv_columns(capsys):
    code, out = run(
        capsys,
        "--format", "csv",
        "family", "--family", "generalized_dihedral", "--m", "15", "--n", "2", "--b", "14",
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    header = lines[0].split(",")
    assert header == [
        "family", "m", "n", "b", "g", "h",
        "n_sub_add", "n_sub_mult", "n_stable_dir1", "n_stable_dir2",
        "ratio1_num", "ratio1_den", "ratio2_num", "ratio2_den", "predicted_match",
    ]
    row = dict(zip(header, lines[1].split(",")))
    assert row["n_sub_add"] == "8" and row["n_sub_mult"] == "28"
    assert row["predicted_match"] == "true"


def test_family_batch_file(tmp_path, capsys):
    batch = tmp_path / "specs.txt"
    batch.write_text(
        "# family sweeps\n"
        "pq 7 3 2\n"
        "generalized_dihedral 15 2 14\n"
        "pq 9 3 2\n"  # rejected: m not prime
    )
    code, report = run_json(capsys, "family", "--batch", str(batch))
    assert code == EXIT_OK
    rows = report["result"]["rows"]
    assert len(rows) == 3
    assert rows[0]["predicted_match"] == "true"
    assert rows[1]["predicted_match"] == "true"
    assert rows[2]["predicted_match"].startswith("error:")


def test_family_empty_batch(tmp_path, capsys):
    batch = tmp_path / "empty.txt"
    batch.write_text("\n# nothing\n")
    code, report = run_json(capsys, "family", "--batch", str(batch))
    assert code == EXIT_OK
    assert report["result"]["rows"] == []


def test_csv_format_rejected_outside_family(capsys):
    code, _ = run(capsys, "--format", "csv", "ratio", "--zappa-szep", "a5")
    assert code == EXIT_CONFIG


# ---------------------------------------------------------------------------
# reports and parsing


def test_json_report_round_trip(capsys):
    code, out = run(
        capsys, "--format", "json", "ratio", "--algebra", "degraaf", "--p", "3",
        "--direction", "circ",
    )
    assert code == EXIT_OK
    parsed = json.loads(out)
    assert json.dumps(parsed, sort_keys=True, indent=2) + "\n" == out


def test_parse_permutations():
    perms = parse_permutations("(1 2 3 4 5)")
    assert perms == [(1, 2, 3, 4, 0)]
    perms = parse_permutations("(1 2 3), (1 2)(3 4)", degree=5)
    assert perms == [(1, 2, 0, 3, 4), (1, 0, 3, 2, 4)]


def test_parse_permutations_rejects_garbage():
    from skewbrace.errors import ParseError

    with pytest.raises(ParseError):
        parse_permutations("1 2 3")
    with pytest.raises(ParseError):
        parse_permutations("(1 2 2)")

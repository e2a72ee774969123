import json

import pytest

from sumcover.cli import main
from sumcover.records import export_csv, flatten


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_cover_prob_line(capsys):
    code, recs = run_cli(
        capsys,
        ["cover-prob", "--group", "5", "--k", "3", "--model", "subset",
         "--trials", "500", "--seed", "42"],
    )
    assert code == 0
    assert len(recs) == 1
    rec = recs[0]
    assert rec["schema_version"] == 1
    assert rec["command"] == "cover-prob"
    assert rec["params"]["seed"] == 42
    assert 0 <= rec["result"]["successes"] <= 500


def test_cover_exact(capsys):
    code, recs = run_cli(
        capsys, ["cover-exact", "--group", "5", "--k", "3", "--model", "subset"]
    )
    assert code == 0
    assert recs[0]["result"]["probability"] == "2/5"


def test_moments_both_methods(capsys):
    code, recs = run_cli(
        capsys,
        ["moments", "--p", "5", "--k", "2", "--b", "1", "--r", "2",
         "--method", "both"],
    )
    assert code == 0
    res = recs[0]["result"]
    assert res["value_enum"] == "6/25"
    assert res["value_rank"] == "6/25"


def test_verify_clean_exit(capsys):
    code, recs = run_cli(
        capsys, ["verify", "--suite", "34", "--rmax", "3", "--kmax", "3"]
    )
    assert code == 0
    assert recs[0]["result"]["ok"] is True


def test_coupling(capsys):
    code, recs = run_cli(capsys, ["coupling", "--group", "5", "--k", "3"])
    assert code == 0
    assert recs[0]["result"]["p_subset"] == "2/5"


def test_predict(capsys):
    code, recs = run_cli(capsys, ["predict", "--p", "101", "--c", "0.5"])
    assert code == 0
    assert recs[0]["result"]["k_choice"]["k"] == 7


def test_bonferroni_poisson(capsys):
    code, recs = run_cli(
        capsys, ["bonferroni", "--poisson-lambda", "1", "--r-trunc", "5"]
    )
    assert code == 0
    assert recs[0]["result"]["remainder_bound"] == "1/720"


def test_capacity_error_exit_code(capsys):
    code = main(["cover-exact", "--group", "1009", "--k", "12"])
    assert code == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["cover-prob", "--group", "5"])  # missing --k
    assert exc.value.code == 2


def test_estimate_f_and_export_roundtrip(tmp_path, capsys):
    out = tmp_path / "fhat.jsonl"
    code = main(
        ["estimate-f", "--group", "5", "--trials", "200", "--seed", "1",
         "--out", str(out)]
    )
    assert code == 0
    code = main(
        ["export", "--in", str(out),
         "--columns", "result.f_hat,result.second_order"]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "result.f_hat,result.second_order"
    assert lines[1].startswith("4,")


def test_export_csv_rational_columns():
    recs = [{"p": "2/5", "n": 3}, {"p": "1/2", "n": 4}]
    text = export_csv(recs, ["p", "n"])
    lines = text.splitlines()
    assert lines[0] == "p,p_float,n"
    assert lines[1] == "2/5,0.4,3"


def test_export_csv_missing_column():
    from sumcover.errors import DomainError

    with pytest.raises(DomainError, match="record 1"):
        export_csv([{"a": 1}, {"b": 2}], ["a"])


def test_export_csv_empty_stream():
    assert export_csv([], ["a", "b"]) == "a,b\r\n"


def test_flatten():
    assert flatten({"a": {"b": 1}, "c": 2}) == {"a.b": 1, "c": 2}


def test_determinism_of_exact_subcommands(capsys):
    _, rec1 = run_cli(capsys, ["cover-exact", "--group", "7", "--k", "3"])
    _, rec2 = run_cli(capsys, ["cover-exact", "--group", "7", "--k", "3"])
    assert rec1[0]["result"] == rec2[0]["result"]

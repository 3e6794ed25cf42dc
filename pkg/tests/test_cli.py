import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from logalg import cli, corpus, dsl

GOLDEN = Path(__file__).parent / "golden" / "cli"


def run(args, stdin=None):
    p = subprocess.run([sys.executable, "-m", "logalg.cli", *args], input=stdin, capture_output=True, text=True, timeout=600)
    return p.returncode, p.stdout, p.stderr


def call(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def result(out):
    doc = json.loads(out)
    assert doc["schema"] == 1
    return doc["results"]


def test_gp_of_n_is_z(capsys):
    code, out, _ = call(["gp", "N"], capsys)
    assert code == 0
    r = result(out)[0]
    assert r["result"]["group"] == {"rank": 1, "torsion": []}
    assert r["result"]["text"] == "Z"


def test_gp_of_literal(capsys):
    code, out, _ = call(["gp", "<a,b | 2a = 2b>"], capsys)
    assert code == 0
    assert result(out)[0]["result"]["text"] == "Z + Z/2"


def test_replete_sum(capsys):
    code, out, _ = call(["replete", "sum"], capsys)
    assert code == 0
    r = result(out)[0]["result"]
    assert r["augmentation_exact"] and not r["source_was_exact"]
    assert sorted(map(tuple, r["generators"])) == [(-1, 1), (1, -1), (1, 0)]


def test_cotangent_times_five_in_characteristic_five(capsys):
    code, out, _ = call(["cotangent", "x5", "--char", "5"], capsys)
    assert code == 0
    r = result(out)[0]["result"]
    assert r["verdict"] == "No"
    assert r["witness"] == {"pi0_dim": 1, "point": ["1"]}
    code, out, _ = call(["cotangent", "x5"], capsys)
    assert result(out)[0]["result"]["verdict"] == "Yes"


def test_points_option(capsys):
    code, out, _ = call(["cotangent", "node", "--points", "unit,zeros"], capsys)
    assert code == 0
    r = result(out)[0]["result"]
    assert [p for p, _ in r["pi0_samples"]] == [["1", "1"], ["0", "0"]]


def test_point_mode_skips_verdicts(capsys):
    code, out, _ = call(["--mode", "point", "cotangent", "x5"], capsys)
    r = result(out)[0]["result"]
    assert "verdict" not in r and "pi0_samples" in r


def test_sqz_and_lift(capsys):
    for args, key in [
        (["sqz", "verify", "dual"], None),
        (["sqz", "classify", "twist", "--route", "tor"], None),
        (["sqz", "roundtrip", "dual3"], None),
        (["lift", "x5", "dual", "--mode", "etale"], "UniqueLift"),
    ]:
        code, out, _ = call(args, capsys)
        assert code == 0, args
        r = result(out)[0]
        assert r["ok"]
        if key:
            assert r["result"]["verdict"] == key


def test_lift_fails_in_characteristic_p(capsys):
    code, out, _ = call(["lift", "x5", "dual", "--char", "5"], capsys)
    assert code == 0
    r = result(out)[0]
    assert r["result"]["verdict"] == "NoLift" and not r["ok"]


def test_verify_corpus(capsys):
    for suite in ("group-completion", "square-zero-roundtrip"):
        code, out, _ = call(["verify-corpus", suite], capsys)
        assert code == 0
        r = result(out)[0]["result"]
        assert r["ok"] and r["passed"] == r["total"] > 0


def test_verify_corpus_all_totals_checks(capsys):
    code, out, _ = call(["--jobs", "4", "verify-corpus", "all"], capsys)
    assert code == 0
    r = result(out)[0]["result"]
    assert [s["suite"] for s in r["suites"]] == list(corpus.SUITES)
    assert r["total"] == sum(s["total"] for s in r["suites"]) == r["passed"]


def test_exit_codes(capsys, tmp_path):
    assert call(["verify-corpus"], capsys)[0] == 2
    assert call(["gp", "nope"], capsys)[0] == 2
    assert call(["gp"], capsys)[0] == 2
    bad = tmp_path / "bad.logalg"
    bad.write_text("monoid M = <a| a+ >;")
    code, _, err = call(["run", str(bad)], capsys)
    assert code == 2 and "1:17" in err
    assert call(["--max-gb", "1", "replete", "onto_cone"], capsys)[0] == 3
    assert call(["verify-corpus", "no-such-suite"], capsys)[0] == 1
    assert call(["run", str(tmp_path / "missing.logalg")], capsys)[0] == 2


def test_resource_error_takes_priority(capsys, tmp_path):
    f = tmp_path / "s.logalg"
    f.write_text(cli.corpus_source() + "verify-corpus no-such-suite;\nreplete onto_cone;\n")
    code, out, _ = call(["--max-gb", "1", "run", str(f)], capsys)
    assert code == 3
    errs = [r["error"]["type"] for r in result(out)]
    assert errs == ["KeyError", "ResourceExceeded"]


def test_run_script_from_stdin():
    src = "monoid M = <a, b | 2 a = 2 b>;\ngp M;\nbar-homology <a | 2 a = 0> 2;\n"
    code, out, _ = run(["run", "-"], stdin=src)
    assert code == 0
    res = result(out)
    assert res[0]["result"]["text"] == "Z + Z/2"
    assert res[1]["result"]["text"] == ["Z", "Z/2", "0"]


def test_parse_prints_canonically(tmp_path):
    f = tmp_path / "m.logalg"
    f.write_text("monoid   M=<a,b|a+b=2a>;  gp M ;")
    code, out, _ = run(["parse", str(f)])
    assert code == 0
    assert out == "monoid M = <a, b | a + b = 2 a>;\ngp M;\n"


def test_output_is_deterministic(tmp_path):
    f = tmp_path / "s.logalg"
    f.write_text(cli.corpus_source() + "gp TwoAEqTwoB; replete sum; cotangent node; sqz classify twist; lift x2 dual; verify-corpus word-problem --seed 3;\n")
    a = run(["run", str(f)])
    b = run(["run", str(f)])
    c = run(["--jobs", "3", "run", str(f)])
    assert a[0] == 0
    assert a[1] == b[1] == c[1].replace('"jobs": 3', '"jobs": 1')


def test_timing_is_opt_in(capsys):
    _, out, _ = call(["gp", "N"], capsys)
    assert "millis" not in result(out)[0]
    _, out, _ = call(["--timing", "gp", "N"], capsys)
    assert "millis" in result(out)[0]


def test_text_format(capsys):
    code, out, _ = call(["--format", "text", "verify-corpus", "hilbert-basis"], capsys)
    assert code == 0
    assert "9/9 checks passed" in out


def test_verdict_json_roundtrip():
    script = dsl.parse(cli.corpus_source() + "gp N; cotangent x2; gp nope;")
    for v in cli.Runner(script, cli.Config()).run():
        back = cli.Verdict.from_json(json.loads(json.dumps(v.to_json(), sort_keys=True)))
        assert back == v


SNAPSHOTS = {
    "gp_N.json": ["gp", "N"],
    "replete_sum.json": ["replete", "sum"],
    "cotangent_x5_char5.json": ["cotangent", "x5", "--char", "5"],
    "omega_node.json": ["omega", "node"],
    "sqz_classify_dual.json": ["sqz", "classify", "dual"],
    "lift_x5_dual.json": ["lift", "x5", "dual", "--mode", "etale"],
    "bar_homology_klein.json": ["bar-homology", "Klein", "3"],
}


@pytest.mark.parametrize("name", list(SNAPSHOTS))
def test_snapshots(name, capsys):
    code, out, _ = call(SNAPSHOTS[name], capsys)
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("LOGALG_UPDATE_GOLDEN"):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from prodmeasure.cli import main

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"


def run(capsys, argv, doc=None, tmp_path=None):
    path = None
    if doc is not None:
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(doc))
    code = main(argv + ([str(path)] if path else []))
    return code, json.loads(capsys.readouterr().out)


def test_vol(capsys, tmp_path):
    doc = {"version": 1, "factors": "unit", "rectangle": {"head": [["0", "1/2"], ["0", "1/3"]]}}
    code, out = run(capsys, ["vol"], doc, tmp_path)
    assert code == 0 and out == {"command": "vol", "tag": "exact", "value": "1/6"}


def test_exit_code_precondition_with_witness(capsys, tmp_path):
    doc = {"version": 1, "rectangles": [{"head": [["0", "1/2"]]}, {"head": [["1/4", "1"]]}]}
    code, out = run(capsys, ["measure", "union"], doc, tmp_path)
    assert code == 2 and out["error"]["witness"]["head"] == [[["1/4", "1/2"]]]


def test_certified_tail_reports_interval(capsys, tmp_path):
    doc = {"version": 1, "factors": "line",
           "rectangles": [{"head": [], "tail": {"kind": "general", "family": "growing", "c": "1", "r": "1/2"}}]}
    code, out = run(capsys, ["measure", "union"], doc, tmp_path)
    assert code == 0 and out["tag"] == "interval"


def test_uncertified_product_exits_3(capsys, tmp_path, monkeypatch):
    from prodmeasure import cli, product_arith as pa
    harmonic = pa.uncertified("harmonic", lambda n: 1 + Fraction(1, n))
    monkeypatch.setattr(cli.ser, "load_rule", lambda x: harmonic)
    code, out = run(capsys, ["product", "classify"], {"version": 1, "rule": {}}, tmp_path)
    assert code == 3 and out["error"]["kind"] == "inconclusive"


@pytest.mark.parametrize("text", ['{"version": 1, "rectangle": {"head": [[0.5, 1]]}}', "not json", '{"version": 2}', "[]"])
def test_parse_errors_exit_4(capsys, tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    assert main(["vol", str(p)]) == 4
    assert json.loads(capsys.readouterr().out)["error"]["kind"] == "parse"


def test_missing_key_exit_4(capsys, tmp_path):
    code, out = run(capsys, ["lp", "integrate"], {"version": 1}, tmp_path)
    assert code == 4 and "function" in out["error"]["message"]


def test_depth_flag_reports_truncation(capsys, tmp_path):
    doc = {"version": 1, "rectangle": {"head": [["0", "1/2"], ["0", "1/2"], ["0", "1/2"]]}}
    code, out = run(capsys, ["--depth", "2", "set", "complement"], doc, tmp_path)
    assert code == 0 and len(out["terms"]) == 2 and out["exhausted"] is False
    code, out = run(capsys, ["set", "complement"], doc, tmp_path)
    assert len(out["terms"]) == 3 and out["exhausted"] is True


def test_p_flag(capsys, tmp_path):
    doc = json.loads((EXAMPLES / "lp_norm.json").read_text())
    code, out = run(capsys, ["--p", "1", "lp", "norm"], doc, tmp_path)
    assert out["norm_power"] == "2"
    code, out = run(capsys, ["--p", "3/2", "lp", "norm"], doc, tmp_path)
    assert isinstance(out["norm"], list) and len(out["norm"]) == 2


def test_set_commands(capsys, tmp_path):
    code, out = run(capsys, ["set", "intersect"], {"version": 1, "sets": [["0", "1/2"], ["1/4", "1"]]}, tmp_path)
    assert out["set"] == [["1/4", "1/2"]] and out["measure"] == "1/4"
    code, out = run(capsys, ["set", "refine"], {"version": 1, "factor": {"discrete": {"a": "1/2", "b": "1/2"}},
                                                "sets": [{"atoms": ["a"]}, "full"]}, tmp_path)
    assert [a["members"] for a in out["atoms"]] == [[0, 1], [1]]


def test_lp_and_rn_commands(capsys, tmp_path):
    fn = {"ambient": {"head": []}, "level": 1, "terms": [{"coef": "2", "cell": [["0", "1/2"]]}]}
    code, out = run(capsys, ["lp", "frakS"], {"version": 1, "function": fn}, tmp_path)
    lim = out
    del lim["command"]
    code, out = run(capsys, ["lp", "frakT"], {"version": 1, "lim": lim}, tmp_path)
    assert out["terms"] == [{"coef": "2", "cell": [[["0", "1/2"]]]}]
    rn = {"level": 1, "terms": [{"coef": "1", "cell": [["1/2", "3/2"]]}]}
    code, out = run(capsys, ["rn", "support"], {"version": 1, "function": rn}, tmp_path)
    assert out["support"] == [[], [1]]
    code, out = run(capsys, ["rn", "frakP"], {"version": 1, "function": rn}, tmp_path)
    ds = {k: v for k, v in out.items() if k != "command"}
    code, out = run(capsys, ["rn", "roundtrip"], {"version": 1, "direct_sum": ds}, tmp_path)
    assert out["P_after_P_inverse_is_identity"] and out["oplus_norm_power"] == "1"
    code, out = run(capsys, ["rn", "roundtrip"], {"version": 1, "function": rn}, tmp_path)
    assert out["P_inverse_after_P_is_identity"]


def test_banach_embed(capsys, tmp_path):
    f = {"terms": [{"coef": "3", "cell": {"head": [["-1/2", "0"]], "tail": "cube"}}]}
    code, out = run(capsys, ["--p", "2", "banach", "embed"], {"version": 1, "function": f}, tmp_path)
    assert out["norm_power"] == out["embedded_norm_power"] == "9/2"


def test_module_entry_point_and_stdin():
    doc = json.dumps({"version": 1, "rule": {"kind": "periodic", "pattern": ["2", "1/2"]}})
    r = subprocess.run([sys.executable, "-m", "prodmeasure", "product", "plus"], input=doc,
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == "0"

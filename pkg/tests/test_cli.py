import json

import pytest
from click.testing import CliRunner

from mvklr.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return go


def lines(res):
    return [json.loads(x) for x in res.stdout.splitlines() if x.strip()]


def test_enumerate_counts(run):
    res = run("enumerate", "--cartan", "A2", "--depth", "3")
    assert res.exit_code == 0
    rows = lines(res)
    assert len(rows) == 13
    assert all(r["schema"] == 1 for r in rows)
    assert len(lines(run("enumerate", "--depth", "0"))) == 1
    aff = lines(run("enumerate", "--cartan", "sl2-hat", "--depth", "4"))
    assert sum(1 for r in aff if r["weight"] == [2, 2]) == 6


def test_enumerate_deterministic_and_resumable(run, tmp_path):
    a = run("enumerate", "--cartan", "B2", "--depth", "4").stdout
    b = run("enumerate", "--cartan", "B2", "--depth", "4").stdout
    assert a == b
    out = tmp_path / "b2.jsonl"
    run("enumerate", "--cartan", "B2", "--depth", "2", "--out", str(out))
    manifest = json.loads((tmp_path / "b2.jsonl.manifest.json").read_text())
    assert set(manifest["counts"]) == {"0", "1", "2"}
    run("enumerate", "--cartan", "B2", "--depth", "4", "--out", str(out), "--resume")
    assert out.read_text() == a


def test_matrix_cartan(run):
    res = run("enumerate", "--cartan", "2,-1;-1,2", "--depth", "2")
    assert res.exit_code == 0 and len(lines(res)) == 7


def test_unsupported_and_bad_input_exit_2(run):
    assert run("enumerate", "--cartan", "2,-1,-1;-1,2,-1;-1,-1,2").exit_code == 2
    assert run("enumerate", "--cartan", "Z9").exit_code == 2
    assert run("decompose", "w[1", "--cartan", "A2").exit_code == 2
    assert run("polytope", "--cartan", "A2").exit_code == 2


def test_decompose(run):
    res = run("decompose", "2w[112]+w[121]", "--cartan", "A2", "--charge", "1+i,-1+i")
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    parts = [(tuple(p["weight"]), p["character"]) for p in doc["parts"]]
    assert [w for w, _ in parts] == [(1, 1), (1, 0)]


def test_decompose_reads_file(run, tmp_path):
    f = tmp_path / "ch.txt"
    f.write_text("2w[112]+w[121]\n")
    a = run("decompose", str(f), "--charge", "1+i,-1+i").stdout
    b = run("decompose", "2w[112]+w[121]", "--charge", "1+i,-1+i").stdout
    assert a == b


def test_polytope_and_render(run, tmp_path):
    res = run("polytope", "--character", "2w[112]+w[121]", "--check")
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["vertices"] == [[0, 0], [1, 1], [2, 0], [2, 1]]
    assert doc["check"]["ok"]
    f = tmp_path / "p.json"
    f.write_text(res.stdout)
    svg = run("render", str(f))
    assert svg.exit_code == 0 and "<svg" in svg.stdout
    tikz = run("render", str(f), "--render", "tikz")
    assert "tikzpicture" in tikz.stdout


def test_polytope_element_with_figure_file(run, tmp_path):
    el = json.dumps({"type": "A2", "word": [1, 2, 1], "data": [2, 0, 1]})
    out = tmp_path / "sub" / "p.json"
    res = run("polytope", "--element", el, "--render", "svg", "--order-word", "121", "--out", str(out))
    assert res.exit_code == 0
    doc = json.loads(out.read_text())
    data = {tuple(x["root"]): x["value"] for x in doc["lusztig_data_word"]}
    assert data == {(1, 0): 2, (1, 1): 0, (0, 1): 1}
    assert (tmp_path / "sub" / "p.svg").read_text().lstrip().startswith("<svg")


def test_render_refuses_bad_polytope(run, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"vertices": [[0, 0], [3, 0], [0, 2], [4, 3]]}))
    res = run("render", str(f), "--cartan", "A1xA1")
    assert res.exit_code == 1
    assert "<svg" not in res.stdout


def test_verify_exit_codes(run):
    res = run("verify", "counts", "--cartan", "A2", "--depth", "5")
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["ok"] and doc["suite"] == "counts"
    assert run("verify", "reversal", "--cartan", "sl2-hat", "--depth", "4").exit_code == 0


def test_config_defaults(run, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"enumerate": {"cartan": "A1xA1", "depth": 2}}))
    res = run("--config", str(cfg), "enumerate")
    assert res.exit_code == 0
    assert {tuple(r["weight"]) for r in lines(res)} == {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}


@pytest.mark.parametrize("q,field,key,value", [
    ("-2", "0", "summands", [5, 1]),
    ("0", "0", "loewy_length", 3),
    ("-2", "2", "ch_L2", "4w[0011]"),
])
def test_example_sl2hat_golden(run, q, field, key, value):
    res = run("example-sl2hat", "--q", q, "--field", field)
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc[key] == value
    assert doc["golden"]["diffs"] == []

import json

import pytest

from slalpha import fixtures
from slalpha.cli import main
from slalpha.metric import epsilon_components, from_weighted_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def heights(out):
    return [lvl["t"] for lvl in json.loads(out)["levels"]]


def test_cluster_heights(capsys):
    code, out, _ = run(capsys, "cluster", "--fixture", "two-nuclei", "--method", "sl-alpha", "--alpha", "1")
    assert code == 0 and heights(out) == [0, 1, 3, 5]
    _, out, _ = run(capsys, "cluster", "--fixture", "two-nuclei-bridge", "--method", "sl-star", "--alpha", "1")
    assert heights(out) == [0, 1, 3, 6]
    _, out, _ = run(capsys, "cluster", "--fixture", "uniform-ring", "--method", "sl-alpha", "--alpha", "1")
    doc = json.loads(out)
    assert heights(out) == [0, 1]
    assert len(doc["levels"][0]["blocks"]) == 8 and len(doc["levels"][1]["blocks"]) == 1


def test_cluster_missing_alpha(capsys):
    code, out, err = run(capsys, "cluster", "--fixture", "two-nuclei", "--method", "sl-star")
    assert code == 2 and out == "" and "--alpha" in err


def test_cluster_emit_formats(capsys):
    _, out, _ = run(capsys, "cluster", "--fixture", "uniform-ring", "--method", "sl", "--emit", "newick")
    assert out.startswith("(") and out.endswith(";\n")
    _, out, _ = run(capsys, "cluster", "--fixture", "uniform-ring", "--method", "sl", "--emit", "text")
    assert out.splitlines()[-1].startswith("t = 1")


def test_byte_deterministic(capsys):
    argv = ("cluster", "--fixture", "al-bridge", "--method", "al")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ("analyze", "--fixture", "two-nuclei", "--check", "strongly", "--method", "sl-alpha", "--alpha", "1",
            "--b1", "@B1", "--b2", "@B2")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_dbscan(capsys):
    _, out, _ = run(capsys, "dbscan", "--fixture", "two-nuclei", "--eps", "3", "--min-pts", "4")
    doc = json.loads(out)
    assert len(doc["clusters"]) == 1 and doc["noise"] == []
    _, out, _ = run(capsys, "dbscan", "--fixture", "two-nuclei-bridge", "--eps", "2", "--min-pts", "4")
    doc = json.loads(out)
    assert len(doc["clusters"]) == 2 and len(doc["noise"]) == 6 and doc["border_ambiguous"] == ["z0"]
    _, out, _ = run(capsys, "dbscan", "--fixture", "two-nuclei", "--eps", "1", "--min-pts", "1")
    clusters = {frozenset(c) for c in json.loads(out)["clusters"]}
    assert clusters == {frozenset(b) for b in epsilon_components(fixtures.load("two-nuclei"), 1).blocks}


def test_dbscan_bad_params(capsys):
    assert run(capsys, "dbscan", "--fixture", "two-nuclei", "--eps", "-1", "--min-pts", "4")[0] == 2
    assert run(capsys, "dbscan", "--fixture", "two-nuclei", "--eps", "1", "--min-pts", "0")[0] == 2


def test_analyze_weakly(capsys):
    code, out, _ = run(capsys, "analyze", "--fixture", "two-nuclei", "--check", "weakly", "--method", "sl-alpha",
                       "--alpha", "1", "--b1", "@B1", "--b2", "@B2", "--n1", "@N1", "--n2", "@N2")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "holds" and doc["conclusion"]["witness"]["t"] == 3
    _, out, _ = run(capsys, "analyze", "--fixture", "cl-cross", "--check", "weakly", "--method", "cl",
                    "--alpha", "1", "--b1", "@B1", "--b2", "@B2", "--n1", "@N1", "--n2", "@N2")
    assert json.loads(out)["conclusion"]["holds"] is False


def test_analyze_bridge(capsys):
    _, out, _ = run(capsys, "analyze", "--fixture", "two-nuclei-bridge", "--check", "bridge", "--method", "sl-star",
                    "--alpha", "1", "--b1", "@N1", "--b2", "@N2", "--z", "z0", "--xs", "@X", "--ys", "@Y")
    doc = json.loads(out)
    assert doc["verdict"] == "holds" and doc["conclusion"]["witness"]["t"] == 3


def test_analyze_detectors(capsys):
    _, out, _ = run(capsys, "analyze", "--fixture", "two-nuclei", "--check", "single-edge", "--b1", "@B1", "--b2", "@B2")
    doc = json.loads(out)
    assert doc["present"] and doc["report"]["witnesses"] == [["x0", "y0"]]
    _, out, _ = run(capsys, "analyze", "--fixture", "two-nuclei-bridge", "--check", "smaller-blocks", "--alpha", "1",
                    "--blocks", "@B1;z0;@B2")
    doc = json.loads(out)
    assert doc["present"] and (doc["report"]["a"], doc["report"]["b"]) == (2, 3)
    _, out, _ = run(capsys, "analyze", "--fixture", "two-nuclei-bridge", "--check", "moderate", "--alpha", "1",
                    "--blocks", "@N1;z0;@N2", "--left", "x1;x2;x3", "--right", "y1;y2;y3", "--t-j", "2", "--t-i", "3")
    assert json.loads(out)["verdict"] == "holds"


def test_analyze_errors(capsys):
    base = ("analyze", "--fixture", "two-nuclei", "--check", "chained")
    code, _, err = run(capsys, *base, "--b1", "x0,a1", "--b2", "x0")
    assert code == 2 and "overlap" in err
    code, _, err = run(capsys, *base, "--b1", "x0,nope", "--b2", "y0")
    assert code == 2 and "nope" in err
    assert run(capsys, *base, "--b1", "@NOPE", "--b2", "y0")[0] == 2
    assert run(capsys, *base, "--b1", "x0")[0] == 2
    assert run(capsys, "analyze", "--fixture", "two-nuclei", "--check", "strongly", "--b1", "@B1", "--b2", "@B2")[0] == 2


def test_fixture_command(capsys):
    code, out, _ = run(capsys, "fixture", "two-nuclei")
    doc = json.loads(out)
    assert code == 0 and len(doc["points"]) == 14 and len(doc["edges"]) == 43
    code, out, err = run(capsys, "fixture", "no-such")
    assert code == 2 and out == "" and "two-nuclei" in err and "uniform-ring" in err


@pytest.mark.parametrize("name", sorted(fixtures.CATALOG))
def test_fixture_round_trip(capsys, name):
    _, out, _ = run(capsys, "fixture", name)
    doc = json.loads(out)
    s = from_weighted_graph(doc["points"], [tuple(e) for e in doc["edges"]])
    ref = fixtures.load(name)
    assert s.labels == ref.labels and (s.matrix == ref.matrix).all()


def test_input_files(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"points": ["p", "q", "r"], "edges": [["p", "q", 1], ["q", "r", 2]]}))
    _, out, _ = run(capsys, "cluster", "--input", str(g), "--method", "sl")
    assert heights(out) == [0, 1, 2]
    m = tmp_path / "m.csv"
    m.write_text(",p,q,r\np,0,1,2\nq,1,0,2\nr,2,2,0\n")
    _, out, _ = run(capsys, "cluster", "--input", str(m), "--format", "matrix", "--method", "cl")
    assert heights(out) == [0, 1, 2]
    mj = tmp_path / "m.json"
    mj.write_text(json.dumps({"labels": ["p", "q"], "matrix": [[0, 1], [1, 0]]}))
    _, out, _ = run(capsys, "cluster", "--input", str(mj), "--format", "matrix", "--method", "al")
    assert heights(out) == [0, 1]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"labels": ["p", "q"], "matrix": [[0, 1], [2, 0]]}))
    assert run(capsys, "cluster", "--input", str(bad), "--format", "matrix", "--method", "sl")[0] == 2
    assert run(capsys, "cluster", "--input", str(tmp_path / "missing.json"), "--method", "sl")[0] == 2


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "cluster", "--fixture", "two-nuclei", "--method", "sl", "--output", str(dest))
    assert code == 0 and out == ""
    assert heights(dest.read_text()) == [0, 1, 3]

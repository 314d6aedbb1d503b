import io
import json
import xml.etree.ElementTree as ET

import pytest

from boyd_maxwell.cli import main
from boyd_maxwell.graph import INF, CoxeterGraph, serialize

SQUARE_LEVEL2 = CoxeterGraph(4, {(0, 1): 4, (1, 2): 3, (2, 3): 4, (0, 3): INF})
TRIANGLE_337 = CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 7})
LEVEL3 = CoxeterGraph(5, {(0, 1): 3, (0, 2): 6, (0, 4): 4, (1, 3): 5, (1, 4): 5, (2, 3): 5, (2, 4): INF, (3, 4): 5})


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def cox(tmp_path):
    def write(G, name="g.cox"):
        p = tmp_path / name
        p.write_text(serialize(G))
        return p
    return write


def test_analyze_and_level(cox):
    code, text = run("analyze", cox(SQUARE_LEVEL2))
    assert code == 0
    assert "signature (3, 0, 1)" in text and "level 2" in text
    code, text = run("level", cox(TRIANGLE_337))
    assert code == 0 and "graph_level 1 strict=True" in text and "system_level 1" in text


def test_analyze_affine_graph(cox):
    code, text = run("analyze", cox(CoxeterGraph(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})))
    assert code == 0 and "affine, level 0" in text


def test_weights_json(cox, tmp_path):
    out = tmp_path / "w.json"
    assert run("weights", cox(SQUARE_LEVEL2), "--out", out)[0] == 0
    data = json.loads(out.read_text())
    assert len(data) == 4
    assert {"indices", "norm", "causal_class", "vector"} <= set(data[0])


def test_orbit_jsonl(cox):
    code, text = run("orbit", cox(SQUARE_LEVEL2), "--kind", "roots", "--max-word-length", "2")
    assert code == 0
    rows = [json.loads(line) for line in text.splitlines()]
    assert max(r["word_length"] for r in rows) == 2
    assert sum(r["word_length"] == 0 for r in rows) == 4


def test_pack_and_render(cox, tmp_path):
    svg, balls = tmp_path / "p.svg", tmp_path / "p.json"
    code, text = run("pack", cox(SQUARE_LEVEL2), "--max-word-length", "5", "--out-svg", svg, "--out-json", balls)
    assert code == 0
    report = json.loads(text)
    assert report["is_packing"] and report["level"] == 2
    ET.fromstring(svg.read_text())
    again = tmp_path / "r.svg"
    assert run("render", balls, "--out", again)[0] == 0
    ET.fromstring(again.read_text())


def test_pack_refuses_level1(cox):
    code, _ = run("pack", cox(TRIANGLE_337), "--max-word-length", "3")
    assert code == 1


def test_pack_level3_needs_allow_overlap(cox):
    path = cox(LEVEL3)
    assert run("pack", path, "--max-word-length", "3")[0] == 1
    code, text = run("pack", path, "--max-word-length", "3", "--allow-overlap")
    assert code == 0
    report = json.loads(text)
    assert report["level"] == 3 and report["histogram"].get("overlap", 0) > 0


def test_input_errors_exit_2(cox, tmp_path):
    bad = tmp_path / "bad.cox"
    bad.write_text("n 2\nedge 0 1 2\n")
    assert run("analyze", bad)[0] == 2
    assert run("analyze", tmp_path / "missing.cox")[0] == 2
    assert run("orbit", cox(SQUARE_LEVEL2))[0] == 2  # no budget
    assert run("classify", "nonsense")[0] == 2
    assert run("analyze", cox(SQUARE_LEVEL2), "--tol", "-1")[0] == 2
    assert run("bogus-command")[0] == 2


def test_classify_small_family(tmp_path):
    code, text = run("classify", "corank0", "--rank", "3", "--level", "1", "--label-bound", "7",
                     "--out", tmp_path / "fam")
    assert code == 0
    data = json.loads((tmp_path / "fam" / "manifest.json").read_text())
    assert data["count"] == len(list((tmp_path / "fam").glob("*.cox")))
    assert data["discrepancies"] == {}


def test_classify_reports_counts(tmp_path):
    code, text = run("classify", "prisms")
    assert code == 0
    assert text.count("PASS") == 4 and "FAIL" not in text

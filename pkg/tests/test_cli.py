"""Tests for the command-line front end."""

import json

import pytest

from clstrata import cli
from clstrata.catalog import load_entry
from clstrata.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from clstrata.parse import read_graph, read_ribbon
from clstrata.verify import Row

THETA = "2 3\n0 1\n0 1\n0 1\n"
THETA_RIBBON = THETA + "rotation 0: 0 2 4\nrotation 1: 1 5 3\ntwists: 111\n"
HANDCUFF = "2 3\n0 0\n0 1\n1 1\n"


@pytest.fixture
def theta_file(write_text):
    return str(write_text("theta.graph", THETA))


@pytest.fixture
def theta_ribbon_file(write_text):
    return str(write_text("theta.ribbon", THETA_RIBBON))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze(capsys, theta_file):
    code, out, _ = run(capsys, "analyze", theta_file)
    assert code == EXIT_OK
    assert "q(G)=m(G)-n(G)+1" in out
    assert "bridge edges: []" in out

    code, out, _ = run(capsys, "--json", "analyze", theta_file)
    data = json.loads(out)
    assert data["q"] == 2
    assert data["connected"]
    assert data["two_connected_components"] == [[0, 1, 2]]
    assert data["screens"] == {"odd_q": False, "loop_at_degree_3": False}


def test_analyze_disconnected(capsys, write_text):
    """Test that a disconnected graph is reported rather than rejected."""
    path = str(write_text("pair.graph", "2 0\n"))
    code, out, _ = run(capsys, "--json", "analyze", path)
    assert code == EXIT_OK
    data = json.loads(out)
    assert not data["connected"]
    assert data["q"] is None
    assert data["cyclic_part"] is None


def test_classify(capsys, theta_ribbon_file):
    code, out, _ = run(capsys, "--json", "classify", theta_ribbon_file)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["graph"] == "theta"
    assert [c["twists"] for c in data["orientable_classes"]] == ["111"]
    assert data["generators_used"] == ["flips", "auto", "complement"]
    assert "non_orientable_classes" not in data

    code, out, _ = run(capsys, "--json", "classify", theta_ribbon_file, "--non-orientable")
    assert code == EXIT_OK
    assert "non_orientable_classes" in json.loads(out)

    code, out, _ = run(capsys, "classify", theta_ribbon_file, "--generators", "")
    assert code == EXIT_OK
    assert "classes under none" in out


def test_classify_bad_generators(capsys, theta_ribbon_file):
    code, _, err = run(capsys, "classify", theta_ribbon_file, "--generators", "twirl")
    assert code == EXIT_USAGE
    assert err.startswith("clstrata: error:")


def test_export(capsys, tmp_path, theta_ribbon_file):
    code, out, _ = run(capsys, "export", theta_ribbon_file)
    assert code == EXIT_OK
    assert out.count('label="x"') == 3

    target = tmp_path / "theta.json"
    code, out, _ = run(capsys, "export", theta_ribbon_file, "--format", "json", "-o", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text())["twists"] == "111"

    code, _, err = run(capsys, "export", theta_ribbon_file, "--format", "svg")
    assert code == EXIT_USAGE
    assert "Unknown export format" in err


def test_malformed_input(capsys, write_text):
    """Test that parse errors exit with the usage code and name the line."""
    path = str(write_text("broken.graph", "2 1\n0 7\n"))
    code, _, err = run(capsys, "analyze", path)
    assert code == EXIT_USAGE
    assert "line 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", str(tmp_path / "absent.graph"))
    assert code == EXIT_USAGE
    assert "clstrata: error:" in err


def test_catalog(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == EXIT_OK
    assert "handcuff-theta" in out

    code, out, _ = run(capsys, "--json", "catalog", "list")
    assert json.loads(out)["k33"]["tags"] == ["q4-cubic"]

    target = tmp_path / "torus.ribbon"
    assert run(capsys, "catalog", "write", "torus", "-o", str(target))[0] == EXIT_OK
    assert read_ribbon(target) == load_entry("torus").structure

    assert run(capsys, "catalog", "write", "octahedron")[0] == EXIT_USAGE
    assert run(capsys, "catalog", "write")[0] == EXIT_USAGE


def test_realizable(capsys, theta_file, write_text):
    code, out, _ = run(capsys, "realizable", theta_file)
    assert code == EXIT_OK
    assert out.startswith("verdict: yes (two-trees)")
    assert "witness:" in out

    handcuff = str(write_text("handcuff.graph", HANDCUFF))
    code, out, _ = run(capsys, "--json", "realizable", handcuff)
    data = json.loads(out)
    assert data["verdict"] == "no"
    assert data["criterion"] == "loop-at-degree-3"
    assert data["witness"] is None


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "--json", "enumerate", "--vertices", "2", "--edges", "3", "--min-degree", "3",
                       "--output-dir", str(tmp_path / "out"))
    assert code == EXIT_OK
    assert json.loads(out)["count"] == 2
    files = sorted((tmp_path / "out").glob("*.graph"))
    assert len(files) == 2
    assert read_graph(files[0]).m == 3

    code, out, _ = run(capsys, "enumerate")
    assert out.count("# graph") == 6

    assert run(capsys, "enumerate", "--vertices", "2")[0] == EXIT_USAGE


def test_usage_errors(capsys):
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "--version")[0] == EXIT_OK


@pytest.mark.slow
def test_verify_paper(capsys):
    """Test that the census size row fails and sets the exit code."""
    code, out, _ = run(capsys, "verify-paper", "--max-edges", "3", "--samples", "6")
    assert code == EXIT_FAILED
    assert "FAIL" in out
    assert "cubic q=4 census size" in out


@pytest.mark.parametrize(
    "argv, bounds",
    [
        (["verify-paper"], (6, None)),
        (["verify-paper", "--max-edges", "4"], (4, None)),
        (["verify-paper", "--full"], (7, 8)),
    ],
)
def test_verify_paper_bounds(capsys, monkeypatch, argv, bounds):
    """Test the sweep bounds handed to the harness, including the full preset."""
    seen = []

    def fake_acceptance(max_edges, seed, samples, sweep_edges):
        seen.append((max_edges, sweep_edges))
        return [Row("stub", "1", "1", True)]

    monkeypatch.setattr(cli, "run_acceptance", fake_acceptance)
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert "PASS" in out
    assert seen == [bounds]


def test_analyze_bridge_graph(capsys, tmp_path):
    """Test the census graph with a bridge: one bridge and two components."""
    path = str(tmp_path / "bridge.ribbon")
    assert run(capsys, "catalog", "write", "bridge", "-o", path)[0] == EXIT_OK
    code, out, _ = run(capsys, "--json", "analyze", path)
    data = json.loads(out)
    assert data["q"] == 4
    assert len(data["bridges"]) == 1
    assert len(data["two_connected_components"]) == 2

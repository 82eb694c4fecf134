import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hopsets.cli import main
from hopsets.graph import gen_path
from hopsets.io import format_graph, read_augment, read_graph


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def summary(text):
    line = [ln for ln in text.splitlines() if ln.startswith("summary=")][-1]
    return json.loads(line[len("summary="):])


@pytest.fixture
def chain4(tmp_path):
    p = tmp_path / "chain.txt"
    p.write_text(format_graph(gen_path(4)))
    return p


@pytest.fixture
def wdag(tmp_path):
    p = tmp_path / "w.txt"
    code, _ = run("generate", "--kind", "dag", "--n", 40, "--m", 120, "--wmax", 9, "--seed", 3, "-o", p)
    assert code == 0
    return p


def test_generate_to_stdout_and_file(tmp_path):
    code, text = run("generate", "--kind", "path", "--n", 5)
    assert code == 0 and text.startswith("5 4\n")
    p = tmp_path / "s.txt"
    assert run("generate", "--kind", "spined", "--n", 30, "--m", 60, "-o", p)[0] == 0
    assert read_graph(p).m == 60


def test_reach_on_chain(chain4):
    code, text = run("reach", chain4, "--source", 0, "--format", "structured")
    s = summary(text)
    assert code == 0
    assert s["reachable"] == [0, 1, 2, 3] and s["matches_bfs"] is True
    assert s["config.command"] == "reach" and s["config.seed"] == 0


def test_reach_matches_bfs_on_cyclic_input(tmp_path):
    p = tmp_path / "c.txt"
    run("generate", "--kind", "digraph", "--n", 50, "--m", 120, "--seed", 2, "-o", p)
    for s in (0, 17, 49):
        code, text = run("reach", p, "--source", s, "--format", "structured")
        assert code == 0 and summary(text)["matches_bfs"] is True


def test_build_and_verify_shortcut(tmp_path, chain4):
    h = tmp_path / "h.txt"
    code, text = run("build-shortcut", chain4, "-o", h, "--format", "structured")
    assert code == 0 and summary(text)["size_within_budget"] is True
    code, text = run("verify", chain4, h, "--format", "structured")
    s = summary(text)
    assert code == 0 and s["edges_valid"] and s["reach_preserved"] and s["failed"] == "none"


def test_verify_flags_corrupted_augment(tmp_path, chain4):
    h = tmp_path / "h.txt"
    run("build-shortcut", chain4, "-o", h)
    text = h.read_text().splitlines()
    n, m = map(int, text[1].split())
    text[1] = f"{n} {m + 1}"
    text.append("3 0")
    h.write_text("\n".join(text) + "\n")
    code, out = run("verify", chain4, h, "--format", "structured")
    assert code == 1
    assert summary(out)["edges_valid"] is False
    assert "edges_valid" in summary(out)["failed"]


def test_failed_property_named_on_stderr(tmp_path, chain4):
    bad = tmp_path / "bad.txt"
    bad.write_text("# augment\n4 1\n3 0\n")
    r = subprocess.run([sys.executable, "-m", "hopsets", "verify", str(chain4), str(bad)],
                       capture_output=True, text=True)
    assert r.returncode == 1
    assert "failed: edges_valid" in r.stderr


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "broken.txt"
    p.write_text("3 2\n0 1\n1 x\n")
    code, _ = run("reach", p)
    assert code == 2
    assert "line 3" in capsys.readouterr().err


def test_build_hopset_and_verify(tmp_path, wdag):
    h = tmp_path / "h.txt"
    code, text = run("build-hopset", wdag, "-o", h, "--format", "structured", "--eps", "1/4")
    s = summary(text)
    assert code == 0 and s["mode"] == "sequential-exact" and s["config.eps"] == "1/4"
    n, aug = read_augment(h)
    assert aug.weighted and len(aug) == s["size_H"]
    code, text = run("verify", wdag, h, "--eps", "0.25", "--format", "structured")
    s = summary(text)
    assert code == 0 and s["dist_preserved"] is True and s["beta_meas"] >= 1


def test_build_hopset_parallel_mode(tmp_path, wdag):
    code, text = run("build-hopset", wdag, "--parallel", "--h0", 2, "--format", "structured")
    assert code == 0 and summary(text)["mode"] == "parallel-rounded"
    assert run("build-hopset", wdag, "--parallel")[0] == 2


def test_sssp_ratio_within_eps(wdag):
    for eps in ("0.1", "0.25", "0.5"):
        code, text = run("sssp", wdag, "--eps", eps, "--format", "structured")
        s = summary(text)
        assert code == 0
        assert Fraction(s["max_ratio"]) <= 1 + Fraction(eps)
        assert s["consistent"] is True


def test_bench_rows(tmp_path):
    code, text = run("bench", "--n", 32, "--densities", "n,64", "--seeds", 2, "--format", "structured")
    s = summary(text)
    assert code == 0
    assert s["row.0"][0] == 32 and s["row.1"][0] == 64
    assert s["columns"][0] == "m_requested"


def test_text_format_is_aligned(chain4):
    code, text = run("reach", chain4)
    lines = text.splitlines()
    assert code == 0
    assert len({ln.index(" : ") for ln in lines}) == 1


def test_reports_identical_across_runs_and_threads(wdag):
    outs = {run("build-hopset", wdag, "--threads", t, "--format", "structured")[1] for t in (1, 4, 8)}
    assert len(outs) == 1


def test_bad_eps_rejected(chain4):
    with pytest.raises(SystemExit):
        run("reach", chain4, "--eps", "2")

import io
import json
import subprocess
import sys

import pytest

from qspectra import cli


def run(*argv, cache=None):
    out = io.StringIO()
    extra = ["--cache-dir", str(cache)] if cache else ["--no-cache"]
    needs_store = argv[0] in ("classify", "mates", "status", "lemmas", "verify")
    code = cli.main(list(argv) + (extra if needs_store else []), out=out)
    return code, out.getvalue()


def test_spectrum_k3():
    code, text = run("spectrum", "Bw", "--kind", "Q", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    assert doc["char_poly"] == "-4,9,-6,1"
    assert doc["det"] == 4 and doc["moments"] == [3, 6, 18, 66]
    code, text = run("spectrum", "Bw")
    assert "char_poly (constant first): -4,9,-6,1" in text and "det: 4" in text
    code, text = run("spectrum", "Bw", "Cs", "--kind", "L", "--format", "csv")
    assert text.splitlines()[0].startswith("graph6,kind,char_poly") and len(text.splitlines()) == 3


def test_enumerate():
    code, text = run("enumerate", "-n", "4")
    assert code == 0 and len(text.split()) == 11
    assert run("enumerate", "-n", "7", "--filter", "trees", "--count")[1].strip() == "11"
    shards = [run("enumerate", "-n", "6", "--shard-index", str(i), "--shard-count", "3")[1].split()
              for i in range(3)]
    assert sorted(sum(shards, [])) == sorted(run("enumerate", "-n", "6")[1].split())


def test_classify_persists_and_is_deterministic(tmp_path):
    code, text = run("classify", "-n", "6", "--kind", "Q", "--format", "json", cache=tmp_path)
    doc = json.loads(text)
    assert code == 0 and doc["graph_count"] == 156 and doc["histogram"] == {"1": 140, "2": 8}
    assert (tmp_path / "census-n6-Q.qsc").exists()
    assert run("classify", "-n", "6", "--kind", "Q", "--format", "json", cache=tmp_path)[1] == text
    out = tmp_path / "explicit.qsc"
    run("classify", "-n", "6", "--threads", "2", "--shards", "3", "-o", str(out), cache=tmp_path / "b")
    assert out.read_bytes() == (tmp_path / "census-n6-Q.qsc").read_bytes()
    code, text = run("classify", "-n", "5", "--kind", "A,L", "--format", "csv")
    assert text.splitlines()[0] == "n,kind,class_size,classes"


def test_mates_and_status(tmp_path):
    code, text = run("mates", "Cw", "--kind", "Q", "--format", "json", cache=tmp_path)
    assert json.loads(text)["mates"] == ["CF"]  # the star K_{1,3}, canonically labelled
    code, text = run("status", "Cw", "--format", "json", cache=tmp_path)
    assert json.loads(text) == {"schema": "qspectra.status/1", "graph6": "Cw", "das": True, "dls": True, "dqs": False}


def test_verify_exit_codes(tmp_path):
    code, text = run("verify", "cor-Kn-minus-matching", "--budget", "8", cache=tmp_path)
    assert code == 0 and json.loads(text)["counterexamples"] == []
    code, text = run("verify", "cor-Kn", "--budget", "8", cache=tmp_path)
    assert code == 1 and json.loads(text)["counterexamples"][0]["union"] == "Cw"


def test_lemmas(tmp_path):
    findings = tmp_path / "findings.jsonl"
    code, text = run("lemmas", "-n", "5", "--format", "json", "--findings", str(findings), cache=tmp_path)
    doc = json.loads(text)
    assert code == 0
    assert {s["suite"] for s in doc["suites"]} == {"agreement", "trace", "bipartite", "det", "q1", "union"}
    # the diamond (order 4) has det(Q) = 16 without an induced C4
    assert any(json.loads(line)["graph6"] for line in findings.read_text().splitlines())
    again = run("lemmas", "-n", "5", "--format", "json", "--seed", "0", cache=tmp_path)[1]
    assert again == text
    seeded = json.loads(run("lemmas", "-n", "3", "--suite", "union", "--seed", "5", "--samples", "7",
                            "--format", "json")[1])
    assert seeded["suites"] == [{"suite": "union", "max_order": 12, "checked": 7, "violations": 0, "findings": 0}]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["spectrum", "Bw", "--kind", "X"],
    ["enumerate"],
    ["verify", "no-such-theorem"],
    ["classify", "-n", "4", "--threads", "0"],
])
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == 2


def test_input_errors(capsys):
    assert run("spectrum", "Bz")[0] == 2
    assert run("enumerate", "-n", "13")[0] == 2
    assert run("classify", "-n", "10")[0] == 2
    assert "error" in capsys.readouterr().err


def test_thread_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli.default_threads() == 3
    monkeypatch.delenv(cli.THREADS_ENV)
    assert cli.default_threads() >= 1


def test_console_script_and_stdin():
    proc = subprocess.run([sys.executable, "-m", "qspectra", "spectrum", "--format", "json", "--kind", "Q"],
                          input="Bw\nCF\n", capture_output=True, text=True, check=True)
    lines = [json.loads(x) for x in proc.stdout.splitlines()]
    assert [d["graph6"] for d in lines] == ["Bw", "CF"]
    assert lines[1]["char_poly"] == "0,-4,9,-6,1"

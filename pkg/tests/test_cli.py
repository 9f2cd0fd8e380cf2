import json
import random
import subprocess
import sys

import pytest

from h0tree import io
from h0tree.cli import main

from builders import Q_AB, Q_V, STAR, T1, T2, relabel


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj, encoding="utf-8")
    return str(p)


T2_FILTRATION = {
    "quiver": {"vertices": ["a", "b"], "edges": [["a", "b"]]},
    "graph": {"vertices": ["u", "w"], "edges": [["u", "w"]]},
    "vertex_values": {"u": "a", "w": "a"},
    "edge_values": [["u", "w", "b"]],
}

MERGE_TWO_VERTEX = {
    "graph": {"vertices": ["u", "w"], "edges": [["u", "w"]]},
    "n": 2,
    "f_vertices": {"u": 1, "w": 1},
    "f_edges": [["u", "w", 1]],
    "g_vertices": {"u": 1, "w": 1},
    "g_edges": [["u", "w", 2]],
}


def keys(result):
    return sorted((s["apex"], s["key"], s["multiplicity"]) for s in result["summands"])


def test_validate_ok_and_cycle(tmp_path, capsys):
    code, rep = run(capsys, "validate", write(tmp_path, "q.json", Q_AB.to_dict()))
    assert code == 0 and rep["result"]["kind"] == "quiver"
    assert set(rep) >= {"command", "inputs", "elapsed_ms", "result", "warnings"}
    cyc = {"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}
    code, rep = run(capsys, "validate", write(tmp_path, "c.json", cyc))
    assert code == 1 and rep["error"]["kind"] == "cycle" and set(rep["error"]["witness"]) == {"a", "b"}


def test_validate_non_monotone_names_edge(tmp_path, capsys):
    bad = dict(T2_FILTRATION, vertex_values={"u": "b", "w": "a"}, edge_values=[["u", "w", "a"]])
    code, rep = run(capsys, "validate", write(tmp_path, "f.json", bad))
    assert code == 1 and rep["error"]["kind"] == "not_monotone"
    assert "u" in rep["error"]["message"] and "w" in rep["error"]["message"]


def test_decompose_examples(tmp_path, capsys):
    code, rep = run(capsys, "decompose", write(tmp_path, "t2.json", T2.to_dict()))
    assert code == 0 and keys(rep["result"]) == [("a", "(a)", 1), ("b", "(b(a))", 1)]
    code, rep = run(capsys, "decompose", write(tmp_path, "s.json", STAR.to_dict()))
    assert keys(rep["result"]) == [("b", "(b)", 1)]
    code, rep = run(capsys, "decompose", write(tmp_path, "f.json", T2_FILTRATION))
    assert keys(rep["result"]) == [("a", "(a)", 1), ("b", "(b(a))", 1)]


def test_decompose_bifiltration(tmp_path, capsys):
    bif = {
        "graph": {"vertices": ["u", "w"], "edges": [["u", "w"]]},
        "grid": [2, 2],
        "vertex_values": {"u": [1, 1], "w": [1, 1]},
        "edge_values": [["u", "w", [2, 2]]],
        "restriction": {
            "poset": {"elements": ["p", "q"], "relations": [["p", "q"]]},
            "embedding": {"p": [1, 1], "q": [2, 2]},
        },
    }
    code, rep = run(capsys, "decompose", "--kind", "bifiltration", write(tmp_path, "b.json", bif))
    assert code == 0 and keys(rep["result"]) == [("p", "(p)", 1), ("q", "(q(p))", 1)]
    bif["vertex_values"]["u"] = [3, 1]
    code, rep = run(capsys, "decompose", write(tmp_path, "b2.json", bif))
    assert code == 1


def test_decompose_kind_mismatch(tmp_path, capsys):
    code, _ = run(capsys, "decompose", "--kind", "filtration", write(tmp_path, "t.json", T2.to_dict()))
    assert code == 1


def test_reduced_counts(tmp_path, capsys):
    a2 = write(tmp_path, "a2.json", Q_AB.to_dict())
    assert run(capsys, "reduced", a2)[1]["result"]["count"] == 2
    assert run(capsys, "reduced", a2, "--with-downsets")[1]["result"]["count"] == 3
    a4 = {"vertices": ["1", "2", "3", "4"], "edges": [["1", "2"], ["2", "3"], ["3", "4"]]}
    assert run(capsys, "reduced", write(tmp_path, "a4.json", a4), "--with-downsets")[1]["result"]["count"] == 10
    v = write(tmp_path, "v.json", Q_V.to_dict())
    assert run(capsys, "reduced", v)[1]["result"]["count"] == 4
    assert run(capsys, "reduced", v, "--with-downsets")[1]["result"]["count"] == 6


def test_compare_examples(tmp_path, capsys):
    s = write(tmp_path, "s.json", STAR.to_dict())
    t1 = write(tmp_path, "t1.json", T1.to_dict())
    t2 = write(tmp_path, "t2.json", T2.to_dict())
    r = run(capsys, "compare", s, t1)[1]["result"]
    assert r["s_leq_t"] and not r["t_leq_s"] and (r["hom_s_t"], r["hom_t_s"]) == (1, 0)
    r = run(capsys, "compare", t1, t2)[1]["result"]
    assert r["s_leq_t"] and r["t_leq_s"] and not r["iso"]
    assert run(capsys, "compare", t2, t2)[1]["result"]["iso"]


def test_oracle_examples(tmp_path, capsys):
    t2 = write(tmp_path, "t2.json", T2.to_dict())
    assert run(capsys, "oracle", t2)[1]["result"]["status"] == "MATCH"
    assert run(capsys, "oracle", write(tmp_path, "s.json", STAR.to_dict()))[1]["result"]["status"] == "MATCH"
    assert run(capsys, "oracle", t2, "--corrupt")[1]["result"]["status"] == "MISMATCH"
    assert run(capsys, "oracle", t2, "--prime", "3")[1]["result"]["status"] == "MATCH"
    assert run(capsys, "oracle", write(tmp_path, "f.json", T2_FILTRATION))[1]["result"]["status"] == "MATCH"
    assert run(capsys, "oracle", t2, "--prime", "4")[0] == 1


def test_merge_invariant_examples(tmp_path, capsys):
    code, rep = run(capsys, "merge-invariant", write(tmp_path, "m.json", MERGE_TWO_VERTEX))
    comps = rep["result"]["components"]
    assert code == 0 and len(comps) == 1 and len(comps[0]["decomposition"]["summands"]) == 2
    same = dict(MERGE_TWO_VERTEX, g_edges=[["u", "w", 1]])
    comps = run(capsys, "merge-invariant", write(tmp_path, "e.json", same))[1]["result"]["components"]
    assert len(comps[0]["decomposition"]["summands"]) == 1
    split = {
        "graph": {"vertices": ["u", "w", "z"], "edges": [["u", "w"]]},
        "n": 2,
        "f_vertices": {"u": 1, "w": 1, "z": 2},
        "f_edges": [["u", "w", 1]],
        "g_vertices": {"u": 1, "w": 1, "z": 2},
        "g_edges": [["u", "w", 2]],
    }
    comps = run(capsys, "merge-invariant", write(tmp_path, "d.json", split))[1]["result"]["components"]
    assert [c["vertices"] for c in comps] == [["u", "w"], ["z"]]


def test_gen_determinism_and_round_trip(tmp_path, capsys):
    for kind in ("quiver", "tree", "filtration"):
        a, b = tmp_path / f"{kind}1.json", tmp_path / f"{kind}2.json"
        run(capsys, "gen", "--kind", kind, "--size", "12", "--seed", "7", "--out", str(a))
        run(capsys, "gen", "--kind", kind, "--size", "12", "--seed", "7", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        data = io.load_json(str(a))
        parser = {"quiver": io.parse_rooted_tree, "tree": io.parse_tree_over, "filtration": io.parse_filtration}[kind]
        assert parser(data).to_dict() == data
        assert run(capsys, "validate", str(a))[0] == 0
    code, rep = run(capsys, "gen", "--kind", "tree", "--size", "1")
    assert rep["result"]["tree"]["vertices"] == ["t0"] and rep["result"]["tree"]["edges"] == []


@pytest.mark.parametrize("seed", range(20))
def test_generated_filtrations_validate(tmp_path, capsys, seed):
    p = str(tmp_path / "f.json")
    run(capsys, "gen", "--kind", "filtration", "--size", "25", "--seed", str(seed), "--out", p)
    assert run(capsys, "validate", p)[0] == 0


@pytest.mark.parametrize("seed", range(10))
def test_decompose_invariant_under_renaming(tmp_path, capsys, seed):
    p = str(tmp_path / "t.json")
    run(capsys, "gen", "--kind", "tree", "--size", "20", "--seed", str(seed), "--out", p)
    t = io.parse_tree_over(io.load_json(p))
    q = write(tmp_path, "r.json", relabel(t, random.Random(seed)).to_dict())
    assert run(capsys, "decompose", p)[1]["result"] == run(capsys, "decompose", q)[1]["result"]


ERROR_CORPUS = [
    ("not json", "{", 1),
    ("unknown shape", {"hello": 1}, 1),
    ("top-level list", [1, 2], 1),
    ("missing labeling entry", {"base": Q_AB.to_dict(), "tree": {"vertices": ["x"], "edges": []}, "labeling": {}}, 1),
    ("two sinks", {"vertices": ["a", "b"], "edges": []}, 1),
    ("empty quiver", {"vertices": [], "edges": []}, 1),
]


@pytest.mark.parametrize("name, content, code", ERROR_CORPUS, ids=[c[0] for c in ERROR_CORPUS])
def test_exit_codes(tmp_path, capsys, name, content, code):
    p = write(tmp_path, "x.json", content)
    assert run(capsys, "validate", p)[0] == code


def test_missing_file_exit_code(tmp_path, capsys):
    assert run(capsys, "validate", str(tmp_path / "nope.json"))[0] == 1


def test_internal_error_exit_code(tmp_path, capsys, monkeypatch):
    from h0tree import cli

    def boom(args):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "validate", boom)
    code, rep = run(capsys, "validate", write(tmp_path, "q.json", Q_AB.to_dict()))
    assert code == 2 and rep["error"]["kind"] == "internal"


def test_pretty_and_module_entry(tmp_path):
    p = write(tmp_path, "t2.json", T2.to_dict())
    out = subprocess.run([sys.executable, "-m", "h0tree", "decompose", p, "--pretty"], capture_output=True, text=True)
    assert out.returncode == 0 and "(b(a))" in out.stdout and "dims:" in out.stdout

import json
import subprocess
import sys

import pytest

from conftest import DATA, GOLDEN
from treembed.cli import EXIT_DECIDED, EXIT_INPUT, EXIT_UNKNOWN, main
from treembed.textio import parse_pattern, parse_tree

P0 = str(DATA / "p0.pat")


def tree(i):
    return str(DATA / f"t{i}.tree")


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:  # argparse usage errors
        code = e.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "treembed", "check", "--kind", "lca", "--tree", tree(3), "--pattern", P0],
        capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_DECIDED
    assert proc.stdout.strip() == "yes"


def test_fig1_matrix_via_cli(capsys, fig1):
    _, _, expected = fig1
    for i in range(4):
        for kind in ("std", "inj", "anc", "lca"):
            code, out, _ = run(capsys, "check", "--kind", kind, "--tree", tree(i), "--pattern", P0)
            assert code == EXIT_DECIDED
            assert out.strip() == ("yes" if expected[f"t{i}"][kind] else "no")


def test_witness_lines(capsys):
    code, out, _ = run(capsys, "check", "--kind", "lca", "--tree", tree(3), "--pattern", P0, "--witness")
    lines = out.splitlines()
    assert lines[0] == "yes"
    assert lines[1] == "ε -> ε"
    assert len(lines) == 1 + len(parse_pattern((DATA / "p0.pat").read_text()))


def test_json_schema(capsys):
    code, out, _ = run(capsys, "check", "--kind", "anc", "--tree", tree(2), "--pattern", P0,
                       "--json", "--witness")
    rep = json.loads(out)
    assert set(rep) == {"verdict", "kind", "algorithm", "witness", "stats"}
    assert rep["verdict"] == "yes" and rep["kind"] == "anc"
    assert set(rep["stats"]) == {"nodes_explored", "elapsed_ms"}
    assert all(set(w) == {"pattern", "tree"} for w in rep["witness"])
    code, out, _ = run(capsys, "check", "--kind", "anc", "--tree", tree(0), "--pattern", P0, "--json")
    rep = json.loads(out)
    assert rep["verdict"] == "no" and rep["witness"] is None


@pytest.mark.parametrize("algorithm", ["auto", "oracle", "poly", "exact"])
def test_algorithms_agree(capsys, algorithm, fig1):
    _, _, expected = fig1
    kinds = ("inj", "anc") if algorithm == "exact" else ("std", "inj", "anc", "lca")
    for i in range(4):
        for kind in kinds:
            code, out, err = run(capsys, "check", "--kind", kind, "--tree", tree(i), "--pattern", P0,
                                 "--algorithm", algorithm)
            if algorithm == "poly" and kind == "inj":
                assert code == EXIT_INPUT and "error" in err
                continue
            assert code == EXIT_DECIDED
            assert out.strip() == ("yes" if expected[f"t{i}"][kind] else "no")


def test_exact_rejected_for_polynomial_kinds(capsys):
    code, _, err = run(capsys, "check", "--kind", "lca", "--tree", tree(0), "--pattern", P0,
                       "--algorithm", "exact")
    assert code == EXIT_INPUT and err


def test_budget_exhaustion_exit_code(tmp_path, capsys):
    t, p = tmp_path / "t.tree", tmp_path / "p.pat"
    t.write_text("r(" + ",".join(["a(a(a))"] * 6 + ["a(a)"] * 2) + ")")
    p.write_text("r" + "[.//a/a/a]" * 6 + "//a/a/a")
    code, out, _ = run(capsys, "check", "--kind", "inj", "--tree", str(t), "--pattern", str(p), "--budget", "2")
    assert code == EXIT_UNKNOWN and out.strip() == "unknown"


def test_budget_from_environment(tmp_path, monkeypatch, capsys):
    t, p = tmp_path / "t.tree", tmp_path / "p.pat"
    t.write_text("r(" + ",".join(["a(a(a))"] * 6 + ["a(a)"] * 2) + ")")
    p.write_text("r" + "[.//a/a/a]" * 6 + "//a/a/a")
    monkeypatch.setenv("TREEMBED_BUDGET", "2")
    code, _, _ = run(capsys, "check", "--kind", "inj", "--tree", str(t), "--pattern", str(p))
    assert code == EXIT_UNKNOWN


@pytest.mark.parametrize("content", ["a(", "a(*)", "a(b,,c)"])
def test_bad_tree_is_input_error(tmp_path, capsys, content):
    t = tmp_path / "bad.tree"
    t.write_text(content)
    code, out, err = run(capsys, "check", "--kind", "std", "--tree", str(t), "--pattern", P0)
    assert code == EXIT_INPUT and out == "" and err.startswith("error")


def test_missing_file_and_usage_errors(capsys):
    code, _, err = run(capsys, "check", "--kind", "std", "--tree", "/nonexistent", "--pattern", P0)
    assert code == EXIT_INPUT and err
    code, _, err = run(capsys, "check", "--kind", "bogus", "--tree", tree(0), "--pattern", P0)
    assert code == EXIT_INPUT
    code, _, _ = run(capsys, "check", "--kind", "std", "--tree", tree(0), "--pattern", P0, "--budget", "0")
    assert code == EXIT_INPUT
    code, _, _ = run(capsys)
    assert code == EXIT_INPUT


def test_oracle_too_large_is_input_error(tmp_path, capsys):
    t = tmp_path / "big.tree"
    t.write_text("r(" + ",".join(["a"] * 30) + ")")
    code, _, err = run(capsys, "check", "--kind", "std", "--tree", str(t), "--pattern", P0, "--algorithm", "oracle")
    assert code == EXIT_INPUT and err


def test_batch_mode_order_and_json(tmp_path, capsys):
    trees = tmp_path / "trees"
    trees.mkdir()
    for i in range(4):
        (trees / f"t{i}.tree").write_text((DATA / f"t{i}.tree").read_text())
    code, out, _ = run(capsys, "check", "--kind", "anc", "--tree", str(trees), "--pattern", P0, "--jobs", "2")
    assert code == EXIT_DECIDED
    lines = out.splitlines()
    assert [line.split()[0].rsplit("/", 1)[1] for line in lines] == [f"t{i}.tree" for i in range(4)]
    assert [line.split()[-1] for line in lines] == ["no", "no", "yes", "yes"]
    code, out, _ = run(capsys, "check", "--kind", "anc", "--tree", str(trees), "--pattern", P0, "--json", "--jobs", "1")
    reps = [json.loads(line) for line in out.splitlines()]
    assert [r["verdict"] for r in reps] == ["no", "no", "yes", "yes"]
    assert all(r["pattern"] == P0 for r in reps)


def test_batch_mode_reports_bad_files(tmp_path, capsys):
    d = tmp_path / "trees"
    d.mkdir()
    (d / "a.tree").write_text("r")
    (d / "b.tree").write_text("r(")
    code, out, _ = run(capsys, "check", "--kind", "std", "--tree", str(d), "--pattern", P0, "--jobs", "1")
    assert code == EXIT_INPUT
    assert "no" in out.splitlines()[0] and "error" in out.splitlines()[1]
    empty = tmp_path / "empty"
    empty.mkdir()
    code, _, _ = run(capsys, "check", "--kind", "std", "--tree", str(empty), "--pattern", P0)
    assert code == EXIT_INPUT


@pytest.mark.parametrize("kind", ["inj", "anc", "inj-h2", "inj-wc", "inj-nowc", "anc-wc"])
def test_gen_matches_goldens(tmp_path, capsys, kind):
    ot, op = tmp_path / "o.tree", tmp_path / "o.pat"
    code, out, _ = run(capsys, "gen", "--reduction", kind, "--cnf", str(DATA / "fig3.cnf"),
                       "--out-tree", str(ot), "--out-pattern", str(op))
    assert code == EXIT_DECIDED
    t, p = parse_tree(ot.read_text()), parse_pattern(op.read_text())
    assert t == parse_tree((GOLDEN / f"{kind}.tree").read_text())
    assert p == parse_pattern((GOLDEN / f"{kind}.pat").read_text())
    assert out.splitlines() == [f"tree: {len(t)} nodes", f"pattern: {len(p)} nodes"]


def test_gen_round_trip_through_check(tmp_path, capsys):
    ot, op = tmp_path / "o.tree", tmp_path / "o.pat"
    run(capsys, "gen", "--reduction", "anc", "--cnf", str(DATA / "fig3.cnf"),
        "--out-tree", str(ot), "--out-pattern", str(op))
    code, out, _ = run(capsys, "check", "--kind", "anc", "--tree", str(ot), "--pattern", str(op))
    assert code == EXIT_DECIDED and out.strip() == "yes"


def test_gen_errors(tmp_path, capsys):
    cnf = tmp_path / "empty.cnf"
    cnf.write_text("p cnf 2 0\n")
    code, _, err = run(capsys, "gen", "--reduction", "inj", "--cnf", str(cnf),
                       "--out-tree", str(tmp_path / "t"), "--out-pattern", str(tmp_path / "p"))
    assert code == EXIT_INPUT and err
    cnf.write_text("p cnf 2 1\n3 0\n")
    code, _, _ = run(capsys, "gen", "--reduction", "inj", "--cnf", str(cnf),
                     "--out-tree", str(tmp_path / "t"), "--out-pattern", str(tmp_path / "p"))
    assert code == EXIT_INPUT


def test_selftest_small(capsys):
    code, out, _ = run(capsys, "selftest", "--max-tree-nodes", "3", "--max-pattern-nodes", "3",
                       "--random-count", "50")
    assert code == EXIT_DECIDED
    assert out.splitlines()[-1] == "all suites passed"
    for name in ("oracle-equivalence", "hierarchy", "collapse", "path-pattern", "sat-round-trip", "prop3"):
        assert name in out


def test_selftest_min_reading_reports_disagreement(capsys):
    code, out, _ = run(capsys, "selftest", "--max-tree-nodes", "3", "--max-pattern-nodes", "2",
                       "--random-count", "10", "--prop3-reading", "min")
    assert code == EXIT_INPUT
    assert "FAIL" in out and "prop3" in out.splitlines()[-1]


@pytest.mark.parametrize("suite,sizes", [("lca-scale", "200,400"), ("anc-bounded", "200"), ("reduction-growth", "2,3")])
def test_bench(capsys, suite, sizes):
    code, out, _ = run(capsys, "bench", "--suite", suite, "--sizes", sizes, "--json")
    assert code == EXIT_DECIDED
    rows = json.loads(out)["rows"]
    assert len(rows) >= len(sizes.split(","))
    code, out, _ = run(capsys, "bench", "--suite", suite, "--sizes", sizes)
    assert code == EXIT_DECIDED and out.strip()


def test_bench_bad_sizes(capsys):
    code, _, _ = run(capsys, "bench", "--suite", "lca-scale", "--sizes", "x,1")
    assert code == EXIT_INPUT

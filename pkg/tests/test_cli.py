import subprocess
import sys

import pytest

from navlogic.cli import main, run_command
from navlogic.system import parse_system
from navlogic.testkit import T0_TABLE, load_fixture


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("t0.system", "t0_zero_then_one.machine", "t0_always0.strategy"):
        p = tmp_path / name
        p.write_text(load_fixture(name))
        paths[name] = str(p)
    return paths


def run(*argv):
    return run_command(list(argv))


def test_table_matches_t0(files):
    res = run("table", files["t0.system"])
    assert res.status == 0
    rows = res.stdout.splitlines()
    assert rows[0] == "# columns: {a b} {c d} {e} {f} {g} {h}"
    assert "{a b}: m m r r m r" in rows
    assert [r.split(": ")[1] for r in rows[1:]] == list(T0_TABLE)


@pytest.mark.parametrize("formula,kind,status,out", [
    ("{vA} |> {vE}", "memoryless", 1, "false\n"),
    ("{vA} |> {vE}", "recall", 0, "true\n"),
    ("!{vC} |> {vG}", "recall", 0, "true\n"),
    ("{vA}|>{vG} -> {vG}|>{vE} -> {vA}|>{vE}", "memoryless", 1, "false\n"),
])
def test_check(files, formula, kind, status, out):
    res = run("check", files["t0.system"], formula, "--kind", kind)
    assert (res.status, res.stdout, res.stderr) == (status, out, "")


def test_synth_and_verify_round_trip(files, tmp_path):
    res = run("synth", files["t0.system"], "--from", "vA", "--to", "vE", "--kind", "recall")
    assert res.status == 0 and res.stdout.startswith("memories ")
    machine = tmp_path / "m.machine"
    machine.write_text(res.stdout)
    res = run("verify", files["t0.system"], str(machine), "--from", "vA", "--to", "vE",
              "--kind", "recall")
    assert (res.status, res.stdout) == (0, "ok\n")

    res = run("synth", files["t0.system"], "--from", "vA", "--to", "vE", "--kind", "memoryless")
    assert (res.status, res.stdout) == (1, "none\n")

    res = run("synth", files["t0.system"], "--from", "vA", "--to", "vG", "--kind", "memoryless")
    assert res.status == 0
    strat = tmp_path / "s.strategy"
    strat.write_text(res.stdout)
    res = run("verify", files["t0.system"], str(strat), "--from", "vA", "--to", "vG",
              "--kind", "memoryless")
    assert res.stdout == "ok\n"


def test_verify_fixtures(files):
    res = run("verify", files["t0.system"], files["t0_zero_then_one.machine"],
              "--from", "vA", "--to", "vE", "--kind", "recall")
    assert (res.status, res.stdout) == (0, "ok\n")
    res = run("verify", files["t0.system"], files["t0_always0.strategy"],
              "--from", "vA", "--to", "vE", "--kind", "memoryless")
    assert (res.status, res.stdout) == (1, "fail\n")
    res = run("verify", files["t0.system"], files["t0_always0.strategy"],
              "--from", "vA", "--to", "vG", "--kind", "memoryless")
    assert (res.status, res.stdout) == (0, "ok\n")


def test_derive():
    hyps = ["--hyp", "{x}|>{y}", "--hyp", "{y}|>{z}"]
    res = run("derive", "--axioms", "recall", *hyps, "--goal", "{x}|>{z}")
    assert (res.status, res.stdout) == (0, "derivable\n")
    res = run("derive", "--axioms", "memoryless", *hyps, "--goal", "{x}|>{z}")
    assert (res.status, res.stdout) == (1, "not derivable\n")
    res = run("derive", "--axioms", "memoryless", "--hyp", "{x,y}|>{z}", "--goal", "{x}|>{z}",
              "--proof")
    assert res.status == 0
    assert res.stdout.splitlines()[0] == "derivable"
    assert "by hyp 1" in res.stdout


def test_checkproof(tmp_path):
    res = run("derive", "--axioms", "recall", "--hyp", "{x}|>{y}", "--hyp", "{y}|>{z}",
              "--goal", "{x}|>{z}", "--proof")
    proof_file = tmp_path / "p.proof"
    proof_file.write_text(res.stdout.split("\n", 1)[1])
    assert run("checkproof", "--axioms", "recall", str(proof_file)).stdout == "ok\n"
    res = run("checkproof", "--axioms", "memoryless", str(proof_file))
    assert res.status == 1 and res.stdout == "fail\n" and res.stderr

    bad = tmp_path / "bad.proof"
    bad.write_text("line 1: {x,y} |> {x} by refl\n")
    assert run("checkproof", "--axioms", "recall", str(bad)).status == 1


def test_canonical_output_parses():
    for axioms in ("recall", "memoryless"):
        res = run("canonical", "--axioms", axioms, "--views", "x,y", "--hyp", "{x}|>{y}")
        assert res.status == 0
        T = parse_system(res.stdout)
        assert "@sink" in T.states


def test_fuzz():
    res = run("fuzz", "--seed", "5", "--count", "4")
    assert res.status == 0
    assert res.stdout.endswith("checked 4 systems from seed 5: 0 violations\n")


def test_format():
    assert run("format", "!!{b,a}|>{c}").stdout == "!!({a,b} |> {c})\n"


@pytest.mark.parametrize("argv", [
    ["table"],
    ["table", "/nonexistent/system"],
    ["bogus"],
    [],
    ["check", "SYSTEM", "{vQ} |> {vA}", "--kind", "recall"],
    ["check", "SYSTEM", "{vA} |>", "--kind", "recall"],
    ["check", "SYSTEM", "{vA} |> {vB}", "--kind", "weird"],
    ["synth", "SYSTEM", "--from", "", "--to", "vA", "--kind", "recall"],
    ["verify", "SYSTEM", "SYSTEM", "--from", "vA", "--to", "vE", "--kind", "recall"],
    ["canonical", "--axioms", "recall", "--views", "a,b,c,d,e"],
    ["canonical", "--axioms", "recall", "--views", "x", "--hyp", "{y}|>{x}"],
    ["fuzz", "--seed", "x", "--count", "1"],
    ["fuzz", "--seed", "0", "--count", "1", "--max-states", "0"],
])
def test_errors_exit_2_with_one_line(files, argv):
    argv = [files["t0.system"] if a == "SYSTEM" else a for a in argv]
    res = run_command(argv)
    assert res.status == 2
    assert res.stdout == ""
    assert res.stderr.startswith("error: ")
    assert res.stderr.count("\n") == 1


def test_bad_system_file(tmp_path):
    p = tmp_path / "bad.system"
    p.write_text("states a\ninstructions 0\n")
    res = run("table", str(p))
    assert res.status == 2 and res.stderr.count("\n") == 1


def test_byte_stable_outputs(files):
    commands = [
        ["table", files["t0.system"]],
        ["synth", files["t0.system"], "--from", "vA", "--to", "vE", "--kind", "recall"],
        ["canonical", "--axioms", "memoryless", "--views", "x,y,z", "--hyp", "{x}|>{y,z}"],
        ["derive", "--axioms", "recall", "--hyp", "{x}|>{y}", "--goal", "{x,z}|>{y,z}", "--proof"],
    ]
    for argv in commands:
        assert run_command(argv) == run_command(argv)


def test_main_and_entry_point(files, capsys):
    assert main(["check", files["t0.system"], "{vA} |> {vE}", "--kind", "recall"]) == 0
    assert capsys.readouterr().out == "true\n"
    # a fresh interpreter gives the same bytes, so nothing depends on hash seeds
    proc = subprocess.run([sys.executable, "-m", "navlogic.cli", "table", files["t0.system"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == run("table", files["t0.system"]).stdout

"""The command-line surface: subcommands, exit codes, config file."""

import json

import pytest

from blockmem.cli import main

FIG = "alloc 0 8 -> $a\nstore int32 $a 0 (int 42)\nload int32 $a 0 => (int 42)\nfree $a\n"


@pytest.fixture
def fig_trace(tmp_path):
    p = tmp_path / "fig.trace"
    p.write_text(FIG)
    return str(p)


def test_run_success(fig_trace, capsys):
    assert main(["run", fig_trace]) == 0
    assert "ok:" in capsys.readouterr().out


def test_run_verbose(fig_trace, capsys):
    assert main(["run", fig_trace, "-v"]) == 0
    out = capsys.readouterr().out
    assert "block 1" in out


def test_run_assertion_failure(tmp_path, capsys):
    p = tmp_path / "bad.trace"
    p.write_text("alloc 0 8 -> $a\nload int32 $a 0 => (int 9)\n")
    assert main(["run", str(p)]) == 1
    assert "FAIL line 2" in capsys.readouterr().err


def test_run_parse_error(tmp_path, capsys):
    p = tmp_path / "oops.trace"
    p.write_text("load bogus $a 0 => undef\n")
    with pytest.raises(SystemExit) as e:
        main(["run", str(p)])
    assert e.value.code == 2


def test_run_capacity_flag(tmp_path):
    p = tmp_path / "cap.trace"
    p.write_text("expect-fail alloc 0 64 -> $a\n")
    assert main(["run", str(p), "--capacity", "16"]) == 0
    assert main(["run", str(p)]) == 1


def test_run_config_file(tmp_path):
    p = tmp_path / "cap.trace"
    p.write_text("expect-fail alloc 0 64 -> $a\n")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"capacity_bytes": 16}))
    assert main(["run", str(p), "--config", str(cfg)]) == 0


def test_run_no_alignment_flag(tmp_path):
    p = tmp_path / "mis.trace"
    p.write_text("alloc 0 8 -> $a\nstore int32 $a 1 (int 5)\nload int32 $a 1 => (int 5)\n")
    assert main(["run", str(p)]) == 1
    assert main(["run", str(p), "--no-alignment-check"]) == 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_laws_small_run_and_report(tmp_path, capsys):
    report = tmp_path / "laws.jsonl"
    assert main(["laws", "--cases", "5", "--seed", "1", "--report", str(report)]) == 0
    out = capsys.readouterr().out
    assert "laws," in out and "passed" in out
    lines = report.read_text().splitlines()
    kinds = [json.loads(line)["kind"] for line in lines]
    assert kinds[0] == "suite" and kinds[-1] == "summary"
    assert kinds.count("law") >= 40

    second = tmp_path / "laws2.jsonl"
    assert main(["laws", "--cases", "5", "--seed", "1", "--report", str(second)]) == 0
    assert report.read_bytes() == second.read_bytes()


def test_shipped_traces(capsys):
    import pathlib

    root = pathlib.Path(__file__).resolve().parents[1] / "traces"
    assert main(["run", str(root / "read_after_write.trace")]) == 0
    assert (
        main(
            [
                "relate",
                str(root / "refine_left.trace"),
                str(root / "refine_right.trace"),
                "--relation",
                "lessdef",
            ]
        )
        == 0
    )
    assert (
        main(
            [
                "relate",
                str(root / "pack_left.trace"),
                str(root / "pack_right.trace"),
                "--relation",
                "inject",
                "--emb",
                str(root / "pack.emb"),
            ]
        )
        == 0
    )
    capsys.readouterr()


def test_relate_subcommand(tmp_path, capsys):
    t1 = tmp_path / "a.trace"
    t2 = tmp_path / "b.trace"
    t1.write_text("alloc 0 8 -> $x\nstore int32 $x 0 (int 1)\n")
    t2.write_text("alloc 0 8 -> $y\nstore int32 $y 0 (int 1)\n")
    assert main(["relate", str(t1), str(t2), "--relation", "lessdef"]) == 0
    assert main(["relate", str(t1), str(t2), "--relation", "extends", "--stepwise"]) == 0

    emb = tmp_path / "map.emb"
    emb.write_text("[emb]\n1 -> 1 + 0\n")
    assert main(["relate", str(t1), str(t2), "--relation", "inject", "--emb", str(emb)]) == 0
    assert main(["relate", str(t1), str(t2), "--relation", "inject"]) == 2

    t3 = tmp_path / "c.trace"
    t3.write_text("alloc 0 8 -> $z\nstore int32 $z 0 (int 2)\n")
    assert main(["relate", str(t1), str(t3), "--relation", "lessdef"]) == 1

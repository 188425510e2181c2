import numpy as np
import pytest

from makerbreaker.cli import EXIT_USAGE, main
from makerbreaker.graph import Graph
from makerbreaker.harness import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_board_grid(capsys):
    code, out, _ = run(capsys, "board", "--grid", "5x3")
    assert code == 0
    g = Graph.from_edge_list(out)
    assert (g.n, g.m) == (15, 22)


def test_board_snark(capsys, fixtures_dir):
    _, out, _ = run(capsys, "board", "--flower-snark", "7")
    assert out == (fixtures_dir / "flower_snark_j7.txt").read_text()
    assert out.startswith("28 42\n")


def test_board_er_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "board", "--er", "12,0.3", "--seed", "1", "--out", str(a))[0] == 0
    assert run(capsys, "board", "--er", "12,0.3", "--seed", "1", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [["board", "--grid", "0x3"], ["board", "--flower-snark", "4"],
                                  ["board", "--grid", "3"], ["board"], ["board", "--grid", "2x2", "--bogus"],
                                  ["nosuch"]])
def test_usage_errors(capsys, argv):
    # argparse problems exit, bad values caught later are returned; both use the same code
    try:
        code = main(argv)
    except SystemExit as ex:
        code = ex.code
    assert code == EXIT_USAGE


def test_play_p3_domination(capsys):
    code, out, _ = run(capsys, "play", "--grid", "1x3", "--dom", "--maker", "mcts", "--breaker", "mcts",
                       "--seed", "3")
    assert code == 0
    assert out.splitlines()[-1] == "result Maker"


def test_play_single_edge(capsys):
    code, out, _ = run(capsys, "play", "--grid", "1x2", "--path", "2", "--seed", "1")
    assert code == 1 and out.endswith("result Breaker\n")


def test_play_reproducible(capsys):
    argv = ["play", "--grid", "3x3", "--path", "4", "--maker", "mcts:micro=degree:high,iters=30",
            "--breaker", "micro:dist_opp:low", "--seed", "9"]
    first = run(capsys, *argv)
    assert run(capsys, *argv) == first


def test_play_timeout(capsys):
    code, out, _ = run(capsys, "play", "--grid", "3x3", "--dom", "--game-timeout", "0")
    assert code == 2 and out.endswith("result Timeout\n")


def test_play_bad_strategy_lists_catalog(capsys):
    code, _, err = run(capsys, "play", "--grid", "1x3", "--dom", "--maker", "mcts:micro=nosuch:high")
    assert code == EXIT_USAGE
    assert "degree:high" in err and "uniform" in err


def test_play_trace(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    run(capsys, "play", "--grid", "2x2", "--dom", "--maker", "mcts:iters=5", "--breaker", "random",
        "--trace", str(trace))
    assert trace.read_text().startswith("iter 1 path ")


def test_play_rejects_long_path(capsys):
    code, _, err = run(capsys, "play", "--grid", "2x2", "--path", "5")
    assert code == EXIT_USAGE and "5" in err


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "--grid", "1x3", "--dom")
    assert code == 0 and out.startswith("value Maker\noptimal 0,1,2\n")
    _, out, _ = run(capsys, "solve", "--grid", "1x2", "--path", "2")
    assert out.startswith("value Breaker")
    _, out, _ = run(capsys, "solve", "--grid", "1x6", "--path", "3", "--moves", "1,0,2,5")
    assert "optimal 3\n" in out
    assert run(capsys, "solve", "--grid", "5x5", "--dom")[0] == EXIT_USAGE


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    lines = out.splitlines()
    assert code == 0 and len(lines) >= 29
    assert lines[0].startswith("uniform\t")
    assert run(capsys, "catalog")[1] == out


SPEC = """\
name: mini
board: {family: grid, rows: 3, cols: {from: 3, to: 5}}
condition: {kind: path, k: 4}
players: {maker: [mcts, "mcts:micro=degree:high", "mcts:micro=dist_opp:low"], breaker: mcts}
iterations: 5
games_per_cell: 20
master_seed: 11
"""


def test_sweep_and_rank(tmp_path, capsys):
    spec = tmp_path / "mini.yaml"
    spec.write_text(SPEC)
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "sweep", str(spec), "--relative", "--out", str(out_dir), "--workers", "1")
    assert code == 0
    params, table = read_csv(out_dir / "mini.csv")
    assert params == [3, 4, 5] and table.shape == (3, 3)
    _, rel = read_csv(out_dir / "mini_rel.csv")
    assert np.all(rel.max(axis=1) == 1.0)
    assert (out_dir / "mini.meta.json").exists()
    first = (out_dir / "mini.csv").read_bytes()
    run(capsys, "sweep", "--preset", str(spec), "--out", str(out_dir), "--workers", "2")
    assert (out_dir / "mini.csv").read_bytes() == first

    code, out, _ = run(capsys, "rank", str(out_dir / "mini.csv"), "--against", str(out_dir / "mini.csv"))
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and lines[-1] == "spearman 1.0000"
    assert "mcts" in lines[0]


def test_sweep_overrides(tmp_path, capsys):
    spec = tmp_path / "mini.yaml"
    spec.write_text(SPEC)
    run(capsys, "sweep", str(spec), "--games", "2", "--seed", "5", "--out", str(tmp_path), "--workers", "1")
    import json
    meta = json.loads((tmp_path / "mini.meta.json").read_text())
    assert meta["games_per_cell"] == 2 and meta["spec"]["master_seed"] == 5


def test_sweep_usage(tmp_path, capsys):
    assert run(capsys, "sweep", "no_such_preset")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as ex:
        main(["sweep"])
    assert ex.value.code == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["sweep", "p5xk_dom", "--games", "0"])


def test_sweep_all_invalid(tmp_path, capsys):
    spec = tmp_path / "bad.yaml"
    spec.write_text(SPEC.replace("k: 4}", "k: 16}"))
    code, _, err = run(capsys, "sweep", str(spec), "--out", str(tmp_path), "--workers", "1")
    assert code == 1 and "skipped" in err
    assert not (tmp_path / "mini.csv").exists()

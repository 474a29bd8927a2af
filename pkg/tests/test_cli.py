import json

from mahsolve.cli import main
from mahsolve.board import parse_board
from mahsolve.solver import verify_solution


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_row4(tmp_path, capsys):
    board = tmp_path / "row4.board"
    code, _, _ = run(capsys, "shuffle", "--layout", "row4-demo",
                     "--seed", "1", "--out", str(board))
    assert code == 0
    code, out, _ = run(capsys, "solve", str(board))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert all(line.startswith("play ") for line in lines)


def test_solve_methods_and_unsolvable(tmp_path, capsys):
    board = tmp_path / "b.board"
    board.write_text("tile 0 0 0 0\ntile 0 0 1 0\n"
                     "tile 4 0 0 1\ntile 8 0 0 1\n")
    for method in ("group", "match", "oracle"):
        code, _, err = run(capsys, "solve", str(board), "--method", method)
        assert code == 1
        assert "unsolvable" in err
    code, _, err = run(capsys, "solve", str(board), "--method", "random")
    assert code == 3
    assert "unknown after 0 attempts" in err


def test_gen_unsat_then_solve(tmp_path, capsys):
    cnf = tmp_path / "unsat.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    board = tmp_path / "b.board"
    assert run(capsys, "gen", "--sat", str(cnf), "--out", str(board))[0] == 0
    assert run(capsys, "solve", str(board))[0] == 1

    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 1 1\n1 0\n")
    board2 = tmp_path / "b2.board"
    assert run(capsys, "gen", "--sat", str(sat), "--one-level",
               "--out", str(board2))[0] == 0
    code, out, _ = run(capsys, "solve", str(board2))
    assert code == 0
    b = parse_board(board2.read_text())
    moves = []
    from mahsolve.board import Move, Slot
    for line in out.strip().splitlines():
        v = [int(t) for t in line.split()[1:]]
        moves.append(Move(Slot(*v[:3]), Slot(*v[3:])))
    assert verify_solution(b, moves)


def test_gen_writes_tag_comments(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 1 1\n1 0\n")
    board = tmp_path / "b.board"
    run(capsys, "gen", "--sat", str(cnf), "--out", str(board))
    text = board.read_text()
    assert "# group " in text and " tag Sat" in text


def test_low_command(tmp_path, capsys):
    cyc = tmp_path / "cycle.board"
    cyc.write_text("tile 0 0 0 0\ntile 0 0 1 0\n"
                   "tile 4 0 0 1\ntile 4 0 1 1\n")
    code, _, err = run(capsys, "low", str(cyc))
    assert code == 1 and "blocked-cycle" in err

    ok = tmp_path / "ok.board"
    ok.write_text("tile 0 0 0 0\ntile 4 0 0 0\n"
                  "tile 8 0 0 1\ntile 12 0 0 1\n")
    code, out, _ = run(capsys, "low", str(ok))
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_scan_json_worker_independent(tmp_path, capsys):
    outs = []
    for w in ("1", "3"):
        path = tmp_path / ("r%s.json" % w)
        code, out, _ = run(capsys, "scan", "--layout", "two-stacks-demo",
                           "--boards", "100", "--seed", "7", "--workers", w,
                           "--playout-attempts", "2", "--json", str(path))
        assert code == 0
        assert json.loads(out) == json.loads(path.read_text())
        outs.append(json.loads(path.read_text()))
    for rep in outs:
        for k in ("p50_ms", "p99_ms", "max_ms"):
            rep.pop(k)
    assert outs[0] == outs[1]


def test_input_errors(tmp_path, capsys):
    assert run(capsys, "solve", str(tmp_path / "missing.board"))[0] == 2
    bad = tmp_path / "bad.board"
    bad.write_text("tile zero 0 0 0\n")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 2 and "error:" in err
    assert run(capsys, "scan", "--layout", "nope",
               "--boards", "1", "--seed", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_oracle_size_error_is_input_error(tmp_path, capsys):
    board = tmp_path / "t.board"
    run(capsys, "shuffle", "--layout", "turtle", "--seed", "0",
        "--out", str(board))
    assert run(capsys, "solve", str(board), "--method", "oracle")[0] == 2

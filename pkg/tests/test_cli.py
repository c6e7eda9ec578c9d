import json

import pytest

from signed_penner.cli import (EXIT_DEGENERATE, EXIT_INVALID_CHART, EXIT_IO, EXIT_OK,
                               EXIT_USAGE, Workspace, main, replay_history)
from signed_penner.coords import SignedCoords

from _support import degenerate_tetrahedron


@pytest.fixture
def torus(tmp_path):
    path = str(tmp_path / "w.json")
    assert main(["new", "--g", "1", "--s", "1", "--out", path]) == EXIT_OK
    return path


def load(path):
    with open(path) as fh:
        return json.load(fh)


def report(path, capsys):
    capsys.readouterr()
    assert main(["report", path, "--json"]) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_new_defaults(torus):
    ws = load(torus)
    assert len(ws["surface"]["edges"]) == 3
    assert len(ws["surface"]["faces"]) == 2
    assert set(ws["coords"]["f"].values()) == {"1"}
    assert ws["coords"]["eps"] == {"0": 1, "1": 1}
    assert ws["history"] == [{"cmd": "new", "g": 1, "s": 1, "mode": "rational"}]


def test_new_pants(tmp_path):
    path = str(tmp_path / "p.json")
    assert main(["new", "--g", "0", "--s", "3", "--out", path]) == EXIT_OK
    ws = load(path)
    assert (len(ws["surface"]["edges"]), len(ws["surface"]["faces"])) == (3, 2)


def test_new_rejects_sphere(tmp_path, capsys):
    assert main(["new", "--g", "0", "--s", "1", "--out", str(tmp_path / "x.json")]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["new", "--g", "1"]) == EXIT_USAGE
    assert main(["new", "--g", "1", "--s", "1", "--eps", "+"]) == EXIT_USAGE


def test_missing_workspace(tmp_path):
    assert main(["report", str(tmp_path / "none.json")]) == EXIT_IO


def test_report_unit_torus(torus, capsys):
    capsys.readouterr()
    assert main(["report", torus]) == EXIT_OK
    out = capsys.readouterr().out
    assert "phi[0]: 6" in out
    assert "k: 1" in out
    assert "holonomy[0]: (1, 6)" in out
    assert "valid: true" in out


def test_flip_prints_and_involutes(torus, capsys):
    capsys.readouterr()
    assert main(["flip", torus, "0"]) == EXIT_OK
    assert "S=2 sign=+1" in capsys.readouterr().out
    assert main(["flip", torus, "0"]) == EXIT_OK
    data = report(torus, capsys)
    assert data["f"] == ["1", "1", "1"]


def test_scale_report(torus, capsys):
    assert main(["scale", torus, "--h", "2"]) == EXIT_OK
    assert report(torus, capsys)["phi"] == ["3/2"]
    assert main(["scale", torus, "--h", "2", "3"]) == EXIT_USAGE


def test_mixed_torus(tmp_path, capsys):
    path = str(tmp_path / "m.json")
    assert main(["new", "--g", "1", "--s", "1", "--eps", "+-", "--out", path]) == EXIT_OK
    data = report(path, capsys)
    assert data["phi"] == ["0"] and data["valid"] is False and data["k"] == 0
    assert main(["flip", path, "0"]) == EXIT_INVALID_CHART
    assert main(["holonomy", path]) == EXIT_INVALID_CHART


def write_degenerate(tmp_path):
    tri, c = degenerate_tetrahedron(0)
    src = tmp_path / "surface.json"
    src.write_text(json.dumps({"surface": tri.to_json(), "coords": c.to_json()}))
    path = str(tmp_path / "d.json")
    assert main(["import", str(src), "--out", path]) == EXIT_OK
    return path


def test_degenerate_flip_exit(tmp_path, capsys):
    path = write_degenerate(tmp_path)
    before = load(path)
    capsys.readouterr()
    assert main(["flip", path, "0"]) == EXIT_DEGENERATE
    captured = capsys.readouterr()
    assert "step 0" in captured.out
    assert load(path) == before


def test_import_plain_surface(tmp_path, capsys):
    tri, _ = degenerate_tetrahedron(0)
    src = tmp_path / "s.json"
    src.write_text(json.dumps(tri.to_json()))
    path = str(tmp_path / "w.json")
    assert main(["import", str(src), "--mode", "float", "--out", path]) == EXIT_OK
    assert load(path)["mode"] == "float"
    assert main(["import", str(tmp_path / "nope.json"), "--out", path]) == EXIT_IO


def test_history_replays(tmp_path):
    path = str(tmp_path / "w.json")
    main(["new", "--g", "0", "--s", "4", "--out", path])
    main(["flip", path, "0", "3"])
    main(["scale", path, "--h", "2", "1/3", "1", "5"])
    main(["flip", path, "1"])
    ws = Workspace.from_json(load(path))
    tri, c = replay_history(ws.history)
    assert tri == ws.tri and c == ws.coords


def test_export(torus, capsys):
    capsys.readouterr()
    assert main(["export", torus, "--what", "coords"]) == EXIT_OK
    c = SignedCoords.from_json(json.loads(capsys.readouterr().out))
    assert c == SignedCoords((1, 1, 1), (1, 1))
    assert main(["export", torus, "--what", "connection"]) == EXIT_OK
    assert set(json.loads(capsys.readouterr().out)) == {"long", "short"}


def test_holonomy_command(torus, capsys):
    capsys.readouterr()
    assert main(["holonomy", torus]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["hexagons_trivial"] is True
    assert len(data["generators"]) == 4
    assert data["free_rank"] == 2


def test_catalan(capsys):
    assert main(["catalan", "8"]) == EXIT_OK
    assert capsys.readouterr().out == "132\n"
    assert main(["catalan", "5", "--list"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 5


def test_census_torus(tmp_path, capsys):
    out = tmp_path / "c.csv"
    assert main(["census", "--g", "1", "--s", "1", "--trials", "100", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "pattern_class,k,trials,valid,invalid"
    zero = [r for r in rows[1:] if r.split(",")[1] == "0"]
    assert zero == ["+-,0,100,0,100"]
    capsys.readouterr()
    main(["census", "--g", "1", "--s", "1", "--trials", "100"])
    assert capsys.readouterr().out == out.read_text()


def test_route_tetrahedron(tmp_path, capsys):
    path = str(tmp_path / "w.json")
    main(["new", "--g", "0", "--s", "4", "--out", path])
    capsys.readouterr()
    assert main(["route", path, "--target-flips", "0", "5"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["success"] and len(data["route"]) <= 2
    assert main(["route", path]) == EXIT_USAGE


def test_route_inconclusive(tmp_path, capsys):
    path = write_degenerate(tmp_path)
    capsys.readouterr()
    assert main(["route", path, "--target-flips", "0", "--depth", "1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["success"] is False

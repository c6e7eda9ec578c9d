"""Command line front end working on single-file JSON workspaces.

Exit codes: 0 success, 1 usage or constraint errors, 2 degenerate flip,
3 invalid chart point, 4 I/O problems.
"""
import argparse
import json
import sys
from dataclasses import dataclass, field

from . import coords as co
from . import holonomy as ho
from . import search as se
from . import surface as su
from .errors import (ConstraintViolation, DegenerateFlip, IdenticallyInvalid,
                     Inconclusive, InvalidChart, PennerError)
from .scalars import DEFAULT_TOLERANCE, Arithmetic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEGENERATE = 2
EXIT_INVALID_CHART = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


@dataclass
class Workspace:
    tri: su.Triangulation
    coords: co.SignedCoords
    seed: int = 0
    history: list = field(default_factory=list)

    @property
    def mode(self):
        return self.coords.mode

    @property
    def tolerance(self):
        return self.coords.tolerance

    def to_json(self):
        return {
            "surface": self.tri.to_json(),
            "coords": self.coords.to_json(),
            "mode": self.mode,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "history": self.history,
        }

    @classmethod
    def from_json(cls, data):
        tol = data.get("tolerance", DEFAULT_TOLERANCE)
        tri = su.Triangulation.from_json(data["surface"])
        c = co.SignedCoords.from_json(data["coords"], tolerance=tol)
        c.check_domain(tri)
        return cls(tri, c, data.get("seed", 0), list(data.get("history", [])))


def replay_history(history, tolerance=DEFAULT_TOLERANCE):
    """Rebuild ``(tri, coords)`` from a workspace history."""
    tri = c = None
    for entry in history:
        cmd = entry["cmd"]
        if cmd == "new":
            tri = su.new_surface(entry["g"], entry["s"])
            c = co.SignedCoords.unit(tri, entry["mode"], entry.get("eps"), tolerance)
        elif cmd == "import":
            tri = su.Triangulation.from_json(entry["surface"])
            c = co.SignedCoords.from_json(entry["coords"], tolerance=tolerance)
        elif cmd == "flip":
            tri, c, _ = co.flip_sequence(tri, c, entry["edges"])
        elif cmd == "scale":
            c = co.scale_action(tri, c, entry["h"])
        else:
            raise ConstraintViolation(f"unknown history entry {cmd!r}")
    return tri, c


def load_workspace(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise OSError(f"cannot read workspace {path}: {err}") from None
    return Workspace.from_json(data)


def write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def write_text(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def parse_eps(text, n):
    if text is None:
        return None
    if len(text) != n or any(ch not in "+-" for ch in text):
        raise UsageError(f"--eps needs {n} characters from '+-'")
    return tuple(1 if ch == "+" else -1 for ch in text)


def fmt_sign(x):
    return "+1" if x > 0 else "-1"


def cmd_new(args):
    tri = su.new_surface(args.g, args.s)
    eps = parse_eps(args.eps, len(tri.faces))
    c = co.SignedCoords.unit(tri, args.mode, eps, args.tolerance)
    entry = {"cmd": "new", "g": args.g, "s": args.s, "mode": args.mode}
    if eps is not None:
        entry["eps"] = list(eps)
    ws = Workspace(tri, c, args.seed, [entry])
    write_json(ws.to_json(), args.out)
    return EXIT_OK


def _save(ws, args):
    write_json(ws.to_json(), args.out or args.workspace)


def cmd_flip(args):
    ws = load_workspace(args.workspace)
    arith = ws.coords.arith
    try:
        tri, c, log = co.flip_sequence(ws.tri, ws.coords, args.edges)
    except DegenerateFlip as err:
        print(f"step {err.step}: edge {err.edge} S={arith.format(err.value)} degenerate")
        raise
    for rec in log:
        print(f"step {rec.step}: edge {rec.edge} S={arith.format(rec.S)} "
              f"sign={fmt_sign(rec.sign)}")
    ws.tri, ws.coords = tri, c
    ws.history.append({"cmd": "flip", "edges": list(args.edges)})
    _save(ws, args)
    return EXIT_OK


def cmd_scale(args):
    ws = load_workspace(args.workspace)
    if len(args.h) != ws.tri.punctures:
        raise UsageError(f"--h needs one value per puncture ({ws.tri.punctures})")
    arith = ws.coords.arith
    h = [arith.coerce(x) for x in args.h]
    ws.coords = co.scale_action(ws.tri, ws.coords, h)
    ws.history.append({"cmd": "scale", "h": [arith.to_json(x) for x in h]})
    _save(ws, args)
    return EXIT_OK


def report_data(ws):
    tri, c = ws.tri, ws.coords
    arith = c.arith
    conn = ho.build_connection(tri, c, require_valid=False)
    phis = [co.phi_puncture(tri, c, p) for p in range(tri.punctures)]
    hols = [ho.puncture_holonomy(conn, p) for p in range(tri.punctures)]
    return {
        "genus": tri.genus,
        "punctures": tri.punctures,
        "kappa": tri.kappa,
        "mode": c.mode,
        "valid": co.is_valid_chart_point(tri, c),
        "k": co.component_index(c),
        "phi": [arith.format(x) for x in phis],
        "phi_total": arith.format(co.phi_total(tri, c)),
        "f": [arith.format(x) for x in c.f],
        "eps": list(c.eps),
        "holonomy": [[arith.format(b.u), arith.format(b.v)] for b in hols],
        "parabolic": [co.puncture_is_parabolic(tri, c, p) for p in range(tri.punctures)],
    }


def cmd_report(args):
    ws = load_workspace(args.workspace)
    data = report_data(ws)
    if args.json:
        write_json(data, args.out)
        return EXIT_OK
    lines = [
        f"surface: g={data['genus']} s={data['punctures']} kappa={data['kappa']}",
        f"mode: {data['mode']}",
        f"valid: {str(data['valid']).lower()}",
        f"k: {data['k']}",
    ]
    for p, x in enumerate(data["phi"]):
        flag = "" if data["parabolic"][p] else "  (not parabolic)"
        lines.append(f"phi[{p}]: {x}{flag}")
    lines.append(f"phi_total: {data['phi_total']}")
    lines += [f"f[{e}]: {x}" for e, x in enumerate(data["f"])]
    lines += [f"eps[{t}]: {fmt_sign(x)}" for t, x in enumerate(data["eps"])]
    lines += [f"holonomy[{p}]: ({u}, {v})" for p, (u, v) in enumerate(data["holonomy"])]
    write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_holonomy(args):
    ws = load_workspace(args.workspace)
    arith = ws.coords.arith
    conn = ho.build_connection(ws.tri, ws.coords, require_valid=not args.force)
    pd = ho.pi1_representation(conn, args.base)
    hexagons = [ho.path_holonomy(conn, ho.hexagon_walk(ws.tri, t)).is_identity(arith)
                for t in range(len(ws.tri.faces))]
    data = {
        "connection": conn.to_json(),
        "hexagons_trivial": all(hexagons),
        "base": pd.base,
        "free_rank": pd.free_rank,
        "reducible_heuristic": ho.has_common_fixed_point(pd.images, arith),
        "generators": [
            {"word": [_step_json(s) for s in w], "matrix": m.to_json(arith)}
            for w, m in zip(pd.cycles, pd.images)
        ],
    }
    write_json(data, args.out)
    return EXIT_OK


def _step_json(step):
    if isinstance(step, ho.Long):
        return {"long": step.halfedge}
    return {"short": step.corner, "forward": step.forward}


def cmd_route(args):
    ws = load_workspace(args.workspace)
    if args.target is not None:
        with open(args.target, encoding="utf-8") as fh:
            data = json.load(fh)
        target = su.Triangulation.from_json(data.get("surface", data))
    elif args.target_flips:
        target = ws.tri
        for e in args.target_flips:
            target, _ = su.flip_combinatorial(target, e)
    else:
        raise UsageError("route needs --target or --target-flips")
    try:
        route = se.find_route(ws.tri, ws.coords, target, args.depth, args.match,
                              args.max_states)
    except Inconclusive as err:
        write_json({"success": False, "reason": str(err), "route": []}, args.out)
        return EXIT_OK
    write_json({"success": True, "route": route.to_json(ws.coords.arith)}, args.out)
    return EXIT_OK


def cmd_census(args):
    spec = se.SampleSpec(seed=args.seed, R=args.R, mode=args.mode,
                         tolerance=args.tolerance)
    rows = se.component_census(args.g, args.s, spec, args.trials)
    write_text(se.census_csv(rows), args.out)
    return EXIT_OK


def cmd_catalan(args):
    tris = su.enumerate_polygon_triangulations(args.n)
    if args.list:
        lines = [" ".join(f"{i}-{j}" for i, j in sorted(t)) for t in tris]
        write_text("\n".join(lines) + "\n", args.out)
    else:
        write_text(f"{len(tris)}\n", args.out)
    return EXIT_OK


def cmd_import(args):
    try:
        with open(args.path, encoding="utf-8") as fh:
            data = json.load(fh)
        cdata = None
        if args.coords is not None:
            with open(args.coords, encoding="utf-8") as fh:
                cdata = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise OSError(f"cannot read input: {err}") from None
    if "surface" in data:
        cdata = cdata or data.get("coords")
        data = data["surface"]
    tri = su.Triangulation.from_json(data)
    if cdata is None:
        c = co.SignedCoords.unit(tri, args.mode, tolerance=args.tolerance)
    else:
        c = co.SignedCoords.from_json(cdata, tolerance=args.tolerance)
    c.check_domain(tri)
    entry = {"cmd": "import", "surface": tri.to_json(), "coords": c.to_json()}
    ws = Workspace(tri, c, args.seed, [entry])
    write_json(ws.to_json(), args.out)
    return EXIT_OK


def cmd_export(args):
    ws = load_workspace(args.workspace)
    if args.what == "surface":
        obj = ws.tri.to_json()
    elif args.what == "coords":
        obj = ws.coords.to_json()
    elif args.what == "connection":
        obj = ho.build_connection(ws.tri, ws.coords, require_valid=False).to_json()
    else:
        obj = ws.to_json()
    write_json(obj, args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="signed-penner",
                description="Signed Penner coordinates on punctured surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, mode=True):
        if mode:
            sp.add_argument("--mode", choices=["rational", "float"], default="rational")
        sp.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("new", help="canonical surface with unit coordinates")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--eps", help="face signs as a '+-' string")
    sp.add_argument("--out", default="workspace.json")
    common(sp)
    sp.set_defaults(func=cmd_new)

    sp = sub.add_parser("flip", help="flip edges in order")
    sp.add_argument("workspace")
    sp.add_argument("edges", type=int, nargs="+")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_flip)

    sp = sub.add_parser("scale", help="act by puncture scalings")
    sp.add_argument("workspace")
    sp.add_argument("--h", nargs="+", required=True, help="one value per puncture")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_scale)

    sp = sub.add_parser("report", help="phi, k, coordinates and puncture holonomies")
    sp.add_argument("workspace")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("holonomy", help="connection and fundamental group images")
    sp.add_argument("workspace")
    sp.add_argument("--base", type=int, default=0)
    sp.add_argument("--force", action="store_true",
                    help="build the connection even off the chart")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_holonomy)

    sp = sub.add_parser("route", help="search non-degenerate flips to a target")
    sp.add_argument("workspace")
    sp.add_argument("--target", help="surface or workspace JSON")
    sp.add_argument("--target-flips", type=int, nargs="+",
                    help="target = workspace triangulation after these flips")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--match", choices=["labeled", "isomorphic"], default="labeled")
    sp.add_argument("--max-states", type=int, default=200_000)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_route)

    sp = sub.add_parser("census", help="valid chart points per sign pattern")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--R", type=float, default=10.0)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("catalan", help="triangulations of a convex n-gon")
    sp.add_argument("n", type=int)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_catalan)

    sp = sub.add_parser("import", help="workspace from a surface JSON")
    sp.add_argument("path")
    sp.add_argument("--coords")
    sp.add_argument("--out", default="workspace.json")
    common(sp)
    sp.set_defaults(func=cmd_import)

    sp = sub.add_parser("export", help="write part of a workspace")
    sp.add_argument("workspace")
    sp.add_argument("--what", choices=["surface", "coords", "connection", "workspace"],
                    default="workspace")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateFlip as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvalidChart as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID_CHART
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except (PennerError, IdenticallyInvalid, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())

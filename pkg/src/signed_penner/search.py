"""Sampling chart points, routing through non-degenerate flips, and censuses."""
import csv
import io
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .coords import (SignedCoords, component_index, flip, flip_sequence,
                     is_degenerate, is_valid_chart_point)
from .errors import (ConstraintViolation, FlipUndefined, IdenticallyInvalid,
                     Inconclusive, InvalidChart)
from .scalars import DEFAULT_TOLERANCE
from .surface import automorphisms, find_isomorphism, flip_combinatorial, new_surface, quad_of


@dataclass(frozen=True)
class SampleSpec:
    """How to draw chart points.

    Edge weights are log-uniform on ``[1/R, R]``; in rational mode each draw
    is rounded to the nearest fraction with denominator at most
    ``max_denominator``. ``eps=None`` draws a uniform sign pattern.
    """

    seed: int = 0
    R: float = 10.0
    mode: str = "rational"
    eps: tuple = None
    max_denominator: int = 1000
    retries: int = 100
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.R > 1:
            raise ConstraintViolation("R must exceed 1")
        if self.max_denominator < 1:
            raise ConstraintViolation("max_denominator must be positive")


def _draw_weight(rng, spec):
    x = spec.R ** rng.uniform(-1.0, 1.0)
    if spec.mode == "float":
        return x
    q = Fraction(x).limit_denominator(spec.max_denominator)
    return q if q > 0 else Fraction(1, spec.max_denominator)


def draw_coords(tri, spec, rng):
    """One unconditioned draw."""
    f = tuple(_draw_weight(rng, spec) for _ in tri.edges)
    if spec.eps is None:
        eps = tuple(rng.choice((1, -1)) for _ in tri.faces)
    else:
        eps = tuple(spec.eps)
    return SignedCoords(f, eps, spec.mode, spec.tolerance)


def sample_chart_point(tri, spec, rng=None):
    """Rejection-sample a valid chart point.

    Raises :class:`IdenticallyInvalid` if every one of ``spec.retries`` draws
    lies on the zero set of phi, as happens when phi vanishes identically
    for a fixed sign pattern.
    """
    if rng is None:
        rng = random.Random(spec.seed)
    for _ in range(spec.retries):
        c = draw_coords(tri, spec, rng)
        if is_valid_chart_point(tri, c):
            return c
    raise IdenticallyInvalid(
        f"no valid chart point in {spec.retries} draws; "
        "the stratum is empty for this sign pattern")


def flippable_edges(tri):
    out = []
    for e in range(len(tri.edges)):
        try:
            quad_of(tri, e)
        except FlipUndefined:
            continue
        out.append(e)
    return out


def admissible_flip_targets(tri, c):
    """Edges with a quad whose exchange value is nonzero."""
    return {e for e in flippable_edges(tri) if not is_degenerate(tri, c, e)}


@dataclass
class Route:
    edges: list = field(default_factory=list)
    S: list = field(default_factory=list)
    signs: list = field(default_factory=list)
    success: bool = True
    failure_step: int = None

    def to_json(self, arith):
        return [{"edge": e, "S": arith.format(s), "sign": g}
                for e, s, g in zip(self.edges, self.S, self.signs)]


def replay(tri, c, route):
    """Apply a route's flips; returns ``(tri, c, log)``."""
    return flip_sequence(tri, c, route.edges)


def _matches(tri, target, match):
    if match == "labeled":
        return tri == target
    return find_isomorphism(tri, target) is not None


def default_depth(tri):
    return 2 * len(tri.edges)


def find_route(tri, c, target, depth=None, match="labeled", max_states=200_000):
    """Breadth first search for non-degenerate flips from ``tri`` to ``target``.

    ``match="labeled"`` requires identical identifiers (the usual notion,
    since identifiers track arcs through flips); ``"isomorphic"`` accepts any
    orientation preserving isomorphism. Raises :class:`Inconclusive` when the
    depth or state budget runs out, which says nothing about whether the
    point lies in the target chart.
    """
    if (tri.genus, tri.punctures) != (target.genus, target.punctures):
        raise ConstraintViolation("target is a triangulation of another surface")
    if not is_valid_chart_point(tri, c):
        raise InvalidChart("input is not a valid chart point")
    if depth is None:
        depth = default_depth(tri)
    if _matches(tri, target, match):
        return Route()
    seen = {tri}
    todo = deque([(tri, c, [], [], [])])
    while todo:
        cur, cc, path, svals, signs = todo.popleft()
        if len(path) >= depth:
            continue
        for e in sorted(admissible_flip_targets(cur, cc)):
            nt, _ = flip_combinatorial(cur, e)
            if nt in seen:
                continue
            nt, nc, rec = flip(cur, cc, e, check=False)
            route = (path + [e], svals + [rec.S], signs + [rec.sign])
            if _matches(nt, target, match):
                return Route(*route)
            seen.add(nt)
            if len(seen) > max_states:
                raise Inconclusive(f"state budget {max_states} exhausted")
            todo.append((nt, nc) + route)
    raise Inconclusive(f"no non-degenerate route within depth {depth}")


def random_flip_walk(tri, c, length, rng):
    """Random sequence of non-degenerate flips; returns ``(tri, c, edges)``."""
    edges = []
    for _ in range(length):
        choices = sorted(admissible_flip_targets(tri, c))
        if not choices:
            break
        e = rng.choice(choices)
        tri, c, _ = flip(tri, c, e, check=False)
        edges.append(e)
    return tri, c, edges


def sign_pattern_classes(tri):
    """Sign patterns up to the automorphisms of ``tri``, as representatives
    with their orbit sizes (the lexicographically largest pattern with
    ``+1`` before ``-1`` represents its orbit)."""
    face_maps = []
    for m in automorphisms(tri):
        face_maps.append({tri.face_of[h]: tri.face_of[k] for h, k in m.items()})
    n = len(tri.faces)
    classes = {}
    for pat in itertools.product((1, -1), repeat=n):
        images = []
        for fm in face_maps:
            img = [0] * n
            for t in range(n):
                img[fm[t]] = pat[t]
            images.append(tuple(img))
        rep = max(images)
        classes[rep] = classes.get(rep, 0) + 1
    return sorted(classes.items(), key=lambda kv: (-sum(kv[0]), [-x for x in kv[0]]))


def pattern_string(eps):
    return "".join("+" if x > 0 else "-" for x in eps)


@dataclass(frozen=True)
class CensusRow:
    pattern_class: str
    k: int
    trials: int
    valid: int
    invalid: int


def component_census(g, s, spec=None, trials=1000):
    """Count valid chart points per sign pattern class of the canonical
    triangulation. Each trial is one draw with its own seed derived from
    ``spec.seed``, the pattern and the trial index."""
    if spec is None:
        spec = SampleSpec()
    tri = new_surface(g, s)
    rows = []
    for pat, _size in sign_pattern_classes(tri):
        name = pattern_string(pat)
        sub = SampleSpec(spec.seed, spec.R, spec.mode, pat, spec.max_denominator,
                         1, spec.tolerance)
        valid = 0
        for i in range(trials):
            rng = random.Random(f"{spec.seed}:{name}:{i}")
            if is_valid_chart_point(tri, draw_coords(tri, sub, rng)):
                valid += 1
        k = component_index(SignedCoords.unit(tri, eps=pat))
        rows.append(CensusRow(name, k, trials, valid, trials - valid))
    return rows


def census_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pattern_class", "k", "trials", "valid", "invalid"])
    for r in rows:
        w.writerow([r.pattern_class, r.k, r.trials, r.valid, r.invalid])
    return buf.getvalue()


def census_by_k(rows):
    """Aggregate census rows into ``{k: (valid, trials)}``."""
    out = {}
    for r in rows:
        v, t = out.get(r.k, (0, 0))
        out[r.k] = (v + r.valid, t + r.trials)
    return out


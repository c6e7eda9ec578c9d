"""Signed Penner coordinates: positive edge weights and face signs.

A chart point on a triangulation is a pair ``(f, eps)`` with ``f[e] > 0``
for every edge and ``eps[t]`` in ``{+1, -1}`` for every face. Flips act by the
signed exchange relation

    eps'(t1') f(e) f'(e') = eps(t2) f(a) f(c) + eps(t1) f(b) f(d)

and the puncture scalings act by ``f(e) -> f(e) h(P) h(Q)``.
"""
import json
from dataclasses import dataclass

from .errors import ConstraintViolation, DegenerateFlip, InvalidChart
from .scalars import DEFAULT_TOLERANCE, Arithmetic
from .surface import corners_at, flip_combinatorial, quad_of


@dataclass(frozen=True)
class SignedCoords:
    f: tuple
    eps: tuple
    mode: str = "rational"
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        arith = self.arith
        f = tuple(arith.coerce(x) for x in self.f)
        eps = tuple(int(x) for x in self.eps)
        if any(not x > 0 for x in f):
            raise ConstraintViolation("edge weights must be positive")
        if any(x not in (1, -1) for x in eps):
            raise ConstraintViolation("face signs must be +1 or -1")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "eps", eps)

    @property
    def arith(self):
        return Arithmetic(self.mode, self.tolerance)

    @classmethod
    def unit(cls, tri, mode="rational", eps=None, tolerance=DEFAULT_TOLERANCE):
        if eps is None:
            eps = (1,) * len(tri.faces)
        return cls((1,) * len(tri.edges), tuple(eps), mode, tolerance)

    def check_domain(self, tri):
        if len(self.f) != len(tri.edges) or len(self.eps) != len(tri.faces):
            raise ConstraintViolation(
                "coordinate domain does not match the triangulation")

    def replace(self, f=None, eps=None):
        return SignedCoords(self.f if f is None else tuple(f),
                            self.eps if eps is None else tuple(eps),
                            self.mode, self.tolerance)

    def to_json(self):
        arith = self.arith
        return {
            "f": {str(e): arith.to_json(x) for e, x in enumerate(self.f)},
            "eps": {str(t): s for t, s in enumerate(self.eps)},
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, data, tolerance=DEFAULT_TOLERANCE):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            mode = data.get("mode", "rational")
            f = data["f"]
            eps = data["eps"]
            if isinstance(f, dict):
                f = [f[str(e)] for e in range(len(f))]
            if isinstance(eps, dict):
                eps = [eps[str(t)] for t in range(len(eps))]
        except (KeyError, TypeError, AttributeError) as err:
            raise ConstraintViolation(f"malformed coordinates JSON: {err}") from None
        arith = Arithmetic(mode, tolerance)
        return cls(tuple(arith.coerce(x) for x in f), tuple(eps), mode, tolerance)


def corner_term(c, corner):
    return c.eps[corner.face] * c.f[corner.opposite] / (
        c.f[corner.side_a] * c.f[corner.side_b])


def _phi_terms(tri, c, p):
    return [corner_term(c, k) for k in corners_at(tri, p)]


def phi_puncture(tri, c, p):
    c.check_domain(tri)
    return sum(_phi_terms(tri, c, p), c.arith.coerce(0))


def phi_total(tri, c):
    out = c.arith.coerce(1)
    for p in range(tri.punctures):
        out *= phi_puncture(tri, c, p)
    return out


def puncture_is_parabolic(tri, c, p):
    terms = _phi_terms(tri, c, p)
    return not c.arith.is_zero(sum(terms), sum(abs(x) for x in terms))


def is_valid_chart_point(tri, c):
    c.check_domain(tri)
    return all(puncture_is_parabolic(tri, c, p) for p in range(tri.punctures))


def component_index(c):
    total = sum(c.eps)
    if total % 2:
        raise ConstraintViolation("odd number of faces")
    return total // 2


def scale_action(tri, c, h):
    """Act by puncture scalings: ``f(e) h(P(e)) h(Q(e))`` for each edge."""
    c.check_domain(tri)
    arith = c.arith
    h = [arith.coerce(h[p]) for p in range(tri.punctures)]
    if any(not x > 0 for x in h):
        raise ConstraintViolation("puncture scalings must be positive")
    f = []
    for e, x in enumerate(c.f):
        p, q = tri.endpoints(e)
        f.append(x * h[p] * h[q])
    return c.replace(f=f)


@dataclass(frozen=True)
class FlipRecord:
    step: int
    edge: int
    S: object
    sign: int


def exchange_value(tri, c, e):
    """Return the quad and ``S = eps(t2) f(a) f(c) + eps(t1) f(b) f(d)``."""
    q = quad_of(tri, e)
    f, eps = c.f, c.eps
    S = eps[q.t2] * f[q.a] * f[q.c] + eps[q.t1] * f[q.b] * f[q.d]
    return q, S


def is_degenerate(tri, c, e):
    q, S = exchange_value(tri, c, e)
    f = c.f
    return c.arith.is_zero(S, f[q.a] * f[q.c] + f[q.b] * f[q.d])


def flip(tri, c, e, check=True):
    """Flip edge ``e`` and transport the chart point.

    Returns ``(tri', c', record)``. Raises :class:`DegenerateFlip` when the
    exchange value vanishes.
    """
    c.check_domain(tri)
    if check and not is_valid_chart_point(tri, c):
        raise InvalidChart("input is not a valid chart point")
    q, S = exchange_value(tri, c, e)
    f, eps = list(c.f), list(c.eps)
    sign = c.arith.sign(S, f[q.a] * f[q.c] + f[q.b] * f[q.d])
    if sign == 0:
        raise DegenerateFlip(e, S)
    new_tri, _ = flip_combinatorial(tri, e)
    t1, t2 = q.t1, q.t2
    e1, e2 = eps[t1], eps[t2]
    f[e] = abs(S) / f[e]
    eps[t1] = sign
    eps[t2] = e1 * e2 * sign
    return new_tri, c.replace(f=f, eps=eps), FlipRecord(0, e, S, sign)


def flip_sequence(tri, c, edges):
    """Apply flips left to right; fails fast on the first degenerate step."""
    if not is_valid_chart_point(tri, c):
        raise InvalidChart("input is not a valid chart point")
    log = []
    for i, e in enumerate(edges):
        try:
            tri, c, rec = flip(tri, c, e, check=False)
        except DegenerateFlip as err:
            err.step = i
            err.args = (f"degenerate flip on edge {e} at step {i}: S = {err.value}",)
            raise
        log.append(FlipRecord(i, e, rec.S, rec.sign))
    return tri, c, log


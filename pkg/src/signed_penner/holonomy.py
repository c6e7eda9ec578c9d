"""Graph connections on the ribbon graph of a triangulation and their holonomy.

The ribbon graph has one vertex ``x_h`` per half-edge ``h``: the point where
the arc of ``h`` leaves the small circle around its tail puncture. It has

* a long edge per triangulation edge, joining ``x_h`` and ``x_twin(h)``;
* a short edge per corner ``c``, joining ``x_rho(c)`` to ``x_c`` along the
  circle around the apex of ``c``.

Matrix conventions::

    theta = [[0, 1], [-1, 0]]
    (u, v) in the Borel group  <->  [[u, v], [0, 1/u]]
    long edge e                ->   theta . (f(e), 0)   = [[0, 1/f], [-f, 0]]
    short edge c, forward      ->   (1, u(c))           = [[1, u], [0, 1]]

``theta . (f, 0)`` squares to ``-1``, so a long transport is the same element
of PSL(2, R) in both directions. Walks multiply left to right. With these
choices the boundary hexagon of every face, traversed as
``long h0, short h1, long h1, short h2, long h2, short h0`` from ``x_h0``,
has trivial holonomy exactly when ``u(c) = eps f(O_c) / (f(A_c) f(B_c))``
with one sign ``eps`` per face.
"""
import enum
from collections import deque
from dataclasses import dataclass

from .coords import corner_term, exchange_value, is_valid_chart_point, phi_puncture
from .errors import DegenerateFlip, InvalidChart, MalformedWalk, NotParabolic
from .scalars import EXACT, Arithmetic


@dataclass(frozen=True)
class ProjectiveMatrix:
    """Determinant one 2x2 matrix modulo sign."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        if not any(isinstance(x, float) for x in self.entries):
            if self.a * self.d - self.b * self.c != 1:
                raise ValueError("determinant must be 1")

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o):
        return ProjectiveMatrix(
            self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self):
        return ProjectiveMatrix(self.d, -self.b, -self.c, self.a)

    def trace(self):
        return self.a + self.d

    def normalized(self):
        """Representative whose first nonzero entry is positive."""
        for x in self.entries:
            if x != 0:
                if x < 0:
                    return ProjectiveMatrix(*(-y for y in self.entries))
                return self
        return self

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        return self.normalized().entries == other.normalized().entries

    def __hash__(self):
        return hash(self.normalized().entries)

    def isclose(self, other, tol=1e-9):
        scale = 1 + max(abs(x) for x in self.entries + other.entries)
        for sgn in (1, -1):
            if all(abs(x - sgn * y) <= tol * scale
                   for x, y in zip(self.entries, other.entries)):
                return True
        return False

    def is_identity(self, arith=EXACT):
        one = arith.coerce(1)
        ident = ProjectiveMatrix(one, 0 * one, 0 * one, one)
        if arith.exact:
            return self == ident
        return self.isclose(ident, arith.tolerance)

    def to_json(self, arith=EXACT):
        return [arith.format(x) for x in self.entries]

    @classmethod
    def from_json(cls, data, arith=EXACT):
        return cls(*(arith.coerce(x) for x in data))

    @classmethod
    def identity(cls, arith=EXACT):
        one = arith.coerce(1)
        return cls(one, 0 * one, 0 * one, one)


def theta(arith=EXACT):
    one = arith.coerce(1)
    return ProjectiveMatrix(0 * one, one, -one, 0 * one)


@dataclass(frozen=True)
class BorelElement:
    """``(u, v)`` with ``u > 0``: H-part ``u`` and T-part ``v``."""

    u: object
    v: object

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError("H-part must be positive")

    def __mul__(self, o):
        return BorelElement(self.u * o.u, self.u * o.v + self.v / o.u)

    def inverse(self):
        return BorelElement(1 / self.u, -self.v)

    def matrix(self):
        return ProjectiveMatrix(self.u, self.v, 0 * self.v, 1 / self.u)

    @classmethod
    def from_matrix(cls, m, arith=EXACT):
        if not arith.is_zero(m.c, 1 + abs(m.a) + abs(m.d)):
            raise ValueError("matrix is not upper triangular")
        if m.a < 0:
            m = ProjectiveMatrix(-m.a, -m.b, -m.c, -m.d)
        return cls(m.a, m.b)


def borel_mul(x, y):
    return x * y


def borel_inv(x):
    return x.inverse()


class BruhatCell(enum.Enum):
    BIG = "BigCell"
    BOREL = "Borel"


def bruhat_cell(m, arith=EXACT):
    scale = max(abs(x) for x in m.entries)
    return BruhatCell.BOREL if arith.is_zero(m.c, scale) else BruhatCell.BIG


def long_transport(f, arith=EXACT):
    f = arith.coerce(f)
    return ProjectiveMatrix(0 * f, 1 / f, -f, 0 * f)


def short_transport(u, arith=EXACT):
    u = arith.coerce(u)
    return ProjectiveMatrix(u ** 0, u, 0 * u, u ** 0)


def corner_u(tri, c, h):
    """T-parameter of the short edge of corner ``h``."""
    return corner_term(c, tri.corner(h))


@dataclass(frozen=True)
class Long:
    """Long edge of ``h``, walked from ``x_h`` to ``x_twin(h)``."""

    halfedge: int


@dataclass(frozen=True)
class Short:
    """Short edge of corner ``c``; forward runs from ``x_rho(c)`` to ``x_c``."""

    corner: int
    forward: bool = True


def step_ends(tri, step):
    if isinstance(step, Long):
        return step.halfedge, tri.twin[step.halfedge]
    if isinstance(step, Short):
        ends = tri.rho[step.corner], step.corner
        return ends if step.forward else ends[::-1]
    raise MalformedWalk(f"not a walk step: {step!r}")


def reverse_step(tri, step):
    if isinstance(step, Long):
        return Long(tri.twin[step.halfedge])
    return Short(step.corner, not step.forward)


def reverse_walk(tri, walk):
    return [reverse_step(tri, s) for s in reversed(walk)]


def walk_ends(tri, walk, start=None):
    """Start and end vertex of ``walk``, checking that consecutive steps meet."""
    here = start
    first = start
    for i, step in enumerate(walk):
        if isinstance(step, Long) and not 0 <= step.halfedge < tri.num_halfedges:
            raise MalformedWalk(f"step {i}: no half-edge {step.halfedge}")
        if isinstance(step, Short) and not 0 <= step.corner < tri.num_halfedges:
            raise MalformedWalk(f"step {i}: no corner {step.corner}")
        a, b = step_ends(tri, step)
        if here is not None and a != here:
            raise MalformedWalk(f"step {i} starts at {a}, previous step ended at {here}")
        if first is None:
            first = a
        here = b
    return first, here


def hexagon_walk(tri, t):
    h0, h1, h2 = tri.faces[t]
    return [Long(h0), Short(h1), Long(h1), Short(h2), Long(h2), Short(h0)]


def boundary_walk(tri, h):
    """Full forward circuit of the circle around the tail of ``h``, from ``x_h``."""
    rho_inv = {tri.rho[x]: x for x in range(tri.num_halfedges)}
    out = []
    x = h
    while True:
        c = rho_inv[x]
        out.append(Short(c))
        x = c
        if x == h:
            return out


def boundary_arc(tri, h_from, h_to):
    """Forward short steps from ``x_h_from`` to ``x_h_to`` at one puncture."""
    if tri.vertex_of[h_from] != tri.vertex_of[h_to]:
        raise MalformedWalk("arc endpoints lie on different punctures")
    rho_inv = {tri.rho[x]: x for x in range(tri.num_halfedges)}
    out = []
    x = h_from
    while x != h_to:
        x = rho_inv[x]
        out.append(Short(x))
    return out


@dataclass(frozen=True)
class GraphConnection:
    tri: object
    long: tuple
    short: tuple
    arith: Arithmetic = EXACT

    def transport(self, step):
        if isinstance(step, Long):
            return long_transport(self.long[self.tri.edge_of[step.halfedge]], self.arith)
        u = self.short[step.corner]
        return short_transport(u if step.forward else -u, self.arith)

    def to_json(self):
        fmt = self.arith.format
        return {
            "long": {str(e): fmt(x) for e, x in enumerate(self.long)},
            "short": {str(c): fmt(x) for c, x in enumerate(self.short)},
        }


def build_connection(tri, c, require_valid=True):
    """Connection with long parameters ``f`` and short parameters ``corner_u``.

    Raises :class:`InvalidChart` off the chart unless ``require_valid`` is
    false; the connection is still well defined there, only the puncture
    holonomies degenerate.
    """
    c.check_domain(tri)
    if require_valid and not is_valid_chart_point(tri, c):
        raise InvalidChart("coordinates lie on the zero set of phi")
    short = tuple(corner_u(tri, c, h) for h in range(tri.num_halfedges))
    return GraphConnection(tri, tuple(c.f), short, c.arith)


def path_holonomy(conn, walk, start=None):
    walk_ends(conn.tri, walk, start)
    out = ProjectiveMatrix.identity(conn.arith)
    for step in walk:
        out = out @ conn.transport(step)
    return out


def puncture_holonomy(conn, p):
    """Holonomy of the forward circuit around puncture ``p`` as ``(1, phi_P)``."""
    h = conn.tri.anchors[p]
    m = path_holonomy(conn, boundary_walk(conn.tri, h))
    return BorelElement.from_matrix(m, conn.arith)


def is_parabolic(m, arith=EXACT):
    tr = abs(m.trace())
    if arith.exact:
        close = tr == 2
    else:
        close = abs(tr - 2) <= arith.tolerance * (1 + tr)
    return close and not m.is_identity(arith)


def parabolic_fixed_point(m, arith=EXACT):
    """Fixed point of a parabolic element as an unnormalized pair ``(x, y)``."""
    if not is_parabolic(m, arith):
        raise NotParabolic("fixed point requested for a non-parabolic element")
    scale = max(abs(x) for x in m.entries)
    if arith.is_zero(m.c, scale):
        return (m.a ** 0, 0 * m.a)
    return (m.a - m.d, 2 * m.c)


def same_point(p, q, arith=EXACT):
    cross = p[0] * q[1] - p[1] * q[0]
    scale = (abs(p[0]) + abs(p[1])) * (abs(q[0]) + abs(q[1]))
    return arith.is_zero(cross, scale)


def same_parabolic_subgroup(m1, m2, arith=EXACT):
    return same_point(parabolic_fixed_point(m1, arith),
                      parabolic_fixed_point(m2, arith), arith)


def loop_holonomy(conn, walk, start):
    """Holonomy of walk, then the circuit at its end, then the walk backwards."""
    _, end = walk_ends(conn.tri, walk, start)
    loop = list(walk) + boundary_walk(conn.tri, end) + reverse_walk(conn.tri, walk)
    return path_holonomy(conn, loop, start)


def is_arc_admissible(conn, start, walk_a, walk_b):
    """Whether the loop holonomies at the two walk ends are parabolic elements
    with distinct fixed points. Raises :class:`NotParabolic` otherwise."""
    ma = loop_holonomy(conn, walk_a, start)
    mb = loop_holonomy(conn, walk_b, start)
    for m in (ma, mb):
        if not is_parabolic(m, conn.arith):
            raise NotParabolic("loop holonomy is not parabolic")
    return not same_parabolic_subgroup(ma, mb, conn.arith)


def edge_walks(tri, e):
    """``(start, walk_a, walk_b)`` presenting edge ``e`` itself."""
    h, _ = tri.edges[e]
    return h, [], [Long(h)]


def diagonal_walks(tri, e):
    """``(start, walk_a, walk_b)`` for the other diagonal of the quad of ``e``.

    In the quad with ``t1 = (e, a, b)``, ``t2 = (e, c, d)`` the new diagonal
    joins the far ends of ``a`` and ``d``; the walk runs down ``a``, around
    the shared puncture of ``a`` and ``d`` through the corners of ``t1`` and
    ``t2`` there, and up ``d``.
    """
    from .surface import quad_of

    h, ha, hb, h2, hc, hd = quad_of(tri, e).halfedges
    twin = tri.twin
    walk = [Long(twin[ha]), Short(ha, False), Short(h2, False), Long(twin[hd])]
    return twin[ha], [], walk


@dataclass(frozen=True)
class DiagonalExtension:
    """Transports on the flipped quad recovered from the old connection."""

    f_new: object
    eps_t1: int
    eps_t2: int
    # corner half-edge -> T-parameter, for the corners of t1' at the ends of e'
    corner_u: dict


def extend_to_diagonal(tri, c, e):
    """Recover the flipped diagonal's weight and the new face signs from the
    connection, through composite corner transports and the triangle relations.

    The corner of ``t1'`` at the common end of ``a`` and ``d`` is the
    composite of two old short edges; its T-part ``U`` gives
    ``f'(e') = |U| f(a) f(d)`` and ``eps'(t1') = sign U``. The same at the
    common end of ``b`` and ``c`` gives ``eps'(t2')``.
    """
    conn = build_connection(tri, c, require_valid=False)
    arith = conn.arith
    h, ha, hb, h2, hc, hd = exchange_value(tri, c, e)[0].halfedges
    f = c.f
    fa, fb, fc, fd = (f[tri.edge_of[x]] for x in (ha, hb, hc, hd))
    u_y = BorelElement.from_matrix(
        path_holonomy(conn, [Short(h2), Short(ha)]), arith).v
    u_x = BorelElement.from_matrix(
        path_holonomy(conn, [Short(h), Short(hc)]), arith).v
    s_y = arith.sign(u_y, abs(fb / (fa * f[e])) + abs(fc / (fd * f[e])))
    s_x = arith.sign(u_x, abs(fa / (fb * f[e])) + abs(fd / (fc * f[e])))
    if s_y == 0 or s_x == 0:
        raise DegenerateFlip(e, u_y)
    f_new = abs(u_y) * fa * fd
    # t1' = (h, hd, ha): corner hd is opposite a, corner h is opposite d
    corners = {hd: 1 / (u_y * fd ** 2), h: 1 / (u_y * fa ** 2)}
    return DiagonalExtension(f_new, s_y, s_x, corners)


@dataclass(frozen=True)
class Pi1Data:
    base: int
    cycles: list
    images: list
    free_rank: int


def pi1_representation(conn, base=0):
    """Fundamental cycles of the ribbon graph from a breadth first spanning
    tree rooted at ``x_base``, with their holonomies.

    There are ``3 kappa + 1`` cycles; the ``2 kappa`` face hexagons are
    trivial, leaving a free group of rank ``kappa + 1``.
    """
    tri = conn.tri
    steps = [Long(h) for h, _ in tri.edges] + [Short(x) for x in range(tri.num_halfedges)]
    adj = {v: [] for v in range(tri.num_halfedges)}
    for i, s in enumerate(steps):
        a, b = step_ends(tri, s)
        adj[a].append((i, s))
        adj[b].append((i, reverse_step(tri, s)))
    parent = {base: None}
    tree = set()
    todo = deque([base])
    while todo:
        v = todo.popleft()
        for i, s in adj[v]:
            w = step_ends(tri, s)[1]
            if w not in parent:
                parent[w] = s
                tree.add(i)
                todo.append(w)

    def path_to(v):
        out = []
        while parent[v] is not None:
            s = parent[v]
            out.append(s)
            v = step_ends(tri, s)[0]
        return out[::-1]

    cycles = []
    for i, s in enumerate(steps):
        if i in tree:
            continue
        a, b = step_ends(tri, s)
        cycles.append(path_to(a) + [s] + reverse_walk(tri, path_to(b)))
    images = [path_holonomy(conn, w, base) for w in cycles]
    return Pi1Data(base, cycles, images, len(cycles) - len(tri.faces))


def has_common_fixed_point(mats, arith=EXACT):
    """Heuristic reducibility test: do all the matrices fix one real point?

    Exact mode intersects the fixed point equations
    ``c z^2 + (d - a) z - b = 0`` by polynomial gcd; the point at infinity is
    handled separately. Float mode only supports the case where some matrix
    has real fixed points.
    """
    mats = [m for m in mats if not m.is_identity(arith)]
    if not mats:
        return True
    if all(arith.is_zero(m.c, max(abs(x) for x in m.entries)) for m in mats):
        return True
    if arith.exact:
        g = None
        for m in mats:
            p = _trim([-m.b, m.d - m.a, m.c])
            g = p if g is None else _poly_gcd(g, p)
            if len(g) <= 1:
                return False
        if len(g) == 2:
            return True
        disc = g[1] ** 2 - 4 * g[2] * g[0]
        return disc >= 0
    import math

    for m in mats:
        if arith.is_zero(m.c, max(abs(x) for x in m.entries)):
            continue
        disc = (m.d - m.a) ** 2 + 4 * m.b * m.c
        if disc < 0:
            return False
        for sgn in (1, -1):
            z = ((m.a - m.d) + sgn * math.sqrt(disc)) / (2 * m.c)
            if all(abs(n.c * z * z + (n.d - n.a) * z - n.b)
                   <= arith.tolerance * (1 + abs(z)) ** 2
                   * (1 + max(abs(x) for x in n.entries)) for n in mats):
                return True
        return False
    return False


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_gcd(p, q):
    # coefficient lists, lowest degree first, exact field
    p, q = _trim(p), _trim(q)
    while q:
        r = list(p)
        while len(r) >= len(q) and r:
            k = r[-1] / q[-1]
            shift = len(r) - len(q)
            for i, x in enumerate(q):
                r[i + shift] -= k * x
            r = _trim(r)
        p, q = q, r
    return p

"""Ideal triangulations of punctured surfaces as oriented combinatorial maps.

A triangulation with ``kappa = 2g - 2 + s`` has ``6 kappa`` half-edges,
numbered ``0 .. 6 kappa - 1``. Each face is a counterclockwise triple of
half-edges ``(h0, h1, h2)``: ``h0`` runs from the face's vertex 0 to vertex
1, ``h1`` from vertex 1 to 2 and ``h2`` back to vertex 0. Each edge pairs two
half-edges running in opposite directions. Edges and faces are identified by
their index, and these identifiers persist through flips.

A corner is named by its outgoing half-edge: corner ``h`` sits at the tail
vertex of ``h`` inside the face containing ``h``. The rotation
``rho(h) = twin(prev(h))`` turns counterclockwise around that vertex and its
orbits are the punctures.
"""
import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ConstraintViolation, FlipUndefined


def _rotate_min(face):
    i = face.index(min(face))
    return tuple(face[i:] + face[:i])


@dataclass(frozen=True)
class Corner:
    halfedge: int
    face: int
    apex: int
    opposite: int
    side_a: int
    side_b: int


@dataclass(frozen=True)
class Quad:
    """The two faces around ``edge``, with sides ``(a, b, c, d)`` in
    counterclockwise order: ``t1`` has sides ``(edge, a, b)`` and ``t2`` has
    ``(edge, c, d)``. Sides may repeat.
    """

    edge: int
    t1: int
    t2: int
    a: int
    b: int
    c: int
    d: int
    # half-edges (h, ha, hb, h', hc, hd) in face order
    halfedges: tuple


@dataclass(frozen=True)
class Relabeling:
    """Maps identifiers of the input triangulation to those of the output."""

    edges: dict
    faces: dict
    halfedges: dict

    def compose(self, other):
        """First ``self``, then ``other``."""
        return Relabeling(
            {k: other.edges[v] for k, v in self.edges.items() if v in other.edges},
            {k: other.faces[v] for k, v in self.faces.items() if v in other.faces},
            {k: other.halfedges[v] for k, v in self.halfedges.items()
             if v in other.halfedges},
        )


@dataclass(frozen=True)
class Triangulation:
    faces: tuple
    edges: tuple
    genus: int
    punctures: int
    # anchors[p] is a half-edge leaving puncture p, stored as the smallest
    # half-edge of that orbit; None numbers the orbits by their minima
    anchors: tuple = None

    def __post_init__(self):
        faces = tuple(_rotate_min(tuple(int(h) for h in f)) for f in self.faces)
        edges = tuple(tuple(sorted(int(h) for h in e)) for e in self.edges)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "edges", edges)
        self._validate()
        if self.anchors is None:
            anchors = self.default_anchors
        else:
            anchors = self._normalized_anchors(tuple(int(h) for h in self.anchors))
        object.__setattr__(self, "anchors", anchors)

    def _normalized_anchors(self, anchors):
        # only the orbit of an anchor matters, so equal labelings compare equal
        raw = {h: i for i, o in enumerate(self._raw_orbits) for h in o}
        if len(anchors) != self.punctures or any(h not in raw for h in anchors):
            raise ConstraintViolation("need one valid anchor half-edge per puncture")
        if len({raw[h] for h in anchors}) != self.punctures:
            raise ConstraintViolation("two anchors lie on the same puncture")
        return tuple(min(self._raw_orbits[raw[h]]) for h in anchors)

    @property
    def default_anchors(self):
        return tuple(min(o) for o in self._raw_orbits)

    def _validate(self):
        g, s = self.genus, self.punctures
        if g < 0 or s < 1 or 2 * g - 2 + s < 1:
            raise ConstraintViolation(
                f"need g >= 0, s >= 1 and 2g-2+s >= 1, got g={g}, s={s}")
        k = self.kappa
        if any(len(f) != 3 for f in self.faces) or any(len(e) != 2 for e in self.edges):
            raise ConstraintViolation("faces must be triples and edges pairs")
        if len(self.faces) != 2 * k or len(self.edges) != 3 * k:
            raise ConstraintViolation(
                f"expected {2 * k} faces and {3 * k} edges, "
                f"got {len(self.faces)} and {len(self.edges)}")
        n = 6 * k
        in_faces = sorted(h for f in self.faces for h in f)
        in_edges = sorted(h for e in self.edges for h in e)
        if in_faces != list(range(n)) or in_edges != list(range(n)):
            raise ConstraintViolation(
                f"every half-edge 0..{n - 1} must occur exactly once in faces "
                "and once in edges")
        if len(self._raw_orbits) != s:
            raise ConstraintViolation(
                f"vertex count {len(self._raw_orbits)} does not match s={s}")
        if not self._faces_connected():
            raise ConstraintViolation("face adjacency graph is disconnected")

    def _faces_connected(self):
        seen = {0}
        todo = [0]
        while todo:
            t = todo.pop()
            for h in self.faces[t]:
                u = self.face_of[self.twin[h]]
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return len(seen) == len(self.faces)

    @property
    def kappa(self):
        return 2 * self.genus - 2 + self.punctures

    @property
    def num_halfedges(self):
        return 2 * len(self.edges)

    @cached_property
    def face_of(self):
        out = [0] * self.num_halfedges
        for t, f in enumerate(self.faces):
            for h in f:
                out[h] = t
        return tuple(out)

    @cached_property
    def edge_of(self):
        out = [0] * self.num_halfedges
        for e, pair in enumerate(self.edges):
            for h in pair:
                out[h] = e
        return tuple(out)

    @cached_property
    def twin(self):
        out = [0] * self.num_halfedges
        for h, k in self.edges:
            out[h], out[k] = k, h
        return tuple(out)

    @cached_property
    def next(self):
        out = [0] * self.num_halfedges
        for f in self.faces:
            for i in range(3):
                out[f[i]] = f[(i + 1) % 3]
        return tuple(out)

    @cached_property
    def prev(self):
        out = [0] * self.num_halfedges
        for f in self.faces:
            for i in range(3):
                out[f[i]] = f[(i - 1) % 3]
        return tuple(out)

    @cached_property
    def rho(self):
        """Counterclockwise rotation of outgoing half-edges about their tail."""
        return tuple(self.twin[self.prev[h]] for h in range(self.num_halfedges))

    def orbit(self, h):
        out = [h]
        k = self.rho[h]
        while k != h:
            out.append(k)
            k = self.rho[k]
        return tuple(out)

    @cached_property
    def _raw_orbits(self):
        seen = set()
        orbits = []
        for h in range(self.num_halfedges):
            if h not in seen:
                orbit = self.orbit(h)
                seen.update(orbit)
                orbits.append(orbit)
        return tuple(orbits)

    @cached_property
    def vertex_orbits(self):
        """Outgoing half-edges at each puncture, counterclockwise from its anchor."""
        return tuple(self.orbit(h) for h in self.anchors)

    @cached_property
    def vertex_of(self):
        """Puncture at the tail of each half-edge."""
        out = [0] * self.num_halfedges
        for p, orbit in enumerate(self.vertex_orbits):
            for h in orbit:
                out[h] = p
        return tuple(out)

    def endpoints(self, e):
        h, k = self.edges[e]
        return self.vertex_of[h], self.vertex_of[k]

    def corner(self, h):
        return Corner(
            halfedge=h,
            face=self.face_of[h],
            apex=self.vertex_of[h],
            opposite=self.edge_of[self.next[h]],
            side_a=self.edge_of[h],
            side_b=self.edge_of[self.prev[h]],
        )

    def euler_characteristic(self):
        return len(self._raw_orbits) - len(self.edges) + len(self.faces)

    def face_sides(self, t):
        return tuple(self.edge_of[h] for h in self.faces[t])

    def to_json(self):
        out = {
            "genus": self.genus,
            "punctures": self.punctures,
            "faces": [list(f) for f in self.faces],
            "edges": [list(e) for e in self.edges],
        }
        if self.anchors != self.default_anchors:
            out["anchors"] = list(self.anchors)
        return out

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(
                faces=tuple(tuple(f) for f in data["faces"]),
                edges=tuple(tuple(e) for e in data["edges"]),
                genus=int(data["genus"]),
                punctures=int(data["punctures"]),
                anchors=data.get("anchors"),
            )
        except (KeyError, TypeError) as err:
            raise ConstraintViolation(f"malformed triangulation JSON: {err}") from None


def _from_labels(faces, genus, punctures):
    # label k is half-edge 2k, ~k (encoded -k-1) is half-edge 2k+1
    def he(x):
        return 2 * x if x >= 0 else 2 * (-x - 1) + 1

    n_edges = 1 + max(x if x >= 0 else -x - 1 for f in faces for x in f)
    return Triangulation(
        faces=tuple(tuple(he(x) for x in f) for f in faces),
        edges=tuple((2 * k, 2 * k + 1) for k in range(n_edges)),
        genus=genus,
        punctures=punctures,
    )


def new_surface(g, s):
    """Canonical ideal triangulation of the genus ``g`` surface with ``s`` punctures.

    For ``g >= 1`` the base is the fan triangulation, from polygon vertex 0,
    of the 4g-gon with side word ``a1 b1 a1^-1 b1^-1 ...`` (one puncture).
    For ``g = 0`` the base is two triangles glued along their boundary
    (three punctures). Each further puncture is added by a stellar
    subdivision of face 0.
    """
    if g < 0 or s < 1 or 2 * g - 2 + s < 1:
        raise ConstraintViolation(
            f"need g >= 0, s >= 1 and 2g-2+s >= 1, got g={g}, s={s}")

    def inv(x):
        return -x - 1

    if g == 0:
        faces = [[0, 1, 2], [inv(2), inv(1), inv(0)]]
        base = 3
        label = 3
    else:
        n = 4 * g
        sides = []
        for i in range(g):
            a, b = 2 * i, 2 * i + 1
            sides += [a, b, inv(a), inv(b)]
        diag = {i: 2 * g + i - 1 for i in range(1, n - 2)}
        faces = [[sides[0], sides[1], inv(diag[1])]]
        for i in range(1, n - 3):
            faces.append([diag[i], sides[i + 1], inv(diag[i + 1])])
        faces.append([diag[n - 3], sides[n - 2], sides[n - 1]])
        base = 1
        label = 2 * g + n - 3
    for _ in range(s - base):
        x, y, z = faces[0]
        nu, nv, nw = label, label + 1, label + 2
        label += 3
        faces[0] = [x, nv, inv(nu)]
        faces.append([y, nw, inv(nv)])
        faces.append([z, nu, inv(nw)])
    return _from_labels(faces, g, s)


def quad_of(tri, e):
    h, h2 = tri.edges[e]
    t1, t2 = tri.face_of[h], tri.face_of[h2]
    if t1 == t2:
        raise FlipUndefined(f"edge {e} has the same face on both sides")
    ha, hb = tri.next[h], tri.prev[h]
    hc, hd = tri.next[h2], tri.prev[h2]
    eo = tri.edge_of
    return Quad(e, t1, t2, eo[ha], eo[hb], eo[hc], eo[hd], (h, ha, hb, h2, hc, hd))


def flip_combinatorial(tri, e):
    """Replace edge ``e`` by the other diagonal of its quadrilateral.

    With ``t1 = (e, a, b)`` and ``t2 = (e, c, d)``, the new faces are
    ``t1' = (e', d, a)`` and ``t2' = (e', b, c)``. The new diagonal keeps the
    identifier and half-edges of ``e``; ``t1'`` and ``t2'`` keep the
    identifiers of ``t1`` and ``t2``, so the returned relabeling is the
    identity on identifiers.

    Flipping the new diagonal again gives back the input up to swapping the
    two half-edges of ``e`` (which exchanges the roles of ``t1`` and ``t2``);
    see :func:`double_flip_isomorphism`.
    """
    q = quad_of(tri, e)
    h, ha, hb, h2, hc, hd = q.halfedges
    faces = list(tri.faces)
    faces[q.t1] = (h, hd, ha)
    faces[q.t2] = (h2, hb, hc)
    # the diagonal's half-edges change tails, so anchors move off them
    anchors = tuple(
        min(x for x in tri.orbit(a) if x not in (h, h2)) if a in (h, h2) else a
        for a in tri.anchors)
    out = Triangulation(tuple(faces), tri.edges, tri.genus, tri.punctures, anchors)
    ident = Relabeling(
        edges={x: x for x in range(len(tri.edges))},
        faces={t: t for t in range(len(tri.faces))},
        halfedges={x: x for x in range(tri.num_halfedges)},
    )
    return out, ident


def double_flip_isomorphism(tri, e):
    """Half-edge map sending ``tri`` onto the result of flipping ``e`` twice."""
    h, h2 = tri.edges[e]
    m = {x: x for x in range(tri.num_halfedges)}
    m[h], m[h2] = h2, h
    return m


def find_isomorphism(a, b, anchor=None):
    """Orientation preserving isomorphism of combinatorial maps, as a
    half-edge dictionary ``a -> b``, or ``None``.

    ``anchor = (ha, hb)`` forces ``ha`` to map to ``hb``; a connected map has
    at most one isomorphism extending a given anchor.
    """
    if (a.genus, a.punctures) != (b.genus, b.punctures):
        return None
    if anchor is not None:
        candidates = [anchor]
    else:
        candidates = [(0, y) for y in range(b.num_halfedges)]
    for x0, y0 in candidates:
        m = _extend(a, b, x0, y0)
        if m is not None:
            return m
    return None


def _extend(a, b, x0, y0):
    m = {x0: y0}
    used = {y0}
    todo = [x0]
    while todo:
        x = todo.pop()
        y = m[x]
        for fa, fb in ((a.next, b.next), (a.twin, b.twin)):
            x2, y2 = fa[x], fb[y]
            if x2 in m:
                if m[x2] != y2:
                    return None
            else:
                if y2 in used:
                    return None
                m[x2] = y2
                used.add(y2)
                todo.append(x2)
    return m if len(m) == a.num_halfedges else None


def automorphisms(tri):
    """All orientation preserving automorphisms, as half-edge dictionaries."""
    out = []
    for y in range(tri.num_halfedges):
        m = _extend(tri, tri, 0, y)
        if m is not None:
            out.append(m)
    return out


def induced_face_map(tri, halfedge_map):
    return {tri.face_of[h]: tri.face_of[k] for h, k in halfedge_map.items()}


def induced_edge_map(tri, halfedge_map):
    return {tri.edge_of[h]: tri.edge_of[k] for h, k in halfedge_map.items()}


def corners_at(tri, p):
    """Corners at puncture ``p`` in counterclockwise order."""
    if not 0 <= p < len(tri.vertex_orbits):
        raise ConstraintViolation(f"no puncture {p}")
    return [tri.corner(h) for h in tri.vertex_orbits[p]]


def all_corners(tri):
    return [tri.corner(h) for h in range(tri.num_halfedges)]


@lru_cache(maxsize=None)
def _polygon_triangulations(i, j):
    # triangulations of the sub-polygon i..j, as tuples of diagonals
    if j - i < 2:
        return ((),)
    out = []
    for k in range(i + 1, j):
        extra = tuple(d for d in ((i, k), (k, j)) if d[1] - d[0] >= 2)
        for left in _polygon_triangulations(i, k):
            for right in _polygon_triangulations(k, j):
                out.append(left + right + extra)
    return tuple(out)


def enumerate_polygon_triangulations(n):
    """All triangulations of a convex ``n``-gon with vertices ``0..n-1``,
    each a frozenset of ``n - 3`` diagonals ``(i, j)``, ``i < j``."""
    if n < 3:
        raise ConstraintViolation(f"a polygon needs at least 3 vertices, got {n}")
    return [frozenset(t) for t in _polygon_triangulations(0, n - 1)]


def catalan(m):
    from math import comb

    return comb(2 * m, m) // (m + 1)


def polygon_cut(tri, tree=None):
    """Cut ``tri`` open along ``kappa + 1`` edges so the rest is one polygon.

    The uncut edges form a spanning tree of the dual graph (breadth first
    from face 0 unless ``tree`` is given). Returns ``(cut_edges, sides)``
    where ``sides`` lists the half-edges of the ``2 kappa + 2`` polygon sides
    in counterclockwise order.
    """
    if tree is None:
        tree = set()
        seen = {0}
        todo = deque([0])
        while todo:
            t = todo.popleft()
            for h in tri.faces[t]:
                u = tri.face_of[tri.twin[h]]
                if u not in seen:
                    seen.add(u)
                    tree.add(tri.edge_of[h])
                    todo.append(u)
    tree = set(tree)
    cut = sorted(set(range(len(tri.edges))) - tree)
    if len(tree) != len(tri.faces) - 1:
        raise ConstraintViolation("uncut edges must form a dual spanning tree")
    start = tri.edges[cut[0]][0]
    sides = [start]
    h = start
    while True:
        g = tri.next[h]
        while tri.edge_of[g] in tree:
            g = tri.next[tri.twin[g]]
        if g == start:
            break
        sides.append(g)
        h = g
    if len(sides) != 2 * tri.kappa + 2:
        raise ConstraintViolation("uncut edges do not cut the surface to a disc")
    return cut, sides


def subcover(tri, tree=None):
    """Every triangulation of the surface that contains the cut edges of
    :func:`polygon_cut`; there is one per triangulation of the polygon."""
    cut, sides = polygon_cut(tri, tree)
    n = len(sides)
    spare = sorted(set(range(len(tri.edges))) - set(cut))
    face_ids = range(len(tri.faces))
    out = []
    for diagonals in enumerate_polygon_triangulations(n):
        he = {}
        for i in range(n):
            he[(i, (i + 1) % n)] = sides[i]
        for (i, j), e in zip(sorted(diagonals), spare):
            he[(i, j)], he[(j, i)] = tri.edges[e]
        faces = [(he[(i, j)], he[(j, k)], he[(k, i)])
                 for i, j, k in itertools.combinations(range(n), 3)
                 if (i, j) in he and (j, k) in he and (k, i) in he]
        assert len(faces) == len(face_ids)
        anchors = tuple(min(x for x in tri.orbit(a) if tri.edge_of[x] in cut)
                        for a in tri.anchors)
        out.append(Triangulation(tuple(faces), tri.edges, tri.genus, tri.punctures,
                                 anchors))
    return out

"""
Oriented normal closed curves on the cusp tori.

A curve is a cyclic list of segments ``(tet, vertex, enter, exit)``: the
segment lies in the cusp triangle at ``vertex`` of ``tet``, crossing from the
side opposite corner ``enter`` to the side opposite corner ``exit``.  It cuts
off the third corner.  Curves are purely combinatorial; intersection numbers
are computed from a generic piecewise-linear realization in which every
crossing of a cusp edge gets its own point on that edge.
"""

from collections import Counter, deque
from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import BasisFailure, CurveError, DifferentCusps, NotCoprime
from .triangulation import CCW, coordinate, next_corner, prev_corner


class Segment(NamedTuple):
    tet: int
    vertex: int
    enter: int
    exit: int

    @property
    def triangle(self):
        return (self.tet, self.vertex)

    @property
    def cut(self):
        return 6 - self.vertex - self.enter - self.exit

    def reversed(self):
        return Segment(self.tet, self.vertex, self.exit, self.enter)


@dataclass(frozen=True)
class NormalCurve:
    tri: object = field(repr=False, compare=False)
    cusp: int
    segments: tuple
    label: str = field(default="", compare=False)

    def __len__(self):
        return len(self.segments)

    @property
    def tet_count(self):
        return self.tri.tet_count

    def reversed(self):
        segs = tuple(s.reversed() for s in reversed(self.segments))
        return NormalCurve(self.tri, self.cusp, segs, self.label)

    def is_simple(self):
        """True when the curve is embedded in its cusp torus."""
        return _is_embedded(self)


def make_curve(tri, segments, label=""):
    """Validate a segment list and wrap it as a :class:`NormalCurve`."""
    segs = tuple(Segment(*map(int, s)) for s in segments)
    if not segs:
        raise CurveError("a normal curve needs at least one segment")
    n = tri.tet_count
    for s in segs:
        if not 0 <= s.tet < n or not all(0 <= x <= 3 for x in s[1:]):
            raise CurveError(f"segment {tuple(s)} out of range")
        if len({s.vertex, s.enter, s.exit}) != 3:
            raise CurveError(f"segment {tuple(s)} does not join two distinct sides")
    for s, t in zip(segs, segs[1:] + segs[:1]):
        j, perm = tri.glue(s.tet, s.exit)
        if (j, perm[s.vertex], perm[s.exit]) != (t.tet, t.vertex, t.enter):
            raise CurveError(f"segment {tuple(t)} does not continue {tuple(s)}")
    cusp = tri.cusp_of(segs[0].tet, segs[0].vertex)
    return NormalCurve(tri, cusp, segs, label)


def _is_embedded(curve):
    """Place the curve's arcs disjointly and check they close up into this curve.

    Arcs cutting the same corner of a triangle are nested; on a side with
    endpoints ``x, y`` the arcs around ``x`` come first, innermost nearest
    ``x``.  This realization of the normal coordinates is the unique embedded
    one, so the curve is simple exactly when tracing it reproduces the curve.
    """
    segs = curve.segments
    if not segs:
        return True
    tri = curve.tri
    adjacency = tri.cusp_triangulation(curve.cusp).adjacency
    counts = Counter((s.triangle, s.cut) for s in segs)

    def arc_at(triangle, side, x, k):
        # the k-th point on `side`, counted from its endpoint corner x
        y = 6 - triangle[1] - side - x
        cx = counts[(triangle, x)]
        if k < cx:
            return triangle, x, k
        return triangle, y, cx + counts[(triangle, y)] - 1 - k

    first = segs[0]
    arc = (first.triangle, first.cut, 0)
    enter = first.enter
    traced = []
    for _ in range(len(segs)):
        triangle, c, k = arc
        exit_side = 6 - triangle[1] - c - enter
        traced.append(Segment(triangle[0], triangle[1], enter, exit_side))
        nxt, enter = adjacency[(triangle, exit_side)]
        _, perm = tri.glue(triangle[0], exit_side)
        arc = arc_at(nxt, enter, perm[c], k)
        if arc == (first.triangle, first.cut, 0):
            break
    if arc != (first.triangle, first.cut, 0) or len(traced) != len(segs):
        return False
    return tuple(traced) == segs


def cut_corner(seg):
    """The corner cut off by ``seg`` and its sign.

    The sign is +1 when the corner lies to the left of the oriented segment,
    i.e. when (enter, cut, exit) run counterclockwise.
    """
    corner = seg.cut
    eps = 1 if next_corner(seg.vertex, seg.enter) == corner else -1
    return corner, eps


def edge_link_curve(tri, edge, end=0):
    """Counterclockwise loop about one endpoint of an edge class."""
    if isinstance(edge, int):
        edge = tri.edge_classes[edge]
    tet, (a, b) = edge.members[0]
    v, u = (a, b) if end == 0 else (b, a)
    segments = []
    start = corner = (tet, v, u)
    while True:
        t, v, u = corner
        seg = Segment(t, v, prev_corner(v, u), next_corner(v, u))
        segments.append(seg)
        j, perm = tri.glue(t, seg.exit)
        corner = (j, perm[v], perm[u])
        if corner == start:
            break
    return make_curve(tri, segments, label=f"edge {edge.id} end {end}")


def holonomy_coefficients(curve):
    """Integer vector ``c`` with ``Im H(curve) = c . angles``."""
    c = np.zeros(3 * curve.tet_count)
    for s in curve.segments:
        corner, eps = cut_corner(s)
        c[coordinate(s.tet, s.vertex, corner)] += eps
    return c


def leading_trailing_vector(curve):
    """+1 on each leading corner, -1 on each trailing corner."""
    w = np.zeros(3 * curve.tet_count)
    for s in curve.segments:
        w[coordinate(s.tet, s.vertex, s.enter)] += 1
        w[coordinate(s.tet, s.vertex, s.exit)] -= 1
    return w


# intersection numbers

def _crossings(curve):
    """Edge crossings of ``curve``: (segment index k, side crossed when leaving)."""
    return [(k, s.triangle, s.exit) for k, s in enumerate(curve.segments)]


def _boundary_position(vertex, side, local):
    # CCW corners (c0, c1, c2): boundary runs side c2, side c0, side c1
    return (CCW[vertex].index(side) + 1) % 3 + local


def _realize(curves, adjacency):
    """Boundary coordinates (start, end) of every segment of every curve."""
    events = {}
    for ci, curve in enumerate(curves):
        for k, tri_key, side in _crossings(curve):
            here = (tri_key, side)
            key = min(here, adjacency[here])
            events.setdefault(key, []).append((ci, k))
    param = {}
    for key, evs in events.items():
        m = len(evs)
        for rank, ev in enumerate(evs):
            param[ev] = (rank + 1) / (m + 1)
    out = []
    for ci, curve in enumerate(curves):
        segs = curve.segments
        pos = []
        for k, s in enumerate(segs):
            prev = segs[k - 1]
            t_in = param[(ci, (k - 1) % len(segs))]
            in_key = (prev.triangle, prev.exit)
            primary_in = in_key <= adjacency[in_key]
            # entering side is the partner of the previous exit
            local_in = 1 - t_in if primary_in else t_in
            t_out = param[(ci, k)]
            out_key = (s.triangle, s.exit)
            local_out = t_out if out_key <= adjacency[out_key] else 1 - t_out
            pos.append((_boundary_position(s.vertex, s.enter, local_in),
                        _boundary_position(s.vertex, s.exit, local_out)))
        out.append(pos)
    return out


def _crossing_sign(p1, p2, q1, q2):
    """+1 if chord q crosses chord p from right to left, -1 reverse, 0 none."""
    d = (p2 - p1) % 3

    def right(x):
        return 0 < (x - p1) % 3 < d

    r1, r2 = right(q1), right(q2)
    if r1 == r2:
        return 0
    return 1 if r1 else -1


def intersection_number(rho, sigma):
    """Crossings of ``rho`` by ``sigma`` from right to left minus left to right."""
    if rho.cusp != sigma.cusp or rho.tri is not sigma.tri:
        raise DifferentCusps(f"curves lie on cusps {rho.cusp} and {sigma.cusp}")
    if not rho.segments or not sigma.segments:
        return 0
    adjacency = rho.tri.cusp_triangulation(rho.cusp).adjacency
    pos_r, pos_s = _realize([rho, sigma], adjacency)
    by_triangle = {}
    for k, s in enumerate(sigma.segments):
        by_triangle.setdefault(s.triangle, []).append(pos_s[k])
    total = 0
    for k, s in enumerate(rho.segments):
        p1, p2 = pos_r[k]
        for q1, q2 in by_triangle.get(s.triangle, ()):
            total += _crossing_sign(p1, p2, q1, q2)
    return total


# cut and rejoin

def _tighten(segments):
    """Remove segments that enter and leave through the same side."""
    segs = list(segments)
    changed = True
    while changed and segs:
        changed = False
        for k, s in enumerate(segs):
            if s.enter != s.exit:
                continue
            m = len(segs)
            if m <= 2:
                # a bounce back into the only other segment: null-homotopic
                return []
            prev, nxt = segs[k - 1], segs[(k + 1) % m]
            merged = Segment(prev.tet, prev.vertex, prev.enter, nxt.exit)
            segs = [merged] + [segs[(k + 2 + i) % m] for i in range(m - 3)]
            changed = True
            break
    return segs


def cut_and_rejoin(curve, i=None, j=None):
    """Split ``curve`` at two segments lying in one triangle.

    Returns ``(first, second)`` with ``w(curve) = w(first) + w(second)``.  If
    ``i, j`` are not given the first repeated triangle is used.  Pieces that
    tighten to nothing come back with an empty segment tuple.
    """
    segs = curve.segments
    if i is None:
        seen = {}
        for k, s in enumerate(segs):
            if s.triangle in seen:
                i, j = seen[s.triangle], k
                break
            seen[s.triangle] = k
        else:
            raise CurveError("curve visits every triangle at most once")
    if i > j:
        i, j = j, i
    si, sj = segs[i], segs[j]
    if si.triangle != sj.triangle:
        raise CurveError("segments lie in different triangles")
    m = len(segs)
    first = [Segment(si.tet, si.vertex, sj.enter, si.exit)] + list(segs[i + 1:j])
    second = [Segment(si.tet, si.vertex, si.enter, sj.exit)] + [segs[(j + 1 + k) % m] for k in range(m - (j - i) - 1)]
    pieces = []
    for piece in (first, second):
        tight = _tighten(piece)
        if tight:
            pieces.append(make_curve(curve.tri, tight))
        else:
            pieces.append(NormalCurve(curve.tri, curve.cusp, ()))
    return tuple(pieces)


# homology basis

def _dual_cycles(tri, cusp, root):
    """Fundamental cycles of a BFS spanning tree of the dual graph."""
    ct = tri.cusp_triangulation(cusp)
    adjacency = ct.adjacency
    parent = {root: None}  # triangle -> (parent triangle, side of parent crossed)
    order = deque([root])
    tree_sides = set()
    while order:
        tri_key = order.popleft()
        t, v = tri_key
        for side in CCW[v]:
            other, other_side = adjacency[(tri_key, side)]
            if other not in parent:
                parent[other] = (tri_key, side)
                tree_sides.add((tri_key, side))
                tree_sides.add((other, other_side))
                order.append(other)

    def path_from_root(node):
        steps = []
        while parent[node] is not None:
            p, side = parent[node]
            steps.append((p, side))
            node = p
        return steps[::-1]  # (triangle, side crossed) from the root

    cycles = []
    done = set()
    for tri_key in ct.triangles:
        for side in CCW[tri_key[1]]:
            here = (tri_key, side)
            there = adjacency[here]
            if here in tree_sides or here in done:
                continue
            done.add(here)
            done.add(there)
            a = path_from_root(tri_key)
            b = path_from_root(there[0])
            common = 0
            while common < min(len(a), len(b)) and a[common] == b[common]:
                common += 1
            # lca -> tri_key along the tree, cross `here`, then back up to the lca
            steps = a[common:] + [here]
            back = []
            for p, s in reversed(b[common:]):
                back.append((adjacency[(p, s)][0], adjacency[(p, s)][1]))
            steps += back
            cycles.append(steps)
    return cycles


def _steps_to_curve(tri, steps):
    adjacency = tri.cusp_triangulation(tri.cusp_of(*steps[0][0])).adjacency
    segs = []
    for k, (tri_key, exit_side) in enumerate(steps):
        prev_key, prev_side = steps[k - 1]
        enter_tri, enter_side = adjacency[(prev_key, prev_side)]
        assert enter_tri == tri_key
        segs.append(Segment(tri_key[0], tri_key[1], enter_side, exit_side))
    return make_curve(tri, segs)


def _canonical(curve):
    segs = curve.segments
    k = min(range(len(segs)), key=lambda i: segs[i:] + segs[:i])
    return segs[k:] + segs[:k]


def homology_basis(tri, cusp):
    """Two simple closed normal curves ``(mu, lam)`` with ``i(mu, lam) = +1``.

    Candidates are the fundamental cycles of breadth-first spanning trees of
    the dual graph, one tree per root triangle; every such cycle visits each
    triangle at most once.  The shortest pair meeting once is returned.
    """
    ct = tri.cusp_triangulation(cusp)
    candidates = {}
    for root in ct.triangles:
        for steps in _dual_cycles(tri, cusp, root):
            curve = _steps_to_curve(tri, steps)
            key = _canonical(curve)
            if key not in candidates and _canonical(curve.reversed()) not in candidates:
                candidates[key] = curve
    pool = sorted(candidates.values(), key=lambda c: (len(c), _canonical(c)))
    best = None
    for a, mu in enumerate(pool):
        for lam in pool[a + 1:]:
            if best is not None and len(mu) + len(lam) >= best[0]:
                break
            i = intersection_number(mu, lam)
            if abs(i) == 1:
                best = (len(mu) + len(lam), mu, lam if i == 1 else lam.reversed())
                break
    if best is None:
        raise BasisFailure(f"no pair of simple dual cycles meeting once on cusp {cusp}")
    _, mu, lam = best
    return (NormalCurve(tri, cusp, mu.segments, "meridian"),
            NormalCurve(tri, cusp, lam.segments, "longitude"))


def peripheral_curves(tri, cusp):
    """File-supplied (meridian, longitude) if present, else a constructed basis."""
    supplied = tri.peripheral.get(cusp)
    if supplied:
        mu = make_curve(tri, supplied["meridian"], "meridian")
        lam = make_curve(tri, supplied["longitude"], "longitude")
        if mu.cusp != cusp or lam.cusp != cusp:
            raise CurveError(f"peripheral curves for cusp {cusp} lie on another cusp")
        if abs(intersection_number(mu, lam)) != 1:
            raise CurveError(f"peripheral curves for cusp {cusp} do not meet once")
        return mu, lam
    return homology_basis(tri, cusp)


@dataclass
class CurveSet:
    """Edge links and per-cusp peripheral curves of a triangulation."""

    edge_links: list
    peripheral: dict  # cusp -> (mu, lam)

    @classmethod
    def build(cls, tri):
        links = [edge_link_curve(tri, e, 0) for e in tri.edge_classes]
        periph = {c.id: peripheral_curves(tri, c.id) for c in tri.cusps}
        return cls(links, periph)

    def homology_curves(self):
        return [c for pair in self.peripheral.values() for c in pair]

    def all_curves(self):
        return self.homology_curves() + list(self.edge_links)


def filling_coefficients(curves, cusp, p, q):
    """Im-holonomy and deformation vectors of the class ``p*mu + q*lam``."""
    if gcd(abs(p), abs(q)) != 1:
        raise NotCoprime(f"({p}, {q}) are not coprime")
    mu, lam = curves.peripheral[cusp]
    c = p * holonomy_coefficients(mu) + q * holonomy_coefficients(lam)
    w = p * leading_trailing_vector(mu) + q * leading_trailing_vector(lam)
    return c, w


def random_curve(tri, cusp, rng, max_steps=400):
    """A random closed normal curve from a non-backtracking walk."""
    ct = tri.cusp_triangulation(cusp)
    adjacency = ct.adjacency
    t = ct.triangles[rng.integers(len(ct.triangles))]
    enter = CCW[t[1]][rng.integers(3)]
    state = (t, enter)
    first_seen = {}
    states = []
    exits = []
    for _ in range(max_steps):
        if state in first_seen:
            start = first_seen[state]
            segs = [Segment(s[0][0], s[0][1], s[1], e) for s, e in zip(states[start:], exits[start:])]
            return make_curve(tri, segs)
        first_seen[state] = len(states)
        tri_key, enter = state
        choices = [x for x in CCW[tri_key[1]] if x != enter]
        exit_side = choices[rng.integers(2)]
        states.append(state)
        exits.append(exit_side)
        state = adjacency[(tri_key, exit_side)]
    raise CurveError("random walk did not close")

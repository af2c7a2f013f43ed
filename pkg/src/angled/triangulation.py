"""
Combinatorics of oriented ideal triangulations.

Tetrahedra are numbered ``0..n-1`` with vertices ``0..3``; face ``f`` is the
face opposite vertex ``f``.  A gluing of face ``f`` of tetrahedron ``i`` is a
pair ``(j, perm)`` where ``perm[x]`` is the vertex of ``j`` that vertex ``x`` of
``i`` is identified with; the image face is ``perm[f]``.

Every tetrahedron is taken to be positively oriented.  Seen from the cusp at
vertex ``v``, the other three vertices appear counterclockwise in the order
``(a, b, c)`` for which ``(v, a, b, c)`` is an even permutation.  With all
gluings odd these local orientations agree across faces.

Angle coordinates: coordinate ``3*i + k`` carries the dihedral angle of the
opposite-edge pair ``k`` of tetrahedron ``i`` with ``0 <-> {01, 23}``,
``1 <-> {02, 13}``, ``2 <-> {03, 12}``.
"""

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import BadCuspLink, BadGluing, FormatError, NonOrientable

Perm = tuple

TET_EDGES = tuple(combinations(range(4), 2))

PAIR_OF_EDGE = {
    (0, 1): 0, (2, 3): 0,
    (0, 2): 1, (1, 3): 1,
    (0, 3): 2, (1, 2): 2,
}


def perm_sign(perm):
    inversions = sum(1 for a, b in combinations(range(4), 2) if perm[a] > perm[b])
    return -1 if inversions % 2 else 1


def perm_inverse(perm):
    inv = [0] * 4
    for x, y in enumerate(perm):
        inv[y] = x
    return tuple(inv)


def perm_string(perm):
    return "".join(str(x) for x in perm)


def _build_ccw():
    table = {}
    for v in range(4):
        others = [u for u in range(4) if u != v]
        a, b, c = others
        if perm_sign((v, a, b, c)) < 0:
            b, c = c, b
        table[v] = (a, b, c)
    return table


#: counterclockwise order of the corners of the cusp triangle at each vertex
CCW = _build_ccw()


def next_corner(v, u):
    """Corner following ``u`` counterclockwise in the cusp triangle at ``v``."""
    order = CCW[v]
    return order[(order.index(u) + 1) % 3]


def prev_corner(v, u):
    order = CCW[v]
    return order[(order.index(u) + 2) % 3]


def pair_index(a, b):
    return PAIR_OF_EDGE[(a, b) if a < b else (b, a)]


def coordinate(tet, a, b):
    """Angle coordinate of the edge ``{a, b}`` of tetrahedron ``tet``."""
    return 3 * tet + pair_index(a, b)


@dataclass(frozen=True)
class EdgeClass:
    """An edge of the triangulated manifold.

    ``members`` lists the tetrahedron edges ``(tet, (a, b))`` in the cyclic
    order met when rotating about the edge.  End 0 of the edge sits at vertex
    ``a`` of each member, end 1 at vertex ``b``; the rotation runs
    counterclockwise about end 0 as seen from its cusp.
    """

    id: int
    members: tuple

    @property
    def degree(self):
        return len(self.members)


@dataclass(frozen=True)
class Cusp:
    id: int
    vertices: tuple  # (tet, vertex) pairs


@dataclass(frozen=True)
class CuspTriangulation:
    """The torus at one cusp, tiled by the truncation triangles ``(tet, v)``.

    ``adjacency[(tri, side)]`` gives the matched ``(tri', side')``; sides are
    named by the opposite corner.  ``vertices`` lists each vertex of the torus
    as the counterclockwise cycle of corners ``(tet, v, u)`` around it.
    """

    cusp: int
    triangles: tuple
    adjacency: dict
    corner_coordinate: dict
    vertices: tuple

    @property
    def num_sides(self):
        return len(self.adjacency) // 2

    @property
    def euler_characteristic(self):
        return len(self.triangles) - self.num_sides + len(self.vertices)


class Triangulation:
    """A validated oriented ideal triangulation.

    ``gluings[i][f] = (j, perm)``.  ``peripheral`` optionally maps a cusp id
    to ``{"meridian": segments, "longitude": segments}`` with each segment a
    tuple ``(tet, vertex, enter_side, exit_side)``.
    """

    def __init__(self, gluings, name="", peripheral=None):
        self.gluings = tuple(
            tuple((int(j), tuple(int(x) for x in perm)) for j, perm in tet)
            for tet in gluings
        )
        self.name = name
        self.peripheral = dict(peripheral or {})
        self._check_gluings()
        self.edge_classes, self._edge_of = self._find_edge_classes()
        self.cusps, self._cusp_of = self._find_cusps()
        for c in self.cusps:
            ct = self.cusp_triangulation(c.id)
            chi = ct.euler_characteristic
            if chi != 0:
                raise BadCuspLink(f"cusp {c.id} has Euler characteristic {chi}")
        # holds automatically once every cusp is a torus
        assert len(self.edge_classes) == self.tet_count

    @property
    def tet_count(self):
        return len(self.gluings)

    @property
    def num_cusps(self):
        return len(self.cusps)

    def glue(self, tet, face):
        return self.gluings[tet][face]

    def edge_class_of(self, tet, a, b):
        return self._edge_of[(tet, a, b)]

    def cusp_of(self, tet, vertex):
        return self._cusp_of[(tet, vertex)]

    def __repr__(self):
        return f"<Triangulation {self.name!r}: {self.tet_count} tetrahedra, {self.num_cusps} cusps>"

    # validation

    def _check_gluings(self):
        n = self.tet_count
        if n == 0:
            raise BadGluing("triangulation has no tetrahedra")
        for i, tet in enumerate(self.gluings):
            if len(tet) != 4:
                raise BadGluing(f"tetrahedron {i} does not have four faces")
            for f, (j, perm) in enumerate(tet):
                if not 0 <= j < n:
                    raise BadGluing(f"tet {i} face {f}: neighbour {j} out of range")
                if sorted(perm) != [0, 1, 2, 3]:
                    raise BadGluing(f"tet {i} face {f}: {perm} is not a permutation")
                g = perm[f]
                if (j, g) == (i, f):
                    raise BadGluing(f"tet {i} face {f} is glued to itself")
                back_j, back_perm = self.gluings[j][g]
                if back_j != i or back_perm != perm_inverse(perm):
                    raise BadGluing(
                        f"tet {i} face {f}: gluing is not inverted by tet {j} face {g}")
        for i, tet in enumerate(self.gluings):
            for f, (j, perm) in enumerate(tet):
                if perm_sign(perm) > 0:
                    raise NonOrientable(
                        f"tet {i} face {f}: gluing {perm_string(perm)} is an even permutation")

    # derived combinatorics

    def _find_edge_classes(self):
        edge_of = {}
        classes = []
        for i in range(self.tet_count):
            for a, b in TET_EDGES:
                if (i, a, b) in edge_of:
                    continue
                cid = len(classes)
                members = []
                c, d = [x for x in range(4) if x not in (a, b)]
                if perm_sign((a, d, b, c)) < 0:
                    c, d = d, c
                state = (i, a, b, c, d)
                start = state
                while True:
                    t, x, y, z, w = state
                    if (t, x, y) in edge_of or (t, y, x) in edge_of:
                        raise BadGluing(f"edge {x}{y} of tet {t} is identified with itself reversed")
                    edge_of[(t, x, y)] = cid
                    edge_of[(t, y, x)] = cid
                    members.append((t, (x, y)))
                    # cross the face opposite z, then leave through the face opposite the image of w
                    j, perm = self.gluings[t][z]
                    state = (j, perm[x], perm[y], perm[w], perm[z])
                    if state == start:
                        break
                    if (state[0], state[1], state[2]) == (start[0], start[1], start[2]):
                        raise BadGluing("inconsistent rotation about an edge")
                classes.append(EdgeClass(cid, tuple(members)))
        return classes, edge_of

    def _find_cusps(self):
        cusp_of = {}
        cusps = []
        for i in range(self.tet_count):
            for v in range(4):
                if (i, v) in cusp_of:
                    continue
                cid = len(cusps)
                members = []
                stack = [(i, v)]
                cusp_of[(i, v)] = cid
                while stack:
                    t, x = stack.pop()
                    members.append((t, x))
                    for f in range(4):
                        if f == x:
                            continue
                        j, perm = self.gluings[t][f]
                        nxt = (j, perm[x])
                        if nxt not in cusp_of:
                            cusp_of[nxt] = cid
                            stack.append(nxt)
                cusps.append(Cusp(cid, tuple(sorted(members))))
        return cusps, cusp_of

    @cached_property
    def _cusp_triangulations(self):
        return {c.id: cusp_triangulation(self, c) for c in self.cusps}

    def cusp_triangulation(self, cusp):
        if isinstance(cusp, Cusp):
            cusp = cusp.id
        return self._cusp_triangulations[cusp]


def edge_classes(tri):
    return list(tri.edge_classes)


def cusp_triangulation(tri, c):
    """Build the triangulated torus at cusp ``c`` (a :class:`Cusp`)."""
    triangles = c.vertices
    adjacency = {}
    corner_coordinate = {}
    for t, v in triangles:
        for u in CCW[v]:
            corner_coordinate[(t, v, u)] = coordinate(t, v, u)
            j, perm = tri.glue(t, u)
            adjacency[((t, v), u)] = ((j, perm[v]), perm[u])
    # vertices of the torus: cycles of corners, rotating counterclockwise
    seen = set()
    vertices = []
    for t, v in triangles:
        for u in CCW[v]:
            if (t, v, u) in seen:
                continue
            cycle = []
            corner = (t, v, u)
            while corner not in seen:
                seen.add(corner)
                cycle.append(corner)
                ct, cv, cu = corner
                side = next_corner(cv, cu)
                j, perm = tri.glue(ct, side)
                corner = (j, perm[cv], perm[cu])
            vertices.append(tuple(cycle))
    return CuspTriangulation(c.id, tuple(triangles), adjacency, corner_coordinate, tuple(vertices))


# native text format

_TET_RE = re.compile(r"^tet\s+(\d+)\s*:\s*(.*)$")
_PERIPH_RE = re.compile(r"^peripheral\s+(\d+)\s+(meridian|longitude)\s*:\s*(.*)$")
_SEG_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def _parse_perm(token, lineno):
    if not re.fullmatch(r"[0-3]{4}", token):
        raise FormatError(f"bad permutation {token!r}", lineno)
    return tuple(int(ch) for ch in token)


def parse_triangulation(text, name=""):
    """Parse and validate a native ``atri 1`` document."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise FormatError("empty document", 1)

    lineno, line = lines[0]
    if line.split() != ["atri", "1"]:
        raise FormatError(f"expected header 'atri 1', got {line!r}", lineno)
    if len(lines) < 2:
        raise FormatError("missing 'tetrahedra <n>' line", lineno)
    lineno, line = lines[1]
    words = line.split()
    if len(words) != 2 or words[0] != "tetrahedra" or not words[1].isdigit():
        raise FormatError(f"expected 'tetrahedra <n>', got {line!r}", lineno)
    n = int(words[1])
    if n < 1:
        raise FormatError("tetrahedron count must be positive", lineno)

    gluings = [None] * n
    peripheral = {}
    for lineno, line in lines[2:]:
        m = _TET_RE.match(line)
        if m:
            i = int(m.group(1))
            if i >= n:
                raise FormatError(f"tetrahedron index {i} out of range", lineno)
            if gluings[i] is not None:
                raise FormatError(f"tetrahedron {i} given twice", lineno)
            tokens = m.group(2).split()
            if len(tokens) != 8:
                raise FormatError("expected 4 (neighbour, permutation) pairs", lineno)
            faces = []
            for f in range(4):
                nbr, perm = tokens[2 * f], tokens[2 * f + 1]
                if not nbr.isdigit() or int(nbr) >= n:
                    raise FormatError(f"bad neighbour {nbr!r}", lineno)
                faces.append((int(nbr), _parse_perm(perm, lineno)))
            gluings[i] = faces
            continue
        m = _PERIPH_RE.match(line)
        if m:
            cusp, kind, rest = int(m.group(1)), m.group(2), m.group(3)
            segments = tuple(tuple(int(x) for x in s) for s in _SEG_RE.findall(rest))
            if not segments or _SEG_RE.sub("", rest).strip():
                raise FormatError("bad peripheral segment list", lineno)
            if kind in peripheral.get(cusp, {}):
                raise FormatError(f"duplicate {kind} for cusp {cusp}", lineno)
            peripheral.setdefault(cusp, {})[kind] = segments
            continue
        raise FormatError(f"unrecognised line {line!r}", lineno)

    missing = [i for i, g in enumerate(gluings) if g is None]
    if missing:
        raise FormatError(f"missing tetrahedra {missing}", lines[-1][0])

    tri = Triangulation(gluings, name=name, peripheral=peripheral)
    for cusp, curves in peripheral.items():
        if cusp >= tri.num_cusps:
            raise FormatError(f"peripheral curve on unknown cusp {cusp}")
        if set(curves) != {"meridian", "longitude"}:
            raise FormatError(f"cusp {cusp} needs both a meridian and a longitude")
    if peripheral:
        from .curves import peripheral_curves
        for cusp in peripheral:
            peripheral_curves(tri, cusp)
    return tri


def to_text(tri):
    """Serialize ``tri`` in the native format (round-trips with the parser)."""
    out = ["atri 1"]
    if tri.name:
        out.insert(0, f"# {tri.name}")
    out.append(f"tetrahedra {tri.tet_count}")
    for i, tet in enumerate(tri.gluings):
        parts = " ".join(f"{j} {perm_string(p)}" for j, p in tet)
        out.append(f"tet {i}: {parts}")
    for cusp in sorted(tri.peripheral):
        for kind in ("meridian", "longitude"):
            segs = " ".join("(%d,%d,%d,%d)" % s for s in tri.peripheral[cusp][kind])
            out.append(f"peripheral {cusp} {kind}: {segs}")
    return "\n".join(out) + "\n"

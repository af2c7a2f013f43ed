"""
The polytope of angle structures: its linear system, an interior point and a
basis of its tangent space built from leading-trailing deformations.
"""

from dataclasses import dataclass
from math import pi

import numpy as np

from .curves import leading_trailing_vector
from .errors import Infeasible, LPNumericalFailure, RankAnomaly, SpanDeficiency
from .lp import LPInfeasible, LPUnbounded, simplex
from .triangulation import coordinate

RANK_RTOL = 1e-10
MARGIN_FLOOR = 1e-7
TANGENT_TOL = 1e-12


@dataclass(frozen=True)
class ConstraintSystem:
    """``A v = b`` for angle vectors ``v`` in R^{3n}.

    Rows ``0..n-1`` are the tetrahedron sums (pi), rows ``n..2n-1`` the edge
    sums (2*pi); any further rows are filling equations appended by
    :func:`angled.solver.dehn_slice`.
    """

    A: np.ndarray
    b: np.ndarray
    tet_count: int
    cusp_count: int
    fill_rows: int = 0

    @property
    def expected_rank(self):
        return 2 * self.tet_count - self.cusp_count + self.fill_rows

    def residual(self, v):
        return float(np.max(np.abs(self.A @ v - self.b)))

    def augmented(self, row, rhs):
        return ConstraintSystem(
            np.vstack([self.A, row]), np.append(self.b, rhs),
            self.tet_count, self.cusp_count, self.fill_rows + 1)


def build_constraints(tri):
    n = tri.tet_count
    A = np.zeros((2 * n, 3 * n))
    for i in range(n):
        A[i, 3 * i:3 * i + 3] = 1
    for e in tri.edge_classes:
        for tet, (a, b) in e.members:
            A[n + e.id, coordinate(tet, a, b)] += 1
    b = np.concatenate([np.full(n, pi), np.full(n, 2 * pi)])
    return ConstraintSystem(A, b, n, tri.num_cusps)


def cusp_vectors(tri):
    """Row vectors ``r_c`` (one per cusp) spanning the left nullspace of ``A``.

    Tetrahedron entries count ideal vertices at the cusp (negatively), edge
    entries count edge endpoints at the cusp.
    """
    n = tri.tet_count
    R = np.zeros((tri.num_cusps, 2 * n))
    for i in range(n):
        for v in range(4):
            R[tri.cusp_of(i, v), i] -= 1
    for e in tri.edge_classes:
        tet, (a, b) = e.members[0]
        R[tri.cusp_of(tet, a), n + e.id] += 1
        R[tri.cusp_of(tet, b), n + e.id] += 1
    return R


def numerical_rank(M, rtol=RANK_RTOL):
    s = np.linalg.svd(np.atleast_2d(M), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def rank_and_dimension(cs, k=None):
    """Numerical rank of ``A`` and the dimension ``3n - rank`` of the polytope."""
    if k is not None and k != cs.cusp_count:
        cs = ConstraintSystem(cs.A, cs.b, cs.tet_count, k, cs.fill_rows)
    rank = numerical_rank(cs.A)
    dim = 3 * cs.tet_count - rank
    if rank != cs.expected_rank:
        raise RankAnomaly(f"rank {rank}, expected {cs.expected_rank}")
    return rank, dim


@dataclass
class InteriorPoint:
    angles: np.ndarray
    margin: float  # min over coordinates of min(v, pi - v)


def margin_lp(cs):
    """Solve ``max t : A v = b, t <= v <= pi - t``; return ``(t, v)``.

    With ``v = u + t`` and ``t = t1 - t2`` the program is put in standard form
    over ``(u, t1, t2, s)`` with ``u + 2t + s = pi``.
    """
    A, b = cs.A, cs.b
    m, N = A.shape
    ones = A.sum(axis=1)
    rows = m + N
    cols = N + 2 + N
    M = np.zeros((rows, cols))
    M[:m, :N] = A
    M[:m, N] = ones
    M[:m, N + 1] = -ones
    M[m:, :N] = np.eye(N)
    M[m:, N] = 2
    M[m:, N + 1] = -2
    M[m:, N + 2:] = np.eye(N)
    rhs = np.concatenate([b, np.full(N, pi)])
    c = np.zeros(cols)
    c[N] = -1
    c[N + 1] = 1
    try:
        x = simplex(c, M, rhs)
    except LPInfeasible:
        return -np.inf, None
    except LPUnbounded as exc:
        raise LPNumericalFailure("margin LP reported unbounded") from exc
    t = x[N] - x[N + 1]
    return float(t), x[:N] + t


def initial_point(cs, margin_floor=MARGIN_FLOOR):
    """A point of the open polytope at least ``margin_floor`` from its faces."""
    t, v = margin_lp(cs)
    if v is None or t <= 0:
        raise Infeasible(f"angle polytope has empty interior (margin {t:.3g})", t_star=t)
    if cs.residual(v) > 1e-9:
        raise LPNumericalFailure(f"LP solution violates A v = b by {cs.residual(v):.3g}")
    if t <= margin_floor:
        raise Infeasible(f"angle polytope is non-empty but thinner than {margin_floor:g}",
                         t_star=t, thin=True)
    margin = float(np.min(np.minimum(v, pi - v)))
    return InteriorPoint(v, margin)


@dataclass
class TangentBasis:
    vectors: np.ndarray  # shape (d, 3n), one tangent vector per row
    provenance: list
    completed: bool = False

    @property
    def dimension(self):
        return self.vectors.shape[0]


def tangent_candidates(curves, fillings=()):
    """Deformation vectors of homology curves, filling curves and edge links.

    ``fillings`` is a sequence of ``(cusp, p, q)``; a filled cusp contributes
    ``p w(mu) + q w(lam)`` instead of its two basis curves.
    """
    filled = {c: (p, q) for c, p, q in fillings}
    out = []
    for cusp, (mu, lam) in sorted(curves.peripheral.items()):
        if cusp in filled:
            p, q = filled[cusp]
            w = p * leading_trailing_vector(mu) + q * leading_trailing_vector(lam)
            out.append((f"filling {cusp}", w))
        else:
            out.append((f"meridian {cusp}", leading_trailing_vector(mu)))
            out.append((f"longitude {cusp}", leading_trailing_vector(lam)))
    for i, rho in enumerate(curves.edge_links):
        out.append((f"edge {i}", leading_trailing_vector(rho)))
    return out


def tangent_basis(cs, curves, fillings=(), allow_completion=False):
    """Greedy selection of independent deformation vectors tangent to ``cs``."""
    _, dim = rank_and_dimension(cs)
    chosen, tags = [], []
    for tag, w in tangent_candidates(curves, fillings):
        if np.max(np.abs(cs.A @ w)) > TANGENT_TOL:
            continue
        trial = chosen + [w]
        if numerical_rank(np.array(trial)) == len(trial):
            chosen, tags = trial, tags + [tag]
        if len(chosen) == dim:
            break
    completed = False
    if len(chosen) < dim:
        if not allow_completion:
            raise SpanDeficiency(f"deformations span {len(chosen)} of {dim} dimensions")
        _, s, vh = np.linalg.svd(np.vstack([cs.A] + chosen))
        null = vh[numerical_rank(np.vstack([cs.A] + chosen)):]
        for w in null[:dim - len(chosen)]:
            chosen.append(w)
            tags.append("nullspace")
        completed = True
    return TangentBasis(np.array(chosen).reshape(len(chosen), -1), tags, completed)

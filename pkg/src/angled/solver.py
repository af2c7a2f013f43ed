"""
Volume maximization over the angle polytope and its Dehn-filling slices.

The ascent runs in reduced coordinates ``p = p0 + W.T @ t`` where the rows of
``W`` are tangent vectors.  Newton steps use the reduced Hessian, which is
negative definite in the interior.  An Armijo backtracking search guards them
and keeps every trial angle inside ``(bt, pi - bt)``.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd, pi

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky

from .angles import build_constraints, initial_point, rank_and_dimension, tangent_basis
from .curves import CurveSet, filling_coefficients
from .errors import DegenerateTetrahedron, Infeasible, MaxIterations, NotCoprime, NotFeasible
from .geometry import gradient, hessian_diagonal, holonomy, shapes, volume

# a stalled run this close to a face is treated as a maximum on the boundary
BOUNDARY_PROXIMITY = 1e-6


class Status(str, Enum):
    INTERIOR = "InteriorCriticalPoint"
    BOUNDARY = "BoundaryMaximum"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class SolveOptions:
    gradient_tolerance: float = 1e-12
    max_iterations: int = 200
    boundary_threshold: float = 1e-9
    armijo: float = 1e-4
    backtrack: float = 0.5
    verification_tolerance: float = 1e-9

    def __post_init__(self):
        for name in ("gradient_tolerance", "boundary_threshold", "armijo",
                     "verification_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtrack must lie in (0, 1)")


@dataclass(frozen=True)
class FillingSlice:
    cusp: int
    p: int
    q: int
    row: np.ndarray  # Im-holonomy coefficients of p*mu + q*lam
    direction: np.ndarray  # its deformation vector

    @property
    def descriptor(self):
        return (self.cusp, self.p, self.q)


@dataclass
class Residuals:
    edge: float  # max |H(edge link) - 2 pi i|
    edge_imag: float  # max |Im H(edge link) - 2 pi|
    completeness: float  # max |H| over basis curves of unfilled cusps
    filling: float  # max |p H(mu) + q H(lam) - 2 pi i| over filled cusps

    def worst(self):
        return max(self.edge, self.completeness, self.filling)


@dataclass
class SolveReport:
    status: Status
    name: str = ""
    angles: np.ndarray = None
    shapes: np.ndarray = None
    volume: float = None
    lower_bound: float = None
    bound_rigorous: bool = False
    residuals: Residuals = None
    verified: bool = False
    iterations: int = 0
    gradient_norm: float = None
    history: list = field(default_factory=list)
    fillings: tuple = ()
    t_star: float = None
    thin: bool = False
    basis: tuple = ()
    message: str = ""


def dehn_slice(tri, curves, cusp, p, q, cs=None):
    """Append the filling equation ``Im(p H(mu) + q H(lam)) = 2 pi`` to ``cs``."""
    if gcd(abs(p), abs(q)) != 1:
        raise NotCoprime(f"filling ({p}, {q}) is not a pair of coprime integers")
    if not 0 <= cusp < tri.num_cusps:
        raise ValueError(f"no cusp {cusp}")
    if cs is None:
        cs = build_constraints(tri)
    row, direction = filling_coefficients(curves, cusp, p, q)
    return FillingSlice(cusp, p, q, row, direction), cs.augmented(row, 2 * pi)


def verify_metric(tri, v, curves, fillings=()):
    """Holonomy residuals of edge, completeness and filling equations at ``v``."""
    filled = {s.cusp: s for s in fillings}
    edge = edge_imag = 0.0
    for rho in curves.edge_links:
        h = holonomy(rho, v)
        edge = max(edge, abs(h - 2j * pi))
        edge_imag = max(edge_imag, abs(h.imag - 2 * pi))
    completeness = filling = 0.0
    for cusp, (mu, lam) in curves.peripheral.items():
        hm, hl = holonomy(mu, v), holonomy(lam, v)
        if cusp in filled:
            s = filled[cusp]
            filling = max(filling, abs(s.p * hm + s.q * hl - 2j * pi))
        else:
            completeness = max(completeness, abs(hm), abs(hl))
    return Residuals(edge, edge_imag, completeness, filling)


def volume_lower_bound(cs, v, tol=1e-9):
    """``V(v)`` for a point of the closed polytope; a lower bound for the volume."""
    v = np.asarray(v, dtype=float)
    if v.shape != (cs.A.shape[1],):
        raise NotFeasible(f"expected {cs.A.shape[1]} angles, got {v.size}")
    if v.min() < -tol or v.max() > pi + tol:
        raise NotFeasible("angles outside [0, pi]")
    r = cs.residual(v)
    if r > tol:
        raise NotFeasible(f"angle equations violated by {r:.3g}")
    return volume(np.clip(v, 0.0, pi))


def _margin(v):
    return float(np.min(np.minimum(v, pi - v)))


def _line_search(p, V, grad_r, gnorm, W, d, opts):
    """Backtrack along ``W.T @ d``; return ``(q, V(q))`` or None."""
    slope = float(grad_r @ d)
    if not slope > 0:
        return None
    dp = W.T @ d
    bt = opts.boundary_threshold
    roundoff = 1e-14 * (1 + abs(V))
    alpha = 1.0
    for _ in range(80):
        q = p + alpha * dp
        if q.min() > bt and q.max() < pi - bt:
            Vq = volume(q)
            if Vq > V and Vq >= V + opts.armijo * alpha * slope:
                return q, Vq
            # the predicted gain is below what V can resolve: accept on the gradient instead
            if alpha * slope <= roundoff and Vq >= V - roundoff \
                    and np.max(np.abs(W @ gradient(q))) < gnorm:
                return q, Vq
        alpha *= opts.backtrack
    return None


def _ascend(cs, W, p0, opts):
    p = np.array(p0, dtype=float)
    V = volume(p)
    history = [V]
    iterations = 0
    while True:
        grad_r = W @ gradient(p)
        gnorm = float(np.max(np.abs(grad_r)))
        if gnorm < opts.gradient_tolerance:
            return p, Status.INTERIOR, iterations, history, gnorm
        if iterations >= opts.max_iterations:
            break
        directions = []
        H = (W * hessian_diagonal(p)) @ W.T
        try:
            directions.append(cho_solve((cholesky(-H, lower=True), True), grad_r))
        except LinAlgError:
            pass
        directions.append(grad_r)
        step = None
        for d in directions:
            step = _line_search(p, V, grad_r, gnorm, W, d, opts)
            if step is not None:
                break
        if step is None:
            break
        p, V = step
        history.append(V)
        iterations += 1
    if _margin(p) < BOUNDARY_PROXIMITY:
        return p, Status.BOUNDARY, iterations, history, gnorm
    raise MaxIterations(
        f"no convergence after {iterations} iterations (reduced gradient {gnorm:.3g}, "
        f"min margin {_margin(p):.3g})")


def maximize(tri, cs, basis, p0, opts=None, curves=None, fillings=()):
    """Maximize the volume on the polytope ``cs`` starting from interior ``p0``."""
    opts = opts or SolveOptions()
    curves = curves or CurveSet.build(tri)
    p, status, iterations, history, gnorm = _ascend(cs, basis.vectors, p0, opts)
    rep = SolveReport(
        status=status, name=tri.name, angles=p, volume=history[-1],
        lower_bound=history[-1], bound_rigorous=status is Status.INTERIOR,
        iterations=iterations, gradient_norm=gnorm, history=history,
        fillings=tuple(s.descriptor for s in fillings), basis=tuple(basis.provenance))
    try:
        rep.shapes = shapes(p)
        rep.residuals = verify_metric(tri, p, curves, fillings)
    except DegenerateTetrahedron as exc:
        rep.message = str(exc)
    rep.verified = (status is Status.INTERIOR and rep.residuals is not None
                    and rep.residuals.worst() < opts.verification_tolerance)
    return rep


def solve(tri, fillings=(), opts=None, start=None):
    """Full pipeline: constraints, interior point, tangent basis, ascent.

    ``fillings`` is a sequence of ``(cusp, p, q)``.  ``start`` optionally
    replaces the margin-LP interior point.
    """
    opts = opts or SolveOptions()
    curves = CurveSet.build(tri)
    cs = build_constraints(tri)
    rank_and_dimension(cs)
    slices = []
    for cusp, p, q in fillings:
        if any(s.cusp == cusp for s in slices):
            raise ValueError(f"cusp {cusp} filled twice")
        s, cs = dehn_slice(tri, curves, cusp, p, q, cs)
        slices.append(s)
    descriptors = tuple(s.descriptor for s in slices)
    t_star = None
    if start is None:
        try:
            interior = initial_point(cs)
        except Infeasible as exc:
            return SolveReport(status=Status.INFEASIBLE, name=tri.name, fillings=descriptors,
                               t_star=exc.t_star, thin=exc.thin, message=str(exc))
        p0, t_star = interior.angles, interior.margin
    else:
        p0 = np.asarray(start, dtype=float)
        volume_lower_bound(cs, p0)
        if _margin(p0) <= opts.boundary_threshold:
            raise NotFeasible("start point is not interior")
    basis = tangent_basis(cs, curves, [s.descriptor for s in slices])
    rep = maximize(tri, cs, basis, p0, opts, curves, slices)
    rep.t_star = t_star
    return rep

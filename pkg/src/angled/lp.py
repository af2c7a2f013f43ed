"""Dense two-phase simplex for small standard-form linear programs.

    minimize c.x  subject to  A x = b,  x >= 0

Bland's rule throughout, so the routine terminates and is deterministic.
Problem sizes here are a few hundred columns at most.
"""

import numpy as np

from .errors import LPNumericalFailure

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9


class LPInfeasible(Exception):
    pass


class LPUnbounded(Exception):
    pass


def _pivot(T, basis, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = j


def _iterate(T, basis, ncols, max_iter):
    """Run simplex pivots on tableau ``T`` (objective in the last row)."""
    for _ in range(max_iter):
        cost = T[-1, :ncols]
        entering = np.flatnonzero(cost < -PIVOT_TOL)
        if entering.size == 0:
            return
        j = entering[0]
        col = T[:-1, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            raise LPUnbounded()
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = min(ties, key=lambda i: basis[i])
        _pivot(T, basis, r, j)
    raise LPNumericalFailure("simplex iteration limit reached")


def simplex(c, A, b, max_iter=50000):
    """Return an optimal vertex ``x`` of ``min c.x, A x = b, x >= 0``.

    Raises :class:`LPInfeasible` or :class:`LPUnbounded`.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, N = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1 with one artificial per row
    T = np.zeros((m + 1, N + m + 1))
    T[:m, :N] = A
    T[:m, N:N + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :N] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(N, N + m))
    _iterate(T, basis, N + m, max_iter)
    if -T[-1, -1] > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        raise LPInfeasible()

    # drive remaining artificials out; rows that cannot pivot are redundant
    keep = []
    for r in range(m):
        if basis[r] >= N:
            cand = np.flatnonzero(np.abs(T[r, :N]) > 1e-9)
            if cand.size:
                _pivot(T, basis, r, cand[0])
                keep.append(r)
        else:
            keep.append(r)
    T = np.vstack([T[keep][:, list(range(N)) + [-1]], np.zeros((1, N + 1))])
    basis = [basis[r] for r in keep]

    # phase 2
    T[-1, :N] = c
    for r, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[r]
    _iterate(T, basis, N, max_iter)
    x = np.zeros(N)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return x

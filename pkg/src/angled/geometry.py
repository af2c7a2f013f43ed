"""
Shapes, holonomy, the Lobachevsky function and the volume functional.

Angle vectors use the coordinate convention of :mod:`angled.triangulation`.
Going counterclockwise around any cusp triangle the coordinates of a
tetrahedron appear in the cyclic order ``0, 1, 2``, so the shape on pair ``k``
is ``sin(a[k+1]) / sin(a[k+2]) * exp(i a[k])``.
"""

import math
from math import pi

import numpy as np
from scipy.special import zeta

from .curves import holonomy_coefficients
from .errors import DegenerateTetrahedron

DEGENERATE_EPS = 1e-12

_TERMS = 30
_M = np.arange(1, _TERMS + 1)
# coefficient of x^(2m+1) in the power series part of Л
_COEFFS = zeta(2 * _M) / (_M * (2 * _M + 1) * pi ** (2 * _M))

_remainder_pi = np.frompyfunc(lambda x: math.remainder(x, pi), 1, 1)


def _lob_series(x):
    """Series for ``0 < x <= pi/2``; callers keep ``x <= 3pi/8``."""
    x2 = x * x
    poly = np.zeros_like(x)
    for c in _COEFFS[::-1]:
        poly = poly * x2 + c
    return x - x * np.log(2 * x) + x * x2 * poly


def _lob_reduced(r):
    a = np.abs(r)
    out = np.zeros_like(a)
    small = (a > 0) & (a <= pi / 4)
    out[small] = _lob_series(a[small])
    big = a > pi / 4
    if big.any():
        # duplication Л(2y) = 2Л(y) + 2Л(y + pi/2) keeps the series argument small
        y = a[big] / 2
        out[big] = 2 * _lob_series(y) - 2 * _lob_series(pi / 2 - y)
    return np.sign(r) * out


def lobachevsky(x):
    """Л(x) = -∫_0^x log|2 sin t| dt, for scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    r = np.asarray(_remainder_pi(np.atleast_1d(arr)), dtype=float)
    val = _lob_reduced(r)
    return float(val[0]) if arr.ndim == 0 else val.reshape(arr.shape)


def _check_interior(v):
    v = np.asarray(v, dtype=float)
    bad = np.flatnonzero((v <= DEGENERATE_EPS) | (v >= pi - DEGENERATE_EPS))
    if bad.size:
        j = bad[0]
        raise DegenerateTetrahedron(
            f"angle {j} of tetrahedron {j // 3} is {v[j]!r}, too close to 0 or pi")
    return v


def shape_parameter(alpha, beta, gamma):
    """Shape on the edge with angle ``alpha``; ``(alpha, beta, gamma)`` clockwise."""
    angles = _check_interior([alpha, beta, gamma])
    if abs(angles.sum() - pi) > 1e-9:
        raise DegenerateTetrahedron(f"angles sum to {angles.sum()!r}, not pi")
    return complex(math.sin(gamma) / math.sin(beta) * np.exp(1j * alpha))


def shapes(v):
    """Shape parameter of every angle coordinate."""
    a = _check_interior(v).reshape(-1, 3)
    s = np.sin(a)
    ratio = np.roll(s, -1, axis=1) / np.roll(s, -2, axis=1)
    return (ratio * np.exp(1j * a)).ravel()


def log_shapes(v):
    """Principal logs of the shapes, with imaginary part taken as the angle itself."""
    a = _check_interior(v).reshape(-1, 3)
    ls = np.log(np.sin(a))
    return (np.roll(ls, -1, axis=1) - np.roll(ls, -2, axis=1)).ravel() + 1j * a.ravel()


def holonomy(curve, v):
    """Complex holonomy ``sum eps * log z`` of a normal curve."""
    return complex(holonomy_coefficients(curve) @ log_shapes(v))


def volume(v):
    """Sum of Л over the coordinates; continuous on the closed box."""
    return float(np.sum(lobachevsky(np.asarray(v, dtype=float))))


def gradient(v):
    """Partial derivatives of the volume, ``-log sin v``."""
    return -np.log(np.sin(_check_interior(v)))


def hessian_diagonal(v):
    """Diagonal of the volume Hessian, ``-cot v``."""
    v = _check_interior(v)
    return -np.cos(v) / np.sin(v)


def directional_derivative(v, w):
    return float(gradient(v) @ np.asarray(w, dtype=float))


def hessian_quadratic_form(v, w):
    w = np.asarray(w, dtype=float)
    return float(hessian_diagonal(v) @ (w * w))

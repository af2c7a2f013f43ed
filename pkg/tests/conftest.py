import numpy as np
import pytest

from angled.angles import build_constraints, initial_point, tangent_basis
from angled.curves import CurveSet
from angled.fixtures import load_fixture

VALID = ("fig8", "sister", "whitehead", "flat", "infeasible")
GEOMETRIC = ("fig8", "sister", "whitehead")
FEASIBLE = GEOMETRIC + ("flat",)


@pytest.fixture(scope="session")
def tris():
    return {name: load_fixture(name) for name in VALID}


@pytest.fixture(scope="session")
def fig8(tris):
    return tris["fig8"]


@pytest.fixture(scope="session")
def curve_sets(tris):
    return {name: CurveSet.build(t) for name, t in tris.items()}


def random_interior_points(tri, rng, count, scale=0.3):
    """Interior angle structures obtained by random tangent moves from the LP point."""
    cs = build_constraints(tri)
    p0 = initial_point(cs).angles
    W = tangent_basis(cs, CurveSet.build(tri)).vectors
    W = W / np.linalg.norm(W, axis=1, keepdims=True)
    out = []
    while len(out) < count:
        v = p0 + W.T @ rng.normal(scale=scale, size=W.shape[0])
        if v.min() > 0.05 and v.max() < np.pi - 0.05:
            out.append(v)
    return out

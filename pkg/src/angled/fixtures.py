"""Triangulations shipped with the package."""

from importlib import resources

from .triangulation import parse_triangulation

NAMES = ("fig8", "sister", "whitehead", "flat", "infeasible")


def fixture_path(name):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    return resources.files(__package__).joinpath("data", f"{name}.atri")


def fixture_text(name):
    return fixture_path(name).read_text()


def load_fixture(name):
    return parse_triangulation(fixture_text(name), name=name)

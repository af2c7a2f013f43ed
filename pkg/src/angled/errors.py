"""Exception hierarchy shared by all modules."""


class AngledError(Exception):
    """Base class for every error raised by this package."""


# triangulation input and validation

class TriangulationError(AngledError):
    """The input does not describe a valid oriented ideal triangulation."""


class FormatError(TriangulationError):
    """Grammar violation in a native triangulation document."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BadGluing(TriangulationError):
    pass


class NonOrientable(TriangulationError):
    pass


class BadCuspLink(TriangulationError):
    pass


# curves

class CurveError(AngledError):
    """A segment list does not form a closed normal curve."""


class DifferentCusps(CurveError):
    pass


class BasisFailure(CurveError):
    pass


# linear algebra of the angle polytope

class RankAnomaly(AngledError):
    pass


class SpanDeficiency(AngledError):
    pass


class Infeasible(AngledError):
    """The angle polytope (or a filling slice of it) has empty interior.

    ``t_star`` is the optimal margin of the margin LP; ``thin`` is set when the
    polytope is non-empty but thinner than the margin floor.
    """

    def __init__(self, message, t_star=None, thin=False):
        super().__init__(message)
        self.t_star = t_star
        self.thin = thin


class LPNumericalFailure(AngledError):
    pass


# geometry and solver

class DegenerateTetrahedron(AngledError):
    pass


class MaxIterations(AngledError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotCoprime(AngledError):
    pass


class NotFeasible(AngledError):
    pass

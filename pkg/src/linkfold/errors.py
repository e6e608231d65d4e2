"""Exception types raised by the numerical routines."""


class LinkFoldError(Exception):
    """Base class for all library-specific failures."""


class PolyParseError(LinkFoldError):
    """Polynomial text could not be parsed; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonConvergence(LinkFoldError):
    """An iterative solver exhausted its iteration budget."""


class RankDeficient(LinkFoldError):
    """A constraint Jacobian lost rank; the point is outside the regular regime."""


class DimensionCollapse(LinkFoldError):
    """Vectors that must span a fixed-dimensional space were linearly dependent."""


class WrongDimension(LinkFoldError):
    """Operation is only defined for a specific ambient dimension."""


class BifurcationSuspected(LinkFoldError):
    """Curve continuation hit a point where the solution set may branch."""


class StepCollapse(LinkFoldError):
    """Continuation step adaptation fell below the minimum step size."""


class EmptyResult(LinkFoldError):
    """A search produced no usable results."""


class RankZero(LinkFoldError):
    """The differential vanished in all directions (not a fold)."""


class RankTwo(LinkFoldError):
    """The differential has full rank; the point is regular, not singular."""


class DegenerateHessian(LinkFoldError):
    """A Hessian eigenvalue fell inside the dead band; no index can be assigned."""


class NotApplicable(LinkFoldError):
    """A check's hypotheses (homogeneity, degree) are not satisfied."""

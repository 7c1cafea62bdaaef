"""Exception hierarchy.

Every error raised on purpose by the library derives from ``BendLabError`` so
that the CLI can report it as a one-line diagnostic with exit code 1.
"""


class BendLabError(Exception):
    """Base class for computation errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


# h3geom
class ParabolicOrIdentity(BendLabError):
    pass


class Elliptic(BendLabError):
    pass


class SharedEndpoint(BendLabError):
    pass


class Degenerate(BendLabError):
    pass


class DegenerateSegment(BendLabError):
    pass


# ptorus
class NonLoxodromicA(BendLabError):
    pass


class InconsistentTriple(BendLabError):
    pass


class ParabolicGenerator(BendLabError):
    pass


class InfeasiblePoint(BendLabError):
    pass


# bendsolve
class InfeasibleAngles(BendLabError):
    pass


class InfeasibleLengths(BendLabError):
    def __init__(self, message: str, witness: float | None = None):
        super().__init__(message)
        self.witness = witness


class InconsistentInputs(BendLabError):
    pass


# quakebend
class NonLoxodromic(BendLabError):
    pass


class SignConventionFailure(BendLabError):
    pass


class StepTooSmall(BendLabError):
    pass


# minima
class NoBracket(BendLabError):
    pass


class NotCritical(BendLabError):
    pass


# lab
class InsufficientPoints(BendLabError):
    pass


class NonPositiveData(BendLabError):
    pass


class EmptyWindow(BendLabError):
    pass


class SweepError(BendLabError):
    """A sweep failed at a specific grid value."""

    def __init__(self, message: str, theta: float):
        super().__init__(message)
        self.theta = theta

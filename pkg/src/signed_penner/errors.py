"""Exception hierarchy shared by all modules."""


class PennerError(Exception):
    pass


class ConstraintViolation(PennerError, ValueError):
    """Input violates a structural precondition (bad genus/punctures, bad map)."""


class FlipUndefined(PennerError):
    """The edge does not bound two distinct faces, so it has no quadrilateral."""


class DegenerateFlip(PennerError):
    """The right-hand side of the exchange relation vanishes.

    The point then lies outside the chart of the flipped triangulation.
    """

    def __init__(self, edge, value, step=None):
        self.edge = edge
        self.value = value
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"degenerate flip on edge {edge}{where}: S = {value}")


class InvalidChart(PennerError):
    """Coordinates lie on the zero set of the parabolicity functional."""


class NotParabolic(PennerError):
    pass


class MalformedWalk(PennerError, ValueError):
    pass


class IdenticallyInvalid(PennerError):
    """Rejection sampling never produced a valid chart point."""


class Inconclusive(PennerError):
    """Route search exhausted its depth or state budget."""

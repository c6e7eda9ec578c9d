"""Signed Penner coordinates on the moduli space of flat PSL(2,R) connections
on a punctured surface, with the associated ribbon graph holonomies."""
from .coords import (SignedCoords, component_index, flip, flip_sequence,
                     is_valid_chart_point, phi_puncture, phi_total, scale_action)
from .errors import (ConstraintViolation, DegenerateFlip, FlipUndefined,
                     IdenticallyInvalid, Inconclusive, InvalidChart,
                     MalformedWalk, NotParabolic, PennerError)
from .surface import Triangulation, flip_combinatorial, new_surface

__version__ = "0.1.0"

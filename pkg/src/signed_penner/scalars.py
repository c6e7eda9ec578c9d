"""Exact rational and floating point scalars behind one small interface."""
from dataclasses import dataclass
from fractions import Fraction

MODES = ("rational", "float")
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Arithmetic:
    """Field realization used by coordinates and matrices.

    Rational mode never rounds and decides zero literally. Float mode uses
    ``tolerance`` only for zero tests, always relative to a caller-supplied
    magnitude ``scale``.
    """

    mode: str = "rational"
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown arithmetic mode {self.mode!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    @property
    def exact(self):
        return self.mode == "rational"

    def coerce(self, x):
        if self.exact:
            if isinstance(x, float):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, str):
            return float(Fraction(x)) if "/" in x else float(x)
        return float(x)

    def is_zero(self, x, scale=1):
        if self.exact:
            return x == 0
        return abs(x) <= self.tolerance * abs(scale)

    def sign(self, x, scale=1):
        """Sign of ``x`` as -1, 0 or 1, with float zero decided by ``is_zero``."""
        if self.is_zero(x, scale):
            return 0
        return 1 if x > 0 else -1

    def format(self, x):
        if self.exact:
            return str(Fraction(x))
        return format(float(x), ".17g")

    def to_json(self, x):
        return self.format(x) if self.exact else float(x)


EXACT = Arithmetic("rational")
FLOAT = Arithmetic("float")

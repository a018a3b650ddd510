"""Mean-value intrinsic metrics on the half-space, the ball and the punctured space."""
from .geometry import Domain, DomainError, DomainKind
from .means import ARITHMETIC, GEOMETRIC, LOGARITHMIC, MAX, MIN, MeanKind, mean, power

__version__ = "0.1.0"

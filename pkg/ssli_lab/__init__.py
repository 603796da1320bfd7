"""Numerical lab for the sum-of-squared-logarithms inequality."""

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import SsliError
from .rootmap import OrderedRootVector, phi
from .symfun import elementary_symmetric

__all__ = ["DEFAULT_TOLERANCES", "OrderedRootVector", "SsliError", "ToleranceConfig", "elementary_symmetric", "phi"]

"""Model-free variable screening with weighted leverage scores."""

__version__ = "0.1.0"

from .core import ScreenConfig, ScreeningResult, screen  # noqa: E402
from .spectrum import center_columns, thin_svd  # noqa: E402

__all__ = ["ScreenConfig", "ScreeningResult", "screen", "center_columns", "thin_svd"]

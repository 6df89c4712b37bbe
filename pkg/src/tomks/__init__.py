"""Multi-cover cutting planes for totally-ordered multiple knapsack sets."""

from .core import Tomks, index_set, is_cover, is_minimal_cover, validate_instance
from .cuts import CutInequality, MciPolicy, mci
from .multicover import MultiCover, Skeleton, discrepancy_family, verify_multicover

__version__ = "0.1.0"

__all__ = [
    "Tomks", "index_set", "is_cover", "is_minimal_cover", "validate_instance",
    "CutInequality", "MciPolicy", "mci",
    "MultiCover", "Skeleton", "discrepancy_family", "verify_multicover",
    "__version__",
]

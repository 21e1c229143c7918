"""
Verification suite checking the constructions against their stated properties.
"""

from .checks import (
    check_balance,
    check_bounds,
    check_correlations,
    check_correspondence,
    check_fourier_correspondence,
    check_hull_facts,
    check_hull_transfer,
    check_known_spectra,
    check_level_equality,
    check_norm_conservation,
    check_periodogram,
    check_unique_preimages,
)
from .decorators import check
from .hooks import CheckRegistry, get_check_registry
from .suite import PROFILES, run_suite

__all__ = [
    "check",
    "check_balance",
    "check_bounds",
    "check_correlations",
    "check_correspondence",
    "check_fourier_correspondence",
    "check_hull_facts",
    "check_hull_transfer",
    "check_known_spectra",
    "check_level_equality",
    "check_norm_conservation",
    "check_periodogram",
    "check_unique_preimages",
    "CheckRegistry",
    "get_check_registry",
    "PROFILES",
    "run_suite",
]

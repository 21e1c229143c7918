"""
aperiodic_rs: generalized Rudin-Shapiro sequences, their substitution
rules, and the spectral facts that tie them together.
"""

__version__ = "0.1.0"

from .alphabet import CoefficientSequence, Letter, Word, bar_shift, factor_map, parse_word, subword_set
from .config import Settings, get_settings, load_settings, set_settings
from .errors import AperiodicError
from .recurrence import (
    ConstructionSpec,
    Family,
    RecurrenceState,
    SignProgram,
    coefficients,
    fourier_step,
    initial_state,
    partial_prefix,
    signed_step,
    state_at,
)
from .spectral import (
    UnitCircleGrid,
    autocorrelation,
    balance_deficit,
    exp_sum,
    partial_sup,
    periodogram,
    root_n_constant,
    sup_profile,
    transform,
)
from .substitution import (
    RuleKind,
    SubstitutionRule,
    apply,
    compose,
    eigenvalues,
    fixed_point_prefix,
    legal_words,
    letter_at,
    make_rule,
    preimages,
    rule_from_signs,
    rule_power,
    substitution_matrix,
)

__all__ = [
    "__version__",
    "AperiodicError",
    "CoefficientSequence",
    "ConstructionSpec",
    "Family",
    "Letter",
    "RecurrenceState",
    "RuleKind",
    "Settings",
    "SignProgram",
    "SubstitutionRule",
    "UnitCircleGrid",
    "Word",
    "apply",
    "autocorrelation",
    "balance_deficit",
    "bar_shift",
    "coefficients",
    "compose",
    "eigenvalues",
    "exp_sum",
    "factor_map",
    "fixed_point_prefix",
    "fourier_step",
    "get_settings",
    "initial_state",
    "legal_words",
    "letter_at",
    "load_settings",
    "make_rule",
    "parse_word",
    "partial_prefix",
    "partial_sup",
    "periodogram",
    "preimages",
    "root_n_constant",
    "rule_from_signs",
    "rule_power",
    "set_settings",
    "signed_step",
    "state_at",
    "substitution_matrix",
    "subword_set",
    "sup_profile",
    "transform",
]

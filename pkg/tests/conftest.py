import pytest

from aperiodic_rs.config import Settings, set_settings
from aperiodic_rs.recurrence import ConstructionSpec, SignProgram, coefficients
from aperiodic_rs.substitution import RuleKind, make_rule


@pytest.fixture(autouse=True)
def default_settings():
    """Every test starts from built-in settings, independent of the environment."""
    set_settings(Settings())
    yield
    set_settings(None)


@pytest.fixture
def rs3():
    return coefficients(ConstructionSpec.binary(SignProgram.periodic("+"), 3))


@pytest.fixture
def s_plus():
    return make_rule(RuleKind.S_PLUS)


@pytest.fixture
def s_minus():
    return make_rule(RuleKind.S_MINUS)

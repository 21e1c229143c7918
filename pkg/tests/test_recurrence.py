import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from aperiodic_rs.config import Settings, set_settings
from aperiodic_rs.errors import FamilyError, LevelCapError, RangeError, SignProgramError
from aperiodic_rs.recurrence import (
    ConstructionSpec,
    Family,
    SignProgram,
    coefficients,
    fourier_step,
    initial_state,
    levels_within,
    partial_prefix,
    signed_step,
    state_at,
)

P3 = [1, 1, 1, -1, 1, 1, -1, 1]
V_MINUS_PLUS = [1, -1, 1, 1, -1, 1, 1, 1, 1, -1, 1, 1, 1, -1, -1, -1]


def binary(word, level=0):
    return ConstructionSpec.binary(SignProgram.periodic(word), level)


def test_sign_program_validation():
    assert SignProgram.periodic("-+").signs == (-1, 1)
    assert SignProgram.periodic("-+").word == "-+"
    with pytest.raises(ValidationError):
        SignProgram(signs=())
    with pytest.raises(ValidationError):
        SignProgram(signs=(1, 0))


def test_sign_program_indexing():
    periodic = SignProgram.periodic("-+")
    assert [periodic.sign_at(k) for k in range(4)] == [-1, 1, -1, 1]
    explicit = SignProgram.explicit([1, -1])
    assert explicit.sign_at(1) == -1
    with pytest.raises(SignProgramError):
        explicit.sign_at(2)


def test_spec_validation():
    with pytest.raises(ValidationError):
        ConstructionSpec.fourier(1)
    with pytest.raises(ValidationError):
        ConstructionSpec(family=Family.BINARY, level=2)
    with pytest.raises(ValidationError):
        binary("+", -1)


def test_spec_text():
    assert binary("+").text() == "rs"
    assert binary("-+").text() == "signs:-+"
    assert ConstructionSpec.fourier(3).text() == "fourier:3"
    assert "equivalent to rs" in ConstructionSpec.fourier(2, 4).echo()


def test_initial_states():
    state = initial_state(binary("+"))
    assert state.level == 0
    assert [c.tolist() for c in state.components] == [[0], [0]]
    assert len(initial_state(ConstructionSpec.fourier(3)).components) == 3
    assert initial_state(ConstructionSpec.fourier(2)) == initial_state(binary("+"))


def test_signed_step_examples():
    state = initial_state(binary("+"))
    plus = signed_step(state, 1)
    assert plus.component(1).signs().tolist() == [1, 1]
    assert plus.component(2).signs().tolist() == [1, -1]
    minus = signed_step(state, -1)
    assert minus.component(1).signs().tolist() == [1, -1]
    assert minus.component(2).signs().tolist() == [1, 1]


def test_three_plus_steps_give_p3():
    state = initial_state(binary("+"))
    for _ in range(3):
        state = signed_step(state, 1)
    assert state.component(1).signs().tolist() == P3
    assert state.component(2).signs().tolist() == [1, 1, 1, -1, -1, -1, 1, -1]


def test_signed_step_rejects_bad_input():
    with pytest.raises(FamilyError):
        signed_step(initial_state(ConstructionSpec.fourier(3)), 1)
    with pytest.raises(RangeError):
        signed_step(initial_state(binary("+")), 0)
    with pytest.raises(FamilyError):
        fourier_step(initial_state(binary("+")))


def test_fourier_step_examples():
    three = fourier_step(initial_state(ConstructionSpec.fourier(3)))
    assert three.component(1).exponents.tolist() == [0, 0, 0]
    assert three.component(2).exponents.tolist() == [0, 1, 2]
    four = fourier_step(initial_state(ConstructionSpec.fourier(4)))
    assert np.allclose(four.component(2).values, [1, 1j, -1, -1j])


def test_fourier_two_matches_rudin_shapiro():
    for level in range(8):
        assert coefficients(ConstructionSpec.fourier(2, level)) == coefficients(binary("+", level))


def test_coefficients_examples():
    assert coefficients(binary("+", 3)).signs().tolist() == P3
    assert coefficients(binary("-+", 4)).signs().tolist() == V_MINUS_PLUS
    assert coefficients(ConstructionSpec.fourier(3, 1)).exponents.tolist() == [0, 0, 0]


def test_explicit_program_must_cover_the_level():
    spec = ConstructionSpec.binary(SignProgram.explicit([-1, 1, 1]), 3)
    assert len(coefficients(spec)) == 8
    with pytest.raises(SignProgramError):
        coefficients(spec.at_level(4))


def test_level_cap():
    set_settings(Settings(max_level_terms=2 ** 10))
    assert len(coefficients(binary("+", 10))) == 1024
    with pytest.raises(LevelCapError):
        coefficients(binary("+", 11))
    with pytest.raises(LevelCapError):
        coefficients(ConstructionSpec.fourier(3, 7))


def test_component_range():
    state = state_at(binary("+", 2))
    with pytest.raises(RangeError):
        state.component(3)


def test_partial_prefix_examples(rs3):
    assert partial_prefix(rs3, 4).signs().tolist() == [1, 1, 1, -1]
    assert partial_prefix(rs3, len(rs3)) == rs3
    v = coefficients(binary("-+", 4))
    assert partial_prefix(v, 8).signs().tolist() == V_MINUS_PLUS[:8]
    with pytest.raises(RangeError):
        partial_prefix(rs3, 9)
    with pytest.raises(RangeError):
        partial_prefix(rs3, 0)


def test_binary_residues_are_signs():
    for word in ("+", "-", "-+", "+-", "++-"):
        state = state_at(binary(word, 9))
        for component in state.components:
            assert set(np.unique(component).tolist()) <= {0, 1}


@given(st.text(alphabet="+-", min_size=1, max_size=4), st.integers(0, 9))
@settings(max_examples=60, deadline=None)
def test_prefix_coherence_binary(word, level):
    short = coefficients(binary(word, level))
    long = coefficients(binary(word, level + 1))
    assert np.array_equal(long.exponents[: len(short)], short.exponents)


@given(st.integers(2, 6), st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_prefix_coherence_fourier(n, level):
    short = coefficients(ConstructionSpec.fourier(n, level))
    long = coefficients(ConstructionSpec.fourier(n, level + 1))
    assert np.array_equal(long.exponents[: len(short)], short.exponents)


def test_levels_within():
    assert levels_within(2, 2 ** 16) == 16
    assert levels_within(3, 2 ** 18) == 11
    assert levels_within(4, 2 ** 18) == 9

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from aperiodic_rs.alphabet import CoefficientSequence
from aperiodic_rs.config import load_acceptance_fixture
from aperiodic_rs.errors import RangeError
from aperiodic_rs.recurrence import ConstructionSpec, SignProgram, coefficients, state_at
from aperiodic_rs.spectral import (
    UnitCircleGrid,
    autocorrelation,
    balance_deficit,
    default_n_list,
    exp_sum,
    level_bound,
    level_of,
    norm_sum,
    partial_bound,
    partial_sup,
    periodogram,
    root_n_bound,
    root_n_constant,
    spectral_report,
    sup_profile,
    transform,
)


def binary(word, level):
    return ConstructionSpec.binary(SignProgram.periodic(word), level)


def components(state):
    return [state.component(j) for j in range(1, state.order + 1)]


def test_grid_validation():
    assert UnitCircleGrid(size=8).points[2] == 1j
    with pytest.raises(ValidationError):
        UnitCircleGrid(size=4)


def test_exp_sum_examples(rs3):
    assert exp_sum(rs3, 8, 1) == pytest.approx(4)
    q3 = coefficients(binary("+", 3), component=2)
    assert abs(exp_sum(q3, 8, -1)) == pytest.approx(4)
    assert exp_sum(rs3, 1, 1j) == pytest.approx(1j)


def test_exp_sum_rejects_bad_input(rs3):
    with pytest.raises(RangeError):
        exp_sum(rs3, 8, 0)
    with pytest.raises(RangeError):
        exp_sum(rs3, 9, 1)
    with pytest.raises(RangeError):
        exp_sum(rs3, 0, 1)


HORNER_SEQUENCES = {
    "binary": coefficients(binary("-+", 9)),
    "fourier": coefficients(ConstructionSpec.fourier(3, 6), component=2),
}
HORNER_GRID = UnitCircleGrid(size=256)


@settings(max_examples=100, deadline=None)
@given(
    name=st.sampled_from(sorted(HORNER_SEQUENCES)),
    N=st.integers(min_value=1, max_value=729),
    j=st.integers(min_value=0, max_value=255),
)
def test_transform_matches_horner(name, N, j):
    eps = HORNER_SEQUENCES[name]
    N = min(N, len(eps))
    values = transform(eps, N, HORNER_GRID)
    assert abs(values[j] - exp_sum(eps, N, HORNER_GRID.points[j])) <= 1e-6


def test_transform_folds_long_sequences():
    eps = coefficients(binary("+", 8))
    grid = UnitCircleGrid(size=16)
    assert np.allclose(transform(eps, 256, grid)[3], exp_sum(eps, 256, grid.points[3]), atol=1e-9)


def test_sup_profile_at_level_three(rs3):
    profile = sup_profile(rs3, 8, UnitCircleGrid(size=64))
    assert profile.sup_abs == pytest.approx(4)
    assert profile.sup_abs <= level_bound(2, 3) + 1e-9


def test_fourier_level_bound():
    grid = UnitCircleGrid(size=256)
    spec = ConstructionSpec.fourier(3, 2)
    assert level_bound(3, 2) == pytest.approx(3 ** 1.5)
    for j in range(1, 4):
        assert sup_profile(coefficients(spec, j), 9, grid).sup_abs <= level_bound(3, 2) + 1e-9


def test_norm_sum_is_constant():
    grid = UnitCircleGrid(size=128)
    state = state_at(ConstructionSpec.fourier(3, 3))
    assert np.allclose(norm_sum(components(state), grid), 3 ** 4, atol=1e-9)
    state = state_at(binary("++-", 7))
    assert np.allclose(norm_sum(components(state), grid), 2 ** 8, atol=1e-9)


def test_root_n_constants_stay_below_c():
    eps = coefficients(binary("+", 10))
    grid = UnitCircleGrid(size=512)
    ratios = root_n_constant(eps, default_n_list(len(eps)), grid)
    assert all(r <= root_n_bound(2) + 1e-6 for _, r in ratios)
    assert ratios[0][0] == 1
    assert ratios[0][1] == pytest.approx(1.0)
    with pytest.raises(RangeError):
        root_n_constant(eps, [], grid)


def test_default_n_list():
    assert default_n_list(8) == [1, 2, 3, 4, 6, 8]
    assert default_n_list(10, 3) == [1, 2, 3, 6, 9, 10]


def test_root_n_bound():
    assert root_n_bound(2) == pytest.approx(2 * (1 + np.sqrt(2)))
    assert partial_bound(2, 3) == pytest.approx((2 + np.sqrt(2)) * 2 ** 1.5)


def test_level_of():
    assert level_of(np.array([1, 2, 3, 4, 5, 8, 9]), 2).tolist() == [0, 1, 2, 2, 3, 3, 4]
    assert level_of(np.array([1, 3, 4, 27]), 3).tolist() == [0, 1, 2, 3]


def test_partial_sup_respects_partial_bound():
    eps = coefficients(binary("-+", 10))
    grid = UnitCircleGrid(size=256)
    sups = partial_sup(eps, len(eps), grid)
    m = np.arange(1, len(eps) + 1)
    bounds = np.array([partial_bound(2, int(k)) for k in level_of(m, 2)])
    assert np.all(sups <= bounds + 1e-6)
    assert sups[0] == pytest.approx(1)


@given(st.integers(1, 64), st.integers(1, 4))
@settings(max_examples=15, deadline=None)
def test_partial_sup_independent_of_blocking(chunk, workers):
    eps = coefficients(ConstructionSpec.fourier(3, 5))
    grid = UnitCircleGrid(size=64)
    reference = partial_sup(eps, 200, grid, chunk_size=64, workers=1)
    assert np.array_equal(partial_sup(eps, 200, grid, chunk_size=chunk, workers=workers), reference)


def test_partial_sup_last_entry_matches_sup(rs3):
    grid = UnitCircleGrid(size=64)
    assert partial_sup(rs3, 8, grid)[-1] == pytest.approx(sup_profile(rs3, 8, grid).sup_abs)


def test_autocorrelation_examples(rs3):
    eta = autocorrelation(rs3, 8, 2)
    assert eta[0] == 1
    assert eta[1] == pytest.approx(-1 / 8)
    with pytest.raises(RangeError):
        autocorrelation(rs3, 8, 8)


def test_autocorrelation_of_roots_of_unity():
    eps = coefficients(ConstructionSpec.fourier(4, 4))
    eta = autocorrelation(eps, len(eps), 16)
    assert eta[0] == pytest.approx(1)
    direct = np.vdot(eps.values[:-3], eps.values[3:]) / len(eps)
    assert eta[3] == pytest.approx(direct, abs=1e-12)


def test_periodogram_parseval():
    eps = coefficients(binary("++-", 9))
    power = periodogram(eps, 512, UnitCircleGrid(size=1024))
    assert power.mean() == pytest.approx(1.0)
    assert np.all(power >= 0)


def test_constant_sequence_exceeds_periodogram_bound():
    ones = CoefficientSequence(np.zeros(4096, dtype=np.int64), 2)
    power = periodogram(ones, 4096, UnitCircleGrid(size=1024))
    assert power[0] == pytest.approx(4096)
    assert power.max() > root_n_bound(2) ** 2


def test_balance_deficit(rs3):
    assert balance_deficit(rs3, 8) == pytest.approx(0.5)
    eps = coefficients(binary("+", 16))
    for N in (100, 1000, 65536):
        assert balance_deficit(eps, N) <= root_n_bound(2) / np.sqrt(N)


def test_spectral_report_for_a_level(rs3):
    spec = binary("+", 3)
    report = spectral_report(rs3, 8, UnitCircleGrid(size=64), 4, spec)
    assert report.construction == "rs"
    assert report.sup_abs == pytest.approx(4)
    assert report.root_n_constant == pytest.approx(4 / np.sqrt(8))
    assert report.autocorrelation_re[0] == 1
    assert report.autocorrelation_re[1] == pytest.approx(-1 / 8)
    assert {v.name for v in report.bound_verdicts} == {"root_n", "periodogram", "balance", "level"}
    assert all(v.passed for v in report.bound_verdicts)


def test_spectral_report_skips_level_bound_between_levels(rs3):
    report = spectral_report(rs3, 6, UnitCircleGrid(size=64), 64, binary("+", 3))
    assert "level" not in {v.name for v in report.bound_verdicts}
    assert len(report.autocorrelation_re) == 6


@pytest.mark.filterwarnings("error::DeprecationWarning")
def test_bound_verdicts_hold_plain_python_values(rs3):
    report = spectral_report(rs3, 8, UnitCircleGrid(size=64), 4, binary("+", 3))
    for verdict in report.bound_verdicts:
        assert type(verdict.passed) is bool
        assert type(verdict.margin) is float


@pytest.mark.slow
def test_rudin_shapiro_correlations_reproduce_fixture():
    fixture = load_acceptance_fixture()["correlation"]
    eps = coefficients(binary("+", 18))
    N = fixture["N"]
    eta = autocorrelation(eps, N, fixture["max_lag"])
    tail = np.abs(eta[1:])
    assert tail.max() == fixture["measured_max"]
    assert int(np.argmax(tail)) + 1 == fixture["argmax_lag"]
    assert eta[1] * N == pytest.approx(1)
    assert eta[2] * N == pytest.approx(0)
    assert tail.max() <= fixture["tau_corr"]


@pytest.mark.slow
def test_correlation_fixture_matches_direct_summation():
    fixture = load_acceptance_fixture()["correlation"]
    N = fixture["N"]
    eps = coefficients(binary("+", 18))
    signs = np.rint(eps.values.real[:N]).astype(np.int64)
    sums = np.array([np.dot(signs[m:], signs[:N - m]) for m in range(1, fixture["max_lag"] + 1)])
    eta = sums / N
    assert np.abs(eta).max() == fixture["measured_max"]
    assert int(np.argmax(np.abs(eta))) + 1 == fixture["argmax_lag"]
    assert abs(sums).max() == 15
    assert np.allclose(autocorrelation(eps, N, fixture["max_lag"])[1:], eta, atol=1e-15)

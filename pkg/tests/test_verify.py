import pytest
from pydantic import ValidationError

from aperiodic_rs.models import CheckEntry, CheckKind, CheckStatus, Suite, SuiteProfile
from aperiodic_rs.recurrence import ConstructionSpec, SignProgram
from aperiodic_rs.spectral import UnitCircleGrid
from aperiodic_rs.verify import (
    PROFILES,
    CheckRegistry,
    check,
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
    get_check_registry,
    run_suite,
)
from aperiodic_rs.verify.checks import suite_norm_conservation
from aperiodic_rs.verify.hooks import RegisteredCheck
from aperiodic_rs.verify.suite import _run_one

SUITE_CHECKS = [
    "balance", "bounds", "correlations", "correspondence", "hull_facts", "hull_transfer",
    "known_spectra", "norm_conservation", "periodogram", "unique_preimages",
]


def binary(word, level=0):
    return ConstructionSpec.binary(SignProgram.periodic(word), level)


def by_name(entries):
    return {e.name: e for e in entries}


@pytest.mark.parametrize("word,k", [("+", 6), ("-", 5), ("-+", 3), ("++-", 2)])
def test_correspondence(word, k):
    entry = check_correspondence(SignProgram.periodic(word), k)
    assert entry.passed
    assert entry.measured == 0
    assert entry.anchor


def test_correspondence_records_sign_prefix():
    entry = check_correspondence(SignProgram.periodic("-+"), 2)
    assert entry.name == "correspondence[signs:-+,k=4]"
    assert entry.details["signs"] == [1, -1, 1, 1, -1, 1, 1, 1, 1, -1, 1, 1, 1, -1, -1, -1]


@pytest.mark.parametrize("n,k", [(3, 4), (4, 3), (5, 2)])
def test_fourier_correspondence(n, k):
    assert check_fourier_correspondence(n, k).passed


@pytest.mark.parametrize("spec", [binary("+", 10), binary("++-", 9), ConstructionSpec.fourier(3, 5)])
def test_norm_conservation(spec):
    entry = check_norm_conservation(spec, UnitCircleGrid(size=128))
    assert entry.passed
    assert entry.kind == CheckKind.NUMERIC


def test_norm_conservation_runs_every_level():
    profile = SuiteProfile(name=Suite.FAST, binary_programs=["+", "-+"], norm_levels={2: 4, 3: 3}, grid_size=64)
    entries = suite_norm_conservation(profile)
    assert len(entries) == 2 * 5 + 4
    assert all(e.passed for e in entries)
    assert {e.name for e in entries if e.name.startswith("norm_conservation[fourier:3")} == {
        f"norm_conservation[fourier:3,k={k}]" for k in range(4)
    }


@pytest.mark.parametrize("spec", [binary("-", 8), binary("+-", 8), ConstructionSpec.fourier(4, 4)])
def test_bounds(spec):
    entry = check_bounds(spec, UnitCircleGrid(size=128))
    assert entry.passed
    assert entry.details["level_margin"] >= -1e-6


def test_level_bound_attained_at_one():
    entry = check_level_equality()
    assert entry.passed
    assert entry.measured == pytest.approx(4)


def test_known_spectra():
    entries = by_name(check_known_spectra())
    assert set(entries) == {"spectrum[S+]", "spectrum[S-]", "spectrum[S-+]", "spectrum[S+-]",
                            "spectrum[S+^8=S-^8]"}
    assert all(e.passed for e in entries.values())
    assert entries["spectrum[S-+]"].details["trace"] == 4


def test_hull_facts():
    entries = by_name(check_hull_facts(2 ** 12))
    assert all(e.passed for e in entries.values()), [e.name for e in entries.values() if not e.passed]
    assert entries["hull[preimage_1111,S+]"].kind == CheckKind.EVIDENCE
    assert entries["hull[six_words]"].details["minus_only_example"]


def test_unique_preimages():
    entries = check_unique_preimages()
    assert [e.name for e in entries] == ["preimage[S+,0000]", "preimage[F3,0002]", "preimage[F4,0002]"]
    assert all(e.passed for e in entries)


def test_hull_transfer():
    entries = check_hull_transfer(2 ** 8)
    assert len(entries) == 3
    assert all(e.passed for e in entries)


def test_balance():
    entry = check_balance(binary("-+"), 2 ** 12)
    assert entry.passed
    assert entry.details["largest_N"] == 2 ** 12


def test_correlations_with_explicit_threshold():
    entry = check_correlations(binary("+"), 2 ** 12, 16, tau=0.1)
    assert entry.passed
    assert entry.details["argmax_lag"] >= 1
    assert "fixture_reproduced" not in entry.details
    assert not check_correlations(binary("+"), 8, 2, tau=0.1).passed


def test_periodogram_with_control():
    entry = check_periodogram(ConstructionSpec.fourier(3, 0), 3 ** 6, UnitCircleGrid(size=256))
    assert entry.passed
    assert entry.details["control_peak"] == pytest.approx(3 ** 6)


def test_registry_holds_suite_checks():
    registry = get_check_registry()
    assert registry is CheckRegistry()
    assert set(SUITE_CHECKS) <= set(registry.names())
    assert [c.name for c in registry.checks_for(Suite.FAST)] == sorted(
        c.name for c in registry.checks_for(Suite.FAST)
    )


def test_decorator_registers_and_wraps():
    @check("scratch_check", "a scratch statement", suites=(Suite.FAST,))
    def scratch(profile):
        return CheckEntry(name="scratch", anchor="a scratch statement", status=CheckStatus.PASS)

    registry = get_check_registry()
    try:
        registered = registry.get("scratch_check")
        assert registered.suites == (Suite.FAST,)
        assert scratch._check_info["anchor"] == "a scratch statement"
        assert scratch(PROFILES[Suite.FAST]).passed
        assert registered not in registry.checks_for(Suite.DEFAULT)
    finally:
        assert registry.unregister("scratch_check")


def test_registry_requires_anchor():
    with pytest.raises(ValueError):
        get_check_registry().register("no_anchor", lambda p: [], "")


def test_raising_check_becomes_error_entry():
    def broken(profile):
        raise RuntimeError("boom")

    registered = RegisteredCheck("broken", broken, "some statement", CheckKind.NUMERIC, [Suite.FAST])
    [entry] = _run_one(registered, PROFILES[Suite.FAST])
    assert entry.status == CheckStatus.ERROR
    assert "boom" in entry.details["error"]
    assert not entry.passed


def test_check_entry_validation():
    with pytest.raises(ValidationError):
        CheckEntry(name="x", anchor="", status=CheckStatus.PASS)
    with pytest.raises(ValidationError):
        CheckEntry(name="x", anchor="y", status=CheckStatus.PASS, margin=float("inf"))


def test_profiles():
    assert PROFILES[Suite.DEFAULT] == SuiteProfile(name=Suite.DEFAULT)
    assert PROFILES[Suite.FAST].binary_terms < PROFILES[Suite.DEFAULT].binary_terms
    assert PROFILES[Suite.FAST].correlation_terms == 2 ** 18


@pytest.mark.slow
def test_fast_suite_passes():
    report = run_suite(Suite.FAST)
    assert report.passed, [(e.name, e.measured, e.expected) for e in report.failures()]
    names = [e.name for e in report.checks]
    assert names == sorted(names)
    assert "correlation[rs,N=262144]" in names
    assert report.metadata.settings["profile"]["name"] == "fast"


@pytest.mark.slow
def test_fast_suite_is_independent_of_workers():
    from aperiodic_rs.config import Settings

    serial = run_suite(Suite.FAST, Settings(workers=1))
    parallel = run_suite(Suite.FAST, Settings(workers=4))
    assert [(e.name, e.status, e.measured) for e in serial.checks] == \
        [(e.name, e.status, e.measured) for e in parallel.checks]


@pytest.mark.slow
def test_default_suite_passes():
    report = run_suite(Suite.DEFAULT)
    assert report.passed, [(e.name, e.measured, e.expected) for e in report.failures()]

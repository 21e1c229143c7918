"""
Suite selection and execution.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

from ..config import Settings, get_settings
from ..models import CheckEntry, CheckStatus, ReportMetadata, Suite, SuiteProfile, VerificationReport
from . import checks  # noqa: F401  registers the suite checks
from .hooks import RegisteredCheck, get_check_registry

logger = logging.getLogger("aperiodic_rs.verify.suite")

PROFILES: Dict[Suite, SuiteProfile] = {
    Suite.FAST: SuiteProfile(
        name=Suite.FAST,
        binary_terms=2 ** 12,
        fourier_levels={3: 6, 4: 5},
        norm_levels={2: 12, 3: 7, 4: 6, 5: 5},
        grid_size=256,
        hull_prefix=2 ** 12,
        periodogram_terms=2 ** 14,
        periodogram_grid=1024,
        balance_terms=2 ** 14,
    ),
    Suite.DEFAULT: SuiteProfile(name=Suite.DEFAULT),
}


def _run_one(registered: RegisteredCheck, profile: SuiteProfile) -> List[CheckEntry]:
    start = time.perf_counter()
    try:
        result = registered.func(profile)
    except Exception as e:
        logger.error(f"Error running check {registered.name}: {e}")
        return [CheckEntry(
            name=registered.name,
            anchor=registered.anchor,
            kind=registered.kind,
            status=CheckStatus.ERROR,
            details={"error": f"{type(e).__name__}: {e}"},
        )]
    entries = result if isinstance(result, list) else [result]
    logger.info(f"{registered.name}: {len(entries)} entries in {time.perf_counter() - start:.2f}s")
    return entries


def run_suite(suite: Suite = Suite.DEFAULT, settings: Optional[Settings] = None,
              profile: Optional[SuiteProfile] = None) -> VerificationReport:
    """Run every check tagged with suite and assemble the report.

    Checks run concurrently when settings.workers > 1; entries are ordered by
    name afterwards, so the report does not depend on completion order.

    Args:
        suite: The suite to run.
        settings: Runtime settings; the process-wide settings by default.
        profile: Overrides the suite's built-in sizes.

    Returns:
        The verification report; overall is pass iff every entry passes.
    """
    from .. import __version__

    suite = Suite(suite)
    settings = settings or get_settings()
    profile = profile or PROFILES[suite]
    registered = get_check_registry().checks_for(suite)
    logger.info(f"Running {len(registered)} checks of suite {suite.value}")

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            batches = list(pool.map(lambda r: _run_one(r, profile), registered))
    else:
        batches = [_run_one(r, profile) for r in registered]

    entries = sorted((e for batch in batches for e in batch), key=lambda e: e.name)
    overall = CheckStatus.PASS if all(e.passed for e in entries) else CheckStatus.FAIL
    report = VerificationReport(
        suite=suite,
        checks=entries,
        overall=overall,
        metadata=ReportMetadata(
            version=__version__,
            settings={"workers": settings.workers, "profile": profile.model_dump(mode="json")},
        ),
    )
    failed = len(report.failures())
    logger.info(f"Suite {suite.value}: {len(entries) - failed}/{len(entries)} checks passed")
    return report

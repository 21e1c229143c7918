from typing import Any, Dict, List, Optional
from enum import Enum
from pydantic import BaseModel, Field, field_validator
import datetime
import math


class CheckStatus(str, Enum):
    """Outcome of a verification check."""
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class CheckKind(str, Enum):
    """Epistemic status of a check."""
    EXACT = "exact"          # exact integer / set comparison over the full language
    NUMERIC = "numeric"      # floating-point inequality with a tolerance
    EVIDENCE = "evidence"    # finite-prefix evidence for an infinite-word statement


class Suite(str, Enum):
    """Named verification suites."""
    FAST = "fast"
    DEFAULT = "default"


class OutputFormat(str, Enum):
    """Coefficient export formats."""
    CSV = "csv"
    JSON = "json"
    TOKENS = "tokens"


class ReportMetadata(BaseModel):
    """Run metadata; the only place timestamps appear."""
    generated_at: datetime.datetime = Field(
        default_factory=lambda: datetime.datetime.now(datetime.timezone.utc)
    )
    version: str = ""
    settings: Dict[str, Any] = {}


class BoundVerdict(BaseModel):
    """A named inequality measured on the grid."""
    name: str
    passed: bool
    measured: float
    bound: float
    margin: float = Field(..., description="bound - measured; negative means violated")


class SpectralReport(BaseModel):
    """Spectral summary of one coefficient window."""
    schema_version: int = Field(1, alias="schema")
    construction: Optional[str] = None
    order: int
    N: int
    grid_size: int
    sup_abs: float
    argmax: int
    root_n_constant: float
    root_n_profile: List[List[float]] = []
    autocorrelation_re: List[float] = []
    autocorrelation_im: List[float] = []
    periodogram: List[float] = []
    balance_deficit: float
    bound_verdicts: List[BoundVerdict] = []
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    model_config = {"populate_by_name": True}

    @field_validator("autocorrelation_re")
    @classmethod
    def _normalized(cls, value: List[float]) -> List[float]:
        if value and value[0] != 1.0:
            raise ValueError(f"eta(0) must be 1, got {value[0]}")
        return value

    @field_validator("periodogram")
    @classmethod
    def _non_negative(cls, value: List[float]) -> List[float]:
        if any(v < 0 for v in value):
            raise ValueError("periodogram values must be non-negative")
        return value


class CheckEntry(BaseModel):
    """One verified statement."""
    name: str
    anchor: str = Field(..., min_length=1, description="Quoted statement being checked")
    kind: CheckKind = CheckKind.EXACT
    status: CheckStatus
    measured: Any = None
    expected: Any = None
    margin: float = 0.0
    details: Dict[str, Any] = {}

    @field_validator("margin")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("margin must be finite")
        return value

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS


class VerificationReport(BaseModel):
    """All checks of one suite run."""
    schema_version: int = Field(1, alias="schema")
    suite: Suite = Suite.DEFAULT
    checks: List[CheckEntry] = []
    overall: CheckStatus = CheckStatus.PASS
    metadata: ReportMetadata = Field(default_factory=ReportMetadata)

    model_config = {"populate_by_name": True}

    @property
    def passed(self) -> bool:
        return self.overall == CheckStatus.PASS

    def failures(self) -> List[CheckEntry]:
        return [c for c in self.checks if not c.passed]


class CliConfig(BaseModel):
    """Resolved options of one CLI invocation."""
    subcommand: str
    construction: Optional[str] = None
    level: Optional[int] = None
    grid_size: int = 4096
    max_lag: int = 64
    out: Optional[str] = None
    plot_dir: Optional[str] = None
    output_format: OutputFormat = OutputFormat.CSV


class SuiteProfile(BaseModel):
    """Sizes used by one verification suite."""
    name: Suite
    binary_programs: List[str] = ["+", "-", "-+", "+-", "++-"]
    fourier_orders: List[int] = [3, 4]
    binary_terms: int = Field(2 ** 16, description="Largest 2**k for correspondence and bounds")
    fourier_levels: Dict[int, int] = {3: 9, 4: 8}
    norm_levels: Dict[int, int] = {2: 18, 3: 11, 4: 9, 5: 7}
    grid_size: int = 1024
    hull_prefix: int = 2 ** 16
    correlation_terms: int = 2 ** 18
    max_lag: int = 64
    periodogram_terms: int = 2 ** 18
    periodogram_grid: int = 4096
    balance_terms: int = 2 ** 20

"""
Numerical spectral engine.

Exponential sums S_N(x) = sum_{m=1}^{N} eps_m x**m are evaluated on the grid
x_j = exp(+2*pi*i*j/M). Grid maxima are lower bounds for the supremum over the
circle, so the bounds are checked pointwise on the grid.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .alphabet import CoefficientSequence, unit_roots
from .config import get_settings
from .errors import RangeError
from .models import BoundVerdict, SpectralReport
from .recurrence import ConstructionSpec

logger = logging.getLogger("aperiodic_rs.spectral")


class UnitCircleGrid(BaseModel):
    """M equally spaced points exp(2*pi*i*j/M) on the unit circle."""

    model_config = ConfigDict(frozen=True)

    size: int

    @field_validator("size")
    @classmethod
    def _check_size(cls, value: int) -> int:
        if value < 8:
            raise ValueError(f"grid needs at least 8 points, got {value}")
        if value & (value - 1):
            logger.debug(f"grid size {value} is not a power of two")
        return value

    @property
    def points(self) -> np.ndarray:
        return unit_roots(self.size)

    @property
    def angles(self) -> np.ndarray:
        """theta_j = j / M in units of full turns."""
        return np.arange(self.size) / self.size


class SupProfile(BaseModel):
    """Grid maximum of |S_N| and the first grid index attaining it."""
    sup_abs: float
    argmax: int


def _check_length(eps: CoefficientSequence, N: int) -> None:
    if not 1 <= N <= len(eps):
        raise RangeError(f"N = {N} outside 1..{len(eps)}")


def exp_sum(eps: CoefficientSequence, N: int, x: complex) -> complex:
    """sum_{m=1}^{N} eps_m x**m by Horner's rule."""
    _check_length(eps, N)
    if abs(abs(x) - 1.0) > 1e-12:
        raise RangeError(f"x = {x} is not on the unit circle")
    values = eps.values[:N]
    return complex(x * np.polyval(values[::-1], x))


def transform(eps: CoefficientSequence, N: int, grid: UnitCircleGrid) -> np.ndarray:
    """S_N(x_j) for every grid point via one size-M inverse FFT.

    Coefficients are folded modulo M first (x_j**M = 1), so any N works with any M.
    """
    _check_length(eps, N)
    M = grid.size
    positions = np.arange(1, N + 1) % M
    values = eps.values[:N]
    folded = np.bincount(positions, weights=values.real, minlength=M) + 1j * np.bincount(
        positions, weights=values.imag, minlength=M
    )
    return np.fft.ifft(folded) * M


def sup_profile(eps: CoefficientSequence, N: int, grid: UnitCircleGrid) -> SupProfile:
    magnitudes = np.abs(transform(eps, N, grid))
    j = int(np.argmax(magnitudes))
    return SupProfile(sup_abs=float(magnitudes[j]), argmax=j)


def root_n_constant(eps: CoefficientSequence, n_list: Sequence[int], grid: UnitCircleGrid) -> List[Tuple[int, float]]:
    """(N, sup |S_N| / sqrt(N)) for each N."""
    if not n_list:
        raise RangeError("root_n_constant needs at least one N")
    return [(int(N), sup_profile(eps, int(N), grid).sup_abs / np.sqrt(N)) for N in n_list]


def default_n_list(N: int, order: int = 2) -> List[int]:
    """Powers of the order up to N, their midpoints, and N itself."""
    values = {N}
    power = 1
    while power <= N:
        values.add(power)
        middle = (power + power * order) // 2
        if middle <= N:
            values.add(middle)
        power *= order
    return sorted(values)


def periodogram(eps: CoefficientSequence, N: int, grid: UnitCircleGrid) -> np.ndarray:
    """I_N(theta_j) = |S_N(x_j)|**2 / N."""
    return np.abs(transform(eps, N, grid)) ** 2 / N


def autocorrelation(eps: CoefficientSequence, N: int, max_lag: int) -> np.ndarray:
    """eta_N(m) = (1/N) sum_{r=1}^{N-m} eps_{r+m} conj(eps_r), m = 0..max_lag.

    Products are counted per residue class, so binary sequences give exact
    integer numerators.
    """
    _check_length(eps, N)
    if not 0 <= max_lag < N:
        raise RangeError(f"max lag {max_lag} must be below N = {N}")
    n = eps.order
    exps = eps.exponents[:N]
    roots = unit_roots(n)
    eta = np.empty(max_lag + 1, dtype=complex)
    for m in range(max_lag + 1):
        diff = (exps[m:] - exps[: N - m]) % n
        counts = np.bincount(diff, minlength=n)
        eta[m] = complex(np.dot(counts, roots)) / N
    return eta


def balance_deficit(eps: CoefficientSequence, N: int) -> float:
    """|(1/N) sum_{m<=N} eps_m|."""
    _check_length(eps, N)
    counts = np.bincount(eps.exponents[:N], minlength=eps.order)
    return float(abs(np.dot(counts, unit_roots(eps.order))) / N)


def partial_sup(eps: CoefficientSequence, N: int, grid: UnitCircleGrid,
                chunk_size: Optional[int] = None, workers: Optional[int] = None) -> np.ndarray:
    """max_j |S_m(x_j)| for every m = 1..N.

    Grid points are processed in independent blocks; each point's running sums
    depend only on that point, so the result does not depend on the blocking
    or on the number of workers.
    """
    _check_length(eps, N)
    settings = get_settings()
    chunk_size = chunk_size or settings.chunk_size
    workers = workers or settings.workers
    M = grid.size
    chunk = max(1, min(chunk_size, (1 << 21) // N))
    table = grid.points
    values = eps.values[:N]
    m = np.arange(1, N + 1, dtype=np.int64)

    def block(start: int) -> np.ndarray:
        j = np.arange(start, min(start + chunk, M), dtype=np.int64)
        powers = table[(m[:, None] * j[None, :]) % M]
        sums = np.cumsum(values[:, None] * powers, axis=0)
        return np.abs(sums).max(axis=1)

    starts = list(range(0, M, chunk))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(block, starts))
    else:
        blocks = [block(s) for s in starts]
    result = blocks[0]
    for other in blocks[1:]:
        result = np.maximum(result, other)
    return result


def norm_sum(components: Sequence[CoefficientSequence], grid: UnitCircleGrid) -> np.ndarray:
    """sum_j |P^(j)(x)|**2 at every grid point."""
    total = np.zeros(grid.size)
    for component in components:
        total += np.abs(transform(component, len(component), grid)) ** 2
    return total


def root_n_bound(order: int) -> float:
    """C = n(1 + sqrt(n)), the constant of |S_N| <= C sqrt(N) (2(1+sqrt 2) for n = 2)."""
    return order * (1.0 + np.sqrt(order))


def level_bound(order: int, level: int) -> float:
    """n**((k+1)/2)."""
    return float(order) ** ((level + 1) / 2.0)


def partial_bound(order: int, level: int) -> float:
    """(n + sqrt(n)) n**(k/2) for n**(k-1) < m <= n**k."""
    return (order + np.sqrt(order)) * float(order) ** (level / 2.0)


def level_of(m: np.ndarray, order: int) -> np.ndarray:
    """Smallest k with m <= n**k, elementwise."""
    m = np.asarray(m, dtype=np.int64)
    k = np.zeros(m.shape, dtype=np.int64)
    power = np.ones(m.shape, dtype=np.int64)
    while np.any(power < m):
        grow = power < m
        power[grow] *= order
        k[grow] += 1
    return k


def spectral_report(eps: CoefficientSequence, N: int, grid: UnitCircleGrid, max_lag: int,
                    spec: Optional[ConstructionSpec] = None) -> SpectralReport:
    """Sup norm, root-N profile, autocorrelation, periodogram and bound verdicts of the first N terms.

    Verdicts use C = n(1 + sqrt(n)); the level bound is added when spec is
    given and N = n**k.
    """
    n = eps.order
    C = root_n_bound(n)
    profile = sup_profile(eps, N, grid)
    power = periodogram(eps, N, grid)
    eta = autocorrelation(eps, N, min(max_lag, N - 1))
    balance = balance_deficit(eps, N)
    ratios = root_n_constant(eps, default_n_list(N, n), grid)

    verdicts = []

    def verdict(name: str, measured: float, bound: float) -> None:
        verdicts.append(BoundVerdict(name=name, passed=bool(measured <= bound + 1e-6),
                                     measured=float(measured), bound=float(bound),
                                     margin=float(bound - measured)))

    verdict("root_n", profile.sup_abs, C * np.sqrt(N))
    verdict("periodogram", float(power.max()), C ** 2)
    verdict("balance", balance, C / np.sqrt(N))
    if spec is not None and N == n ** spec.level:
        verdict("level", profile.sup_abs, level_bound(n, spec.level))
    return SpectralReport(
        construction=spec.text() if spec is not None else None,
        order=n,
        N=N,
        grid_size=grid.size,
        sup_abs=profile.sup_abs,
        argmax=profile.argmax,
        root_n_constant=profile.sup_abs / np.sqrt(N),
        root_n_profile=[[float(m), r] for m, r in ratios],
        autocorrelation_re=eta.real.tolist(),
        autocorrelation_im=eta.imag.tolist(),
        periodogram=power.tolist(),
        balance_deficit=balance,
        bound_verdicts=verdicts,
    )



"""
Eigenvalues of small integer matrices.

The characteristic polynomial is computed exactly (Faddeev-LeVerrier over the
integers), split into square-free factors with rational arithmetic, and each
factor's simple roots are found by simultaneous (Weierstrass) iteration and
polished with Newton steps. Repeated eigenvalues therefore come out as exact
multiplicities instead of a cluster of nearby floats.
"""

import cmath
import logging
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, RangeError

logger = logging.getLogger("aperiodic_rs.linalg")

Poly = List[Fraction]  # coefficients, highest degree first

MAX_ITERATIONS = 500


def integer_matrix(matrix: np.ndarray) -> List[List[int]]:
    array = np.asarray(matrix)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise RangeError(f"expected a square matrix, got shape {array.shape}")
    return [[int(v) for v in row] for row in array.tolist()]


def matrix_power(matrix: np.ndarray, exponent: int) -> List[List[int]]:
    """Exact integer power (Python ints, no overflow)."""
    a = integer_matrix(matrix)
    size = len(a)
    result = [[int(i == j) for j in range(size)] for i in range(size)]
    for _ in range(exponent):
        result = _matmul(result, a)
    return result


def _matmul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    size = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size)]
        for i in range(size)
    ]


def characteristic_polynomial(matrix) -> List[int]:
    """Exact coefficients of det(xI - A), highest degree first.

    Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k) / k, M_{k+1} = A M_k + c_{n-k} I.
    The divisions are exact for integer matrices.
    """
    a = integer_matrix(matrix) if isinstance(matrix, np.ndarray) else [list(map(int, r)) for r in matrix]
    size = len(a)
    coeffs = [1]
    m = [[int(i == j) for j in range(size)] for i in range(size)]
    for k in range(1, size + 1):
        am = _matmul(a, m)
        trace = sum(am[i][i] for i in range(size))
        if trace % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = -trace // k
        coeffs.append(c)
        m = [[am[i][j] + (c if i == j else 0) for j in range(size)] for i in range(size)]
    return coeffs


def _trim(p: Poly) -> Poly:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _derivative(p: Poly) -> Poly:
    degree = len(p) - 1
    if degree == 0:
        return [Fraction(0)]
    return [c * (degree - i) for i, c in enumerate(p[:-1])]


def _divmod(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    num = list(num)
    den = _trim(den)
    if len(den) == 1 and den[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [Fraction(0)], _trim(num)
    quotient = []
    for i in range(len(num) - len(den) + 1):
        factor = num[i] / den[0]
        quotient.append(factor)
        for j, d in enumerate(den):
            num[i + j] -= factor * d
    remainder = _trim(num[len(num) - len(den) + 1:] or [Fraction(0)])
    return quotient, remainder


def _is_zero(p: Poly) -> bool:
    return all(c == 0 for c in p)


def _monic(p: Poly) -> Poly:
    p = _trim(p)
    return [c / p[0] for c in p]


def _gcd(a: Poly, b: Poly) -> Poly:
    a, b = _trim(a), _trim(b)
    while not _is_zero(b):
        _, r = _divmod(a, b)
        a, b = b, r
    return _monic(a)


def _sub(a: Poly, b: Poly) -> Poly:
    size = max(len(a), len(b))
    a = [Fraction(0)] * (size - len(a)) + list(a)
    b = [Fraction(0)] * (size - len(b)) + list(b)
    return _trim([x - y for x, y in zip(a, b)])


def squarefree_factors(coeffs: Sequence[int]) -> List[Tuple[Poly, int]]:
    """Yun's square-free decomposition: [(factor, multiplicity), ...]."""
    f = _monic([Fraction(c) for c in coeffs])
    if len(f) == 1:
        return []
    df = _derivative(f)
    a = _gcd(f, df)
    b, _ = _divmod(f, a)
    c, _ = _divmod(df, a)
    d = _sub(c, _derivative(b))
    factors = []
    multiplicity = 1
    while len(_trim(b)) > 1:
        a = _gcd(b, d)
        if len(a) > 1:
            factors.append((a, multiplicity))
        b, _ = _divmod(b, a)
        c, _ = _divmod(d, a)
        d = _sub(c, _derivative(b))
        multiplicity += 1
    return factors


def _simple_roots(factor: Poly, tol: float = 1e-14) -> List[complex]:
    coeffs = [complex(float(c)) for c in _monic(factor)]
    degree = len(coeffs) - 1
    if degree == 1:
        return [-coeffs[1]]
    radius = 1.0 + max(abs(c) for c in coeffs[1:])
    roots = [radius * (0.4 + 0.9j) ** k for k in range(degree)]
    previous = float("inf")
    for iteration in range(1, MAX_ITERATIONS + 1):
        shift = 0.0
        updated = []
        for i, z in enumerate(roots):
            denominator = 1.0 + 0j
            for j, w in enumerate(roots):
                if i != j:
                    denominator *= z - w
            delta = np.polyval(coeffs, z) / denominator
            updated.append(z - delta)
            shift = max(shift, abs(delta))
        roots = updated
        if shift <= tol * radius:
            break
        # rounding floor reached
        if shift < 1e-9 * radius and shift >= previous:
            break
        previous = shift
    else:
        raise ConvergenceError("simultaneous root iteration did not settle", MAX_ITERATIONS)
    derivative = [complex(c) for c in np.polyder(np.array(coeffs))]
    polished = []
    for z in roots:
        for _ in range(3):
            slope = np.polyval(derivative, z)
            if slope == 0:
                break
            z = z - np.polyval(coeffs, z) / slope
        polished.append(complex(z))
    logger.debug(f"degree {degree} factor settled after {iteration} iterations")
    return polished


def _clean(z: complex, tol: float = 1e-12) -> complex:
    re = 0.0 if abs(z.real) < tol else z.real
    im = 0.0 if abs(z.imag) < tol else z.imag
    return complex(re, im)


def sort_key(z: complex) -> Tuple[float, float]:
    phase = cmath.phase(z) if z != 0 else 0.0
    return (-round(abs(z), 9), round(phase, 9))


def eigenvalues(matrix) -> List[complex]:
    """All eigenvalues with multiplicity, sorted by (-|z|, arg z).

    Raises:
        ConvergenceError: if the root iteration does not settle.
    """
    coeffs = characteristic_polynomial(matrix)
    result: List[complex] = []
    for factor, multiplicity in squarefree_factors(coeffs):
        for root in _simple_roots(factor):
            result.extend([_clean(root)] * multiplicity)
    return sorted(result, key=sort_key)


def match_spectra(computed: Sequence[complex], expected: Sequence[complex]) -> float:
    """Largest distance in a greedy nearest pairing of two multisets (inf if sizes differ)."""
    if len(computed) != len(expected):
        return float("inf")
    remaining = list(expected)
    worst = 0.0
    for z in computed:
        distances = [abs(z - w) for w in remaining]
        best = int(np.argmin(distances))
        worst = max(worst, distances[best])
        remaining.pop(best)
    return worst

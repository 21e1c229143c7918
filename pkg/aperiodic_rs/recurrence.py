"""
Coefficient-level recurrences for the Rudin-Shapiro family.

Polynomials are never built symbolically: a step concatenates coefficient
arrays, and the monomial factor x**(r * n**k) of each block is its offset in
the concatenation. Coefficients are exponent residues modulo n.
"""

import logging
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .alphabet import CoefficientSequence
from .config import get_settings
from .errors import FamilyError, RangeError, SignProgramError

logger = logging.getLogger("aperiodic_rs.recurrence")


class Family(str, Enum):
    """Construction family."""
    BINARY = "binary"
    FOURIER = "fourier"


class ProgramKind(str, Enum):
    """How a sign program extends beyond its listed signs."""
    PERIODIC = "periodic"
    EXPLICIT = "explicit"


class SignProgram(BaseModel):
    """The signs sigma_0, sigma_1, ... of the signed recurrence."""

    model_config = ConfigDict(frozen=True)

    kind: ProgramKind = ProgramKind.PERIODIC
    signs: Tuple[int, ...] = Field(..., description="Values in {+1, -1}, sigma_0 first")

    @field_validator("signs")
    @classmethod
    def _check_signs(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("a sign program needs at least one sign")
        if any(s not in (1, -1) for s in value):
            raise ValueError("signs must be +1 or -1")
        return value

    @classmethod
    def periodic(cls, word: str) -> "SignProgram":
        """Build a periodic program from a word such as "-+"."""
        return cls(kind=ProgramKind.PERIODIC, signs=_signs_from_word(word))

    @classmethod
    def explicit(cls, signs: Sequence[int]) -> "SignProgram":
        return cls(kind=ProgramKind.EXPLICIT, signs=tuple(signs))

    @property
    def period(self) -> int:
        return len(self.signs)

    @property
    def word(self) -> str:
        return "".join("+" if s == 1 else "-" for s in self.signs)

    def sign_at(self, k: int) -> int:
        if self.kind == ProgramKind.PERIODIC:
            return self.signs[k % len(self.signs)]
        if k >= len(self.signs):
            raise SignProgramError(
                f"explicit sign program has {len(self.signs)} signs, step {k} needs sigma_{k}"
            )
        return self.signs[k]


def _signs_from_word(word: str) -> Tuple[int, ...]:
    signs = []
    for ch in word:
        if ch == "+":
            signs.append(1)
        elif ch == "-":
            signs.append(-1)
        else:
            raise ValueError(f"unexpected sign character {ch!r}")
    return tuple(signs)


class ConstructionSpec(BaseModel):
    """A construction family together with a level k."""

    model_config = ConfigDict(frozen=True)

    family: Family
    signs: Optional[SignProgram] = None
    n: int = 2
    level: int = 0

    @model_validator(mode="after")
    def _check_family(self) -> "ConstructionSpec":
        if self.level < 0:
            raise ValueError("level must be non-negative")
        if self.family == Family.BINARY:
            if self.signs is None:
                raise ValueError("binary constructions need a sign program")
            if self.n != 2:
                raise ValueError("binary constructions have order 2")
        elif self.n < 2:
            raise ValueError(f"Fourier order must be at least 2, got {self.n}")
        return self

    @classmethod
    def binary(cls, signs: SignProgram, level: int = 0) -> "ConstructionSpec":
        return cls(family=Family.BINARY, signs=signs, n=2, level=level)

    @classmethod
    def fourier(cls, n: int, level: int = 0) -> "ConstructionSpec":
        return cls(family=Family.FOURIER, n=n, level=level)

    @property
    def order(self) -> int:
        return self.n

    def at_level(self, level: int) -> "ConstructionSpec":
        return self.model_copy(update={"level": level})

    def text(self) -> str:
        """The construction in CLI grammar, e.g. "signs:-+" or "fourier:3"."""
        if self.family == Family.FOURIER:
            return f"fourier:{self.n}"
        if self.signs.kind == ProgramKind.EXPLICIT:
            return f"explicit:{self.signs.word}"
        return "rs" if self.signs.word == "+" else f"signs:{self.signs.word}"

    def echo(self) -> str:
        text = self.text()
        if self.family == Family.FOURIER and self.n == 2:
            text += " (equivalent to rs)"
        return f"{text} k={self.level}"


class RecurrenceState:
    """The n component coefficient arrays at one level."""

    __slots__ = ("_components", "_level", "_order", "_family")

    def __init__(self, components: Sequence[np.ndarray], level: int, order: int, family: Family):
        arrays = []
        for component in components:
            array = np.mod(np.asarray(component, dtype=np.int64), order)
            array.flags.writeable = False
            arrays.append(array)
        lengths = {a.size for a in arrays}
        if len(lengths) != 1 or lengths.pop() != order ** level:
            raise RangeError(f"components must all have length {order}**{level}")
        self._components = tuple(arrays)
        self._level = level
        self._order = order
        self._family = family

    @property
    def components(self) -> Tuple[np.ndarray, ...]:
        return self._components

    @property
    def level(self) -> int:
        return self._level

    @property
    def order(self) -> int:
        return self._order

    @property
    def family(self) -> Family:
        return self._family

    def component(self, j: int) -> CoefficientSequence:
        """Component j, counted from 1 (P_k is component 1)."""
        if not 1 <= j <= len(self._components):
            raise RangeError(f"component {j} outside 1..{len(self._components)}")
        return CoefficientSequence(self._components[j - 1], self._order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RecurrenceState):
            return NotImplemented
        return (
            self._level == other.level
            and self._order == other.order
            and all(np.array_equal(a, b) for a, b in zip(self._components, other.components))
        )

    def __repr__(self) -> str:
        return f"RecurrenceState({self._family.value}, n={self._order}, k={self._level})"


def initial_state(spec: ConstructionSpec) -> RecurrenceState:
    """Level 0: every component is the polynomial x."""
    ones = [np.zeros(1, dtype=np.int64) for _ in range(spec.order)]
    return RecurrenceState(ones, 0, spec.order, spec.family)


def signed_step(state: RecurrenceState, sigma: int) -> RecurrenceState:
    """P' = P ++ sigma*Q and Q' = P ++ (-sigma)*Q."""
    if state.family != Family.BINARY:
        raise FamilyError("signed_step needs a binary state")
    if sigma not in (1, -1):
        raise RangeError(f"sigma must be +1 or -1, got {sigma}")
    p, q = state.components
    flip = 0 if sigma == 1 else 1
    return RecurrenceState(
        [np.concatenate([p, (q + flip) % 2]), np.concatenate([p, (q + flip + 1) % 2])],
        state.level + 1,
        2,
        Family.BINARY,
    )


def fourier_step(state: RecurrenceState) -> RecurrenceState:
    """Multiply by the x-dependent Fourier matrix: block r of P^(j) is omega**(r*j) P^(r)."""
    if state.family != Family.FOURIER:
        raise FamilyError("fourier_step needs a Fourier state")
    n = state.order
    blocks = np.stack(state.components)
    rows = []
    for j in range(n):
        shifts = (np.arange(n) * j) % n
        rows.append(((blocks + shifts[:, None]) % n).reshape(-1))
    return RecurrenceState(rows, state.level + 1, n, Family.FOURIER)


def step(state: RecurrenceState, spec: ConstructionSpec) -> RecurrenceState:
    if spec.family == Family.BINARY:
        return signed_step(state, spec.signs.sign_at(state.level))
    return fourier_step(state)


def state_at(spec: ConstructionSpec, check_cap: bool = True) -> RecurrenceState:
    """Run the recurrence from the initial state up to spec.level."""
    if check_cap:
        get_settings().check_level(spec.order, spec.level)
    state = initial_state(spec)
    while state.level < spec.level:
        state = step(state, spec)
    logger.debug(f"Built {spec.echo()} with {spec.order ** spec.level} coefficients")
    return state


def coefficients(spec: ConstructionSpec, component: int = 1) -> CoefficientSequence:
    """The epsilon sequence of length n**k (component 1 of the level-k state)."""
    return state_at(spec).component(component)


def partial_prefix(eps: CoefficientSequence, m: int) -> CoefficientSequence:
    """The first m values."""
    if not 1 <= m <= len(eps):
        raise RangeError(f"prefix length {m} outside 1..{len(eps)}")
    return CoefficientSequence(eps.exponents[:m], eps.order)


def levels_within(order: int, max_terms: int) -> int:
    """Largest k with order**k <= max_terms."""
    k = 0
    while order ** (k + 1) <= max_terms:
        k += 1
    return k

"""
Letters, words and the factor map onto roots of unity.

A letter is a base letter (A, B, C, ...) carrying a number of bars modulo the
order n. Words keep their letters as two integer arrays so that one
implementation serves the four-letter binary alphabet and every n**2-letter
Fourier alphabet.
"""

import json
import logging
import string
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import AlphabetMismatchError, RangeError, WordParseError

logger = logging.getLogger("aperiodic_rs.alphabet")

BASE_LETTERS = string.ascii_uppercase
OVERLINE = "̅"


def unit_roots(order: int) -> np.ndarray:
    """Return omega**j for j = 0..order-1 with exact zeros in the components."""
    angles = 2.0 * np.pi * np.arange(order) / order
    re = np.cos(angles)
    im = np.sin(angles)
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    # quarter turns are exact
    quarter = (4 * np.arange(order)) % order == 0
    re[quarter] = np.round(re[quarter])
    im[quarter] = np.round(im[quarter])
    return re + 1j * im


class Letter(BaseModel):
    """A base letter with a bar count modulo the alphabet order."""

    model_config = ConfigDict(frozen=True)

    base: int
    bars: int = 0
    order: int = 2

    @model_validator(mode="after")
    def _check_ranges(self) -> "Letter":
        if self.order < 2:
            raise ValueError(f"order must be at least 2, got {self.order}")
        if not 0 <= self.base < len(BASE_LETTERS):
            raise ValueError(f"base {self.base} outside 0..{len(BASE_LETTERS) - 1}")
        if not 0 <= self.bars < self.order:
            raise ValueError(f"bar count {self.bars} outside 0..{self.order - 1}")
        return self

    @property
    def code(self) -> int:
        return self.base * self.order + self.bars

    @property
    def token(self) -> str:
        return f"{BASE_LETTERS[self.base]}{self.bars}"

    def pretty(self) -> str:
        return BASE_LETTERS[self.base] + OVERLINE * self.bars

    def __lt__(self, other: "Letter") -> bool:
        return (self.base, self.bars) < (other.base, other.bars)

    def __str__(self) -> str:
        return self.token


def bar_shift(letter: Letter, t: int) -> Letter:
    """Add t bars to a letter, modulo its order."""
    return Letter(base=letter.base, bars=(letter.bars + t) % letter.order, order=letter.order)


class Word:
    """An immutable finite word over an order-n barred alphabet."""

    __slots__ = ("_bases", "_bars", "_order", "_hash")

    def __init__(self, bases: Sequence[int], bars: Sequence[int], order: int):
        bases = np.array(bases, dtype=np.int64).reshape(-1)
        bars = np.array(bars, dtype=np.int64).reshape(-1)
        if bases.shape != bars.shape:
            raise AlphabetMismatchError("bases and bars must have equal length")
        if order < 2:
            raise RangeError(f"order must be at least 2, got {order}")
        if bars.size and (bars.min() < 0 or bars.max() >= order):
            raise RangeError(f"bar counts must lie in 0..{order - 1}")
        bases.flags.writeable = False
        bars.flags.writeable = False
        self._bases = bases
        self._bars = bars
        self._order = order
        self._hash: Optional[int] = None

    @classmethod
    def empty(cls, order: int = 2) -> "Word":
        return cls([], [], order)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter], order: Optional[int] = None) -> "Word":
        """Build a word from letters that all share one order."""
        letters = list(letters)
        if order is None:
            if not letters:
                raise RangeError("cannot infer the order of an empty word")
            order = letters[0].order
        for position, letter in enumerate(letters, start=1):
            if letter.order != order:
                raise AlphabetMismatchError(
                    f"letter {position} has order {letter.order}, expected {order}"
                )
        return cls([l.base for l in letters], [l.bars for l in letters], order)

    @property
    def bases(self) -> np.ndarray:
        return self._bases

    @property
    def bars(self) -> np.ndarray:
        return self._bars

    @property
    def order(self) -> int:
        return self._order

    @property
    def codes(self) -> np.ndarray:
        """Letter indices base * order + bars, ordered like (base, bars)."""
        return self._bases * self._order + self._bars

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return tuple(self)

    def __len__(self) -> int:
        return int(self._bases.size)

    def __iter__(self) -> Iterator[Letter]:
        for base, bars in zip(self._bases.tolist(), self._bars.tolist()):
            yield Letter(base=base, bars=bars, order=self._order)

    def __getitem__(self, item: Union[int, slice]) -> Union[Letter, "Word"]:
        if isinstance(item, slice):
            return Word(self._bases[item], self._bars[item], self._order)
        return Letter(base=int(self._bases[item]), bars=int(self._bars[item]), order=self._order)

    def __add__(self, other: "Word") -> "Word":
        if other.order != self.order:
            raise AlphabetMismatchError(f"cannot concatenate orders {self.order} and {other.order}")
        return Word(
            np.concatenate([self._bases, other.bases]),
            np.concatenate([self._bars, other.bars]),
            self._order,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return (
            self._order == other.order
            and np.array_equal(self._bases, other.bases)
            and np.array_equal(self._bars, other.bars)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._order, self._bases.tobytes(), self._bars.tobytes()))
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        return tuple(self.codes.tolist()) < tuple(other.codes.tolist())

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, order={self._order})"

    def __str__(self) -> str:
        return format_word(self)

    def bar_shift(self, t: int) -> "Word":
        """Apply bar_shift letterwise."""
        return Word(self._bases, (self._bars + t) % self._order, self._order)

    def tokens(self) -> List[str]:
        return [f"{BASE_LETTERS[b]}{k}" for b, k in zip(self._bases.tolist(), self._bars.tolist())]

    def pretty(self) -> str:
        """Render with combining overlines, e.g. ABAB̄."""
        return "".join(
            BASE_LETTERS[b] + OVERLINE * k for b, k in zip(self._bases.tolist(), self._bars.tolist())
        )


class CoefficientSequence:
    """Roots of unity omega**e stored as exact exponent residues e mod n."""

    __slots__ = ("_exponents", "_order")

    def __init__(self, exponents: Sequence[int], order: int):
        exponents = np.mod(np.array(exponents, dtype=np.int64).reshape(-1), order)
        exponents.flags.writeable = False
        self._exponents = exponents
        self._order = order

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "CoefficientSequence":
        """Build an order-2 sequence from +1/-1 values."""
        signs = np.asarray(signs)
        if not np.all(np.abs(signs) == 1):
            raise RangeError("binary coefficients must be +1 or -1")
        return cls((signs < 0).astype(np.int64), 2)

    @property
    def exponents(self) -> np.ndarray:
        return self._exponents

    @property
    def order(self) -> int:
        return self._order

    @property
    def values(self) -> np.ndarray:
        """The complex values omega**e."""
        return unit_roots(self._order)[self._exponents]

    def __len__(self) -> int:
        return int(self._exponents.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoefficientSequence):
            return NotImplemented
        return self._order == other.order and np.array_equal(self._exponents, other.exponents)

    def __hash__(self) -> int:
        return hash((self._order, self._exponents.tobytes()))

    def __repr__(self) -> str:
        head = " ".join(str(e) for e in self._exponents[:16].tolist())
        more = " ..." if len(self) > 16 else ""
        return f"CoefficientSequence(order={self._order}, len={len(self)}, exponents=[{head}{more}])"

    def signs(self) -> np.ndarray:
        """+1/-1 values of an order-2 sequence."""
        if self._order != 2:
            raise AlphabetMismatchError("signs are only defined for order 2")
        return 1 - 2 * self._exponents


def factor_map(word: Word) -> CoefficientSequence:
    """Send each letter with b bars to omega**b."""
    if len(word) == 0:
        raise RangeError("factor_map needs a nonempty word")
    return CoefficientSequence(word.bars, word.order)


def parse_token(token: str, order: int, position: Optional[int] = None,
                base_count: Optional[int] = None) -> Letter:
    """Parse one `<letter><bars>` token; a bare letter means zero bars."""
    if not token or token[0] not in BASE_LETTERS:
        raise WordParseError(f"unknown base letter in {token!r}", position)
    base = BASE_LETTERS.index(token[0])
    if base_count is not None and base >= base_count:
        raise WordParseError(f"base letter {token[0]} outside an alphabet of {base_count}", position)
    digits = token[1:]
    if digits and not (digits.isascii() and digits.isdigit()):
        raise WordParseError(f"bar count in {token!r} is not a number", position)
    bars = int(digits) if digits else 0
    if bars >= order:
        raise WordParseError(f"bar count {bars} must be below the order {order}", position)
    return Letter(base=base, bars=bars, order=order)


def parse_word(text: str, order: int = 2, base_count: Optional[int] = None) -> Word:
    """Parse whitespace-separated tokens such as "A0 B1" into a word.

    Args:
        text: The token text.
        order: The bar order n of the alphabet.
        base_count: Optional number of base letters; larger bases are rejected.

    Returns:
        The parsed word.

    Raises:
        WordParseError: naming the 1-based position of the offending token.
    """
    letters = [
        parse_token(token, order, position, base_count)
        for position, token in enumerate(text.split(), start=1)
    ]
    return Word([l.base for l in letters], [l.bars for l in letters], order)


def format_word(word: Word) -> str:
    return " ".join(word.tokens())


def word_to_json(word: Word) -> str:
    return json.dumps(word.tokens())


def word_from_json(text: str, order: int = 2) -> Word:
    tokens = json.loads(text)
    if not isinstance(tokens, list):
        raise WordParseError("expected a JSON array of tokens")
    return parse_word(" ".join(str(t) for t in tokens), order)


def subword_set(word: Word, length: int) -> frozenset:
    """All contiguous factors of the given length.

    Iterating sorted(result) yields the factors in lexicographic (base, bars)
    order.
    """
    if not 1 <= length <= len(word):
        raise RangeError(f"subword length {length} outside 1..{len(word)}")
    windows = sliding_window_view(word.codes, length)
    unique = np.unique(windows, axis=0)
    order = word.order
    return frozenset(Word(row // order, row % order, order) for row in unique)

"""
Constant-length, bar-equivariant substitution rules.

A rule stores the images of the unbarred base letters only. The image of a
letter with t bars is the base image with t bars added to every letter, so
bar-equivariance holds by construction.
"""

import logging
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .alphabet import BASE_LETTERS, Letter, Word, format_word, parse_word
from .errors import (
    AlphabetMismatchError,
    NonPrimitiveError,
    NotSelfExtendingError,
    RangeError,
    SpecParseError,
)
from .linalg import eigenvalues as _eigenvalues
from .linalg import matrix_power
from .recurrence import ConstructionSpec, Family, SignProgram

logger = logging.getLogger("aperiodic_rs.substitution")


class RuleKind(str, Enum):
    """Named rule constructors."""
    S_PLUS = "s_plus"
    S_MINUS = "s_minus"
    FOURIER = "fourier"


class SubstitutionRule:
    """A constant-length substitution on B base letters with n bar flavours each."""

    __slots__ = ("_bases", "_bars", "_order", "name")

    def __init__(self, bases: np.ndarray, bars: np.ndarray, order: int, name: str = ""):
        bases = np.array(bases, dtype=np.int64)
        bars = np.mod(np.array(bars, dtype=np.int64), order)
        if bases.ndim != 2 or bases.shape != bars.shape:
            raise RangeError("images must form a (base letters x length) table")
        if bases.min() < 0 or bases.max() >= bases.shape[0]:
            raise AlphabetMismatchError("image letters must come from the rule's own alphabet")
        bases.flags.writeable = False
        bars.flags.writeable = False
        self._bases = bases
        self._bars = bars
        self._order = order
        self.name = name

    @classmethod
    def from_images(cls, images: Dict[str, str], order: int, name: str = "") -> "SubstitutionRule":
        """Build a rule from token images of the base letters, e.g. {"A": "A0 B0", "B": "A0 B1"}."""
        count = len(images)
        words = []
        for index in range(count):
            key = BASE_LETTERS[index]
            if key not in images:
                raise SpecParseError(f"missing image for base letter {key}")
            words.append(parse_word(images[key], order, base_count=count))
        lengths = {len(w) for w in words}
        if len(lengths) != 1:
            raise RangeError("all base-letter images must have the same length")
        return cls(
            np.stack([w.bases for w in words]), np.stack([w.bars for w in words]), order, name
        )

    @property
    def base_count(self) -> int:
        return int(self._bases.shape[0])

    @property
    def order(self) -> int:
        return self._order

    @property
    def length(self) -> int:
        return int(self._bases.shape[1])

    @property
    def size(self) -> int:
        """Total number of letters B * n."""
        return self.base_count * self._order

    def same_alphabet(self, other: "SubstitutionRule") -> bool:
        return self.base_count == other.base_count and self._order == other.order

    def letters(self) -> List[Letter]:
        """All letters in (base, bars) order."""
        return [
            Letter(base=b, bars=t, order=self._order)
            for b in range(self.base_count)
            for t in range(self._order)
        ]

    def image(self, letter: Letter) -> Word:
        if letter.order != self._order or letter.base >= self.base_count:
            raise AlphabetMismatchError(f"letter {letter} is not in the alphabet of {self.name or 'rule'}")
        return Word(self._bases[letter.base], (self._bars[letter.base] + letter.bars) % self._order, self._order)

    def image_codes(self, code: int) -> Tuple[int, ...]:
        base, bars = divmod(code, self._order)
        return tuple((self._bases[base] * self._order + (self._bars[base] + bars) % self._order).tolist())

    def __call__(self, word: Word) -> Word:
        return apply(self, word)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubstitutionRule):
            return NotImplemented
        return (
            self._order == other.order
            and np.array_equal(self._bases, other._bases)
            and np.array_equal(self._bars, other._bars)
        )

    def __hash__(self) -> int:
        return hash((self._order, self._bases.tobytes(), self._bars.tobytes()))

    def __repr__(self) -> str:
        return f"SubstitutionRule({self.name or '?'}, letters={self.size}, length={self.length})"

    def describe(self) -> List[str]:
        """One "X ↦ image" line per letter, in token format."""
        return [f"{letter.token} -> {format_word(self.image(letter))}" for letter in self.letters()]


def make_rule(kind, n: Optional[int] = None) -> SubstitutionRule:
    """Construct S+, S- or the order-n Fourier rule.

    Args:
        kind: A RuleKind (or its string value).
        n: The Fourier order, required for RuleKind.FOURIER.

    Returns:
        The rule. For the Fourier rule, base letter j maps to the word whose
        r-th letter is base r with (r-1)(j-1) bars.
    """
    kind = RuleKind(kind)
    if kind == RuleKind.S_PLUS:
        return SubstitutionRule([[0, 1], [0, 1]], [[0, 0], [0, 1]], 2, "S+")
    if kind == RuleKind.S_MINUS:
        return SubstitutionRule([[0, 1], [0, 1]], [[0, 1], [0, 0]], 2, "S-")
    if n is None or n < 2:
        raise RangeError(f"Fourier rules need n >= 2, got {n}")
    r = np.arange(n)
    bases = np.tile(r, (n, 1))
    bars = np.outer(r, r) % n
    return SubstitutionRule(bases, bars, n, f"F{n}")


def compose(f: SubstitutionRule, g: SubstitutionRule) -> SubstitutionRule:
    """The rule a -> f(g(a))."""
    if not f.same_alphabet(g):
        raise AlphabetMismatchError(f"cannot compose {f.name} and {g.name}: alphabets differ")
    images = [apply(f, g.image(Letter(base=b, bars=0, order=g.order))) for b in range(g.base_count)]
    name = _compose_name(f.name, g.name)
    return SubstitutionRule(
        np.stack([w.bases for w in images]), np.stack([w.bars for w in images]), f.order, name
    )


def _compose_name(left: str, right: str) -> str:
    if left.startswith("S") and right.startswith("S") and left != "S" and right != "S":
        return "S" + left[1:] + right[1:]
    return f"{left}o{right}"


def rule_from_signs(program: SignProgram) -> SubstitutionRule:
    """S_{sigma_0} o S_{sigma_1} o ... o S_{sigma_{p-1}} for one period of the program."""
    rules = [make_rule(RuleKind.S_PLUS if s == 1 else RuleKind.S_MINUS) for s in program.signs]
    rule = rules[-1]
    for left in reversed(rules[:-1]):
        rule = compose(left, rule)
    return rule


def rule_power(rule: SubstitutionRule, m: int) -> SubstitutionRule:
    """The m-fold self-composition (m >= 1)."""
    if m < 1:
        raise RangeError(f"power must be at least 1, got {m}")
    result = rule
    for _ in range(m - 1):
        result = compose(rule, result)
    result.name = f"{rule.name}^{m}" if m > 1 else rule.name
    return result


def parse_rule(text: str) -> SubstitutionRule:
    """Parse "s_plus" / "s+", "s_minus" / "s-", "rs", "signs:+-..." or "fourier:n"."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ("s_plus", "s+", "rs"):
        return make_rule(RuleKind.S_PLUS)
    if lowered in ("s_minus", "s-"):
        return make_rule(RuleKind.S_MINUS)
    if lowered.startswith("signs:"):
        word = text[len("signs:"):]
        if not word:
            raise SpecParseError("empty sign word", len(text) + 1)
        for offset, ch in enumerate(word):
            if ch not in "+-":
                raise SpecParseError(f"unexpected sign character {ch!r}", len("signs:") + offset + 1)
        return rule_from_signs(SignProgram.periodic(word))
    if lowered.startswith("fourier:"):
        digits = text[len("fourier:"):]
        if not digits.isdigit():
            raise SpecParseError(f"expected an integer order, got {digits!r}", len("fourier:") + 1)
        n = int(digits)
        if n < 2:
            raise SpecParseError(f"Fourier order must be at least 2, got {n}", len("fourier:") + 1)
        return make_rule(RuleKind.FOURIER, n)
    raise SpecParseError(f"unknown rule {text!r}", 1)


def apply(rule: SubstitutionRule, word: Word) -> Word:
    """Concatenate the images of the letters of word."""
    if word.order != rule.order:
        raise AlphabetMismatchError(f"word has order {word.order}, rule {rule.name} has order {rule.order}")
    if len(word) and word.bases.max() >= rule.base_count:
        raise AlphabetMismatchError(f"word uses base letters outside the alphabet of {rule.name}")
    bases = rule._bases[word.bases]
    bars = (rule._bars[word.bases] + word.bars[:, None]) % rule.order
    return Word(bases.reshape(-1), bars.reshape(-1), rule.order)


def _check_seed(rule: SubstitutionRule, seed: Letter) -> None:
    if rule.length < 2:
        raise RangeError("fixed points need a rule of length at least 2")
    if rule.image(seed)[0] != seed:
        raise NotSelfExtendingError(f"{seed.token} is not the first letter of its image under {rule.name}")


def fixed_point_prefix(rule: SubstitutionRule, seed: Letter, length: int) -> Word:
    """The first `length` letters of the one-sided fixed point grown from seed."""
    _check_seed(rule, seed)
    if length < 0:
        raise RangeError(f"prefix length must be non-negative, got {length}")
    word = Word.from_letters([seed])
    while len(word) < length:
        word = apply(rule, word)
    return word[:length]


def letter_at(rule: SubstitutionRule, seed: Letter, pos: int) -> Letter:
    """Letter number pos (1-based) of the fixed point, by walking base-L digits of pos-1."""
    _check_seed(rule, seed)
    if pos < 1:
        raise RangeError(f"positions start at 1, got {pos}")
    digits = []
    index = pos - 1
    while index:
        index, digit = divmod(index, rule.length)
        digits.append(digit)
    base, bars = seed.base, seed.bars
    for digit in reversed(digits):
        base, bars = int(rule._bases[base, digit]), int((rule._bars[base, digit] + bars) % rule.order)
    return Letter(base=base, bars=bars, order=rule.order)


class SubstitutionMatrix:
    """M[a][b] = number of occurrences of letter a in the image of letter b."""

    __slots__ = ("matrix", "labels", "length")

    def __init__(self, matrix: np.ndarray, labels: Sequence[str], length: int):
        self.matrix = np.asarray(matrix, dtype=np.int64)
        self.labels = list(labels)
        self.length = length

    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def power(self, m: int) -> "SubstitutionMatrix":
        return SubstitutionMatrix(np.array(matrix_power(self.matrix, m), dtype=object), self.labels, self.length ** m)

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.labels)]
        for label, row in zip(self.labels, self.matrix.tolist()):
            lines.append(label + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"


def substitution_matrix(rule: SubstitutionRule) -> SubstitutionMatrix:
    size = rule.size
    matrix = np.zeros((size, size), dtype=np.int64)
    for letter in rule.letters():
        codes = rule.image_codes(letter.code)
        np.add.at(matrix[:, letter.code], list(codes), 1)
    return SubstitutionMatrix(matrix, [l.token for l in rule.letters()], rule.length)


def eigenvalues(matrix: SubstitutionMatrix) -> List[complex]:
    """Eigenvalue multiset sorted by (-|z|, arg z)."""
    if matrix.matrix.shape[0] > 16:
        logger.warning(f"{matrix.matrix.shape[0]}x{matrix.matrix.shape[0]} matrix is beyond the validated size")
    return _eigenvalues(matrix.matrix)


def reachable_letters(rule: SubstitutionRule, seed: Letter) -> List[int]:
    """Codes of letters occurring in some iterate of seed, sorted."""
    seen = {seed.code}
    frontier = [seed.code]
    while frontier:
        code = frontier.pop()
        for nxt in rule.image_codes(code):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def is_primitive(rule: SubstitutionRule, seed: Letter) -> bool:
    """Positivity of a power of the matrix restricted to the seed's reachable letters."""
    codes = reachable_letters(rule, seed)
    sub = substitution_matrix(rule).matrix[np.ix_(codes, codes)]
    pattern = (sub > 0).astype(np.int64)
    size = len(codes)
    power = pattern.copy()
    # Wielandt bound
    for _ in range((size - 1) ** 2 + 1):
        if np.all(power > 0):
            return True
        power = ((power @ pattern) > 0).astype(np.int64)
    return bool(np.all(power > 0))


def _factors(words: Iterable[Tuple[int, ...]], length: int) -> Set[Tuple[int, ...]]:
    found: Set[Tuple[int, ...]] = set()
    for word in words:
        if len(word) < length:
            continue
        windows = sliding_window_view(np.asarray(word, dtype=np.int64), length)
        found.update(map(tuple, np.unique(windows, axis=0).tolist()))
    return found


def _apply_codes(rule: SubstitutionRule, word: Tuple[int, ...]) -> Tuple[int, ...]:
    out: List[int] = []
    for code in word:
        out.extend(rule.image_codes(code))
    return tuple(out)


def legal_two_words(rule: SubstitutionRule, seed: Letter) -> Set[Tuple[int, int]]:
    """Closure of the 2-letter factors under the rule, seeded by single-letter images."""
    codes = reachable_letters(rule, seed)
    legal = _factors((rule.image_codes(c) for c in codes), 2)
    frontier = list(legal)
    while frontier:
        pair = frontier.pop()
        for factor in _factors([_apply_codes(rule, pair)], 2):
            if factor not in legal:
                legal.add(factor)
                frontier.append(factor)
    return legal


def _to_word(codes: Tuple[int, ...], order: int) -> Word:
    array = np.asarray(codes, dtype=np.int64)
    return Word(array // order, array % order, order)


def legal_words(rule: SubstitutionRule, length: int, seed: Optional[Letter] = None) -> FrozenSet[Word]:
    """Length-`length` factors of the fixed-point language of rule.

    Raises:
        NonPrimitiveError: if the rule is not primitive on the seed's reachable letters.
    """
    if length < 1:
        raise RangeError(f"word length must be at least 1, got {length}")
    seed = seed or Letter(base=0, bars=0, order=rule.order)
    if not is_primitive(rule, seed):
        raise NonPrimitiveError(
            f"{rule.name} is not primitive on the letters reachable from {seed.token}; "
            "scan a fixed-point prefix with subword_set instead"
        )
    if length == 1:
        return frozenset(_to_word((c,), rule.order) for c in reachable_letters(rule, seed))

    current = sorted(legal_two_words(rule, seed))
    found = _factors(current, length)
    span = 1
    # every legal word of this length sits inside the image of a legal 2-word
    while span < length - 1:
        current = sorted({_apply_codes(rule, w) for w in current})
        span *= rule.length
        found |= _factors(current, length)
    logger.debug(f"{len(found)} legal words of length {length} for {rule.name}")
    return frozenset(_to_word(w, rule.order) for w in found)


def preimages(rule: SubstitutionRule, exponents: Sequence[int], seed: Optional[Letter] = None) -> FrozenSet[Word]:
    """Legal words whose factor-map image is the given exponent word."""
    target = tuple(int(e) % rule.order for e in exponents)
    candidates = legal_words(rule, len(target), seed)
    return frozenset(w for w in candidates if tuple(w.bars.tolist()) == target)


def construction_word(spec: ConstructionSpec, component: int = 1) -> Word:
    """The level-k word whose factor-map image is component `component` of the construction.

    Binary constructions apply S_{sigma_0} o ... o S_{sigma_{k-1}} to base
    letter component-1 (so component 2 grows from B); Fourier constructions
    apply the order-n Fourier rule k times.
    """
    if not 1 <= component <= spec.order:
        raise RangeError(f"component {component} outside 1..{spec.order}")
    word = Word.from_letters([Letter(base=component - 1, bars=0, order=spec.order)])
    if spec.family == Family.FOURIER:
        rule = make_rule(RuleKind.FOURIER, spec.order)
        for _ in range(spec.level):
            word = apply(rule, word)
        return word
    rules = {1: make_rule(RuleKind.S_PLUS), -1: make_rule(RuleKind.S_MINUS)}
    for step in reversed(range(spec.level)):
        word = apply(rules[spec.signs.sign_at(step)], word)
    return word

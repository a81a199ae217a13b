"""Words of the free monoid and their block/divider structure.

A word is a finite sequence of letters drawn from a countable alphabet of
interned tokens (``x``, ``y``, ``z1``, ``t3``, ...).  On top of elementary
statistics (occurrence counts, content, simple and multiple letters) this
module computes the canonical decomposition of a word into alternating
dividers and blocks: the dividers are the word's simple letters in order of
occurrence, preceded by a sentinel for the empty prefix, and the blocks are
the (possibly empty) stretches of multiple letters between them.  The
positional functions built on the decomposition (``divider_before``,
``last_divider``, ``prefix_length``, ``integrated``) are the raw material for
every word-problem criterion in :mod:`varietal.oracles`.

Everything here is an immutable value and every function is pure, so the
whole module is safe for concurrent use.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

LAMBDA = "λ"

LETTER_RE = re.compile(r"[a-z][0-9]*\Z")
_TOKEN_RE = re.compile(r"([a-z][0-9]*)(?:\^([0-9]+))?\Z")


class WordSyntaxError(ValueError):
    """Rejected word/identity text; carries the offending line and column."""

    def __init__(self, message: str, *, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class Word(tuple):
    """An immutable word: a tuple of letter tokens.  ``Word()`` is λ."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[str] = ()):
        return super().__new__(cls, letters)

    def __add__(self, other) -> "Word":
        return Word(tuple.__add__(self, tuple(other)))

    def __mul__(self, k) -> "Word":
        return Word(tuple.__mul__(self, k))

    def __getitem__(self, index):
        item = tuple.__getitem__(self, index)
        return Word(item) if isinstance(index, slice) else item

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def reversed(self) -> "Word":
        return Word(tuple.__getitem__(self, slice(None, None, -1)))


EMPTY = Word()


def parse_word(text: str, *, line: int = 1, column_offset: int = 0) -> Word:
    """Parse the strict word format: whitespace-separated ``tok`` or ``tok^k``.

    A token is a lowercase letter optionally followed by digits (``x``,
    ``z12``); ``^k`` with k >= 1 repeats it.  Run-together strings such as
    ``xyx`` are rejected.  ``λ`` or blank text denotes the empty word.
    """
    if text.strip() in ("", LAMBDA):
        return EMPTY
    letters: list[str] = []
    for m in re.finditer(r"\S+", text):
        token = m.group(0)
        col = column_offset + m.start() + 1
        tm = _TOKEN_RE.match(token)
        if tm is None:
            raise WordSyntaxError(
                f"bad token {token!r}: expected letter like 'x' or 'z1', "
                "optionally with '^k'",
                line=line,
                column=col,
            )
        name, exponent = tm.group(1), tm.group(2)
        k = 1 if exponent is None else int(exponent)
        if k < 1:
            raise WordSyntaxError(
                f"exponent must be >= 1 in {token!r}", line=line, column=col
            )
        letters.extend((name,) * k)
    return Word(letters)


def format_word(w: Iterable[str]) -> str:
    """Render in the parseable text format, compressing runs to ``tok^k``."""
    w = tuple(w)
    if not w:
        return LAMBDA
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return " ".join(parts)


_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def compact_word(w: Iterable[str]) -> str:
    """Dense human rendering: juxtaposed tokens, superscript exponents."""
    w = tuple(w)
    if not w:
        return LAMBDA
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        exp = "" if j - i == 1 else str(j - i).translate(_SUPERSCRIPTS)
        parts.append(w[i] + exp)
        i = j
    return "".join(parts)


def occurrences(w: Word, x: str) -> int:
    """Number of positions of ``w`` holding the letter ``x``."""
    return tuple(w).count(x)


@dataclass(frozen=True)
class LetterClasses:
    """Occurrence classes of a word's letters.

    ``simple`` letters occur exactly once, ``multiple`` at least twice;
    ``con1``/``con2``/``con3`` hold the letters occurring exactly 1, 2 and 3
    times.  ``simple`` and ``multiple`` partition ``content``.
    """

    content: frozenset[str]
    simple: frozenset[str]
    multiple: frozenset[str]
    con1: frozenset[str]
    con2: frozenset[str]
    con3: frozenset[str]


def letter_classes(w: Word) -> LetterClasses:
    counts = Counter(w)
    content = frozenset(counts)
    simple = frozenset(c for c, k in counts.items() if k == 1)
    return LetterClasses(
        content=content,
        simple=simple,
        multiple=content - simple,
        con1=simple,
        con2=frozenset(c for c, k in counts.items() if k == 2),
        con3=frozenset(c for c, k in counts.items() if k == 3),
    )


def content(w: Word) -> frozenset[str]:
    return frozenset(w)


def simple_letters(w: Word) -> frozenset[str]:
    return letter_classes(w).simple


def multiple_letters(w: Word) -> frozenset[str]:
    return letter_classes(w).multiple


def project(w: Word, letters: Iterable[str]) -> Word:
    """Subsequence of ``w`` keeping exactly the given letters."""
    keep = frozenset(letters)
    return Word(c for c in w if c in keep)


def reverse(w: Word) -> Word:
    """Letters in reverse order; an involutive antihomomorphism."""
    return Word(reversed(tuple(w)))


@dataclass(frozen=True)
class DividerToken:
    """A divider of a decomposition, compared positionally by ``index``.

    ``letter`` is ``None`` exactly for the sentinel divider (index 0) that
    precedes the first block; otherwise it is a simple letter of the source
    word.  Cross-word comparisons (the oracles) go by ``name``.
    """

    index: int
    letter: str | None

    @property
    def is_sentinel(self) -> bool:
        return self.letter is None

    @property
    def name(self) -> str:
        return LAMBDA if self.letter is None else self.letter

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Decomposition:
    """Alternating dividers and blocks; ``dividers[0]`` is the sentinel.

    Reassembling ``dividers[0] blocks[0] dividers[1] blocks[1] ...`` (the
    sentinel read as the empty word) reproduces the source word; every block
    letter is multiple in the source and the non-sentinel dividers are
    exactly its simple letters in order of occurrence.
    """

    dividers: tuple[DividerToken, ...]
    blocks: tuple[Word, ...]

    def __post_init__(self):
        if len(self.dividers) != len(self.blocks):
            raise ValueError("dividers and blocks must alternate one-to-one")
        if not self.dividers or not self.dividers[0].is_sentinel:
            raise ValueError("decomposition must start with the sentinel divider")

    def reassemble(self) -> Word:
        letters: list[str] = []
        for d, block in zip(self.dividers, self.blocks):
            if d.letter is not None:
                letters.append(d.letter)
            letters.extend(block)
        return Word(letters)

    def render(self) -> str:
        """E.g. ``λ·(yx)·s·(xy²)·t·(λ)·z·(y)``; blocks are parenthesized."""
        parts = []
        for d, block in zip(self.dividers, self.blocks):
            parts.append(d.name)
            parts.append(f"({compact_word(block)})")
        return "·".join(parts)


def decompose(w: Word) -> Decomposition:
    """The unique divider/block decomposition of ``w``."""
    simple = letter_classes(w).simple
    dividers = [DividerToken(0, None)]
    blocks: list[list[str]] = [[]]
    for c in w:
        if c in simple:
            dividers.append(DividerToken(len(dividers), c))
            blocks.append([])
        else:
            blocks[-1].append(c)
    return Decomposition(tuple(dividers), tuple(Word(b) for b in blocks))


def divider_profile(w: Word) -> dict[str, tuple[DividerToken, ...]]:
    """Per letter, the right-most divider preceding each of its occurrences.

    ``divider_profile(w)[x][i-1]`` is the divider preceding the i-th
    occurrence of ``x``; a divider letter does not precede itself.
    """
    simple = letter_classes(w).simple
    profile: dict[str, list[DividerToken]] = {}
    last = DividerToken(0, None)
    index = 0
    for c in w:
        profile.setdefault(c, []).append(last)
        if c in simple:
            index += 1
            last = DividerToken(index, c)
    return {c: tuple(v) for c, v in profile.items()}


def divider_before(w: Word, x: str, i: int) -> DividerToken:
    """The right-most divider of ``w`` preceding the i-th occurrence of ``x``."""
    profile = divider_profile(w)
    if x not in profile:
        raise ValueError(f"letter {x!r} does not occur in {format_word(w)!r}")
    if not 1 <= i <= len(profile[x]):
        raise ValueError(
            f"occurrence index {i} out of range for {x!r} "
            f"(occurs {len(profile[x])} times)"
        )
    return profile[x][i - 1]


def last_divider(w: Word, x: str) -> DividerToken:
    """The divider preceding the latest occurrence of ``x``."""
    return divider_before(w, x, occurrences(w, x))


def prefix_length(w: Word, x: str, i: int) -> int:
    """Length of the shortest prefix of ``w`` containing i occurrences of ``x``."""
    if i < 1:
        raise ValueError("occurrence index must be >= 1")
    seen = 0
    for pos, c in enumerate(w, start=1):
        if c == x:
            seen += 1
            if seen == i:
                return pos
    raise ValueError(
        f"letter {x!r} occurs {seen} times in {format_word(w)!r}, need {i}"
    )


def integrated(w: Word, x: str, y: str) -> bool:
    """Whether the divider intervals of two multiple letters interlock.

    With i, j the divider indices before the second and the latest occurrence
    of ``x`` and i', j' the same for ``y``, the letters are integrated iff
    i' <= i <= j' or i <= i' <= j.
    """
    classes = letter_classes(w)
    for c in (x, y):
        if c not in classes.multiple:
            raise ValueError(f"letter {c!r} is not multiple in {format_word(w)!r}")
    profile = divider_profile(w)
    i = profile[x][1].index
    j = profile[x][-1].index
    i2 = profile[y][1].index
    j2 = profile[y][-1].index
    return i2 <= i <= j2 or i <= i2 <= j

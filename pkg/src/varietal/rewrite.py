"""One-step deduction, bounded derivation search and certified rewrites.

An identity applies to a word by choosing a substitution (letters may map to
any word, including the empty one), an instance of one side somewhere inside
the word, and replacing it with the matching instance of the other side.
``one_step`` enumerates every word reachable by a single such application;
``derive`` runs a deterministic bidirectional breadth-first search and
returns a replayable certificate; ``closure`` collects everything reachable
within bounds.

Searching requires every identity of the system to have the same letter
content on both sides (otherwise a single application could invent arbitrary
subwords and the step relation would not be finitely enumerable); all the
stock bases except the trivial variety's satisfy this.

The macro rewrites at the bottom (``absorb_square``, ``swap_adjacent``,
``normalize_con3``) implement the three word surgeries that are valid in the
top variety J whenever their side conditions hold; each result is a single
word whose equation with the input passes the necessary filter and, on small
instances, is confirmed by ``derive``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .identities import Identity, IdentitySystem
from .words import (
    Word,
    format_word,
    integrated,
    letter_classes,
    multiple_letters,
)


@dataclass(frozen=True)
class Bounds:
    """Search bounds: derivation depth cap and word length cap."""

    max_steps: int
    max_len: int

    def __post_init__(self):
        if self.max_steps < 1 or self.max_len < 1:
            raise ValueError("bounds must be >= 1")

    def to_json(self) -> dict:
        return {"max_steps": self.max_steps, "max_len": self.max_len}


@dataclass(frozen=True)
class Match:
    """A factorization ``subject = prefix · ξ(pattern) · suffix``."""

    prefix: Word
    images: tuple[tuple[str, Word], ...]
    suffix: Word
    side: str = "lhs"

    def substitution(self) -> dict[str, Word]:
        return dict(self.images)


@dataclass(frozen=True)
class Step:
    """One rewrite: which identity, which direction, and the match used."""

    rule: str
    direction: str
    prefix: Word
    images: tuple[tuple[str, Word], ...]
    suffix: Word

    def flipped(self) -> "Step":
        return Step(
            self.rule,
            "rl" if self.direction == "lr" else "lr",
            self.prefix,
            self.images,
            self.suffix,
        )

    def to_json(self, word: Word) -> dict:
        return {
            "word": format_word(word),
            "rule": self.rule,
            "direction": self.direction,
            "prefix": format_word(self.prefix),
            "images": {c: format_word(im) for c, im in self.images},
            "suffix": format_word(self.suffix),
        }


@dataclass(frozen=True)
class DerivationStep:
    word: Word
    step: Step


@dataclass(frozen=True)
class Derivation:
    """A checked chain of elementary rewrites from ``start`` to ``end``."""

    start: Word
    steps: tuple[DerivationStep, ...]

    @property
    def end(self) -> Word:
        return self.steps[-1].word if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def __bool__(self) -> bool:
        # an empty derivation (trivial identity) is still a success
        return True

    def words(self) -> tuple[Word, ...]:
        return (self.start, *(s.word for s in self.steps))

    def to_json(self) -> list[dict]:
        head = {
            "word": format_word(self.start),
            "rule": None,
            "direction": None,
            "prefix": None,
            "images": None,
            "suffix": None,
        }
        return [head, *(s.step.to_json(s.word) for s in self.steps)]

    def render_chain(self) -> str:
        lines = [format_word(self.start)]
        for s in self.steps:
            lines.append(f"  ≈ [{s.step.rule}]  {format_word(s.word)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class NotFound:
    """Search exhausted its bounds; explicitly not a disproof."""

    bounds: Bounds
    reason: str = "bounds exhausted"

    def __bool__(self) -> bool:
        return False


DERIVATION_SCHEMA = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "required": ["word", "rule", "direction", "prefix", "images", "suffix"],
        "properties": {
            "word": {"type": "string"},
            "rule": {"type": ["string", "null"]},
            "direction": {"enum": ["lr", "rl", None]},
            "prefix": {"type": ["string", "null"]},
            "images": {
                "type": ["object", "null"],
                "additionalProperties": {"type": "string"},
            },
            "suffix": {"type": ["string", "null"]},
        },
    },
}


def _enumerate_matches(pattern: Sequence[int], s: bytes):
    """All ``(prefix_end, images, suffix_start)`` factorizations of ``s``.

    ``pattern`` is a sequence of variable ids; images may be empty.  The
    enumeration order (ascending prefix, then ascending image lengths along
    the recursion) is deterministic and is the canonical match order.
    """
    n = len(s)
    m = len(pattern)
    out: list[tuple[int, tuple[bytes, ...], int]] = []
    if m == 0:
        return [(start, (), start) for start in range(n + 1)]
    nvars = max(pattern) + 1
    images: list[bytes | None] = [None] * nvars
    find = s.find

    def needed(k: int) -> int:
        total = 0
        for j in range(k, m):
            im = images[pattern[j]]
            if im is not None:
                total += len(im)
        return total

    def rec(k: int, pos: int, start: int) -> None:
        if k == m:
            out.append((start, tuple(images), pos))  # type: ignore[arg-type]
            return
        v = pattern[k]
        im = images[v]
        if im is not None:
            L = len(im)
            if s[pos : pos + L] == im:
                rec(k + 1, pos + L, start)
            return
        later = 0
        for j in range(k + 1, m):
            if pattern[j] == v:
                later += 1
        budget = n - pos - needed(k + 1)
        nxt = images[pattern[k + 1]] if k + 1 < m else None
        if nxt:
            # free variable followed by a non-empty bound image: enumerate the
            # bound image's occurrences instead of all candidate lengths
            j = find(nxt, pos)
            while j != -1:
                L = j - pos
                if L * (later + 1) > budget:
                    break
                cand = s[pos:j]
                if not (later and L and find(cand, j) == -1):
                    images[v] = cand
                    rec(k + 2, j + len(nxt), start)
                    images[v] = None
                j = find(nxt, j + 1)
            return
        max_len = budget // (later + 1) if later else budget
        for L in range(max_len + 1):
            cand = s[pos : pos + L]
            if later and L and find(cand, pos + L) == -1:
                continue
            images[v] = cand
            rec(k + 1, pos + L, start)
            images[v] = None

    for start in range(n + 1):
        rec(0, start, start)
    return out


@dataclass(frozen=True)
class _Rule:
    identity: Identity
    direction: str
    pattern_from: tuple[int, ...]
    pattern_to: tuple[int, ...]
    var_letters: tuple[str, ...]


class _Engine:
    """Byte-encoded rewriting over a fixed alphabet and identity system.

    Letter content is invariant under one-step rewriting by content-balanced
    identities, so the alphabet of the seed word(s) suffices for a whole run.
    """

    def __init__(self, system: IdentitySystem, alphabet: Iterable[str]):
        self.system = system
        self.letters = tuple(sorted(set(alphabet)))
        if len(self.letters) > 255:
            raise ValueError("alphabet too large for the byte encoder")
        self._index = {c: i for i, c in enumerate(self.letters)}
        self.rules: list[_Rule] = []
        for identity in system:
            if identity.is_trivial:
                continue
            if set(identity.lhs) != set(identity.rhs):
                raise ValueError(
                    f"identity {identity.text!r} has different letter content "
                    "on its two sides; deduction search requires balanced sides"
                )
            var_letters = tuple(dict.fromkeys(identity.lhs))
            vidx = {c: i for i, c in enumerate(var_letters)}
            lhs = tuple(vidx[c] for c in identity.lhs)
            rhs = tuple(vidx[c] for c in identity.rhs)
            self.rules.append(_Rule(identity, "lr", lhs, rhs, var_letters))
            self.rules.append(_Rule(identity, "rl", rhs, lhs, var_letters))
        self._memo: dict[bytes, dict[bytes, tuple]] = {}

    def encode(self, w: Word) -> bytes:
        return bytes(self._index[c] for c in w)

    def decode(self, s: bytes) -> Word:
        return Word(self.letters[b] for b in s)

    def successors(self, s: bytes) -> dict[bytes, tuple]:
        """result -> (rule_index, prefix_end, images, suffix_start), first wins."""
        cached = self._memo.get(s)
        if cached is not None:
            return cached
        out: dict[bytes, tuple] = {}
        join = b"".join
        for ri, rule in enumerate(self.rules):
            pattern_to = rule.pattern_to
            for prefix_end, images, suffix_start in _enumerate_matches(
                rule.pattern_from, s
            ):
                result = (
                    s[:prefix_end]
                    + join([images[v] for v in pattern_to])
                    + s[suffix_start:]
                )
                if result != s and result not in out:
                    out[result] = (ri, prefix_end, images, suffix_start)
        self._memo[s] = out
        return out

    def step(self, s: bytes, info: tuple) -> Step:
        ri, prefix_end, images, suffix_start = info
        rule = self.rules[ri]
        return Step(
            rule=rule.identity.label,
            direction=rule.direction,
            prefix=self.decode(s[:prefix_end]),
            images=tuple(
                (c, self.decode(images[i])) for i, c in enumerate(rule.var_letters)
            ),
            suffix=self.decode(s[suffix_start:]),
        )


_ENGINE_CACHE: dict[tuple, _Engine] = {}
_ENGINE_CACHE_MAX = 16


def _engine_for(system: IdentitySystem, alphabet: frozenset[str]) -> _Engine:
    """Engine shared across calls; the successor memo amortizes repeat runs.

    An engine over a superset alphabet is reusable: its letter encoding is
    order-preserving, so byte-level comparisons agree with letter-level ones
    and every result is independent of which cached engine served the call.
    """
    for (name, size, _), engine in _ENGINE_CACHE.items():
        if (
            name == system.name
            and size == len(system)
            and engine.system is system
            and alphabet <= set(engine.letters)
        ):
            return engine
    engine = _Engine(system, alphabet)
    if len(_ENGINE_CACHE) >= _ENGINE_CACHE_MAX:
        _ENGINE_CACHE.pop(next(iter(_ENGINE_CACHE)))
    _ENGINE_CACHE[(system.name, len(system), tuple(sorted(alphabet)))] = engine
    return engine


def match_instances(pattern: Word, subject: Word) -> tuple[Match, ...]:
    """Every substitution-and-context factorization of ``subject`` by ``pattern``.

    Images may be empty; matches are deduplicated by (prefix, images, suffix)
    and returned in canonical order.
    """
    var_letters = tuple(dict.fromkeys(pattern))
    vidx = {c: i for i, c in enumerate(var_letters)}
    encoded_vars = tuple(vidx[c] for c in pattern)
    alphabet = tuple(sorted(set(subject)))
    index = {c: i for i, c in enumerate(alphabet)}
    s = bytes(index[c] for c in subject)

    def decode(bs: bytes) -> Word:
        return Word(alphabet[b] for b in bs)

    matches = []
    for prefix_end, images, suffix_start in _enumerate_matches(encoded_vars, s):
        matches.append(
            Match(
                prefix=decode(s[:prefix_end]),
                images=tuple(
                    (c, decode(images[i])) for i, c in enumerate(var_letters)
                ),
                suffix=decode(s[suffix_start:]),
            )
        )
    return tuple(matches)


def one_step(w: Word, system: IdentitySystem) -> tuple[tuple[Word, Step], ...]:
    """All words one application away, deduplicated by the resulting word."""
    engine = _engine_for(system, frozenset(w))
    s = engine.encode(w)
    return tuple(
        (engine.decode(result), engine.step(s, info))
        for result, info in engine.successors(s).items()
    )


@dataclass(frozen=True)
class TraceEntry:
    depth: int
    parent: Word | None
    step: Step | None


def _bfs_closure(engine: _Engine, seed: bytes, bounds: Bounds):
    visited: dict[bytes, tuple] = {seed: (0, None, None)}
    frontier = [seed]
    depth = 0
    while frontier and depth < bounds.max_steps:
        depth += 1
        next_frontier = []
        for s in sorted(frontier):
            for result, info in engine.successors(s).items():
                if len(result) > bounds.max_len or result in visited:
                    continue
                visited[result] = (depth, s, info)
                next_frontier.append(result)
        frontier = next_frontier
    return visited


def closure(w: Word, system: IdentitySystem, bounds: Bounds) -> dict[Word, int]:
    """Words reachable within bounds, mapped to their first-reach depth."""
    engine = _engine_for(system, frozenset(w))
    visited = _bfs_closure(engine, engine.encode(w), bounds)
    return {engine.decode(s): entry[0] for s, entry in visited.items()}


def closure_trace(
    w: Word, system: IdentitySystem, bounds: Bounds
) -> dict[Word, TraceEntry]:
    """Like :func:`closure` but keeping the producing step of each word."""
    engine = _engine_for(system, frozenset(w))
    visited = _bfs_closure(engine, engine.encode(w), bounds)
    out = {}
    for s, (depth, parent, info) in visited.items():
        step = engine.step(parent, info) if info is not None else None
        out[engine.decode(s)] = TraceEntry(
            depth, engine.decode(parent) if parent is not None else None, step
        )
    return out


def derive(
    u: Word, v: Word, system: IdentitySystem, bounds: Bounds
) -> Derivation | NotFound:
    """Bidirectional breadth-first search for a certified derivation.

    Deterministic for fixed bounds; returns the minimal certificate under
    depth-then-lexicographic order, replay-verified before returning.  A
    ``NotFound`` records the exhausted bounds and is never a disproof.
    """
    if u == v:
        return Derivation(Word(u), ())
    if set(u) != set(v):
        # letter content is invariant under balanced rewriting
        return NotFound(bounds, "letter contents differ; no chain can exist")
    engine = _engine_for(system, frozenset(u) | frozenset(v))
    su, sv = engine.encode(u), engine.encode(v)
    forward: dict[bytes, tuple] = {su: (0, None, None)}
    backward: dict[bytes, tuple] = {sv: (0, None, None)}
    f_frontier, b_frontier = [su], [sv]
    f_depth = b_depth = 0

    def expand(visited, frontier, depth):
        next_frontier = []
        for s in sorted(frontier):
            for result, info in engine.successors(s).items():
                if len(result) > bounds.max_len or result in visited:
                    continue
                visited[result] = (depth, s, info)
                next_frontier.append(result)
        return next_frontier

    best: bytes | None = None
    while f_depth + b_depth < bounds.max_steps and (f_frontier or b_frontier):
        # expand the smaller frontier first; deterministic and usually cheaper
        grow_forward = bool(f_frontier) and (
            not b_frontier or len(f_frontier) <= len(b_frontier)
        )
        if grow_forward:
            f_depth += 1
            f_frontier = expand(forward, f_frontier, f_depth)
        else:
            b_depth += 1
            b_frontier = expand(backward, b_frontier, b_depth)
        meets = forward.keys() & backward.keys()
        if meets:
            best = min(meets, key=lambda m: (forward[m][0] + backward[m][0], m))
            break
    if best is None:
        return NotFound(bounds)

    steps: list[DerivationStep] = []
    half: list[DerivationStep] = []
    s = best
    while forward[s][1] is not None:
        _, parent, info = forward[s]
        half.append(DerivationStep(engine.decode(s), engine.step(parent, info)))
        s = parent
    steps.extend(reversed(half))
    s = best
    while backward[s][1] is not None:
        _, parent, info = backward[s]
        steps.append(
            DerivationStep(engine.decode(parent), engine.step(parent, info).flipped())
        )
        s = parent
    derivation = Derivation(Word(u), tuple(steps))
    assert replay(derivation, system) == v, "internal error: unreplayable certificate"
    return derivation


def replay(derivation: Derivation, system: IdentitySystem) -> Word:
    """Independent certificate check: re-applies each recorded step literally.

    Raises ``ValueError`` on the first step that does not reproduce the
    recorded words; returns the final word on success.
    """
    current = derivation.start
    for ds in derivation.steps:
        identity = system.get(ds.step.rule)
        sub = dict(ds.step.images)
        missing = identity.letters() - sub.keys()
        if missing:
            raise ValueError(f"step images miss letters {sorted(missing)}")

        def image(side: Word) -> Word:
            out: list[str] = []
            for c in side:
                out.extend(sub[c])
            return Word(out)

        src, dst = (
            (identity.lhs, identity.rhs)
            if ds.step.direction == "lr"
            else (identity.rhs, identity.lhs)
        )
        expected_src = ds.step.prefix + image(src) + ds.step.suffix
        expected_dst = ds.step.prefix + image(dst) + ds.step.suffix
        if expected_src != current:
            raise ValueError(
                f"step does not apply at {format_word(current)!r}: "
                f"expected source {format_word(expected_src)!r}"
            )
        if expected_dst != ds.word:
            raise ValueError(
                f"step result mismatch: recorded {format_word(ds.word)!r}, "
                f"replayed {format_word(expected_dst)!r}"
            )
        current = ds.word
    return current


def absorb_square(w: Word, split: tuple[Word, str, Word, Word]) -> Word:
    """Gather two occurrences ``w = v1 a v2 a v3`` into ``v1 a^2 v2 v3``.

    Requires every letter strictly between the two chosen occurrences of
    ``a`` to be multiple in ``w``.
    """
    v1, a, v2, v3 = split
    v1, v2, v3 = Word(v1), Word(v2), Word(v3)
    if v1 + (a,) + v2 + (a,) + v3 != w:
        raise ValueError("split does not reassemble the word")
    stray = set(v2) - multiple_letters(w)
    if stray:
        raise ValueError(
            f"letters {sorted(stray)} between the occurrences are simple in "
            f"{format_word(w)!r}"
        )
    return v1 + (a, a) + v2 + v3


def swap_adjacent(
    w: Word, split: tuple[Word, str, str, Word], case: str
) -> Word:
    """Swap an adjacent pair ``w = w1 a b w2`` of multiple letters.

    Valid either when the two letters are integrated in ``w`` (case
    ``"integrated"``) or when ``b`` already occurred and only multiple
    letters separate that occurrence from the pair (case
    ``"second-occurrence"``).
    """
    w1, a, b, w2 = split
    w1, w2 = Word(w1), Word(w2)
    if w1 + (a, b) + w2 != w:
        raise ValueError("split does not reassemble the word")
    mul = multiple_letters(w)
    if a not in mul or b not in mul:
        raise ValueError("both swapped letters must be multiple in the word")
    if case == "integrated":
        if not integrated(w, a, b):
            raise ValueError(f"{a!r} and {b!r} are not integrated in {format_word(w)!r}")
    elif case == "second-occurrence":
        # the latest occurrence of b inside w1 gives the smallest tail; if
        # even that tail has a simple letter, every other split fails too
        positions = [i for i, c in enumerate(w1) if c == b]
        if not positions:
            raise ValueError(f"{b!r} does not occur before the swapped pair")
        tail = set(w1[positions[-1] + 1 :])
        if not tail <= mul:
            raise ValueError(
                f"letters {sorted(tail - mul)} after the earlier {b!r} are simple"
            )
    else:
        raise ValueError("case must be 'integrated' or 'second-occurrence'")
    return w1 + (b, a) + w2


def normalize_con3(w: Word) -> Word:
    """Canonical form in which every multiple letter occurs exactly 3 times.

    Letters with three or more occurrences keep their first, second and last
    one; letters with exactly two get a copy inserted immediately after the
    second; simple letters are untouched.
    """
    totals = Counter(w)
    seen: Counter[str] = Counter()
    out: list[str] = []
    for c in w:
        seen[c] += 1
        k, total = seen[c], totals[c]
        if total >= 3 and 2 < k < total:
            continue
        out.append(c)
        if total == 2 and k == 2:
            out.append(c)
    return Word(out)

"""Finite monoids as Cayley tables, satisfaction checking and refuter models.

A :class:`FiniteMonoid` is validated exhaustively at construction
(associativity over all |M|^3 triples plus the identity law), so downstream
code can trust every table.  :func:`satisfies` decides an identity in a
monoid by enumerating all assignments of its letters in mixed-radix order and
returns the first falsifying assignment as a witness.

The stock models returned by :func:`refuter_models` are tagged with the
varieties they are known to lie in; since membership is verified by checking
the variety's basis on the table, a refutation by a tagged model is a sound
"fails in that variety" certificate.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .identities import Identity, IdentitySystem, Variety, basis
from .words import Word, format_word

TABLE_SCHEMA = {
    "type": "object",
    "required": ["elements", "identity", "table"],
    "properties": {
        "elements": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "identity": {"type": "string"},
        "table": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
    },
}


@dataclass(frozen=True)
class FiniteMonoid:
    """A monoid given by labelled elements and a total multiplication table."""

    name: str
    elements: tuple[str, ...]
    identity: str
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError("element labels must be distinct")
        if self.identity not in self.elements:
            raise ValueError("identity label missing from elements")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("table must be a full n x n matrix")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValueError("table entries must index elements")
        e = self.elements.index(self.identity)
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise ValueError(f"identity law fails at {self.elements[i]!r}")
        for i in range(n):
            for j in range(n):
                ij = self.table[i][j]
                for k in range(n):
                    if self.table[ij][k] != self.table[i][self.table[j][k]]:
                        raise ValueError(
                            "associativity fails at "
                            f"({self.elements[i]}, {self.elements[j]}, "
                            f"{self.elements[k]})"
                        )

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, label: str) -> int:
        return self.elements.index(label)

    def mul(self, a: str, b: str) -> str:
        return self.elements[self.table[self.index(a)][self.index(b)]]

    def evaluate(self, w: Word, assignment: Mapping[str, str]) -> str:
        """Value of a word under a letter-to-element assignment."""
        acc = self.elements.index(self.identity)
        for c in w:
            acc = self.table[acc][self.index(assignment[c])]
        return self.elements[acc]

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "identity": self.identity,
            "table": [[self.elements[v] for v in row] for row in self.table],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "user") -> "FiniteMonoid":
        elements = tuple(data["elements"])
        lookup = {label: i for i, label in enumerate(elements)}
        table = tuple(
            tuple(lookup[label] for label in row) for row in data["table"]
        )
        return cls(name, elements, data["identity"], table)

    @classmethod
    def from_file(cls, path: str) -> "FiniteMonoid":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), name=path)


def _monoid_from_labels(
    name: str, elements: Sequence[str], identity: str, products: Mapping
) -> FiniteMonoid:
    lookup = {label: i for i, label in enumerate(elements)}
    table = tuple(
        tuple(lookup[products[(a, b)]] for b in elements) for a in elements
    )
    return FiniteMonoid(name, tuple(elements), identity, table)


@lru_cache(maxsize=None)
def b0_monoid() -> FiniteMonoid:
    """The five-element monoid on {1, a, b, c, 0}.

    a and b are idempotent, ab = ba = 0, ac = cb = c; the remaining products
    ca, bc, c^2 are forced to 0 because the underlying semigroup has exactly
    the elements {a, b, c, 0}.  Zero absorbs, 1 is neutral.
    """
    elements = ("1", "a", "b", "c", "0")
    products: dict[tuple[str, str], str] = {}
    for u in elements:
        products[("1", u)] = u
        products[(u, "1")] = u
        products[("0", u)] = "0"
        products[(u, "0")] = "0"
    products.update(
        {
            ("a", "a"): "a",
            ("b", "b"): "b",
            ("a", "b"): "0",
            ("b", "a"): "0",
            ("a", "c"): "c",
            ("c", "b"): "c",
            ("c", "a"): "0",
            ("b", "c"): "0",
            ("c", "c"): "0",
        }
    )
    return _monoid_from_labels("b0", elements, "1", products)


@lru_cache(maxsize=None)
def semilattice2() -> FiniteMonoid:
    """The two-element semilattice monoid {1, e} with e idempotent."""
    return _monoid_from_labels(
        "sl2",
        ("1", "e"),
        "1",
        {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"},
    )


@lru_cache(maxsize=None)
def c3_monoid() -> FiniteMonoid:
    """The commutative three-element monoid {1, a, a^2} with a^3 = a^2."""
    elements = ("1", "a", "a2")
    power = {"1": 0, "a": 1, "a2": 2}
    products = {
        (u, v): elements[min(power[u] + power[v], 2)]
        for u in elements
        for v in elements
    }
    return _monoid_from_labels("c3", elements, "1", products)


@lru_cache(maxsize=None)
def d_free2() -> FiniteMonoid:
    """The rank-2 relatively free monoid of the variety D (ten elements).

    Elements are normal forms (set of multiple letters, sequence of simple
    letters) over generators {x, y}; concatenation merges the statistics.  It
    lies in D (its basis is checked exhaustively in the tests) and refutes
    every identity the D-criterion rejects.
    """
    gens = ("x", "y")
    elems: list[tuple[frozenset, tuple]] = []
    for mult in (frozenset(), frozenset("x"), frozenset("y"), frozenset("xy")):
        rest = [g for g in gens if g not in mult]
        for r in range(len(rest) + 1):
            for simp in itertools.permutations(rest, r):
                elems.append((mult, simp))

    def combine(u, v):
        mult = u[0] | v[0] | (set(u[1]) & set(v[1]))
        simp = tuple(c for c in u[1] + v[1] if c not in mult)
        return (frozenset(mult), simp)

    def label(e):
        mult_part = "".join(f"{c}2" for c in sorted(e[0]))
        simp_part = "".join(e[1])
        return mult_part + simp_part or "1"

    products = {
        (label(u), label(v)): label(combine(u, v)) for u in elems for v in elems
    }
    return _monoid_from_labels("d2", tuple(label(e) for e in elems), "1", products)


def _parse_relation_word(text: str) -> tuple[str, ...]:
    tokens = text.split()
    out: list[str] = []
    for tok in tokens:
        base, _, exp = tok.partition("^")
        k = int(exp) if exp else 1
        if k < 1:
            raise ValueError(f"exponent must be >= 1 in {tok!r}")
        out.extend((base,) * k)
    return tuple(out)


def from_presentation(
    generators: Sequence[str],
    relations: Iterable[tuple[str, str]],
    max_size: int,
) -> FiniteMonoid:
    """Monoid presented by generators and word equations, by bounded closure.

    Relations are pairs of whitespace-separated words over the generators
    (``^k`` allowed); the token ``0`` may appear, in which case an absorbing
    zero with its absorption rules is adjoined.  Each relation is oriented
    shortlex-decreasing and products are reduced to normal form; the closure
    fails if it does not stabilize within ``max_size`` elements or if the
    rules do not confluent into a well-defined table.
    """
    gens = tuple(generators)
    rules: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    mentions_zero = False
    for left_text, right_text in relations:
        left = _parse_relation_word(left_text)
        right = _parse_relation_word(right_text)
        mentions_zero = mentions_zero or "0" in left or "0" in right
        if left == right:
            continue
        if (len(left), left) < (len(right), right):
            left, right = right, left
        rules.append((left, right))
    if mentions_zero:
        zero = ("0",)
        for g in (*gens, "0"):
            rules.append((("0", g), zero))
            if g != "0":
                rules.append(((g, "0"), zero))

    def normal_form(word: tuple[str, ...]) -> tuple[str, ...]:
        changed = True
        while changed:
            changed = False
            for left, right in rules:
                m = len(left)
                for at in range(len(word) - m + 1):
                    if word[at : at + m] == left:
                        word = word[:at] + right + word[at + m :]
                        changed = True
                        break
                if changed:
                    break
        return word

    elements: list[tuple[str, ...]] = [()]
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = normal_form(u + (g,))
                if v not in seen:
                    seen.add(v)
                    elements.append(v)
                    nxt.append(v)
                    if len(elements) > max_size:
                        raise ValueError(
                            f"presentation did not close within {max_size} elements"
                        )
        frontier = nxt

    def label(word: tuple[str, ...]) -> str:
        return "".join(word) or "1"

    products = {}
    for u in elements:
        for v in elements:
            uv = normal_form(u + v)
            if uv not in seen:
                raise ValueError(
                    f"inconsistent table: {label(u)}*{label(v)} reduces to a "
                    "word outside the closure"
                )
            products[(label(u), label(v))] = label(uv)
    return _monoid_from_labels(
        "presented", tuple(label(e) for e in elements), "1", products
    )


@dataclass(frozen=True)
class SatisfactionReport:
    """Verdict of one identity in one monoid; witness present iff it fails."""

    identity: Identity
    holds: bool
    witness: tuple[tuple[str, str], ...] | None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("witness must be present exactly when the check fails")

    def witness_text(self) -> str:
        if self.witness is None:
            return ""
        return " ".join(f"{letter}={element}" for letter, element in self.witness)


def satisfies(monoid: FiniteMonoid, identity: Identity) -> SatisfactionReport:
    """Exhaustive satisfaction check over all |M|^k letter assignments.

    Letters are enumerated in sorted order, elements in table order; the
    first falsifying assignment in that mixed-radix order is the witness.
    """
    letters = sorted(identity.letters())
    n = len(monoid.elements)
    e = monoid.elements.index(monoid.identity)
    table = monoid.table
    lhs = [letters.index(c) for c in identity.lhs]
    rhs = [letters.index(c) for c in identity.rhs]
    for values in itertools.product(range(n), repeat=len(letters)):
        left = e
        for c in lhs:
            left = table[left][values[c]]
        right = e
        for c in rhs:
            right = table[right][values[c]]
        if left != right:
            witness = tuple(
                (letter, monoid.elements[values[i]])
                for i, letter in enumerate(letters)
            )
            return SatisfactionReport(identity, False, witness)
    return SatisfactionReport(identity, True, None)


def satisfies_system(
    monoid: FiniteMonoid, system: IdentitySystem
) -> tuple[SatisfactionReport, ...]:
    return tuple(satisfies(monoid, identity) for identity in system)


@dataclass(frozen=True)
class RefuterModel:
    """A stock monoid plus the varieties it provably lies in."""

    monoid: FiniteMonoid
    varieties: frozenset[Variety]


@lru_cache(maxsize=None)
def refuter_models() -> dict[str, RefuterModel]:
    """The stock refuters, tagged by basis satisfaction (J truncated at 1).

    Tags are verified on the table at construction; the lattice then extends
    each tag upward (a monoid in a variety lies in every supervariety), which
    is what makes the tags safely usable for refutation.
    """
    stock = {
        "b0": b0_monoid(),
        "sl2": semilattice2(),
        "c3": c3_monoid(),
        "d2": d_free2(),
    }
    tagged = {}
    for name, monoid in stock.items():
        varieties = frozenset(
            v
            for v in Variety
            if all(r.holds for r in satisfies_system(monoid, basis(v, 1)))
        )
        tagged[name] = RefuterModel(monoid, varieties)
    return tagged


def refute(identity: Identity, variety: Variety) -> SatisfactionReport | None:
    """A stock-model refutation of ``identity`` inside ``variety``, if any."""
    for info in refuter_models().values():
        if variety in info.varieties:
            report = satisfies(info.monoid, identity)
            if not report.holds:
                return report
    return None


def format_witness(monoid: FiniteMonoid, identity: Identity, report) -> str:
    """Human-readable witness line, with both evaluated sides."""
    if report.witness is None:
        return ""
    assignment = dict(report.witness)
    left = monoid.evaluate(identity.lhs, assignment)
    right = monoid.evaluate(identity.rhs, assignment)
    return f"{report.witness_text()} (lhs={left} rhs={right})"


def word_value(monoid: FiniteMonoid, w: Word, assignment: Mapping[str, str]) -> str:
    missing = frozenset(w) - set(assignment)
    if missing:
        raise ValueError(f"assignment misses letters {sorted(missing)} of {format_word(w)!r}")
    return monoid.evaluate(w, assignment)

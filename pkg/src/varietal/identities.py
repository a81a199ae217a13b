"""Identities, identity systems, the twelve named varieties and their bases.

The varieties form a 12-element lattice: the chain T ⊂ SL ⊂ C ⊂ D at the
bottom, a diamond D ⊂ {E, dE} ⊂ EvdE with F covering E and FvdE joining F and
EvdE, and the top chain FvdE ⊂ H ⊂ I ⊂ J.  ``dE`` is the dual (reversal)
counterpart of E and ``EvdE``/``FvdE`` are the joins E∨dE and F∨dE.

J has no finite basis, so :func:`basis` takes a truncation level for it: the
returned system contains the two-sided surround/spread pairs ``w_n`` for all
n up to the truncation, over every permutation of the middle letters.  Every
J-dependent computation in this package surfaces that truncation in its
output.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .words import Word, WordSyntaxError, format_word, parse_word, reverse


@dataclass(frozen=True)
class Identity:
    """A formal equation between two words; trivial iff the sides coincide."""

    lhs: Word
    rhs: Word
    name: str = field(default="", compare=False)

    @property
    def text(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"

    @property
    def pretty(self) -> str:
        return f"{format_word(self.lhs)} ≈ {format_word(self.rhs)}"

    @property
    def label(self) -> str:
        return self.name or self.text

    @property
    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def letters(self) -> frozenset[str]:
        return frozenset(self.lhs) | frozenset(self.rhs)

    def reversed(self) -> "Identity":
        suffix = "~rev" if self.name else ""
        return Identity(reverse(self.lhs), reverse(self.rhs), self.name + suffix)

    def __str__(self) -> str:
        return self.pretty


def parse_identity(text: str, *, name: str = "", line: int = 1) -> Identity:
    """Parse ``<word> = <word>``; ``≈`` is accepted as a synonym of ``=``."""
    normalized = text.replace("≈", "=")
    if normalized.count("=") != 1:
        raise WordSyntaxError(
            "identity must contain exactly one '=' or '≈'", line=line, column=1
        )
    left, right = normalized.split("=")
    lhs = parse_word(left, line=line)
    rhs = parse_word(right, line=line, column_offset=len(left) + 1)
    return Identity(lhs, rhs, name)


def ident(text: str, name: str = "") -> Identity:
    """Build an identity from text, defaulting the name to the text itself."""
    identity = parse_identity(text, name=name)
    return identity if name else Identity(identity.lhs, identity.rhs, identity.text)


@dataclass(frozen=True)
class IdentitySystem:
    """A finite ordered set of identities with a label; duplicates rejected."""

    name: str
    identities: tuple[Identity, ...]

    def __post_init__(self):
        seen = set()
        for identity in self.identities:
            key = (identity.lhs, identity.rhs)
            if key in seen:
                raise ValueError(f"duplicate identity {identity.text!r} in {self.name}")
            seen.add(key)

    def __iter__(self) -> Iterator[Identity]:
        return iter(self.identities)

    def __len__(self) -> int:
        return len(self.identities)

    def __contains__(self, identity: Identity) -> bool:
        return any(
            identity.lhs == i.lhs and identity.rhs == i.rhs for i in self.identities
        )

    def get(self, label: str) -> Identity:
        for identity in self.identities:
            if identity.label == label:
                return identity
        raise KeyError(f"no identity named {label!r} in system {self.name}")

    def reversed(self, name: str = "") -> "IdentitySystem":
        return IdentitySystem(
            name or f"{self.name}~rev", tuple(i.reversed() for i in self.identities)
        )

    def format(self) -> str:
        return "\n".join(i.text for i in self.identities) + "\n"


def parse_system(text: str, name: str) -> IdentitySystem:
    """One identity per line; blank lines and ``#`` comments are skipped."""
    identities = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        identity = parse_identity(line, line=lineno)
        identities.append(Identity(identity.lhs, identity.rhs, identity.text))
    return IdentitySystem(name, tuple(identities))


class Variety(enum.Enum):
    """The twelve varieties, bottom (T) to top (J) of the lattice."""

    T = "T"
    SL = "SL"
    C = "C"
    D = "D"
    E = "E"
    dE = "dE"
    EvdE = "EvdE"
    F = "F"
    FvdE = "FvdE"
    H = "H"
    I = "I"
    J = "J"

    def __str__(self) -> str:
        return self.value


VARIETY_ORDER: tuple[Variety, ...] = (
    Variety.T,
    Variety.SL,
    Variety.C,
    Variety.D,
    Variety.E,
    Variety.dE,
    Variety.EvdE,
    Variety.F,
    Variety.FvdE,
    Variety.H,
    Variety.I,
    Variety.J,
)

DECIDABLE: frozenset[Variety] = frozenset(VARIETY_ORDER[:9])
SEMIDECIDABLE: frozenset[Variety] = frozenset((Variety.H, Variety.I, Variety.J))

_COVERS: tuple[tuple[Variety, Variety], ...] = (
    (Variety.T, Variety.SL),
    (Variety.SL, Variety.C),
    (Variety.C, Variety.D),
    (Variety.D, Variety.E),
    (Variety.D, Variety.dE),
    (Variety.E, Variety.F),
    (Variety.E, Variety.EvdE),
    (Variety.dE, Variety.EvdE),
    (Variety.F, Variety.FvdE),
    (Variety.EvdE, Variety.FvdE),
    (Variety.FvdE, Variety.H),
    (Variety.H, Variety.I),
    (Variety.I, Variety.J),
)


def _transitive_closure() -> frozenset[tuple[Variety, Variety]]:
    leq = {(v, v) for v in Variety}
    leq.update(_COVERS)
    changed = True
    while changed:
        changed = False
        for a, b in list(leq):
            for c, d in list(leq):
                if b is c and (a, d) not in leq:
                    leq.add((a, d))
                    changed = True
    return frozenset(leq)


_LEQ = _transitive_closure()


def lattice_leq(v: Variety, w: Variety) -> bool:
    """Whether v is a subvariety of w (v below w in the lattice)."""
    return (v, w) in _LEQ


def subvarieties(v: Variety) -> frozenset[Variety]:
    return frozenset(w for w in Variety if lattice_leq(w, v))


def supervarieties(v: Variety) -> frozenset[Variety]:
    return frozenset(w for w in Variety if lattice_leq(v, w))


def parse_variety(token: str) -> Variety:
    try:
        return Variety(token)
    except ValueError:
        names = ", ".join(v.value for v in VARIETY_ORDER)
        raise ValueError(f"unknown variety {token!r}; expected one of: {names}")


def identity_permutation(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))


def _check_permutation(n: int, perm: Iterable[int]) -> tuple[int, ...]:
    images = tuple(perm)
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError(f"{images} is not a permutation of 1..{n}")
    return images


def w_family(n: int, perm: Iterable[int] | None = None) -> Identity:
    """The n-th surround/spread identity pair for a middle-letter permutation.

    Left side ``x z_{1π} ... z_{nπ} x  t_1 z_1 ... t_n z_n``; right side the
    same with both ``x`` occurrences gathered in front as ``x^2``.
    """
    if n < 1:
        raise ValueError("family size must be >= 1")
    images = (
        identity_permutation(n) if perm is None else _check_permutation(n, perm)
    )
    middle = [f"z{i}" for i in images]
    tail = [tok for i in range(1, n + 1) for tok in (f"t{i}", f"z{i}")]
    lhs = Word(["x", *middle, "x", *tail])
    rhs = Word(["x", "x", *middle, *tail])
    name = f"w_{n}[{' '.join(map(str, images))}]"
    return Identity(lhs, rhs, name)


def u_word(n: int, p: int, ells: Iterable[int]) -> Word:
    """``x z_1 ... z_n x^p  t_1 z_1^{l_1} ... t_n z_n^{l_n}``."""
    ells = tuple(ells)
    if n < 1 or p < 1 or len(ells) != n or any(l < 1 for l in ells):
        raise ValueError("need n >= 1, p >= 1 and n exponents all >= 1")
    letters = ["x", *(f"z{i}" for i in range(1, n + 1)), *(["x"] * p)]
    for i, l in enumerate(ells, start=1):
        letters.append(f"t{i}")
        letters.extend([f"z{i}"] * l)
    return Word(letters)


_PHI = (
    ident("x y x = x y x^2"),
    ident("x^2 y^2 = y^2 x^2"),
    ident("x y z x y = y x z x y"),
)

_EXTENSION = ident("x y x z t x = x y x z x t x")


def phi_system() -> IdentitySystem:
    """The shared three-identity core of F, H, I and J."""
    return IdentitySystem("Phi", _PHI)


@lru_cache(maxsize=None)
def basis(variety: Variety, trunc: int = 3) -> IdentitySystem:
    """The defining identity system of a variety.

    ``trunc`` only matters for J, whose basis gets the ``w_n`` pairs for all
    n <= trunc over every permutation; the system name records the level.
    """
    if trunc < 1:
        raise ValueError("truncation must be >= 1")
    if variety is Variety.T:
        return IdentitySystem("T", (ident("x = y"),))
    if variety is Variety.SL:
        return IdentitySystem("SL", (ident("x^2 = x"), ident("x y = y x")))
    if variety is Variety.C:
        return IdentitySystem("C", (ident("x^2 = x^3"), ident("x y = y x")))
    if variety is Variety.D:
        return IdentitySystem(
            "D",
            (ident("x^2 = x^3"), ident("x^2 y = x y x"), ident("x y x = y x^2")),
        )
    if variety is Variety.E:
        return IdentitySystem(
            "E",
            (
                ident("x^2 = x^3"),
                ident("x^2 y = x y x"),
                ident("x^2 y^2 = y^2 x^2"),
            ),
        )
    if variety is Variety.dE:
        return basis(Variety.E).reversed("dE")
    if variety is Variety.EvdE:
        return IdentitySystem(
            "EvdE", (ident("x y z x = x y x z x"), ident("x^2 y^2 = y^2 x^2"))
        )
    if variety is Variety.F:
        return IdentitySystem("F", (*_PHI, ident("x y x z = x y x z x")))
    if variety is Variety.FvdE:
        return IdentitySystem(
            "FvdE",
            (
                ident("x^2 y^2 = y^2 x^2"),
                ident("x y z x t y = y x z x t y"),
                ident("x z x y t y = x z y x t y"),
                ident("x y x = x y x^2"),
                _EXTENSION,
            ),
        )
    if variety is Variety.H:
        return IdentitySystem(
            "H",
            (
                *_PHI,
                _EXTENSION,
                ident("x^2 y t y = x y x t y"),
                ident("x y x t y = y x^2 t y"),
            ),
        )
    if variety is Variety.I:
        return IdentitySystem(
            "I", (*_PHI, _EXTENSION, ident("x z x y t y = x z y x t y"))
        )
    pairs = tuple(
        w_family(n, perm) for n in range(1, trunc + 1) for perm in all_permutations(n)
    )
    return IdentitySystem(f"J[trunc={trunc}]", (*_PHI, _EXTENSION, *pairs))

"""Word-problem oracles for the twelve varieties, and the lattice classifier.

The nine varieties up to FvdE have total decision procedures built from
per-letter statistics and the divider functions: E compares simple/multiple
classes and the divider before each first occurrence, F additionally the one
before each second occurrence, FvdE additionally the one before each last
occurrence; the dual variety dE checks E on the reversed words, and the join
EvdE requires both.  T, SL, C and D have direct normal-form criteria.

H, I and J are handled three-valued.  An identity Fails there when the FvdE
necessary condition breaks (FvdE lies below all three) or when a shape
refuter fires: each of the three varieties preserves a characteristic word
shape (J: ``x z y x^p t y^q``, I: ``y x^p t y^q``, H: ``x y z x^p t y^q``),
so an identity with one side an instance of the shape and the other side not
of that form cannot hold.  It Holds when a bounded derivation from the
variety's basis succeeds (J's basis truncated at a level that every output
surfaces); otherwise the verdict is Unknown with the exhausted bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .identities import (
    DECIDABLE,
    Identity,
    Variety,
    VARIETY_ORDER,
    basis,
    lattice_leq,
)
from .rewrite import Bounds, derive
from .words import (
    Word,
    divider_profile,
    letter_classes,
    project,
    reverse,
)

HOLDS = "Holds"
FAILS = "Fails"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class HoldsStatus:
    """Three-valued verdict with its evidence.

    Holds/Fails carry the criterion, refuter or derivation that decided
    them; Unknown carries the exhausted search bounds.
    """

    verdict: str
    evidence: str

    @property
    def is_holds(self) -> bool:
        return self.verdict == HOLDS

    @property
    def is_fails(self) -> bool:
        return self.verdict == FAILS

    @property
    def is_unknown(self) -> bool:
        return self.verdict == UNKNOWN

    def __str__(self) -> str:
        return f"{self.verdict} ({self.evidence})"


def _holds(evidence: str) -> HoldsStatus:
    return HoldsStatus(HOLDS, evidence)


def _fails(evidence: str) -> HoldsStatus:
    return HoldsStatus(FAILS, evidence)


def _unknown(evidence: str) -> HoldsStatus:
    return HoldsStatus(UNKNOWN, evidence)


def _name_profile(w: Word) -> dict[str, tuple[str, ...]]:
    """Divider names before each occurrence, letter by letter."""
    return {c: tuple(d.name for d in seq) for c, seq in divider_profile(w).items()}


def _base_failure(u: Word, v: Word) -> str | None:
    """The sim/mul + h_1 conditions shared by E and everything above it."""
    cu, cv = letter_classes(u), letter_classes(v)
    if cu.simple != cv.simple or cu.multiple != cv.multiple:
        return "sim/mul mismatch"
    pu, pv = _name_profile(u), _name_profile(v)
    for c in sorted(cu.content):
        if pu[c][0] != pv[c][0]:
            return f"h_1 mismatch at {c}"
    return None


def _h2_failure(u: Word, v: Word) -> str | None:
    pu, pv = _name_profile(u), _name_profile(v)
    for c in sorted(letter_classes(u).multiple):
        if pu[c][1] != pv[c][1]:
            return f"h_2 mismatch at {c}"
    return None


def _t_failure(u: Word, v: Word) -> str | None:
    pu, pv = _name_profile(u), _name_profile(v)
    for c in sorted(frozenset(u)):
        if pu[c][-1] != pv[c][-1]:
            return f"t mismatch at {c}"
    return None


def _e_status(u: Word, v: Word) -> HoldsStatus:
    failure = _base_failure(u, v)
    if failure:
        return _fails(failure)
    return _holds("criterion: sim/mul and h_1 agree")


def _f_status(u: Word, v: Word) -> HoldsStatus:
    failure = _base_failure(u, v) or _h2_failure(u, v)
    if failure:
        return _fails(failure)
    return _holds("criterion: sim/mul, h_1 and h_2 agree")


def _fvde_status(u: Word, v: Word) -> HoldsStatus:
    failure = _base_failure(u, v) or _h2_failure(u, v) or _t_failure(u, v)
    if failure:
        return _fails(failure)
    return _holds("criterion: sim/mul, h_1, h_2 and t agree")


def holds_in_E(identity: Identity) -> bool:
    if identity.is_trivial:
        return True
    return _e_status(identity.lhs, identity.rhs).is_holds


def holds_in_F(identity: Identity) -> bool:
    if identity.is_trivial:
        return True
    return _f_status(identity.lhs, identity.rhs).is_holds


def holds_in_dual_E(identity: Identity) -> bool:
    if identity.is_trivial:
        return True
    return _e_status(reverse(identity.lhs), reverse(identity.rhs)).is_holds


def holds_in_F_join_dual_E(identity: Identity) -> bool:
    if identity.is_trivial:
        return True
    return _fvde_status(identity.lhs, identity.rhs).is_holds


def necessary_filter(identity: Identity) -> bool:
    """Fast pre-check reused by the three-valued oracles: the FvdE criterion."""
    return holds_in_F_join_dual_E(identity)


def _small_status(variety: Variety, identity: Identity) -> HoldsStatus:
    u, v = identity.lhs, identity.rhs
    if variety is Variety.T:
        return _holds("every identity holds in the trivial variety")
    if variety is Variety.SL:
        if frozenset(u) == frozenset(v):
            return _holds("same content")
        return _fails("content mismatch")
    if variety is Variety.C:
        for c in sorted(frozenset(u) | frozenset(v)):
            if min(tuple(u).count(c), 2) != min(tuple(v).count(c), 2):
                return _fails(f"occurrence count capped at 2 differs at {c}")
        return _holds("capped occurrence counts agree")
    if variety is Variety.D:
        cu, cv = letter_classes(u), letter_classes(v)
        if cu.multiple != cv.multiple:
            return _fails("multiple sets differ")
        if project(u, cu.simple) != project(v, cv.simple):
            return _fails("simple-letter projections differ")
        return _holds("simple projection and multiple sets agree")
    if variety is Variety.EvdE:
        forward = _e_status(u, v)
        if forward.is_fails:
            return _fails(f"forward: {forward.evidence}")
        backward = _e_status(reverse(u), reverse(v))
        if backward.is_fails:
            return _fails(f"reversed: {backward.evidence}")
        return _holds("forward and reversed criteria agree")
    raise ValueError(f"{variety} has no small-variety criterion")


def holds_in_small(variety: Variety, identity: Identity) -> bool:
    if variety not in (Variety.T, Variety.SL, Variety.C, Variety.D, Variety.EvdE):
        raise ValueError(f"{variety} is not handled by holds_in_small")
    if identity.is_trivial:
        return True
    return _small_status(variety, identity).is_holds


TEMPLATES: dict[Variety, str] = {
    Variety.J: "x z y x^p t y^q",
    Variety.I: "y x^p t y^q",
    Variety.H: "x y z x^p t y^q",
}

# the preserved shapes, as literal letters followed by non-empty runs
_STRUCTURE: dict[Variety, tuple[tuple[str, str], ...]] = {
    Variety.J: (("lit", "x"), ("lit", "z"), ("lit", "y"), ("run", "x"),
                ("lit", "t"), ("run", "y")),
    Variety.I: (("lit", "y"), ("run", "x"), ("lit", "t"), ("run", "y")),
    Variety.H: (("lit", "x"), ("lit", "y"), ("lit", "z"), ("run", "x"),
                ("lit", "t"), ("run", "y")),
}


def matches_template_shape(w: Word, variety: Variety, roles: dict[str, str]) -> bool:
    """Whether ``w`` has the variety's shape for the given role letters."""
    i, n = 0, len(w)
    for kind, role in _STRUCTURE[variety]:
        letter = roles[role]
        if kind == "lit":
            if i >= n or w[i] != letter:
                return False
            i += 1
        else:
            count = 0
            while i < n and w[i] == letter:
                i += 1
                count += 1
            if count < 1:
                return False
    return i == n


def template_instance(w: Word, variety: Variety) -> dict[str, str] | None:
    """Role letters if ``w`` instantiates the variety's preserved shape."""
    n = len(w)
    if variety in (Variety.J, Variety.H):
        if n < 6:
            return None
        first, second, third = w[0], w[1], w[2]
        i = 3
        while i < n and w[i] == first:
            i += 1
        if i == 3 or i >= n:
            return None
        fourth = w[i]
        if variety is Variety.J:
            roles = {"x": first, "z": second, "y": third, "t": fourth}
        else:
            roles = {"x": first, "y": second, "z": third, "t": fourth}
    else:
        if n < 4:
            return None
        i = 1
        while i < n and w[i] == w[1]:
            i += 1
        if i >= n:
            return None
        roles = {"y": w[0], "x": w[1], "t": w[i]}
    if len(set(roles.values())) != len(roles):
        return None
    return roles if matches_template_shape(w, variety, roles) else None


def template_refuter(identity: Identity, variety: Variety) -> str | None:
    """Evidence if one side instantiates the shape and the other escapes it."""
    sides = ((identity.lhs, identity.rhs, "lhs"), (identity.rhs, identity.lhs, "rhs"))
    for instance, other, tag in sides:
        roles = template_instance(instance, variety)
        if roles is not None and not matches_template_shape(other, variety, roles):
            return (
                f"shape refuter ({variety.value}): {tag} instantiates "
                f"{TEMPLATES[variety]} but the other side is not of that form"
            )
    return None


def default_bounds(*words: Word, max_steps: int = 6, extra_len: int = 4) -> Bounds:
    longest = max((len(w) for w in words), default=1)
    return Bounds(max_steps, max(longest + extra_len, 1))


_HIJ_CHAIN = (Variety.H, Variety.I, Variety.J)


def _hij_statuses(
    identity: Identity, bounds: Bounds, trunc: int
) -> dict[Variety, HoldsStatus]:
    if identity.is_trivial:
        return {v: _holds("trivial identity") for v in _HIJ_CHAIN}
    status = _fvde_status(identity.lhs, identity.rhs)
    if status.is_fails:
        evidence = f"necessary FvdE condition fails: {status.evidence}"
        return {v: _fails(evidence) for v in _HIJ_CHAIN}

    out: dict[Variety, HoldsStatus] = {}
    for v in _HIJ_CHAIN:
        evidence = template_refuter(identity, v)
        if evidence is not None:
            out[v] = _fails(evidence)
            for w in _HIJ_CHAIN:
                if w not in out and lattice_leq(v, w):
                    out[w] = _fails(f"implied by failure at {v.value}: {evidence}")
            break

    for v in (Variety.J, Variety.I, Variety.H):
        if v in out:
            continue
        system = basis(v, trunc)
        result = derive(identity.lhs, identity.rhs, system, bounds)
        if result:
            plural = "step" if len(result) == 1 else "steps"
            out[v] = _holds(
                f"derived from basis({system.name}) in {len(result)} {plural}"
            )
            for w in _HIJ_CHAIN:
                if w not in out and lattice_leq(w, v):
                    out[w] = _holds(f"implied: holds at {v.value}")
            break

    unknown_evidence = (
        f"search exhausted (max_steps={bounds.max_steps}, "
        f"max_len={bounds.max_len}, trunc={trunc})"
    )
    for v in _HIJ_CHAIN:
        out.setdefault(v, _unknown(unknown_evidence))
    return out


def status_HIJ(
    variety: Variety,
    identity: Identity,
    bounds: Bounds | None = None,
    trunc: int = 3,
) -> HoldsStatus:
    """Three-valued verdict for H, I or J."""
    if variety not in _HIJ_CHAIN:
        raise ValueError(f"{variety} is decidable; use check_variety")
    if bounds is None:
        bounds = default_bounds(identity.lhs, identity.rhs)
    return _hij_statuses(identity, bounds, trunc)[variety]


def check_variety(
    variety: Variety,
    identity: Identity,
    bounds: Bounds | None = None,
    trunc: int = 3,
) -> HoldsStatus:
    """Single-variety entry point; total for the nine decidable varieties."""
    if identity.is_trivial:
        return _holds("trivial identity")
    if variety in (Variety.T, Variety.SL, Variety.C, Variety.D, Variety.EvdE):
        return _small_status(variety, identity)
    if variety is Variety.E:
        return _e_status(identity.lhs, identity.rhs)
    if variety is Variety.dE:
        status = _e_status(reverse(identity.lhs), reverse(identity.rhs))
        if status.is_fails:
            return _fails(f"reversed: {status.evidence}")
        return _holds(f"reversed: {status.evidence}")
    if variety is Variety.F:
        return _f_status(identity.lhs, identity.rhs)
    if variety is Variety.FvdE:
        return _fvde_status(identity.lhs, identity.rhs)
    return status_HIJ(variety, identity, bounds, trunc)


def classify(
    identity: Identity,
    bounds: Bounds | None = None,
    trunc: int = 3,
) -> dict[Variety, HoldsStatus]:
    """Per-variety verdicts over the whole lattice, antitone by construction.

    Decidable varieties never come back Unknown; the three-valued chain is
    orchestrated top-down so that a verdict at one of H, I, J is always
    consistent with the others.
    """
    if bounds is None:
        bounds = default_bounds(identity.lhs, identity.rhs)
    out: dict[Variety, HoldsStatus] = {}
    for variety in VARIETY_ORDER:
        if variety in DECIDABLE:
            out[variety] = check_variety(variety, identity)
    out.update(_hij_statuses(identity, bounds, trunc))
    return {v: out[v] for v in VARIETY_ORDER}


CLASSIFY_SCHEMA = {
    "type": "object",
    "required": ["identity", "trunc", "bounds", "verdicts", "evidence"],
    "properties": {
        "identity": {"type": "string"},
        "trunc": {"type": "integer", "minimum": 1},
        "bounds": {
            "type": "object",
            "required": ["max_steps", "max_len"],
            "properties": {
                "max_steps": {"type": "integer", "minimum": 1},
                "max_len": {"type": "integer", "minimum": 1},
            },
        },
        "verdicts": {
            "type": "object",
            "required": [v.value for v in VARIETY_ORDER],
            "additionalProperties": {"enum": [HOLDS, FAILS, UNKNOWN]},
        },
        "evidence": {
            "type": "object",
            "required": [v.value for v in VARIETY_ORDER],
            "additionalProperties": {"type": "string"},
        },
    },
}


def classify_report(
    identity: Identity,
    bounds: Bounds | None = None,
    trunc: int = 3,
) -> dict:
    """JSON-ready classification per the declared schema."""
    if bounds is None:
        bounds = default_bounds(identity.lhs, identity.rhs)
    verdicts = classify(identity, bounds, trunc)
    return {
        "identity": identity.text,
        "trunc": trunc,
        "bounds": bounds.to_json(),
        "verdicts": {v.value: s.verdict for v, s in verdicts.items()},
        "evidence": {v.value: s.evidence for v, s in verdicts.items()},
    }

"""Shape-preservation experiments behind the no-finite-basis mechanism.

Rewriting the seed word ``x z_1 ... z_n x t_1 z_1 ... t_n z_n`` with the
basis of J truncated strictly below n is expected to stay inside the family
``x z_1 ... z_n x^q  t_1 z_1^{m_1} ... t_n z_n^{m_n}`` and never to reach the
gathered variant ``x^2 z_1 ... z_n t_1 z_1 ... t_n z_n``; at truncation n the
gathered variant is one step away.  The same harness checks the preserved
shapes of H, I and J on template seeds.  A run is evidence within its bounds,
never a proof, and each report says so.
"""

from __future__ import annotations

from dataclasses import dataclass

from .identities import Variety, basis, u_word, w_family
from .oracles import TEMPLATES, matches_template_shape, template_instance
from .rewrite import Bounds, Step, closure_trace
from .words import Word, format_word

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "kind",
        "family",
        "seed",
        "system",
        "trunc",
        "bounds",
        "reachable_count",
        "depth_counts",
        "violations",
        "target",
        "target_reached",
        "target_depth",
        "scope_note",
    ],
    "properties": {
        "kind": {"enum": ["u-shape", "template"]},
        "family": {"type": "string"},
        "seed": {"type": "string"},
        "system": {"type": "string"},
        "trunc": {"type": "integer", "minimum": 1},
        "bounds": {
            "type": "object",
            "required": ["max_steps", "max_len"],
        },
        "reachable_count": {"type": "integer", "minimum": 1},
        "depth_counts": {"type": "array", "items": {"type": "integer"}},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["word", "rule"],
                "properties": {
                    "word": {"type": "string"},
                    "rule": {"type": ["string", "null"]},
                },
            },
        },
        "target": {"type": ["string", "null"]},
        "target_reached": {"type": "boolean"},
        "target_depth": {"type": ["integer", "null"]},
        "scope_note": {"type": "string"},
    },
}


@dataclass(frozen=True)
class ShapeReport:
    """Outcome of one closure run against a shape predicate.

    ``violations`` is empty exactly when every reachable word matched the
    predicate; each violation carries the step that produced it.
    ``reachable`` lists every reached word with its first-reach depth, in
    discovery order, for the delimited report.
    """

    kind: str
    family: str
    seed: Word
    system: str
    trunc: int
    bounds: Bounds
    reachable: tuple[tuple[Word, int], ...]
    violations: tuple[tuple[Word, Step | None], ...]
    target: Word | None
    target_reached: bool
    target_depth: int | None
    scope_note: str

    @property
    def reachable_count(self) -> int:
        return len(self.reachable)

    @property
    def depth_counts(self) -> tuple[int, ...]:
        if not self.reachable:
            return ()
        counts = [0] * (max(d for _, d in self.reachable) + 1)
        for _, d in self.reachable:
            counts[d] += 1
        return tuple(counts)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "family": self.family,
            "seed": format_word(self.seed),
            "system": self.system,
            "trunc": self.trunc,
            "bounds": self.bounds.to_json(),
            "reachable_count": self.reachable_count,
            "depth_counts": list(self.depth_counts),
            "violations": [
                {"word": format_word(w), "rule": s.rule if s else None}
                for w, s in self.violations
            ],
            "target": format_word(self.target) if self.target is not None else None,
            "target_reached": self.target_reached,
            "target_depth": self.target_depth,
            "scope_note": self.scope_note,
        }


def u_shape(w: Word, n: int) -> bool:
    """Whether ``w = x z_1 ... z_n x^q t_1 z_1^{m_1} ... t_n z_n^{m_n}``."""
    if n < 1:
        raise ValueError("family size must be >= 1")
    i, total = 0, len(w)
    for token in ("x", *(f"z{k}" for k in range(1, n + 1))):
        if i >= total or w[i] != token:
            return False
        i += 1
    q = 0
    while i < total and w[i] == "x":
        i += 1
        q += 1
    if q < 1:
        return False
    for k in range(1, n + 1):
        if i >= total or w[i] != f"t{k}":
            return False
        i += 1
        m = 0
        while i < total and w[i] == f"z{k}":
            i += 1
            m += 1
        if m < 1:
            return False
    return i == total


_SCOPE_NOTE = (
    "rewrites restricted to the truncated system {system}; reachability "
    "within these bounds is experimental evidence, not a proof"
)


def shape_experiment(n: int, m: int, bounds: Bounds | None = None) -> ShapeReport:
    """Closure of the n-th seed under basis(J, m), checked against u-shape.

    Requires 1 <= m <= n.  For m < n the gathered target is expected to stay
    unreachable; m = n is the control case where it is one step away.
    """
    if n < 1:
        raise ValueError("family size must be >= 1")
    if not 1 <= m <= n:
        raise ValueError("truncation must satisfy 1 <= m <= n")
    seed = u_word(n, 1, (1,) * n)
    if bounds is None:
        bounds = Bounds(4, len(seed) + 6)
    system = basis(Variety.J, m)
    trace = closure_trace(seed, system, bounds)
    target = w_family(n).rhs
    return ShapeReport(
        kind="u-shape",
        family=f"u_{n}",
        seed=seed,
        system=system.name,
        trunc=m,
        bounds=bounds,
        reachable=tuple((w, entry.depth) for w, entry in trace.items()),
        violations=tuple(
            (w, entry.step) for w, entry in trace.items() if not u_shape(w, n)
        ),
        target=target,
        target_reached=target in trace,
        target_depth=trace[target].depth if target in trace else None,
        scope_note=_SCOPE_NOTE.format(system=system.name),
    )


def template_experiment(
    variety: Variety,
    seed: Word,
    bounds: Bounds | None = None,
    trunc: int = 3,
) -> ShapeReport:
    """Closure of a template seed under basis(variety), checked for its shape."""
    if variety not in TEMPLATES:
        raise ValueError(f"{variety} has no preserved template shape")
    roles = template_instance(seed, variety)
    if roles is None:
        raise ValueError(
            f"seed {format_word(seed)!r} is not an instance of the "
            f"{variety.value} shape {TEMPLATES[variety]}"
        )
    if bounds is None:
        bounds = Bounds(4, len(seed) + 6)
    system = basis(variety, trunc)
    trace = closure_trace(seed, system, bounds)
    return ShapeReport(
        kind="template",
        family=f"template {variety.value}",
        seed=seed,
        system=system.name,
        trunc=trunc,
        bounds=bounds,
        reachable=tuple((w, entry.depth) for w, entry in trace.items()),
        violations=tuple(
            (w, entry.step)
            for w, entry in trace.items()
            if not matches_template_shape(w, variety, roles)
        ),
        target=None,
        target_reached=False,
        target_depth=None,
        scope_note=_SCOPE_NOTE.format(system=system.name),
    )

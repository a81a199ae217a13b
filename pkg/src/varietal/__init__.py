"""Equational machinery for a twelve-variety lattice of aperiodic monoids.

Public surface, by module:

- :mod:`varietal.words` — free-monoid words, divider/block decompositions
  and the positional divider functions.
- :mod:`varietal.identities` — identities, identity systems, the parametric
  families, the twelve varieties and their bases and lattice order.
- :mod:`varietal.rewrite` — one-step deduction, bounded derivation search
  with replayable certificates, closures, and the J-valid macro rewrites.
- :mod:`varietal.oracles` — word-problem decision procedures and the
  three-valued classifier over the whole lattice.
- :mod:`varietal.models` — finite monoids as Cayley tables, satisfaction
  checking and the stock refuter models.
- :mod:`varietal.nfb` — shape-preservation experiments.
- :mod:`varietal.cli` — the ``varietal`` command-line tool.
"""

from .identities import (
    Identity,
    IdentitySystem,
    Variety,
    all_permutations,
    basis,
    identity_permutation,
    lattice_leq,
    parse_identity,
    parse_system,
    phi_system,
    u_word,
    w_family,
)
from .models import (
    FiniteMonoid,
    SatisfactionReport,
    b0_monoid,
    from_presentation,
    refuter_models,
    satisfies,
    satisfies_system,
)
from .nfb import ShapeReport, shape_experiment, template_experiment, u_shape
from .oracles import (
    Bounds,
    HoldsStatus,
    check_variety,
    classify,
    classify_report,
    holds_in_E,
    holds_in_F,
    holds_in_F_join_dual_E,
    holds_in_dual_E,
    holds_in_small,
    necessary_filter,
    status_HIJ,
)
from .rewrite import (
    Derivation,
    Match,
    NotFound,
    Step,
    absorb_square,
    closure,
    derive,
    match_instances,
    normalize_con3,
    one_step,
    replay,
    swap_adjacent,
)
from .words import (
    Decomposition,
    DividerToken,
    Word,
    compact_word,
    decompose,
    divider_before,
    format_word,
    integrated,
    last_divider,
    letter_classes,
    occurrences,
    parse_word,
    prefix_length,
    project,
    reverse,
)

__version__ = "0.1.0"

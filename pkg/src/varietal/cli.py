"""Command-line entry point.

Subcommands: ``decompose``, ``check``, ``classify``, ``derive``,
``model-check``, ``family``, ``nfb shape`` and ``nfb template``.  Exit code 0
means a definite positive outcome, 1 a definite failure or an error, 2 an
Unknown verdict or an exhausted search.  ``--json`` switches every command to
its machine format; text output is byte-stable for a fixed invocation.

The environment variable ``VARIETAL_THREADS`` caps worker parallelism.  The
current implementation evaluates sequentially (one worker), which satisfies
any cap >= 1; the value is validated and recorded in the configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .identities import (
    Identity,
    Variety,
    all_permutations,
    basis,
    parse_identity,
    parse_system,
    parse_variety,
    u_word,
    w_family,
)
from .models import FiniteMonoid, format_witness, refuter_models, satisfies
from .nfb import ShapeReport, shape_experiment, template_experiment
from .oracles import check_variety, classify_report, default_bounds
from .report import write_report
from .rewrite import Bounds, Derivation, derive
from .words import (
    Word,
    WordSyntaxError,
    decompose,
    divider_profile,
    format_word,
    parse_word,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2


@dataclass(frozen=True)
class Config:
    """Resolved run configuration; fixed seed means reproducible output."""

    max_steps: int
    max_len: int | None
    trunc: int
    json_output: bool
    seed: int
    threads: int


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for Unknown here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAIL, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--trunc", type=int, default=3, metavar="N",
                        help="truncation level for J's basis (default 3)")
    parser.add_argument("--max-steps", type=int, default=6, metavar="N",
                        help="derivation depth cap (default 6)")
    parser.add_argument("--max-len", type=int, default=None, metavar="N",
                        help="word length cap (default: input length + slack)")
    parser.add_argument("--seed", type=int, default=0, metavar="N",
                        help="random seed recorded in the configuration")


def build_parser() -> _Parser:
    parser = _Parser(prog="varietal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose",
                       help="divider/block decomposition and h/t table")
    p.add_argument("word")
    _add_common(p)

    p = sub.add_parser("check",
                       help="decide one identity in one variety")
    p.add_argument("variety")
    p.add_argument("identity")
    _add_common(p)

    p = sub.add_parser("classify",
                       help="verdicts across all twelve varieties")
    p.add_argument("identity")
    _add_common(p)

    p = sub.add_parser("derive",
                       help="bounded derivation search with certificate")
    p.add_argument("identity")
    p.add_argument("--system", required=True, metavar="NAME|FILE",
                   help="variety name or identity file (one per line)")
    _add_common(p)

    p = sub.add_parser("model-check",
                       help="exhaustive satisfaction in a finite monoid")
    p.add_argument("model", help="stock model (b0, sl2, c3, d2) or JSON file")
    p.add_argument("identity")
    _add_common(p)

    p = sub.add_parser("family",
                       help="emit members of the parametric families")
    p.add_argument("kind", choices=("w", "u"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", default=None, metavar="'2 1'",
                   help="images of 1..n (w family; default identity)")
    p.add_argument("--p", type=int, default=1, help="middle exponent (u family)")
    p.add_argument("--l", default=None, metavar="'1 2'",
                   help="tail exponents (u family; default all 1)")
    _add_common(p)

    p = sub.add_parser("nfb",
                       help="shape-preservation experiments")
    nfb_sub = p.add_subparsers(dest="experiment", required=True, parser_class=_Parser)

    q = nfb_sub.add_parser("shape",
                           help="u-shape closure experiment")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--m", type=int, required=True,
                   help="truncation level, 1 <= m <= n")
    q.add_argument("--report-dir", default=None, metavar="DIR",
                   help="write report.json, words.csv and figures here")
    _add_common(q)

    q = nfb_sub.add_parser("template",
                           help="preserved-shape closure experiment")
    q.add_argument("--variety", required=True, choices=("H", "I", "J"))
    q.add_argument("--seed-word", required=True, metavar="WORD",
                   dest="seed_word", help="template instance to start from")
    q.add_argument("--report-dir", default=None, metavar="DIR")
    _add_common(q)

    return parser


def _config(args: argparse.Namespace) -> Config:
    raw = os.environ.get("VARIETAL_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"VARIETAL_THREADS must be an integer, got {raw!r}")
    if threads < 1:
        raise ValueError("VARIETAL_THREADS must be >= 1")
    if args.trunc < 1:
        raise ValueError("--trunc must be >= 1")
    if args.max_steps < 1:
        raise ValueError("--max-steps must be >= 1")
    if args.max_len is not None and args.max_len < 1:
        raise ValueError("--max-len must be >= 1")
    return Config(
        max_steps=args.max_steps,
        max_len=args.max_len,
        trunc=args.trunc,
        json_output=args.json,
        seed=getattr(args, "seed", 0),
        threads=threads,
    )


def _bounds_for(config: Config, *words: Word, slack: int = 4) -> Bounds:
    if config.max_len is not None:
        return Bounds(config.max_steps, config.max_len)
    return default_bounds(*words, max_steps=config.max_steps, extra_len=slack)


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def cmd_decompose(args, config: Config) -> int:
    w = parse_word(args.word)
    dec = decompose(w)
    profile = divider_profile(w)
    letters = tuple(dict.fromkeys(w))
    if config.json_output:
        _emit_json(
            {
                "word": format_word(w),
                "dividers": [d.name for d in dec.dividers],
                "blocks": [format_word(b) for b in dec.blocks],
                "h": {c: [d.name for d in profile[c]] for c in letters},
                "t": {c: profile[c][-1].name for c in letters},
            }
        )
        return EXIT_OK
    print(f"w = {format_word(w)}")
    print(f"decomposition: {dec.render()}")
    for c in letters:
        cells = " ".join(
            f"h_{i}={d.name}" for i, d in enumerate(profile[c], start=1)
        )
        print(f"{c}: {cells} t={profile[c][-1].name}")
    return EXIT_OK


_EXIT_BY_VERDICT = {"Holds": EXIT_OK, "Fails": EXIT_FAIL, "Unknown": EXIT_UNKNOWN}


def cmd_check(args, config: Config) -> int:
    variety = parse_variety(args.variety)
    identity = parse_identity(args.identity)
    bounds = _bounds_for(config, identity.lhs, identity.rhs)
    status = check_variety(variety, identity, bounds, config.trunc)
    if config.json_output:
        _emit_json(
            {
                "identity": identity.text,
                "variety": variety.value,
                "verdict": status.verdict,
                "evidence": status.evidence,
                "trunc": config.trunc,
                "bounds": bounds.to_json(),
            }
        )
    else:
        print(f"identity: {identity.pretty}")
        print(f"variety: {variety.value}")
        if variety.value in ("H", "I", "J"):
            print(f"trunc: {config.trunc}")
            print(f"bounds: max_steps={bounds.max_steps} max_len={bounds.max_len}")
        print(f"verdict: {status.verdict}")
        print(f"evidence: {status.evidence}")
    return _EXIT_BY_VERDICT[status.verdict]


def cmd_classify(args, config: Config) -> int:
    identity = parse_identity(args.identity)
    bounds = _bounds_for(config, identity.lhs, identity.rhs)
    report = classify_report(identity, bounds, config.trunc)
    if config.json_output:
        _emit_json(report)
    else:
        print(f"identity: {identity.pretty}")
        print(f"trunc: {report['trunc']}")
        print(f"bounds: max_steps={bounds.max_steps} max_len={bounds.max_len}")
        for name, verdict in report["verdicts"].items():
            print(f"{name}: {verdict} ({report['evidence'][name]})")
    if any(v == "Unknown" for v in report["verdicts"].values()):
        return EXIT_UNKNOWN
    return EXIT_OK


def _resolve_system(token: str, trunc: int):
    try:
        return basis(parse_variety(token), trunc)
    except ValueError:
        pass
    if os.path.exists(token):
        with open(token, encoding="utf-8") as fh:
            return parse_system(fh.read(), name=os.path.basename(token))
    raise ValueError(f"--system {token!r} is neither a variety nor a readable file")


def cmd_derive(args, config: Config) -> int:
    identity = parse_identity(args.identity)
    system = _resolve_system(args.system, config.trunc)
    bounds = _bounds_for(config, identity.lhs, identity.rhs)
    result = derive(identity.lhs, identity.rhs, system, bounds)
    if isinstance(result, Derivation):
        if config.json_output:
            _emit_json(
                {
                    "identity": identity.text,
                    "system": system.name,
                    "bounds": bounds.to_json(),
                    "steps": len(result),
                    "derivation": result.to_json(),
                }
            )
        else:
            print(f"identity: {identity.pretty}")
            print(f"system: {system.name}")
            print(f"steps: {len(result)}")
            print(result.render_chain())
        return EXIT_OK
    if config.json_output:
        _emit_json(
            {
                "identity": identity.text,
                "system": system.name,
                "bounds": bounds.to_json(),
                "steps": None,
                "derivation": None,
                "reason": result.reason,
            }
        )
    else:
        print(f"identity: {identity.pretty}")
        print(f"system: {system.name}")
        print(
            "not found within bounds "
            f"(max_steps={bounds.max_steps} max_len={bounds.max_len}); "
            "this is not a disproof"
        )
    return EXIT_UNKNOWN


def cmd_model_check(args, config: Config) -> int:
    stock = refuter_models()
    if args.model in stock:
        monoid = stock[args.model].monoid
    elif os.path.exists(args.model):
        monoid = FiniteMonoid.from_file(args.model)
    else:
        names = ", ".join(sorted(stock))
        raise ValueError(
            f"model {args.model!r} is neither a stock model ({names}) nor a file"
        )
    identity = parse_identity(args.identity)
    report = satisfies(monoid, identity)
    if config.json_output:
        _emit_json(
            {
                "model": monoid.name,
                "identity": identity.text,
                "holds": report.holds,
                "witness": dict(report.witness) if report.witness else None,
                "table": monoid.to_json(),
            }
        )
    else:
        print(f"model: {monoid.name}")
        print(f"identity: {identity.pretty}")
        print(f"verdict: {'Holds' if report.holds else 'Fails'}")
        if not report.holds:
            print(f"witness: {format_witness(monoid, identity, report)}")
    return EXIT_OK if report.holds else EXIT_FAIL


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise ValueError(f"{what} must be integers, got {text!r}")


def cmd_family(args, config: Config) -> int:
    if args.kind == "w":
        perm = _parse_ints(args.perm, "--perm") if args.perm else None
        identity = w_family(args.n, perm)
        if config.json_output:
            _emit_json({"name": identity.name, "identity": identity.text})
        else:
            print(identity.pretty)
    else:
        ells = _parse_ints(args.l, "--l") if args.l else (1,) * args.n
        w = u_word(args.n, args.p, ells)
        if config.json_output:
            _emit_json({"word": format_word(w)})
        else:
            print(format_word(w))
    return EXIT_OK


def _emit_experiment(report: ShapeReport, args, config: Config) -> int:
    if args.report_dir:
        paths = write_report(report, args.report_dir)
        if not config.json_output:
            for path in paths:
                print(f"wrote {path}")
    if config.json_output:
        _emit_json(report.to_json())
    else:
        print(f"experiment: {report.family}")
        print(f"seed: {format_word(report.seed)}")
        print(f"system: {report.system}")
        print(
            f"bounds: max_steps={report.bounds.max_steps} "
            f"max_len={report.bounds.max_len}"
        )
        by_depth = "/".join(str(c) for c in report.depth_counts)
        print(f"reachable: {report.reachable_count} words (by depth: {by_depth})")
        print(f"violations: {len(report.violations)}")
        if report.target is not None:
            state = (
                f"reached at depth {report.target_depth}"
                if report.target_reached
                else "not reached"
            )
            print(f"target {format_word(report.target)}: {state}")
        print(f"note: {report.scope_note}")
        print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_nfb(args, config: Config) -> int:
    if args.experiment == "shape":
        seed = u_word(args.n, 1, (1,) * args.n)
        bounds = Bounds(
            config.max_steps,
            config.max_len if config.max_len is not None else len(seed) + 6,
        )
        report = shape_experiment(args.n, args.m, bounds)
    else:
        seed = parse_word(args.seed_word)
        bounds = Bounds(
            config.max_steps,
            config.max_len if config.max_len is not None else len(seed) + 6,
        )
        report = template_experiment(
            Variety(args.variety), seed, bounds, config.trunc
        )
    return _emit_experiment(report, args, config)


_COMMANDS = {
    "decompose": cmd_decompose,
    "check": cmd_check,
    "classify": cmd_classify,
    "derive": cmd_derive,
    "model-check": cmd_model_check,
    "family": cmd_family,
    "nfb": cmd_nfb,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        return _COMMANDS[args.command](args, config)
    except WordSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front door.

Subcommands: score, winners, gen, experiment, enumerate, audit.  Exit codes:
0 on success, 1 on usage or input errors, 2 when a computation exceeds an
enumeration/search cap or a soundness check aborts.  Stochastic subcommands
require an explicit --seed (reproducibility is mandatory, not optional).
"""

from __future__ import annotations

import argparse
import os
import sys

from .elections import CapExceededError, ParseError, parse_election, serialize_election
from .experiments import (
    ExperimentConfig,
    SoundnessError,
    agreement_csv,
    agreement_study,
    certificate_csv,
    certificate_sweep,
    counting_bound,
    counting_bound_table,
    write_manifest,
)
from .generate import bad_ratio_profile, count_situations, gen_iac, gen_ic, gen_pe
from .elections import profile_to_situation
from .rules import ALL_RULES, compute_score_report, winners as rule_winners


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1, not argparse's default 2
        raise UsageError(message)


def _read_election(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_election(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read election file {path}: {exc.strerror}")


def _parse_rules(text: str) -> tuple[str, ...]:
    if text == "all":
        return ALL_RULES
    rules = tuple(r.strip() for r in text.split(",") if r.strip())
    for r in rules:
        if r not in ALL_RULES:
            raise UsageError(f"unknown rule {r!r}; known: {', '.join(ALL_RULES)}")
    if not rules:
        raise UsageError("empty rule list")
    return rules


def _cmd_score(args) -> int:
    e = _read_election(args.input)
    report = compute_score_report(e, _parse_rules(args.rules))
    text = report.to_csv() if args.csv else report.to_table()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_winners(args) -> int:
    e = _read_election(args.input)
    if args.rule not in ALL_RULES:
        raise UsageError(f"unknown rule {args.rule!r}; known: {', '.join(ALL_RULES)}")
    win = rule_winners(e, args.rule)
    print(" ".join(sorted(e.labels[a] for a in win)))
    return 0


def _cmd_gen(args) -> int:
    if args.model == "pe" and args.a is None:
        raise UsageError("--a is required for the pe model")
    urn = None
    if args.urn:
        urn_election = _read_election(args.urn)
        if urn_election.m != args.m:
            raise UsageError("urn file alternative count does not match --m")
        urn = dict(urn_election.counts)
    texts = []
    for t in range(args.trials):
        if args.model == "ic":
            e = profile_to_situation(gen_ic(args.m, args.n, args.seed, trial=t))
        elif args.model == "iac":
            e = gen_iac(args.m, args.n, args.seed, trial=t)
        else:
            e = gen_pe(args.m, args.n, args.seed, a=args.a, initial_urn=urn, trial=t)
        texts.append(serialize_election(e))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for t, text in enumerate(texts):
            with open(os.path.join(args.out, f"election_{t:04d}.elec"), "w") as fh:
                fh.write(text)
    else:
        sys.stdout.write("---\n".join(texts))
    return 0


def _cmd_experiment(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = ExperimentConfig.from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc.strerror}")
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad experiment config: {exc}")
    if args.seed is not None:
        cfg = ExperimentConfig(
            cfg.model, cfg.m, cfg.ns, cfg.trials, cfg.rules, args.seed, cfg.a,
            cfg.dodgson_backend,
        )
    if args.kind == "agreement":
        text = agreement_csv(list(agreement_study(cfg)), cfg)
    else:
        text = certificate_csv(certificate_sweep(cfg))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        write_manifest(args.out + ".manifest.json", cfg, args.kind)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_enumerate(args) -> int:
    total = count_situations(args.m, args.n)
    if total > args.cap:
        raise CapExceededError(f"{total} situations exceed the cap {args.cap}")
    print(f"{total} situations")
    if args.audit:
        return _run_audit(args.m, args.n, -3, 3, ("tideman", "dodgson"), args.cap)
    return 0


def _run_audit(m, n, kmin, kmax, rules, cap) -> int:
    ks = range(kmin, kmax + 1)
    counts, total = counting_bound_table(m, n, ks, rules, cap)
    bound = counting_bound(m, n)
    print("a,z,rule,k,count,total,fraction,bound,ok")
    worst = 0.0
    for a in range(m):
        for z in range(m):
            if a == z:
                continue
            for rule in rules:
                for k in ks:
                    c = counts.get((a, z, rule, k), 0)
                    frac = c / total
                    worst = max(worst, frac)
                    ok = c * bound.denominator <= bound.numerator * total
                    print(f"{a},{z},{rule},{k},{c},{total},{frac:.6g},{bound},{ok}")
                    if not ok:
                        return 2
    return 0


def _cmd_audit(args) -> int:
    if args.m < 3:
        raise UsageError("counting audit requires --m >= 3")
    rules = ("tideman", "dodgson") if args.rule == "both" else (args.rule,)
    return _run_audit(args.m, args.n, args.kmin, args.kmax, rules, args.cap)


def _cmd_badratio(args) -> int:
    sys.stdout.write(serialize_election(bad_ratio_profile(args.which, args.scale)))
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="dodgson", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("score", help="score an election under the requested rules")
    sp.add_argument("--input", required=True, help="election file")
    sp.add_argument("--rules", default="all", help="'all' or comma list of rules")
    sp.add_argument("--csv", action="store_true", help="emit CSV instead of a table")
    sp.add_argument("--output", help="write to file instead of stdout")
    sp.set_defaults(func=_cmd_score)

    sp = sub.add_parser("winners", help="print the winner set of one rule")
    sp.add_argument("--input", required=True)
    sp.add_argument("--rule", required=True)
    sp.set_defaults(func=_cmd_winners)

    sp = sub.add_parser("gen", help="generate random elections")
    sp.add_argument("--model", required=True, choices=["ic", "iac", "pe"])
    sp.add_argument("--m", required=True, type=int)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", required=True, type=int)
    sp.add_argument("--a", type=int, default=None, help="urn reinforcement (pe)")
    sp.add_argument("--urn", help="initial urn as an election file (pe)")
    sp.add_argument("--out", help="directory for one file per trial; default stdout stream")
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("experiment", help="run a batch study from a config file")
    sp.add_argument("kind", choices=["agreement", "certificate"])
    sp.add_argument("--config", required=True, help="JSON experiment config")
    sp.add_argument("--seed", type=int, default=None, help="override config seed")
    sp.add_argument("--out", help="CSV output path (manifest written alongside)")
    sp.set_defaults(func=_cmd_experiment)

    sp = sub.add_parser("enumerate", help="count (and optionally audit) situations")
    sp.add_argument("--m", required=True, type=int)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--cap", type=int, default=10**6)
    sp.add_argument("--audit", action="store_true", help="run the counting audit")
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("audit", help="exact counting-bound audit")
    sp.add_argument("--m", required=True, type=int)
    sp.add_argument("--n", required=True, type=int)
    sp.add_argument("--kmin", type=int, default=-3)
    sp.add_argument("--kmax", type=int, default=3)
    sp.add_argument("--rule", choices=["tideman", "dodgson", "both"], default="both")
    sp.add_argument("--cap", type=int, default=10**6)
    sp.set_defaults(func=_cmd_audit)

    sp = sub.add_parser("badratio", help="emit a known bad-ratio election")
    sp.add_argument("--which", required=True, choices=["g", "h"])
    sp.add_argument("--scale", type=int, default=1)
    sp.set_defaults(func=_cmd_badratio)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"error: bad election file: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"error: capability exceeded: {exc}", file=sys.stderr)
        return 2
    except SoundnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())

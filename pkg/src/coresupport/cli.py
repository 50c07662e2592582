"""Command-line front end.

Exit status: 0 on success, 2 for usage or input errors, 3 when the analysis
has no answer (an unresolved tie, or a Condorcet cycle where a ranking was
required).
"""

from __future__ import annotations

import argparse
import secrets
import sys
from typing import Sequence, TextIO

from .ballots import (
    BallotFormatError,
    BallotProfile,
    UnknownCandidateError,
    alaska_2022,
    continuation_rate,
    format_percent,
    read_profile,
)
from .criteria import (
    PROMOTE,
    CriterionReport,
    check_broad_support,
    check_core_support,
    find_monotonicity_violation,
    iia_flip_report,
)
from .oracle import (
    FIXTURE,
    KINDS,
    ProfileGenerator,
    agreement_scan,
    candidate_names,
    general_result_scan,
)
from .report import Codec, dumps
from .tabulation import (
    TieError,
    TiebreakPolicy,
    condorcet_outcome,
    first_preferences,
    irv_ranking,
    pairwise_matrix,
    plurality_ranking,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ANALYSIS = 3


class AnalysisFailure(Exception):
    """No result exists (e.g. a Condorcet cycle where a ranking is needed)."""


def _int(n: int) -> str:
    return f"{n:,}"


def _ranking_text(profile: BallotProfile, ranking) -> str:
    return " > ".join(profile.name_of(c) for c in ranking)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument(
        "--tiebreak",
        choices=[p.value for p in TiebreakPolicy],
        default=TiebreakPolicy.ERROR.value,
        help="elimination tie handling (default: error)",
    )

    parser = argparse.ArgumentParser(
        prog="coresupport",
        description="Tabulate ranked ballots and check majority-rule criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tabulate", parents=[common], help="plurality, IRV or Condorcet ranking")
    p.add_argument("--method", choices=["plurality", "irv", "condorcet"], required=True)
    p.add_argument("file")

    p = sub.add_parser("pairwise", parents=[common], help="all-ballot pairwise tallies")
    p.add_argument("file")

    p = sub.add_parser("check", parents=[common], help="check a ranking against a criterion")
    p.add_argument("--criterion", choices=["core", "broad"], required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--ranking", help="explicit ranking, e.g. 'A>B>C'")
    source.add_argument("--from", dest="from_method", choices=["irv", "condorcet", "plurality"])
    p.add_argument("file")

    p = sub.add_parser("monotonicity", parents=[common], help="search for a monotonicity failure")
    p.add_argument("--demote", action="store_true", help="also try demoting losing candidates")
    p.add_argument("--exhaustive", action="store_true", help="allow moves spread over several groups")
    p.add_argument("file")

    p = sub.add_parser("iia", parents=[common], help="IRV pair flips after removing a candidate")
    p.add_argument("--remove", required=True, metavar="NAME")
    p.add_argument("file")

    p = sub.add_parser("compare", parents=[common], help="IRV and Condorcet side by side")
    p.add_argument("file")

    p = sub.add_parser("continuation", parents=[common], help="share of first choices ranking a second")
    p.add_argument("file")

    p = sub.add_parser("scan", parents=[common], help="seeded random-profile scans")
    p.add_argument("--kind", choices=KINDS, default="impartial")
    p.add_argument("-n", "--candidates", type=int, default=3)
    p.add_argument("-b", "--ballots", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fresh-seed", action="store_true", help="draw a random seed and report it")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument(
        "--general-result",
        action="store_true",
        help="test the three-candidate IRV/Condorcet disagreement pattern",
    )
    p.add_argument("--no-monotonicity", action="store_true", help="skip witness searches")
    return parser


def _profile(args) -> BallotProfile:
    args.profile = read_profile(args.file)
    return args.profile


def _policy(args) -> TiebreakPolicy:
    return TiebreakPolicy(args.tiebreak)


def _emit_rounds(profile, rounds, out):
    for r in rounds:
        tallies = " | ".join(f"{profile.name_of(c)} {_int(v)}" for c, v in r.tallies.items())
        flag = " (tie-break)" if r.tiebreak else ""
        out.write(
            f"Round {r.round}: {tallies} | exhausted {_int(r.exhausted)}"
            f" -> eliminate {profile.name_of(r.eliminated)}{flag}\n"
        )


def _emit_criterion(profile, report: CriterionReport, out):
    for p in report.pairs:
        out.write(
            f"{profile.name_of(p.x)} > {profile.name_of(p.y)} : {_int(p.x_votes)} vs {_int(p.y_votes)}"
            f" (abstain {_int(p.abstain)}) [{p.restriction}] — {p.verdict.value.upper()}\n"
        )
    out.write(f"Overall: {'PASS' if report.passed else 'FAIL'}\n")


def cmd_tabulate(args, out) -> int:
    profile = _profile(args)
    codec = Codec(profile.names)
    policy = _policy(args)
    doc = {"command": "tabulate", "method": args.method, "candidates": profile.names}
    if args.method == "plurality":
        ranking = plurality_ranking(profile, policy)
        tallies, _ = first_preferences(profile, range(profile.n_candidates))
        doc.update(ranking=codec.names_of(ranking), tallies={profile.name_of(c): tallies[c] for c in ranking})
        if args.json:
            out.write(dumps(doc))
        else:
            for c in ranking:
                out.write(f"{profile.name_of(c)}: {_int(tallies[c])}\n")
            out.write(f"Plurality ranking: {_ranking_text(profile, ranking)}\n")
            out.write(f"Winner: {profile.name_of(ranking[0])}\n")
        return EXIT_OK
    if args.method == "irv":
        ranking, rounds = irv_ranking(profile, policy)
        doc.update(ranking=codec.names_of(ranking), rounds=[codec.encode(r) for r in rounds])
        if args.json:
            out.write(dumps(doc))
        else:
            _emit_rounds(profile, rounds, out)
            out.write(f"IRV ranking: {_ranking_text(profile, ranking)}\n")
            out.write(f"Winner: {profile.name_of(ranking[0])}\n")
        return EXIT_OK

    outcome = condorcet_outcome(pairwise_matrix(profile))
    doc.update(outcome=codec.encode(outcome))
    if args.json:
        out.write(dumps(doc))
    elif outcome.ranking is not None:
        out.write(f"Condorcet ranking: {_ranking_text(profile, outcome.ranking)}\n")
        out.write(f"Winner: {profile.name_of(outcome.ranking[0])}\n")
    else:
        _emit_cycle(profile, outcome, out)
    return EXIT_OK if outcome.ranking is not None else EXIT_ANALYSIS


def _emit_cycle(profile, outcome, out):
    smith = ", ".join(profile.name_of(c) for c in sorted(outcome.smith_set))
    out.write(f"No transitive Condorcet ranking. Smith set: {{{smith}}}\n")
    for x, y in outcome.tied_pairs:
        out.write(f"Tied pair: {profile.name_of(x)} = {profile.name_of(y)}\n")


def cmd_pairwise(args, out) -> int:
    profile = _profile(args)
    m = pairwise_matrix(profile)
    if args.json:
        out.write(dumps({"command": "pairwise", "candidates": profile.names,
                         "matrix": Codec(profile.names).encode(m)}))
        return EXIT_OK
    n = profile.n_candidates
    for x in range(n):
        for y in range(x + 1, n):
            out.write(
                f"{profile.name_of(x)} vs {profile.name_of(y)} : {_int(m.beats[x][y])} vs"
                f" {_int(m.beats[y][x])} (abstain {_int(m.abstain(x, y))})\n"
            )
    out.write(f"Total ballots: {_int(m.total)}\n")
    return EXIT_OK


def cmd_check(args, out) -> int:
    profile = _profile(args)
    policy = _policy(args)
    if args.ranking is not None:
        ranking = profile.parse_ranking(args.ranking)
        if sorted(ranking) != list(range(profile.n_candidates)):
            raise ValueError(f"--ranking must list every candidate exactly once: {args.ranking!r}")
    elif args.from_method == "irv":
        ranking = irv_ranking(profile, policy)[0]
    elif args.from_method == "plurality":
        ranking = plurality_ranking(profile, policy)
    else:
        outcome = condorcet_outcome(pairwise_matrix(profile))
        if outcome.ranking is None:
            raise AnalysisFailure("no transitive Condorcet ranking exists")
        ranking = outcome.ranking
    check = check_core_support if args.criterion == "core" else check_broad_support
    report = check(profile, ranking)
    if args.json:
        out.write(dumps({"command": "check", "candidates": profile.names,
                         "report": Codec(profile.names).encode(report)}))
    else:
        out.write(f"Ranking: {_ranking_text(profile, ranking)}\n")
        _emit_criterion(profile, report, out)
    return EXIT_OK


def cmd_monotonicity(args, out) -> int:
    profile = _profile(args)
    witness = find_monotonicity_violation(
        profile, _policy(args), demote_losers=args.demote, exhaustive=args.exhaustive
    )
    codec = Codec(profile.names)
    if args.json:
        out.write(dumps({"command": "monotonicity", "candidates": profile.names,
                         "witness": None if witness is None else codec.encode(witness)}))
        return EXIT_OK
    if witness is None:
        out.write("No monotonicity violation found.\n")
        return EXIT_OK
    verb = "Raising" if witness.direction == PROMOTE else "Lowering"
    who = profile.name_of(witness.candidate)
    out.write(f"{verb} {who} on {_int(witness.k)} ballots changes the winner.\n")
    for m in witness.moves:
        out.write(
            f"  {_int(m.count)} x {profile.format_ranking(m.source) or '(empty)'}"
            f" -> {profile.format_ranking(m.target)}\n"
        )
    out.write(f"Original winner: {profile.name_of(witness.original_winner)}\n")
    _emit_rounds(profile, witness.original_rounds, out)
    out.write(f"New winner: {profile.name_of(witness.new_winner)}\n")
    _emit_rounds(profile, witness.new_rounds, out)
    return EXIT_OK


def cmd_iia(args, out) -> int:
    profile = _profile(args)
    report = iia_flip_report(profile, profile.candidate_id(args.remove), _policy(args))
    if args.json:
        out.write(dumps({"command": "iia", "candidates": profile.names,
                         "report": Codec(profile.names).encode(report)}))
        return EXIT_OK
    out.write(f"IRV ranking: {_ranking_text(profile, report.before)}\n")
    out.write(f"Without {profile.name_of(report.removed)}: {_ranking_text(profile, report.after)}\n")
    if not report.flips:
        out.write("No pair changes order.\n")
    for f in report.flips:
        t = f.tally
        out.write(
            f"Flip: {profile.name_of(f.before_upper)} > {profile.name_of(f.before_lower)} becomes"
            f" {profile.name_of(t.x)} > {profile.name_of(t.y)} : {_int(t.x_votes)} vs {_int(t.y_votes)}"
            f" (abstain {_int(t.abstain)})\n"
        )
    return EXIT_OK


def cmd_compare(args, out) -> int:
    profile = _profile(args)
    codec = Codec(profile.names)
    irv, rounds = irv_ranking(profile, _policy(args))
    outcome = condorcet_outcome(pairwise_matrix(profile))
    agree = outcome.ranking is not None and outcome.ranking[0] == irv[0]
    if args.json:
        out.write(dumps({
            "command": "compare",
            "candidates": profile.names,
            "irv": {"ranking": codec.names_of(irv), "rounds": [codec.encode(r) for r in rounds]},
            "condorcet": codec.encode(outcome),
            "agree": agree,
        }))
        return EXIT_OK if outcome.ranking is not None else EXIT_ANALYSIS
    cond = profile.name_of(outcome.ranking[0]) if outcome.ranking is not None else "(cycle)"
    out.write(f"IRV: {profile.name_of(irv[0])} | Condorcet: {cond} — {'AGREE' if agree else 'DISAGREE'}\n")
    out.write(f"  IRV ranking:       {_ranking_text(profile, irv)}\n")
    if outcome.ranking is not None:
        out.write(f"  Condorcet ranking: {_ranking_text(profile, outcome.ranking)}\n")
        return EXIT_OK
    _emit_cycle(profile, outcome, out)
    return EXIT_ANALYSIS


def cmd_continuation(args, out) -> int:
    profile = _profile(args)
    rows = []
    for c in range(profile.n_candidates):
        try:
            rate = continuation_rate(profile, c)
        except ValueError:
            rows.append((c, None))
            continue
        rows.append((c, rate))
    if args.json:
        out.write(dumps({
            "command": "continuation",
            "candidates": profile.names,
            "rates": {
                profile.name_of(c): None if r is None else {
                    "numerator": r.numerator, "denominator": r.denominator, "percent": format_percent(r)
                }
                for c, r in rows
            },
        }))
        return EXIT_OK
    first, _ = first_preferences(profile, range(profile.n_candidates))
    for c, rate in rows:
        name = profile.name_of(c)
        if rate is None:
            out.write(f"{name}: no first-preference ballots\n")
            continue
        continued = rate * first[c]
        out.write(f"{name}: {_int(int(continued))} of {_int(first[c])} = {format_percent(rate)}\n")
    return EXIT_OK


def cmd_scan(args, out) -> int:
    seed = secrets.randbits(64) if args.fresh_seed else args.seed
    gen = ProfileGenerator(args.kind, args.candidates, args.ballots, seed)
    settings = {"kind": gen.kind, "n": gen.n, "b": gen.b, "seed": gen.seed, "trials": args.trials}
    names = alaska_2022().names if gen.kind == FIXTURE else candidate_names(gen.n)
    codec = Codec(names)
    if args.general_result:
        report = general_result_scan(gen, args.trials)
        summary = codec.encode(report)
    else:
        summary = codec.encode(agreement_scan(gen, args.trials, monotonicity=not args.no_monotonicity))
    if args.json:
        out.write(dumps({"command": "scan", "generator": settings, "summary": summary}))
        return EXIT_OK
    out.write(" ".join(f"{k}={v}" for k, v in settings.items()) + "\n")
    for key, value in summary.items():
        if key == "counterexamples":
            out.write(f"{key}: {len(value)}\n")
            for c in value:
                out.write(f"  seed {c['seed']}: IRV {'>'.join(c['irv'])} | Condorcet {'>'.join(c['condorcet'])}\n")
        else:
            out.write(f"{key}: {value}\n")
    return EXIT_OK


COMMANDS = {
    "tabulate": cmd_tabulate,
    "pairwise": cmd_pairwise,
    "check": cmd_check,
    "monotonicity": cmd_monotonicity,
    "iia": cmd_iia,
    "compare": cmd_compare,
    "continuation": cmd_continuation,
    "scan": cmd_scan,
}


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except TieError as exc:
        profile = getattr(args, "profile", None)
        if profile is None:
            err.write(f"error: {exc}\n")
        else:
            tied = ", ".join(profile.name_of(c) for c in exc.tied)
            where = f" in round {exc.round}" if exc.round is not None else ""
            err.write(f"error: tie between {tied}{where}\n")
        return EXIT_ANALYSIS
    except AnalysisFailure as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ANALYSIS
    except (OSError, BallotFormatError, UnknownCandidateError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

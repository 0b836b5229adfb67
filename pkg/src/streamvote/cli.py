"""``streamvote`` command line: ``gen``, ``solve`` and ``experiment``.

Exit codes: 0 success, 1 runtime failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

from streamvote import generators
from streamvote.election import RuleSpec, dumps, read_election, read_stream
from streamvote.errors import BallotTypeError, ParameterError, ParseError, StreamVoteError
from streamvote.experiment import GENERATORS, config_from_mapping, read_config_file, run_experiment, write_csv
from streamvote.streaming import DEFAULT_DELTA, SAMPLERS, streaming_winner
from streamvote.winner import DEFAULT_ENUMERATION_CAP, exact_winner

USAGE_ERRORS = (ParameterError, ParseError, BallotTypeError)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(" ", ",").split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamvote", description="Streaming multiwinner elections.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic vote stream")
    kinds = gen.add_subparsers(dest="kind", required=True)
    for name in ("impartial-approval", "impartial-borda", "polarized-approval"):
        p = kinds.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        if name == "impartial-approval":
            p.add_argument("--p", type=float, default=0.5)
        if name == "polarized-approval":
            p.add_argument("--blocks", type=int, required=True)
    for name in ("gadget-disjointness-approval", "gadget-disjointness-borda"):
        p = kinds.add_parser(name)
        p.add_argument("--u", type=int, required=True)
        p.add_argument("--A", type=_int_list, default=[], help="Alice's elements, 0-based, comma-separated")
        p.add_argument("--B", type=_int_list, default=[], help="Bob's elements, 0-based, comma-separated")
        p.add_argument("--out", default=None)
    p = kinds.add_parser("heavy-hitters")
    p.add_argument("--counts", type=_int_list, required=True, help="occurrences per item type, comma-separated")
    p.add_argument("--out", default=None)

    solve = sub.add_parser("solve", help="find a winning committee for a vote-stream file")
    solve.add_argument("file", help="vote-stream file, or - for standard input")
    solve.add_argument("--rule", required=True, help="approval-cc, approval-m, borda-cc, borda-m, positional-cc, positional-m")
    solve.add_argument("--k", type=int, required=True)
    solve.add_argument("--mode", choices=("exact", "stream"), default="exact")
    solve.add_argument("--eps", type=float, default=0.2)
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--sampler", choices=SAMPLERS, default="reservoir")
    solve.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    solve.add_argument("--n", type=int, default=None, help="stream length (Bernoulli sampler; counted from the file if omitted)")
    solve.add_argument("--retain-all", action="store_true", help="keep every vote (retention probability 1)")
    solve.add_argument("--score-vector", type=_int_list, default=None)
    solve.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    solve.add_argument("--json", action="store_true", help="print a JSON report instead of text")

    exp = sub.add_parser("experiment", help="run a seeded Monte-Carlo batch and write CSV")
    exp.add_argument("--config", default=None, help="key=value settings file; flags override it")
    exp.add_argument("--rule")
    exp.add_argument("--k", type=int)
    exp.add_argument("--eps", type=float)
    exp.add_argument("--trials", type=int)
    exp.add_argument("--seed-base", type=int)
    exp.add_argument("--generator", choices=GENERATORS)
    exp.add_argument("--n", type=int)
    exp.add_argument("--m", type=int)
    exp.add_argument("--p", type=float)
    exp.add_argument("--blocks", type=int)
    exp.add_argument("--sampler", choices=SAMPLERS)
    exp.add_argument("--delta", type=float)
    exp.add_argument("--retain-all", action="store_true", default=None)
    exp.add_argument("--score-vector", default=None)
    exp.add_argument("--out", default=None)
    exp.add_argument("--jobs", type=int, default=1)
    exp.add_argument("--timing", action="store_true", help="fill wall_time_ms (output is then not reproducible)")
    return parser


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "impartial-approval":
        text = dumps(generators.gen_impartial_approval(args.n, args.m, args.p, args.seed))
    elif kind == "impartial-borda":
        text = dumps(generators.gen_impartial_borda(args.n, args.m, args.seed))
    elif kind == "polarized-approval":
        text = dumps(generators.gen_polarized_approval(args.n, args.m, args.blocks, args.seed))
    elif kind == "heavy-hitters":
        text = dumps(generators.gen_heavy_hitters(args.counts).election)
    else:
        if kind == "gadget-disjointness-approval":
            variant, build = generators.GadgetVariant.APPROVAL_DISJOINTNESS, generators.gen_disjointness_approval
        else:
            variant, build = generators.GadgetVariant.BORDA_DISJOINTNESS, generators.gen_disjointness_borda
        text = dumps(build(generators.GadgetSpec(args.u, frozenset(args.A), frozenset(args.B), variant)).election)
    with _output(args.out) as out:
        out.write(text)
    return 0


def _count_votes(path: str) -> int:
    return sum(1 for _ in read_stream(path))


def cmd_solve(args) -> int:
    rule = RuleSpec.from_name(args.rule, args.score_vector)
    source = sys.stdin if args.file == "-" else args.file
    report = {"rule": rule.name, "k": args.k, "mode": args.mode}
    if args.mode == "exact":
        election = read_election(source)
        if election.ballot is not None and election.ballot is not rule.ballot:
            raise BallotTypeError(f"{rule.name} cannot score a {election.ballot.value} stream")
        result = exact_winner(election, rule, args.k, cap=args.cap)
        report.update(
            n=election.n,
            m=election.m,
            winners=[list(c.members) for c in result.winners],
            committee=list(result.winner.members),
            score=result.opt_score,
        )
    else:
        n = args.n
        if args.sampler == "bernoulli" and n is None:
            if args.file == "-":
                raise ParameterError("the Bernoulli sampler needs --n when reading standard input")
            n = _count_votes(args.file)
        stream = read_stream(source)
        if stream.ballot is not rule.ballot:
            raise BallotTypeError(f"{rule.name} cannot score a {stream.ballot.value} stream")
        result = streaming_winner(
            stream,
            rule,
            args.k,
            args.eps,
            m=stream.m,
            sampler=args.sampler,
            seed=args.seed,
            n=n,
            delta=args.delta,
            retain_all=args.retain_all,
            cap=args.cap,
        )
        stats = result.stats
        report.update(
            m=stream.m,
            eps=args.eps,
            sampler=args.sampler,
            seed=args.seed,
            committee=list(result.committee.members),
            sample_score=result.sample_score,
            draw_size=result.params.draw_size,
            clamped=result.clamped,
            votes_seen=stats.votes_seen,
            votes_stored=stats.votes_stored,
            peak_stored_votes=stats.peak_stored_votes,
            stored_ballot_cells=stats.stored_ballot_cells,
        )
    if args.json:
        print(json.dumps(report, sort_keys=True))
        return 0
    fmt = lambda c: "{" + ", ".join(map(str, c)) + "}"  # noqa: E731
    print(f"rule: {report['rule']}  k: {args.k}  mode: {args.mode}")
    print(f"committee: {fmt(report['committee'])}")
    if args.mode == "exact":
        print(f"score: {report['score']}")
        print(f"winners ({len(report['winners'])}): " + " ".join(fmt(c) for c in report["winners"]))
    else:
        print(f"sample score: {report['sample_score']}")
        print(
            f"votes seen: {report['votes_seen']}  stored: {report['votes_stored']}  "
            f"peak: {report['peak_stored_votes']}  draw size: {report['draw_size']}  clamped: {report['clamped']}"
        )
    return 0


def cmd_experiment(args) -> int:
    values = read_config_file(args.config) if args.config else {}
    for key in ("rule", "k", "eps", "trials", "seed_base", "generator", "n", "m", "p", "blocks",
                "sampler", "delta", "retain_all", "score_vector", "out"):
        value = getattr(args, key)
        if value is not None:
            values[key] = value
    config = config_from_mapping(values)
    summary = run_experiment(config, jobs=args.jobs)
    with _output(config.out) as out:
        write_csv(summary, out, timing=args.timing)
    print(
        f"trials: {len(summary.records)}  success rate: {summary.success_rate:.3f}  "
        f"mean peak stored votes: {summary.mean_peak_stored:.1f}  errors: {summary.errors}",
        file=sys.stderr,
    )
    return 0


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "experiment": cmd_experiment}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as exc:
        parser.print_usage(sys.stderr)
        print(f"streamvote {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (StreamVoteError, OSError) as exc:
        print(f"streamvote {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Seeded Monte-Carlo batches comparing the streaming answer with the exact optimum.

Each trial draws a fresh election from the configured generator, runs the
streaming pipeline on it, and scores the returned committee against the
full election.  The full election is kept only to compute these reference
scores; the space figures in each record come from the sampler alone.
"""

from __future__ import annotations

import csv
import io
import math
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import TextIO

from streamvote import generators
from streamvote.election import Ballot, Election, RuleSpec, satisfaction_matrix
from streamvote.errors import ParameterError
from streamvote.streaming import DEFAULT_DELTA, SAMPLERS, streaming_winner
from streamvote.winner import committee_score, exact_winner, score_unit

GENERATORS = ("impartial-approval", "impartial-borda", "polarized-approval")

CSV_COLUMNS = (
    "trial",
    "seed",
    "committee",
    "sample_score",
    "full_score",
    "opt_score",
    "surrogate_gap",
    "tolerance",
    "success",
    "draw_size",
    "clamped",
    "votes_seen",
    "votes_stored",
    "peak_stored_votes",
    "stored_ballot_cells",
    "wall_time_ms",
    "error",
)


@dataclass(frozen=True)
class ExperimentConfig:
    rule: str = "approval-cc"
    k: int = 2
    eps: float = 0.2
    trials: int = 50
    seed_base: int = 0
    generator: str = "impartial-approval"
    n: int = 10_000
    m: int = 6
    p: float = 0.3
    blocks: int = 2
    sampler: str = "reservoir"
    delta: float = DEFAULT_DELTA
    retain_all: bool = False
    score_vector: tuple[int, ...] | None = None
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.generator not in GENERATORS:
            raise ParameterError(f"unknown generator {self.generator!r}; choose from {GENERATORS}")
        if self.sampler not in SAMPLERS:
            raise ParameterError(f"unknown sampler {self.sampler!r}; choose from {SAMPLERS}")
        if not 1 <= self.k <= self.m:
            raise ParameterError(f"need 1 <= k <= m, got k={self.k}, m={self.m}")
        if not 0 < self.eps <= 1:
            raise ParameterError(f"epsilon must lie in (0, 1], got {self.eps}")
        if self.n < 0:
            raise ParameterError(f"n must be >= 0, got {self.n}")
        rule = self.rule_spec()
        gen_ballot = Ballot.POSITIONAL if self.generator == "impartial-borda" else Ballot.APPROVAL
        if rule.ballot is not gen_ballot:
            raise ParameterError(f"generator {self.generator} produces {gen_ballot.value} ballots, rule {rule.name} needs {rule.ballot.value}")

    def rule_spec(self) -> RuleSpec:
        return RuleSpec.from_name(self.rule, self.score_vector)

    def make_election(self, seed: int) -> Election:
        if self.generator == "impartial-approval":
            return generators.gen_impartial_approval(self.n, self.m, self.p, seed)
        if self.generator == "impartial-borda":
            return generators.gen_impartial_borda(self.n, self.m, seed)
        return generators.gen_polarized_approval(self.n, self.m, self.blocks, seed)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    committee: str = ""
    sample_score: int | None = None
    full_score: int | None = None
    opt_score: int | None = None
    surrogate_gap: int | None = None
    tolerance: float | None = None
    success: bool = False
    draw_size: int | None = None
    clamped: bool | None = None
    votes_seen: int | None = None
    votes_stored: int | None = None
    peak_stored_votes: int | None = None
    stored_ballot_cells: int | None = None
    wall_time_ms: float | None = None
    error: str = ""


@dataclass
class ExperimentSummary:
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return sum(r.success for r in self.records) / len(self.records)

    @property
    def mean_peak_stored(self) -> float:
        peaks = [r.peak_stored_votes for r in self.records if r.peak_stored_votes is not None]
        return sum(peaks) / len(peaks) if peaks else math.nan

    @property
    def errors(self) -> int:
        return sum(bool(r.error) for r in self.records)


def run_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    seed = config.seed_base + trial
    record = TrialRecord(trial=trial, seed=seed)
    try:
        rule = config.rule_spec()
        election = config.make_election(seed)
        result = streaming_winner(
            iter(election.votes),
            rule,
            config.k,
            config.eps,
            m=config.m,
            sampler=config.sampler,
            seed=seed,
            n=election.n,
            delta=config.delta,
            retain_all=config.retain_all,
        )
        sat = satisfaction_matrix(election, rule)
        opt = exact_winner(election, rule, config.k, sat=sat).opt_score
        full = committee_score(election, rule, result.committee, sat=sat)
        tolerance = config.eps * election.n * score_unit(rule, config.m)
        record.committee = " ".join(map(str, result.committee.members))
        record.sample_score = result.sample_score
        record.full_score = full
        record.opt_score = opt
        record.surrogate_gap = opt - full
        record.tolerance = tolerance
        record.success = opt - full <= tolerance
        record.draw_size = result.params.draw_size
        record.clamped = result.clamped
        record.votes_seen = result.stats.votes_seen
        record.votes_stored = result.stats.votes_stored
        record.peak_stored_votes = result.stats.peak_stored_votes
        record.stored_ballot_cells = result.stats.stored_ballot_cells
        record.wall_time_ms = result.wall_time_ms
    except Exception as exc:  # recorded per row; the batch carries on
        record.error = f"{type(exc).__name__}: {exc}"
        record.success = False
        traceback.clear_frames(exc.__traceback__)
    return record


def _run_indexed(args):
    return run_trial(*args)


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentSummary:
    """Run every trial; records come back in trial order regardless of ``jobs``."""
    tasks = [(config, i) for i in range(config.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_indexed, tasks))
    else:
        records = [run_trial(*task) for task in tasks]
    return ExperimentSummary(records)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(summary: ExperimentSummary, out: TextIO, timing: bool = False) -> None:
    """One row per trial plus a final ``summary`` row.

    The summary row carries the success rate in ``success`` and the mean
    peak storage in ``peak_stored_votes``.  ``wall_time_ms`` is left blank
    unless ``timing`` is set, so reruns are byte-identical by default.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in summary.records:
        row = asdict(record)
        if not timing:
            row["wall_time_ms"] = None
        writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])
    tail = dict.fromkeys(CSV_COLUMNS)
    tail["trial"] = "summary"
    tail["success"] = repr(summary.success_rate)
    tail["peak_stored_votes"] = repr(summary.mean_peak_stored)
    tail["error"] = str(summary.errors) if summary.errors else None
    writer.writerow([_cell(tail[c]) for c in CSV_COLUMNS])


def csv_text(summary: ExperimentSummary, timing: bool = False) -> str:
    buf = io.StringIO()
    write_csv(summary, buf, timing)
    return buf.getvalue()


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":"
            if sep not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split(sep, 1))
            values[key.replace("-", "_")] = value
    return values


def config_from_mapping(values: dict) -> ExperimentConfig:
    """Build a config from string-valued settings (config file or CLI)."""
    known = {f.name: f for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, value in values.items():
        if value is None:
            continue
        if key not in known:
            raise ParameterError(f"unknown experiment setting {key!r}")
        default = known[key].default
        try:
            kwargs[key] = _convert(key, default, value)
        except ValueError:
            raise ParameterError(f"bad value for {key}: {value!r}") from None
    return ExperimentConfig(**kwargs)


def _convert(key, default, value):
    if key == "score_vector":
        return tuple(int(x) for x in str(value).split(",")) if value else None
    if isinstance(default, bool):
        return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value

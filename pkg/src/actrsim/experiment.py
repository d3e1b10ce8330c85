"""Rock-paper-scissors harness: samples, runs, and result aggregation.

A sample is one line of 20 space-separated moves from {r, p, s}. Opponent 1
always plays rock and is generated; opponents 2 and 3 ship as data files.
Each run wires the sample into the ``next-move`` provider, plays to the time
limit (20 rounds in 2 s of simulated time), counts wins/draws/defeats from
the outcome-rule firings in the trace, and reads the final utilities of the
three play rules from the strategy.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .engine import Engine
from .errors import EmptyResults, MalformedMove, WrongLength
from .model import ModelAST
from .strategies import STRATEGIES, RandomCostUtility

MOVES_PER_SAMPLE = 20
MOVE_NAMES = {"r": "rock", "p": "paper", "s": "scissors"}

PLAY_RULES = ("play-rock", "play-paper", "play-scissors")
OUTCOME_PREFIXES = (
    ("detect-win-", "win"),
    ("detect-draw-", "draw"),
    ("detect-defeat-", "defeat"),
)


@dataclass(frozen=True)
class Sample:
    index: int
    moves: tuple[str, ...]

    def counts(self):
        return tuple(self.moves.count(m) for m in "rps")


@dataclass(frozen=True)
class RunResult:
    index: int
    utilities: tuple  # (U_r, U_p, U_s) as Fractions or floats
    wins: int
    draws: int
    defeats: int


@dataclass(frozen=True)
class HarnessConfig:
    strategy: str = "reinforcement"
    alpha: Fraction = Fraction(1, 5)
    goal_value: Fraction = Fraction(20)
    tiebreak: str | None = None  # None picks the strategy's default
    refraction: bool = False
    seed: int = 0
    runs: int = 1
    t_limit: Fraction = Fraction(2)
    play_rules: tuple = PLAY_RULES
    outcome_prefixes: tuple = OUTCOME_PREFIXES


@dataclass(frozen=True)
class Report:
    rows: tuple[RunResult, ...]
    averages: RunResult
    config: dict = field(default_factory=dict)


# -- samples -----------------------------------------------------------------

def parse_samples(text: str) -> list[Sample]:
    samples = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        moves = tuple(line.split())
        for move in moves:
            if move not in MOVE_NAMES:
                raise MalformedMove(f"sample {len(samples) + 1}: bad move {move!r}")
        if len(moves) != MOVES_PER_SAMPLE:
            raise WrongLength(
                f"sample {len(samples) + 1} has {len(moves)} moves, "
                f"expected {MOVES_PER_SAMPLE}"
            )
        samples.append(Sample(len(samples) + 1, moves))
    return samples


def load_samples(path) -> list[Sample]:
    with open(path, encoding="utf-8") as handle:
        return parse_samples(handle.read())


def generated_player1() -> list[Sample]:
    return [Sample(1, ("r",) * MOVES_PER_SAMPLE)]


def builtin_samples(player: int) -> list[Sample]:
    if player == 1:
        return generated_player1()
    if player in (2, 3):
        text = resources.files("actrsim").joinpath(
            f"data/player{player}_samples.txt"
        ).read_text(encoding="utf-8")
        return parse_samples(text)
    raise ValueError(f"no builtin player {player}")


def builtin_model_text() -> str:
    return resources.files("actrsim").joinpath("data/rps.model").read_text(
        encoding="utf-8"
    )


# -- running -------------------------------------------------------------------

def build_strategy(config: HarnessConfig, run_seed: int):
    cls = STRATEGIES.get(config.strategy)
    if cls is None:
        raise ValueError(f"unknown strategy {config.strategy!r}")
    if cls is RandomCostUtility:
        return cls(
            goal_value=config.goal_value,
            rng=random.Random(run_seed),
            tiebreak=config.tiebreak,
        )
    if config.strategy == "reinforcement":
        return cls(alpha=config.alpha, tiebreak=config.tiebreak)
    return cls(goal_value=config.goal_value, tiebreak=config.tiebreak)


def run_single(model: ModelAST, config: HarnessConfig, sample: Sample,
               row_index: int, run_seed: int, trace_sink=None) -> RunResult:
    strategy = build_strategy(config, run_seed)
    providers = {"next-move": iter(MOVE_NAMES[m] for m in sample.moves)}
    engine = Engine(model, strategy, providers, refraction=config.refraction)
    trace = engine.run(config.t_limit)
    if trace_sink is not None:
        trace_sink.extend((row_index, entry) for entry in trace)
    tally = {"win": 0, "draw": 0, "defeat": 0}
    for entry in trace:
        for prefix, kind in config.outcome_prefixes:
            if entry.rule.startswith(prefix):
                tally[kind] += 1
                break
    utilities = tuple(strategy.utility(rule) for rule in config.play_rules)
    return RunResult(row_index, utilities, tally["win"], tally["draw"], tally["defeat"])


def run_experiment(model: ModelAST, config: HarnessConfig, samples,
                   trace_sink=None) -> Report:
    rows = []
    for sample in samples:
        for _ in range(config.runs):
            ordinal = len(rows) + 1
            rows.append(run_single(
                model, config, sample, ordinal, config.seed + ordinal - 1, trace_sink
            ))
    report = summarize(rows)
    return Report(report.rows, report.averages, config_echo(config))


def summarize(results) -> Report:
    """Arithmetic means over the rows; values display-rounded to 3 decimals."""
    rows = tuple(results)
    if not rows:
        raise EmptyResults("no run results to summarize")
    n = len(rows)
    avg_utils = tuple(
        sum(row.utilities[i] for row in rows) / n for i in range(3)
    )
    averages = RunResult(
        0,
        avg_utils,
        Fraction(sum(r.wins for r in rows), n),
        Fraction(sum(r.draws for r in rows), n),
        Fraction(sum(r.defeats for r in rows), n),
    )
    return Report(rows, averages)


def config_echo(config: HarnessConfig) -> dict:
    return {
        "strategy": config.strategy,
        "alpha": str(config.alpha),
        "goal_value": str(config.goal_value),
        "tiebreak": config.tiebreak or STRATEGIES[config.strategy].default_tiebreak,
        "refraction": config.refraction,
        "seed": config.seed,
        "runs": config.runs,
        "t_limit": str(config.t_limit),
    }


# -- formatting ---------------------------------------------------------------------

def round_thousandths(value) -> Fraction:
    """Exact half-away-from-zero rounding to 3 decimals."""
    if not isinstance(value, Fraction):
        value = Fraction(value)
    sign = -1 if value < 0 else 1
    scaled = abs(value) * 1000
    units = scaled.numerator // scaled.denominator
    if 2 * (scaled - units) >= 1:
        units += 1
    return Fraction(sign * units, 1000)


def format_utility(value) -> str:
    rounded = round_thousandths(value)
    units = abs(rounded.numerator * 1000 // rounded.denominator)
    text = f"{units // 1000}.{units % 1000:03d}"
    return "-" + text if rounded < 0 and units else text


def format_count(value) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        value = float(value)
    if value == int(value):
        return str(int(value))
    return f"{value:.3f}".rstrip("0").rstrip(".")


def report_to_csv(report: Report) -> str:
    lines = ["sample,U_r,U_p,U_s,wins,draws,defeats"]
    for row in report.rows:
        utils = ",".join(format_utility(u) for u in row.utilities)
        lines.append(f"{row.index},{utils},{row.wins},{row.draws},{row.defeats}")
    avg = report.averages
    utils = ",".join(format_utility(u) for u in avg.utilities)
    counts = ",".join(format_count(c) for c in (avg.wins, avg.draws, avg.defeats))
    lines.append(f"avg,{utils},{counts}")
    return "\n".join(lines) + "\n"


def report_to_json(report: Report) -> str:
    def row_obj(row, index):
        return {
            "sample": index,
            "U_r": float(round_thousandths(row.utilities[0])),
            "U_p": float(round_thousandths(row.utilities[1])),
            "U_s": float(round_thousandths(row.utilities[2])),
            "wins": float(row.wins) if isinstance(row.wins, Fraction) else row.wins,
            "draws": float(row.draws) if isinstance(row.draws, Fraction) else row.draws,
            "defeats": float(row.defeats)
            if isinstance(row.defeats, Fraction) else row.defeats,
        }

    payload = {
        "config": report.config,
        "rows": [row_obj(row, row.index) for row in report.rows],
        "average": row_obj(report.averages, "avg"),
    }
    return json.dumps(payload, indent=2) + "\n"

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from actrsim.errors import EmptyResults, MalformedMove, WrongLength
from actrsim.experiment import (
    HarnessConfig,
    RunResult,
    builtin_samples,
    format_count,
    format_utility,
    parse_samples,
    report_to_csv,
    report_to_json,
    round_thousandths,
    run_experiment,
    run_single,
    summarize,
)

# move frequencies (rock, paper, scissors) per shipped sample, used to
# cross-check the data files against an independent transcription
PLAYER2_FREQUENCIES = [
    (11, 9, 0), (10, 10, 0), (11, 9, 0), (11, 9, 0), (6, 14, 0),
    (11, 9, 0), (13, 7, 0), (14, 6, 0), (11, 9, 0), (5, 15, 0),
    (9, 11, 0), (11, 9, 0), (10, 10, 0), (7, 13, 0), (11, 9, 0),
    (12, 8, 0), (11, 9, 0), (13, 7, 0), (9, 11, 0), (11, 9, 0),
]
PLAYER3_FREQUENCIES = [
    (6, 3, 11), (5, 5, 10), (7, 6, 7), (8, 7, 5), (6, 9, 5),
    (4, 9, 7), (7, 9, 4), (6, 8, 6), (12, 3, 5), (7, 4, 9),
    (4, 6, 10), (11, 5, 4), (6, 7, 7), (7, 8, 5), (5, 2, 13),
    (14, 3, 3), (6, 6, 8), (8, 7, 5), (8, 3, 9), (8, 6, 6),
]


def test_builtin_player1_is_all_rock():
    (sample,) = builtin_samples(1)
    assert sample.moves == ("r",) * 20
    assert sample.counts() == (20, 0, 0)


@pytest.mark.parametrize("player,expected", [(2, PLAYER2_FREQUENCIES),
                                             (3, PLAYER3_FREQUENCIES)])
def test_builtin_sample_frequencies(player, expected):
    samples = builtin_samples(player)
    assert len(samples) == 20
    assert [s.index for s in samples] == list(range(1, 21))
    assert [s.counts() for s in samples] == expected


def test_unknown_builtin_player():
    with pytest.raises(ValueError):
        builtin_samples(4)


def test_parse_samples_rejects_bad_token():
    with pytest.raises(MalformedMove):
        parse_samples("r p s x " + "r " * 16)


def test_parse_samples_rejects_wrong_length():
    with pytest.raises(WrongLength):
        parse_samples("r p s\n")


def test_parse_samples_skips_blank_and_comment_lines():
    text = "# heading\n\n" + " ".join(["r"] * 20) + "\n"
    (sample,) = parse_samples(text)
    assert sample.index == 1


def test_player1_reinforcement_matches_reference(rps_model):
    report = run_experiment(
        rps_model, HarnessConfig(strategy="reinforcement"), builtin_samples(1)
    )
    (row,) = report.rows
    assert [format_utility(u) for u in row.utilities] == ["0.000", "1.873", "-0.020"]
    assert (row.wins, row.draws, row.defeats) == (19, 0, 1)


def test_player1_success_cost_matches_reference(rps_model):
    report = run_experiment(
        rps_model, HarnessConfig(strategy="success-cost"), builtin_samples(1)
    )
    (row,) = report.rows
    assert [format_utility(u) for u in row.utilities] == ["19.950"] * 3
    assert (row.wins, row.draws, row.defeats) == (0, 20, 0)


def test_zero_time_limit_changes_nothing(rps_model):
    report = run_experiment(
        rps_model,
        HarnessConfig(strategy="success-cost", t_limit=Fraction(0)),
        builtin_samples(1),
    )
    (row,) = report.rows
    assert row.utilities == (Fraction("19.95"),) * 3  # initial utility values
    assert (row.wins, row.draws, row.defeats) == (0, 0, 0)


def test_round_accounting(rps_model):
    trace_sink = []
    config = HarnessConfig(strategy="reinforcement")
    result = run_single(rps_model, config, builtin_samples(2)[0], 1, 0, trace_sink)
    assert result.wins + result.draws + result.defeats == 20
    rules = [entry.rule for _, entry in trace_sink]
    assert len(rules) == 40
    assert all(r.startswith("play-") for r in rules[0::2])
    assert all(r.startswith("detect-") for r in rules[1::2])


def test_summarize_single_result_is_identity():
    row = RunResult(1, (Fraction(1), Fraction(2), Fraction(3)), 19, 0, 1)
    report = summarize([row])
    assert report.averages.utilities == (1, 2, 3)
    assert (report.averages.wins, report.averages.draws,
            report.averages.defeats) == (19, 0, 1)


def test_summarize_empty_rejected():
    with pytest.raises(EmptyResults):
        summarize([])


def test_rounding_half_away_from_zero():
    assert round_thousandths(Fraction("14.8875")) == Fraction("14.888")
    assert round_thousandths(Fraction("-14.8875")) == Fraction("-14.888")
    assert round_thousandths(Fraction("1.8726181142655873")) == Fraction("1.873")


def test_format_utility():
    assert format_utility(Fraction("-0.02")) == "-0.020"
    assert format_utility(Fraction("19.95")) == "19.950"
    assert format_utility(Fraction(0)) == "0.000"
    assert format_utility(Fraction("14.8875")) == "14.888"


def test_format_count():
    assert format_count(Fraction(2)) == "2"
    assert format_count(Fraction(89, 10)) == "8.9"
    assert format_count(13.94) == "13.94"
    assert format_count(5) == "5"


def test_csv_report_shape(rps_model):
    report = run_experiment(
        rps_model, HarnessConfig(strategy="reinforcement"), builtin_samples(1)
    )
    lines = report_to_csv(report).splitlines()
    assert lines[0] == "sample,U_r,U_p,U_s,wins,draws,defeats"
    assert lines[1] == "1,0.000,1.873,-0.020,19,0,1"
    assert lines[2] == "avg,0.000,1.873,-0.020,19,0,1"


def test_json_report_mirrors_csv(rps_model):
    report = run_experiment(
        rps_model, HarnessConfig(strategy="reinforcement"), builtin_samples(1)
    )
    payload = json.loads(report_to_json(report))
    assert payload["config"]["strategy"] == "reinforcement"
    assert payload["config"]["tiebreak"] == "last-declared"
    assert payload["rows"][0]["U_p"] == 1.873
    assert payload["average"]["wins"] == 19


def test_multi_run_rows_use_distinct_seeds(rps_model):
    config = HarnessConfig(strategy="random-cost", seed=3, runs=4)
    report = run_experiment(rps_model, config, builtin_samples(1))
    assert [row.index for row in report.rows] == [1, 2, 3, 4]
    # distinct seeds make at least one pair of rows differ
    assert len({row.utilities for row in report.rows}) > 1


def test_report_determinism_with_fixed_seed(rps_model):
    config = HarnessConfig(strategy="random-cost", seed=11, runs=5)
    first = report_to_csv(run_experiment(rps_model, config, builtin_samples(1)))
    second = report_to_csv(run_experiment(rps_model, config, builtin_samples(1)))
    assert first == second

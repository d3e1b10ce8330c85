"""Straight-line replay oracles for the learning strategies.

These recompute expected subsymbolic state directly from a firing trace and
the rule annotations, without the engine, queue, or strategy classes, so
engine runs can be checked against an independent path. Selection always
precedes firing by exactly 0.05 s, so selection times are recovered from
fire times.
"""

from fractions import Fraction

from actrsim.strategies import reinforcement_update, sc_recompute

LATENCY = Fraction(1, 20)


def replay_reinforcement(trace, annotations, alpha=Fraction(1, 5)):
    """Expected utility table after replaying the fired-rule sequence."""
    utilities: dict = {}
    log: list = []
    for entry in trace:
        log.append((entry.rule, entry.time - LATENCY))
        ann = annotations.get(entry.rule)
        if ann is not None and ann.reward is not None:
            for rule, selected in log:
                reward = ann.reward - (entry.time - selected)
                utilities[rule] = reinforcement_update(
                    utilities.get(rule, Fraction(0)), alpha, reward
                )
            log.clear()
    return utilities


def replay_success_cost(trace, annotations):
    """Expected (successes, failures, efforts) per rule after the trace."""
    counters: dict = {}
    log: list = []
    for entry in trace:
        log.append((entry.rule, entry.time - LATENCY))
        ann = annotations.get(entry.rule)
        if ann is None or not (ann.success or ann.failure):
            continue
        index = 0 if ann.success else 1
        for rule, selected in log:
            counter = counters.setdefault(rule, [1, 0, Fraction(1, 20)])
            counter[index] += 1
            counter[2] += entry.time - selected
        log.clear()
    return {rule: tuple(counter) for rule, counter in counters.items()}


def expected_sc_utilities(counters, goal_value=Fraction(20)):
    return {
        rule: sc_recompute(s, f, e, goal_value)[2]
        for rule, (s, f, e) in counters.items()
    }

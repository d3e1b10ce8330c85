"""Conflict-resolution strategies: utility learning, selection, refraction.

All three learning strategies share the same shape: the engine reports every
rule application (with its selection time) into an applied log, and annotated
rules fire a trigger when applied. A trigger walks the whole log, including
the entry of the triggering rule itself, updates the subsymbolic state of
each logged application, and then empties the log. Draw-style rounds with no
trigger simply leave their entries in the log for the next trigger.

Deterministic strategies keep all arithmetic in exact rationals so that equal
utilities are exactly equal; tie-breaking then falls back to declaration
order (first- or last-declared). The random-cost strategy draws a fresh
estimated cost for every conflict-set member on every cycle from a seedable
uniform generator.
"""

import math
import random
from fractions import Fraction

FIRST_DECLARED = "first-declared"
LAST_DECLARED = "last-declared"
TIEBREAK_POLICIES = (FIRST_DECLARED, LAST_DECLARED)


# -- update math -------------------------------------------------------------

def reinforcement_update(utility, alpha, reward):
    """One learning step: move the utility toward the reward by factor alpha."""
    return utility + alpha * (reward - utility)


def sc_recompute(successes, failures, efforts, goal_value):
    """(P, C, U) from raw counters: P = s/(s+f), C = efforts/(s+f), U = P*G - C."""
    n = successes + failures
    p = Fraction(successes, n)
    c = efforts / n
    return p, c, p * goal_value - c


def draw_random_cost(theta, r):
    """Exponential cost draw with mean theta from a uniform r in [0, 1)."""
    return -theta * math.log(1 - r)


def rc_utility(p, goal_value, zeta):
    return p * goal_value - zeta


def refraction_prune(candidates, history):
    """Drop every instantiation whose identity has already been applied."""
    return [c for c in candidates if c.identity() not in history]


def select_winner(candidates, utilities, tiebreak):
    """Highest-utility candidate; declaration order decides exact ties."""
    if not candidates:
        return None
    if tiebreak not in TIEBREAK_POLICIES:
        raise ValueError(f"unknown tie-break policy {tiebreak!r}")
    best = max(utilities[c.rule] for c in candidates)
    tied = [c for c in candidates if utilities[c.rule] == best]
    if tiebreak == FIRST_DECLARED:
        return min(tied, key=lambda c: c.source_index)
    return max(tied, key=lambda c: c.source_index)


# -- strategies ----------------------------------------------------------------

class ConflictResolutionStrategy:
    """Scores a conflict set and reacts to applications and triggers.

    Subclasses implement score(); the reward/outcome hooks are no-ops by
    default so annotations a strategy does not use are simply ignored.
    """

    name = "base"
    default_tiebreak = FIRST_DECLARED

    def __init__(self, tiebreak=None):
        self.tiebreak = tiebreak or self.default_tiebreak
        if self.tiebreak not in TIEBREAK_POLICIES:
            raise ValueError(f"unknown tie-break policy {self.tiebreak!r}")
        self.applied_log: list[tuple[str, Fraction]] = []

    def score(self, candidates) -> dict:
        raise NotImplementedError

    def select(self, candidates):
        if not candidates:
            return None
        return select_winner(candidates, self.score(candidates), self.tiebreak)

    def record_application(self, rule, selection_time):
        self.applied_log.append((rule, selection_time))

    def trigger_reward(self, amount, now):
        pass

    def trigger_outcome(self, kind, now):
        pass

    def utility(self, rule):
        raise NotImplementedError


class ReinforcementUtility(ConflictResolutionStrategy):
    """Reward-propagating utility learning.

    A triggered reward of size R at time t updates every logged application
    in chronological order with the time-discounted reward R - (t - t_sel),
    then empties the log. Utilities start at 0 and stay there for rules that
    never receive a reward.
    """

    name = "reinforcement"
    default_tiebreak = LAST_DECLARED

    def __init__(self, alpha=Fraction(1, 5), tiebreak=None):
        super().__init__(tiebreak)
        if not 0 < alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        self.alpha = alpha
        self.utilities: dict[str, Fraction] = {}

    def score(self, candidates):
        return {c.rule: self.utility(c.rule) for c in candidates}

    def trigger_reward(self, amount, now):
        for rule, selected in self.applied_log:
            reward = amount - (now - selected)
            self.utilities[rule] = reinforcement_update(
                self.utility(rule), self.alpha, reward
            )
        self.applied_log.clear()

    def utility(self, rule):
        return self.utilities.get(rule, Fraction(0))


class SuccessCostUtility(ConflictResolutionStrategy):
    """Success-probability / average-cost utility learning.

    Counters start at one success, no failures, and 0.05 s of effort (the
    selection time of one firing). A success or failure trigger at time t
    bumps the matching counter once per logged application and adds each
    application's t - t_sel to its rule's efforts.
    """

    name = "success-cost"
    default_tiebreak = FIRST_DECLARED

    INITIAL_EFFORT = Fraction(1, 20)

    def __init__(self, goal_value=Fraction(20), tiebreak=None):
        super().__init__(tiebreak)
        self.goal_value = goal_value
        self._counters: dict[str, list] = {}  # rule -> [successes, failures, efforts]
        self._cached: dict[str, tuple] = {}  # rule -> (P, C, U)

    def _entry(self, rule):
        if rule not in self._counters:
            self._counters[rule] = [1, 0, self.INITIAL_EFFORT]
            self._cached[rule] = sc_recompute(1, 0, self.INITIAL_EFFORT, self.goal_value)
        return self._counters[rule]

    def counters(self, rule):
        s, f, e = self._entry(rule)
        return s, f, e

    def score(self, candidates):
        return {c.rule: self.utility(c.rule) for c in candidates}

    def trigger_outcome(self, kind, now):
        index = {"success": 0, "failure": 1}[kind]
        for rule, selected in self.applied_log:
            entry = self._entry(rule)
            entry[index] += 1
            entry[2] += now - selected
            self._cached[rule] = sc_recompute(*entry, self.goal_value)
        self.applied_log.clear()

    def success_probability(self, rule):
        self._entry(rule)
        return self._cached[rule][0]

    def cost(self, rule):
        self._entry(rule)
        return self._cached[rule][1]

    def utility(self, rule):
        self._entry(rule)
        return self._cached[rule][2]


class RandomCostUtility(SuccessCostUtility):
    """Success/cost learning with per-cycle random estimated costs.

    Shares the success/failure/effort counters but replaces the average cost
    with an exponential draw around the expected cost theta = efforts /
    successes, recomputed for every conflict-set member on every conflict-
    resolution cycle. The reported utility of a rule is the one from its most
    recent draw.
    """

    name = "random-cost"
    default_tiebreak = FIRST_DECLARED

    def __init__(self, goal_value=Fraction(20), rng=None, seed=0, tiebreak=None):
        super().__init__(goal_value, tiebreak)
        self.rng = rng if rng is not None else random.Random(seed)
        self._last_utility: dict[str, float] = {}

    def theta(self, rule):
        successes, _, efforts = self._entry(rule)
        return efforts / successes

    def score(self, candidates):
        scores = {}
        for c in candidates:
            zeta = draw_random_cost(float(self.theta(c.rule)), self.rng.random())
            u = rc_utility(
                float(self.success_probability(c.rule)), float(self.goal_value), zeta
            )
            self._last_utility[c.rule] = u
            scores[c.rule] = u
        return scores

    def utility(self, rule):
        if rule in self._last_utility:
            return self._last_utility[rule]
        return float(self.success_probability(rule) * self.goal_value)


STRATEGIES = {
    cls.name: cls
    for cls in (ReinforcementUtility, SuccessCostUtility, RandomCostUtility)
}

"""The match-select-apply cycle over buffers, rules, and the event queue.

A match event collects one instantiation per applicable rule, lets the
strategy pick a winner, and schedules the winner's application 50 ms later.
While a selected rule is waiting to fire the engine is busy and matching is
inhibited. Application notifies the strategy, fires annotation triggers,
schedules the buffer effects at the current instant (modifications before
clearings), and schedules the next match at the current instant with low
priority, so all effects land before the next rule can be selected. When
nothing matches, the next match is scheduled right after the next pending
event; with an empty queue the run halts.
"""

from dataclasses import dataclass
from fractions import Fraction

from .buffers import BufferSystem
from .chunks import ChunkDescription, ChunkStore
from .errors import ProviderExhausted
from .model import CLEAR, MODIFY, ModelAST, is_variable
from .scheduler import EventQueue
from .strategies import refraction_prune

FIRE_LATENCY = Fraction(1, 20)  # 50 ms between selection and firing

PRIORITY_MODIFY = 100
PRIORITY_CLEAR = 90
PRIORITY_APPLY = 0
PRIORITY_MATCH = -10


@dataclass
class Instantiation:
    """A rule plus the concrete bindings and buffer snapshot it matched."""

    rule: str
    source_index: int
    bindings: dict
    matched: tuple  # ((buffer, chunk, ((slot, value), ...)), ...)
    selection_time: Fraction | None = None

    def identity(self):
        return (self.rule, tuple(sorted(self.bindings.items())), self.matched)


@dataclass(frozen=True)
class TraceEntry:
    time: Fraction
    rule: str
    bindings: dict
    identity: tuple


def format_trace_entry(entry: TraceEntry) -> str:
    bindings = ",".join(f"{v}={entry.bindings[v]}" for v in sorted(entry.bindings))
    return f"{float(entry.time):.3f}\t{entry.rule}\t{bindings or '-'}"


# event payloads
@dataclass(frozen=True)
class _Match:
    pass


@dataclass(frozen=True)
class _Apply:
    instantiation: Instantiation


@dataclass(frozen=True)
class _Effect:
    kind: str
    buffer: str
    updates: tuple = ()


@dataclass(frozen=True)
class Callback:
    """Harness hook: fn(engine) runs when the event is popped."""

    fn: object


class Engine:
    """One simulation instance: store, buffers, rules, queue, strategy."""

    def __init__(self, model: ModelAST, strategy, providers=None, refraction=False):
        self.strategy = strategy
        self.providers = dict(providers or {})
        self.refraction = refraction
        self.refraction_history: set = set()
        self.store = ChunkStore()
        for ctype in model.chunk_types:
            self.store.define_chunk_type(ctype.name, ctype.slots)
        for spec in model.initial_chunks:
            self.store.create_chunk(spec.name, spec.type, dict(spec.slot_values))
        self.buffers = BufferSystem(self.store)
        for buffer, chunk in model.buffer_inits:
            self.buffers.declare_buffer(buffer)
            self.buffers.set_buffer(buffer, chunk)
        self.productions = model.productions
        self.annotations = model.annotations
        self.queue = EventQueue()
        self.trace: list[TraceEntry] = []
        self.busy = False
        self._pending: Instantiation | None = None
        self.queue.schedule(Fraction(0), PRIORITY_MATCH, _Match())

    def now(self):
        return self.queue.now()

    # -- matching ---------------------------------------------------------

    def find_instantiations(self) -> list[Instantiation]:
        """One instantiation per rule whose every buffer test succeeds."""
        out = []
        for prod in self.productions:
            bindings: dict = {}
            matched = []
            for test in prod.tests:
                if test.buffer not in self.buffers.buffers():
                    break
                chunk_name = self.buffers.held(test.buffer)
                if chunk_name is None:
                    break
                chunk = self.store.chunk(chunk_name)
                if chunk.type != test.type:
                    break
                snapshot = []
                for slot, expected in test.slot_tests:
                    actual = chunk.slot_values.get(slot)
                    if actual is None:  # unset slots match nothing, not even nil
                        break
                    if is_variable(expected):
                        if bindings.setdefault(expected, actual) != actual:
                            break
                    elif expected != actual:
                        break
                    snapshot.append((slot, actual))
                else:
                    matched.append((test.buffer, chunk_name, tuple(snapshot)))
                    continue
                break
            else:
                out.append(
                    Instantiation(prod.name, prod.source_index, bindings, tuple(matched))
                )
        return out

    # -- phases -----------------------------------------------------------

    def _run_match_phase(self):
        if self.busy:  # matching is inhibited until the selected rule fires
            return
        candidates = self.find_instantiations()
        if self.refraction:
            candidates = refraction_prune(candidates, self.refraction_history)
        winner = self.strategy.select(candidates)
        if winner is None:
            next_time = self.queue.peek_time()
            if next_time is not None:
                self.queue.schedule(next_time, PRIORITY_MATCH, _Match())
            return  # empty queue: the run halts
        winner.selection_time = self.now()
        self.queue.schedule(self.now() + FIRE_LATENCY, PRIORITY_APPLY, _Apply(winner))
        self.busy = True
        self._pending = winner

    def _run_apply_phase(self, inst: Instantiation):
        assert self.busy and inst is self._pending
        now = self.now()
        self.busy = False
        self._pending = None
        self.strategy.record_application(inst.rule, inst.selection_time)
        annotation = self.annotations.get(inst.rule)
        if annotation is not None:
            if annotation.reward is not None:
                self.strategy.trigger_reward(annotation.reward, now)
            if annotation.success:
                self.strategy.trigger_outcome("success", now)
            if annotation.failure:
                self.strategy.trigger_outcome("failure", now)
        if self.refraction:
            self.refraction_history.add(inst.identity())
        env = dict(inst.bindings)
        production = self.productions[inst.source_index]
        for action in production.actions:
            for variable, provider in action.binds:
                env[variable] = self._next_value(provider)
            if action.kind == MODIFY:
                updates = tuple(
                    (slot, env[value] if is_variable(value) else value)
                    for slot, value in action.slot_updates
                )
                self.queue.schedule(
                    now, PRIORITY_MODIFY, _Effect(MODIFY, action.buffer, updates)
                )
            else:
                self.queue.schedule(now, PRIORITY_CLEAR, _Effect(CLEAR, action.buffer))
        self.queue.schedule(now, PRIORITY_MATCH, _Match())
        self.trace.append(TraceEntry(now, inst.rule, env, inst.identity()))

    def _apply_effect(self, effect: _Effect):
        if effect.kind == MODIFY:
            self.buffers.modify_buffer(
                effect.buffer, ChunkDescription(slot_values=effect.updates)
            )
        else:
            self.buffers.clear_buffer(effect.buffer)

    def _next_value(self, provider):
        source = self.providers.get(provider)
        if source is None:
            raise ProviderExhausted(f"no provider named {provider!r} registered")
        try:
            return next(source)
        except StopIteration:
            raise ProviderExhausted(f"provider {provider!r} has no next value") from None

    # -- driver --------------------------------------------------------------

    def run(self, t_limit) -> list[TraceEntry]:
        """Pop events until the queue is empty or the clock would pass t_limit."""
        while True:
            next_time = self.queue.peek_time()
            if next_time is None or next_time > t_limit:
                return self.trace
            payload = self.queue.pop_next().payload
            if isinstance(payload, _Match):
                self._run_match_phase()
            elif isinstance(payload, _Apply):
                self._run_apply_phase(payload.instantiation)
            elif isinstance(payload, Callback):
                payload.fn(self)
            else:
                self._apply_effect(payload)

"""Discrete-event queue ordered by time, then priority, then insertion.

Pop order: ascending time; within one instant, descending priority (a higher
number runs earlier); among exact ties, insertion order. The clock never
moves backwards. Times may be ints, floats, or Fractions; the engine uses
exact Fractions so that equal instants compare equal without tolerances.
"""

import heapq
from dataclasses import dataclass, field
from typing import Any

from .errors import TimeInPast


@dataclass(frozen=True)
class Event:
    time: Any
    priority: int
    seq: int
    payload: Any = field(compare=False)

    def sort_key(self):
        return (self.time, -self.priority, self.seq)


class EventQueue:
    def __init__(self):
        self._heap: list[tuple] = []
        self._clock = 0
        self._seq = 0

    def now(self):
        return self._clock

    def __len__(self):
        return len(self._heap)

    def schedule(self, time, priority: int, payload) -> Event:
        if time < self._clock:
            raise TimeInPast(f"cannot schedule at {time} before clock {self._clock}")
        event = Event(time, priority, self._seq, payload)
        self._seq += 1
        heapq.heappush(self._heap, (event.sort_key(), event))
        return event

    def peek_time(self):
        """Time of the next event without popping, or None when empty."""
        if not self._heap:
            return None
        return self._heap[0][1].time

    def pop_next(self) -> Event | None:
        """Pop the least event and advance the clock to its time."""
        if not self._heap:
            return None
        _, event = heapq.heappop(self._heap)
        self._clock = event.time
        return event

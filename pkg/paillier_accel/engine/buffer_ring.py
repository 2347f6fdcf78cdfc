"""Preallocated ring of batch buffers shared between submitters and workers."""

import threading
from collections import deque
from typing import Any, List, Optional, Sequence

from paillier_accel.errors import EngineShutdownError


class BufferRing:
    """Fixed set of slots, each holding an input and an output buffer of ``capacity`` items.

    Slots are handed out in ring order. ``acquire`` blocks while every slot is
    in flight, which is the backpressure seen by ``Engine.submit``.
    """

    def __init__(self, slots: int, capacity: int):
        if slots < 1 or capacity < 1:
            raise ValueError(f"Ring needs at least one slot and capacity (slots={slots}, capacity={capacity})")
        self._slots = slots
        self._capacity = capacity
        self._inputs: List[List[Any]] = [[None] * capacity for _ in range(slots)]
        self._outputs: List[List[Any]] = [[None] * capacity for _ in range(slots)]
        self._counts = [0] * slots
        self._free = deque(range(slots))
        self._in_flight = set()
        self._peak = 0
        self._closed = False
        self._cond = threading.Condition()

    @property
    def slots(self) -> int:
        return self._slots

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def in_flight(self) -> int:
        with self._cond:
            return len(self._in_flight)

    @property
    def peak_in_flight(self) -> int:
        with self._cond:
            return self._peak

    @property
    def peak_items(self) -> int:
        """Upper bound on buffered items ever held at once."""
        return self.peak_in_flight * self._capacity

    def acquire(self, timeout: Optional[float] = None) -> int:
        with self._cond:
            if not self._cond.wait_for(lambda: self._free or self._closed, timeout):
                raise TimeoutError(f"No free ring slot within {timeout}s")
            if self._closed:
                raise EngineShutdownError("Buffer ring is closed")
            slot = self._free.popleft()
            assert slot not in self._in_flight
            self._in_flight.add(slot)
            self._peak = max(self._peak, len(self._in_flight))
            return slot

    def release(self, slot: int) -> None:
        with self._cond:
            if slot not in self._in_flight:
                raise RuntimeError(f"Slot {slot} released while not in flight")
            inputs, outputs = self._inputs[slot], self._outputs[slot]
            for index in range(self._counts[slot]):
                inputs[index] = None
                outputs[index] = None
            self._counts[slot] = 0
            self._in_flight.remove(slot)
            self._free.append(slot)
            self._cond.notify()

    def stage(self, slot: int, items: Sequence[Any]) -> None:
        """Copy items into the slot's input buffer (caller owns the slot)."""
        if len(items) > self._capacity:
            raise ValueError(f"{len(items)} items exceed slot capacity {self._capacity}")
        buffer = self._inputs[slot]
        for index, item in enumerate(items):
            buffer[index] = item
        self._counts[slot] = len(items)

    def count(self, slot: int) -> int:
        return self._counts[slot]

    def input_buffer(self, slot: int) -> List[Any]:
        return self._inputs[slot]

    def output_buffer(self, slot: int) -> List[Any]:
        return self._outputs[slot]

    def collect(self, slot: int) -> List[Any]:
        """Copy of the filled part of the output buffer."""
        return self._outputs[slot][:self._counts[slot]]

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()

"""Deterministic generic-sequence scheduler.

Obligations are ``(point, kind)`` pairs.  A new point ``p_n`` creates the
obligations that become valid at step ``n``.  Examples: ``GreaterLeft(n)``
unless ``p_n`` was inserted below an existing point, ``NewRay(n)``,
``Between(n)`` and, after a ``Between(i)`` step, a renewed ``Between(i)``.
They join a FIFO queue in the order (point index, kind) with kind order
GreaterLeft < NewRay < Between.  The root contributes ``GreaterLeft(0)`` and
``NewRay(0)``.

A *fair* step serves the oldest live obligation.  An optional priority hook
(used to serve the demand of the almost-antichain construction) may claim
every other step.  Entries already served by the hook are skipped.

Fairness bound: ``3s + 2`` obligations are created up to step ``s``.  Every
fair step retires at least one of them.  Fair steps are at least every other
step.  So an obligation created at step ``s`` is served by ``s + B(s)`` with
``B(s) = 6s + 4`` with a hook, or ``B(s) = 3s + 2`` without one.

A nonzero seed permutes the three obligations a step enqueues.  This gives
varied but equally fair generic sequences.  Seed 0 keeps the documented
order.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Protocol

from .pseudotree import Between, ExtensionSpec, GreaterLeft, Kind, NewRay


class TreeLike(Protocol):
    @property
    def size(self) -> int: ...

    def is_valid(self, e: ExtensionSpec) -> bool: ...


class PriorityHook(Protocol):
    def attach(self, engine: object) -> None: ...

    def request(self) -> ExtensionSpec | None: ...

    def observe(self, step: int) -> None: ...


@dataclass
class _Obligation:
    serial: int
    created: int
    spec: ExtensionSpec


@dataclass
class GenericScheduler:
    """Round-robin obligation queue with an optional priority hook."""

    seed: int = 0
    priority: PriorityHook | None = None
    queue: deque = field(default_factory=deque)
    cursor: int = 0  # number of extensions handed out so far
    log: list[tuple[int, ExtensionSpec, bool]] = field(default_factory=list)
    _live: dict[ExtensionSpec, _Obligation] = field(default_factory=dict)
    _serial: int = 0
    _rng: random.Random | None = None

    def __post_init__(self) -> None:
        self._rng = random.Random(self.seed) if self.seed else None
        self._enqueue(0, [GreaterLeft(0), NewRay(0)])

    def bound(self, s: int) -> int:
        """Documented fairness bound ``B(s)``."""
        return 6 * s + 4 if self.priority is not None else 3 * s + 2

    def attach(self, engine: object) -> None:
        if self.priority is not None:
            self.priority.attach(engine)

    def _enqueue(self, step: int, specs: list[ExtensionSpec]) -> None:
        if self._rng is not None:
            self._rng.shuffle(specs)
        for spec in specs:
            ob = _Obligation(self._serial, step, spec)
            self._serial += 1
            self._live[spec] = ob
            self.queue.append(ob)

    def _demand_step(self, step: int) -> bool:
        return self.priority is not None and step % 2 == 0

    def next_extension(self, t: TreeLike) -> ExtensionSpec:
        """The extension producing ``p_n`` from ``t`` (``n = t.size``).

        The scheduler assumes the returned extension is applied.
        """
        n = t.size
        if n != self.cursor + 1:
            raise ValueError(f"tree has {n} points but the scheduler has produced {self.cursor + 1}")
        spec = None
        by_hook = False
        if self._demand_step(n):
            spec = self.priority.request()
            by_hook = spec is not None
            if spec is not None and not t.is_valid(spec):
                raise RuntimeError(f"priority hook requested invalid {spec}")
        if spec is None:
            while True:
                ob = self.queue.popleft()
                if self._live.get(ob.spec) is ob and t.is_valid(ob.spec):
                    spec = ob.spec
                    break
        self._commit(n, spec, by_hook)
        return spec

    def _commit(self, n: int, spec: ExtensionSpec, by_hook: bool) -> None:
        del self._live[spec]
        self.cursor = n
        self.log.append((n, spec, by_hook))
        i = spec.target
        if spec.kind is Kind.BETWEEN:
            new = [Between(i), NewRay(n), Between(n)]
        else:
            new = [GreaterLeft(n), NewRay(n), Between(n)]
        self._enqueue(n, new)

    def observe(self, step: int) -> None:
        if self.priority is not None:
            self.priority.observe(step)

    def service_delays(self) -> list[tuple[int, int, ExtensionSpec]]:
        """``(created, served, spec)`` for every obligation served so far.

        Reconstructed from the log: an obligation ``(i, kind)`` is live from
        the step it was (re)created until the next step serving it.
        """
        created: dict[ExtensionSpec, int] = {GreaterLeft(0): 0, NewRay(0): 0}
        out = []
        for n, spec, _ in self.log:
            out.append((created.pop(spec), n, spec))
            i = spec.target
            news = [Between(i), NewRay(n), Between(n)] if spec.kind is Kind.BETWEEN else [GreaterLeft(n), NewRay(n), Between(n)]
            for s in news:
                created[s] = n
        return out

    def pending(self) -> dict[ExtensionSpec, int]:
        return {spec: ob.created for spec, ob in self._live.items()}

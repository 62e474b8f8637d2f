"""Match-up execution of a static schedule under a realized scenario.

When a task runs past its level-1 time, every later task whose start falls
before the prolonged task's realized end is skipped; execution then rejoins
the static schedule.  Skipped tasks stay skipped and do not block anyone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .core import InputError, Instance, Schedule, TaskId, check_feasibility

PROB_TOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    realized: Mapping[TaskId, int]

    def validate_for(self, instance: Instance) -> None:
        if set(self.realized) != set(instance.ids):
            raise InputError("scenario must give exactly one realized level per task")
        for t in instance:
            lvl = self.realized[t.id]
            if not 1 <= lvl <= t.criticality:
                raise InputError(f"task {t.id!r}: realized level {lvl} outside 1..{t.criticality}")

    @classmethod
    def nominal(cls, instance: Instance) -> "Scenario":
        return cls({t.id: 1 for t in instance})


@dataclass(frozen=True)
class TraceRow:
    task: TaskId
    start: int
    end: int | None
    status: str  # "executed" or "skipped"


@dataclass(frozen=True)
class ExecutionTrace:
    executed: tuple[tuple[TaskId, int, int], ...]
    skipped: frozenset

    def rows(self, sched: Schedule) -> Iterator[TraceRow]:
        """All tasks in start order, as plain records for export."""
        ends = {tid: end for tid, _, end in self.executed}
        for tid in sched.order():
            if tid in ends:
                yield TraceRow(tid, sched[tid], ends[tid], "executed")
            else:
                yield TraceRow(tid, sched[tid], None, "skipped")

    @property
    def last_completion(self) -> int:
        return max((end for _, _, end in self.executed), default=0)


def simulate(instance: Instance, sched: Schedule, scen: Scenario) -> ExecutionTrace:
    report = check_feasibility(instance, sched)
    if not report:
        v = report.violation
        raise InputError(f"schedule infeasible: {v.first!r} and {v.second!r} overlap on level {v.level}")
    scen.validate_for(instance)
    executed = []
    skipped = set()
    busy_until = 0
    for tid in sched.order():
        s = sched[tid]
        if s >= busy_until:
            end = s + instance[tid].p(scen.realized[tid])
            executed.append((tid, s, end))
            busy_until = end
        else:
            skipped.add(tid)
    return ExecutionTrace(tuple(executed), frozenset(skipped))


def sample_scenario(
    instance: Instance,
    level_probabilities: Mapping[TaskId, Sequence[float]],
    seed: int,
) -> Scenario:
    """Draw one realized level per task, independently.

    Tasks missing from ``level_probabilities`` realize level 1.
    """
    rng = random.Random(seed)
    realized = {}
    for t in sorted(instance, key=lambda t: t.id):
        probs = level_probabilities.get(t.id)
        if probs is None:
            realized[t.id] = 1
            continue
        probs = [float(p) for p in probs]
        if len(probs) != t.criticality:
            raise InputError(f"task {t.id!r}: {len(probs)} level probabilities for criticality {t.criticality}")
        if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > PROB_TOL:
            raise InputError(f"task {t.id!r}: level probabilities must be nonnegative and sum to 1")
        realized[t.id] = rng.choices(range(1, t.criticality + 1), weights=probs)[0]
    return Scenario(realized)

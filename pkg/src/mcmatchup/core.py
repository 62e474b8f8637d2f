"""Data model and schedule semantics for F-shaped mixed-criticality tasks.

An F-shaped task carries one processing time per criticality level it
supports; the vector is strictly increasing.  Two tasks placed on the single
machine must not overlap on their highest *common* level, which is what
makes left-shifting a permutation depend on every earlier task and not only
the immediate predecessor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

TaskId = Hashable


class InputError(ValueError):
    """Raised for structurally invalid instances, permutations or schedules."""


@dataclass(frozen=True)
class FShape:
    id: TaskId
    criticality: int
    proc: tuple[int, ...]

    def __post_init__(self) -> None:
        proc = tuple(int(p) for p in self.proc)
        object.__setattr__(self, "proc", proc)
        if self.criticality < 1:
            raise InputError(f"task {self.id!r}: criticality must be >= 1")
        if len(proc) != self.criticality:
            raise InputError(
                f"task {self.id!r}: expected {self.criticality} processing times, got {len(proc)}"
            )
        if proc[0] < 1:
            raise InputError(f"task {self.id!r}: processing times must be >= 1")
        for a, b in zip(proc, proc[1:]):
            if not a < b:
                raise InputError(f"task {self.id!r}: processing times must strictly increase, got {proc}")

    def p(self, level: int) -> int:
        """Processing time at ``level`` (1-based)."""
        return self.proc[level - 1]

    @property
    def top(self) -> int:
        return self.proc[-1]


@dataclass(frozen=True)
class Instance:
    tasks: tuple[FShape, ...]
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        tasks = tuple(self.tasks)
        object.__setattr__(self, "tasks", tasks)
        by_id = {}
        for t in tasks:
            if t.id in by_id:
                raise InputError(f"duplicate task id {t.id!r}")
            by_id[t.id] = t
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Sequence[int]]], ids: Iterable[TaskId] | None = None) -> "Instance":
        """Build from ``(criticality, proc)`` pairs; ids default to 0..n-1."""
        pairs = list(pairs)
        ids = list(range(len(pairs))) if ids is None else list(ids)
        return cls(tuple(FShape(i, x, tuple(p)) for i, (x, p) in zip(ids, pairs)))

    @property
    def max_criticality(self) -> int:
        return max((t.criticality for t in self.tasks), default=1)

    @property
    def n(self) -> int:
        return len(self.tasks)

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self) -> Iterator[FShape]:
        return iter(self.tasks)

    def __contains__(self, task_id: object) -> bool:
        return task_id in self._by_id

    def __getitem__(self, task_id: TaskId) -> FShape:
        try:
            return self._by_id[task_id]
        except KeyError:
            raise InputError(f"unknown task id {task_id!r}") from None

    @property
    def ids(self) -> list[TaskId]:
        return [t.id for t in self.tasks]

    def with_criticality(self, x: int) -> list[FShape]:
        """Tasks of criticality exactly ``x`` in ascending id order."""
        return sorted((t for t in self.tasks if t.criticality == x), key=lambda t: t.id)


@dataclass(frozen=True)
class Permutation:
    order: tuple[TaskId, ...]

    def __post_init__(self) -> None:
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if len(set(order)) != len(order):
            raise InputError("permutation repeats a task id")

    def __iter__(self) -> Iterator[TaskId]:
        return iter(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def validate_for(self, instance: Instance) -> None:
        for tid in self.order:
            if tid not in instance:
                raise InputError(f"unknown task id {tid!r} in permutation")
        if len(self.order) != instance.n:
            raise InputError(f"permutation has {len(self.order)} ids, instance has {instance.n} tasks")


@dataclass(frozen=True)
class Schedule:
    """Start times per task id.  Feasibility is checked separately."""

    starts: Mapping[TaskId, int]

    def __getitem__(self, task_id: TaskId) -> int:
        return self.starts[task_id]

    def order(self) -> list[TaskId]:
        """Task ids sorted by start time (ties by id)."""
        return sorted(self.starts, key=lambda t: (self.starts[t], t))


@dataclass(frozen=True)
class Violation:
    first: TaskId
    second: TaskId
    level: int


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class CriticalPath:
    entries: tuple[tuple[TaskId, int], ...]

    def length(self, instance: Instance) -> int:
        return sum(instance[t].p(lvl) for t, lvl in self.entries)


def _common_level(a: FShape, b: FShape) -> int:
    return min(a.criticality, b.criticality)


def left_shift(instance: Instance, perm: Permutation | Sequence[TaskId]) -> Schedule:
    """Earliest feasible start of every task when tasks are placed in ``perm`` order."""
    if not isinstance(perm, Permutation):
        perm = Permutation(tuple(perm))
    perm.validate_for(instance)
    placed: list[tuple[FShape, int]] = []
    starts: dict[TaskId, int] = {}
    for tid in perm:
        task = instance[tid]
        s = 0
        for prev, ps in placed:
            s = max(s, ps + prev.p(_common_level(prev, task)))
        starts[tid] = s
        placed.append((task, s))
    return Schedule(starts)


def _require_cover(instance: Instance, sched: Schedule) -> None:
    for t in instance:
        if t.id not in sched.starts:
            raise InputError(f"schedule misses task {t.id!r}")
    for tid in sched.starts:
        if tid not in instance:
            raise InputError(f"schedule names unknown task {tid!r}")


def makespan(instance: Instance, sched: Schedule) -> int:
    _require_cover(instance, sched)
    return max((sched[t.id] + t.top for t in instance), default=0)


def check_feasibility(instance: Instance, sched: Schedule) -> FeasibilityReport:
    """Pairwise non-overlap on the highest common level of every task pair."""
    _require_cover(instance, sched)
    tasks = sorted(instance.tasks, key=lambda t: (sched[t.id], t.id))
    for a_idx, a in enumerate(tasks):
        sa = sched[a.id]
        for b in tasks[a_idx + 1:]:
            lvl = _common_level(a, b)
            sb = sched[b.id]
            # sa <= sb here, so only "a before b" can hold.
            if not (sa + a.p(lvl) <= sb or sb + b.p(lvl) <= sa):
                return FeasibilityReport(False, Violation(a.id, b.id, lvl))
    return FeasibilityReport(True)


def tight_links(instance: Instance, sched: Schedule) -> dict[TaskId, list[tuple[TaskId, int]]]:
    """For every task, the earlier tasks whose common-level end equals its start.

    Values are ``(predecessor id, level)`` pairs; a task starting at 0 has none.
    """
    order = sched.order()
    links: dict[TaskId, list[tuple[TaskId, int]]] = {}
    for k, tid in enumerate(order):
        task = instance[tid]
        s = sched[tid]
        found = []
        for pid in order[:k]:
            prev = instance[pid]
            lvl = _common_level(prev, task)
            if sched[pid] + prev.p(lvl) == s:
                found.append((pid, lvl))
        links[tid] = found
    return links


def critical_path(instance: Instance, perm: Permutation | Sequence[TaskId]) -> CriticalPath:
    """One critical path of the left-shifted schedule of ``perm``.

    Walks backwards from the task finishing at the makespan along tight links,
    picking the largest task id whenever several candidates tie.
    """
    sched = left_shift(instance, perm)
    if instance.n == 0:
        return CriticalPath(())
    cmax = makespan(instance, sched)
    links = tight_links(instance, sched)
    last = max((t.id for t in instance if sched[t.id] + t.top == cmax))
    entries = [(last, instance[last].criticality)]
    cur = last
    while sched[cur] > 0:
        pid, lvl = max(links[cur], key=lambda pl: pl[0])
        entries.append((pid, lvl))
        cur = pid
    return CriticalPath(tuple(reversed(entries)))

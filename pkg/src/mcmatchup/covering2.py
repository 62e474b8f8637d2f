"""Exact two-level solver built on covering blocks.

With two levels, an optimal schedule is a sequence of blocks, each a Hi-task
followed by the Lo-tasks that start inside its level-1..level-2 window, plus
Lo-tasks nobody covers.  A block lasts ``max(p1 + covered work, p2)`` no
matter how its Lo-tasks are ordered, and blocks may be emitted in any order,
so only the Lo->Hi assignment matters.

Writing ``cap_i = p2_i - p1_i`` the makespan of an assignment is::

    sum(p2_i) + sum(Lo p1) - sum_i min(load_i, cap_i)

and the search maximises the covered amount ``sum_i min(load_i, cap_i)``.
"""

from __future__ import annotations

import bisect
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import FShape, InputError, Instance, Permutation, TaskId
from .lpformat import LpModel
from .transforms import level_sum_lower_bound

UNCOVERED = None

# Bound on the transposition table; it is flushed, not trimmed, when full.
MEMO_LIMIT = 1_500_000


@dataclass(frozen=True)
class CoveringBlockInfo:
    hi_task: TaskId
    covered: frozenset
    length: int
    saturated: bool
    fully_covering: bool


def block_length(hi: FShape, lo_set: Iterable[FShape]) -> int:
    if hi.criticality != 2:
        raise InputError(f"block leader {hi.id!r} must have criticality 2")
    load = 0
    for lo in lo_set:
        if lo.criticality != 1:
            raise InputError(f"covered task {lo.id!r} must have criticality 1")
        load += lo.p(1)
    return max(hi.p(1) + load, hi.p(2))


@dataclass(frozen=True)
class Mc2Covering:
    """Lo-task -> Hi-task (or ``UNCOVERED``) map with the resulting block lengths."""

    assign: Mapping[TaskId, TaskId | None]
    block_lengths: Mapping[TaskId, int] = field(default_factory=dict)

    @classmethod
    def from_assignment(cls, instance: Instance, assign: Mapping[TaskId, TaskId | None]) -> "Mc2Covering":
        _check_two_level(instance)
        assign = dict(assign)
        for lo in instance.with_criticality(1):
            assign.setdefault(lo.id, UNCOVERED)
        covered: dict[TaskId, list[FShape]] = {h.id: [] for h in instance.with_criticality(2)}
        for lo_id, hi_id in assign.items():
            if instance[lo_id].criticality != 1:
                raise InputError(f"{lo_id!r} is not a Lo-task")
            if hi_id is not UNCOVERED:
                if hi_id not in covered:
                    raise InputError(f"{hi_id!r} is not a Hi-task")
                covered[hi_id].append(instance[lo_id])
        lengths = {h: block_length(instance[h], los) for h, los in covered.items()}
        return cls(assign, lengths)

    def covered_by(self, hi_id: TaskId) -> list[TaskId]:
        return sorted(lo for lo, h in self.assign.items() if h == hi_id)

    def uncovered(self) -> list[TaskId]:
        return sorted(lo for lo, h in self.assign.items() if h is UNCOVERED)

    def blocks(self, instance: Instance) -> list[CoveringBlockInfo]:
        out = []
        for hi in instance.with_criticality(2):
            length = self.block_lengths[hi.id]
            out.append(CoveringBlockInfo(
                hi.id, frozenset(self.covered_by(hi.id)), length,
                saturated=length > hi.p(2), fully_covering=length == hi.p(2),
            ))
        return out


@dataclass(frozen=True)
class Mc2Result:
    covering: Mc2Covering
    makespan: int
    optimal: bool
    gap: float | None
    lower_bound: int
    elapsed_time: float
    nodes: int = 0

    def record(self) -> dict:
        return {
            "makespan": self.makespan,
            "optimal": self.optimal,
            "gap": self.gap,
            "assignment": dict(self.covering.assign),
            "elapsed_time": self.elapsed_time,
        }


def _check_two_level(instance: Instance) -> None:
    if instance.max_criticality > 2:
        raise InputError("two-level solver got a task of criticality > 2")


def objective_mc2(instance: Instance, cov: Mc2Covering) -> int:
    lo_work = sum(instance[lo].p(1) for lo in cov.uncovered())
    return sum(cov.block_lengths.values()) + lo_work


def rebuild_schedule_mc2(instance: Instance, cov: Mc2Covering) -> Permutation:
    """Uncovered Lo-tasks first, then each block as its Hi-task and covered Lo-tasks.

    Uncovered Lo-tasks lead because a Lo-task placed after a block with slack
    would slip into that block's window and become covered.
    """
    order: list[TaskId] = list(cov.uncovered())
    for hi in instance.with_criticality(2):
        order.append(hi.id)
        order.extend(cov.covered_by(hi.id))
    return Permutation(tuple(order))


class _Search:
    """Depth-first branch and bound over Lo-items on anonymous bin residuals.

    Bins (Hi-tasks) with equal residual capacity are interchangeable, so a
    node only stores the sorted tuple of positive residuals.  Putting an item
    into a full bin wastes it exactly like leaving it uncovered, so full bins
    are dropped from the state.
    """

    def __init__(self, caps: list[int], weights: list[int], deadline: float | None):
        self.w = weights  # sorted descending
        self.m = len(weights)
        self.neg = [-x for x in weights]
        self.suffix = [0] * (self.m + 1)
        for k in range(self.m - 1, -1, -1):
            self.suffix[k] = self.suffix[k + 1] + weights[k]
        self.root = tuple(sorted(c for c in caps if c > 0))
        self.deadline = deadline
        self.best = -1
        self.best_path: list[int | None] = []
        self.path: list[int | None] = []
        self.memo: dict = {}
        self.nodes = 0
        self.timed_out = False

    def bound(self, k: int, res: tuple[int, ...]) -> int:
        """Most the items from ``k`` on can still add to the covered amount."""
        if not res or k >= self.m:
            return 0
        rmax = res[-1]
        # Items larger than every residual give at most rmax each.
        j = bisect.bisect_left(self.neg, -rmax, k)
        by_items = (j - k) * rmax + self.suffix[j]
        # Each item feeds one bin: only the (m - k) largest residuals can gain.
        left = self.m - k
        by_bins = sum(res[-left:]) if left < len(res) else sum(res)
        return min(by_items, by_bins)

    def run(self, incumbent: int, incumbent_path: list[int | None]) -> None:
        self.best = incumbent
        self.best_path = list(incumbent_path)
        limit = sys.getrecursionlimit()
        if limit < self.m + 100:
            sys.setrecursionlimit(self.m + 100)
        try:
            self._dfs(0, self.root, 0)
        except _Timeout:
            self.timed_out = True
        finally:
            sys.setrecursionlimit(limit)

    def _dfs(self, k: int, res: tuple[int, ...], gain: int) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        if gain > self.best:
            self.best = gain
            self.best_path = self.path + [None] * (self.m - k)
        if k == self.m or not res:
            return
        if gain + self.bound(k, res) <= self.best:
            return
        key = (k, res)
        if self.memo.get(key, -1) >= gain:
            return
        if len(self.memo) >= MEMO_LIMIT:
            self.memo.clear()
        self.memo[key] = gain

        x = self.w[k]
        if x in res:
            # An exact fit is never worse than any alternative for the largest item left.
            choices = [x]
        else:
            vals = sorted(set(res))
            choices = [v for v in vals if v > x] + [v for v in reversed(vals) if v < x]
        for v in choices:
            i = res.index(v)
            rest = list(res[:i] + res[i + 1:])
            if v > x:
                bisect.insort(rest, v - x)
            self.path.append(v)
            self._dfs(k + 1, tuple(rest), gain + min(x, v))
            self.path.pop()
        if x not in res:
            self.path.append(None)
            self._dfs(k + 1, res, gain)
            self.path.pop()


class _Timeout(Exception):
    pass


def _replay(caps: list[int], weights: list[int], path: list[int | None]) -> tuple[list[int | None], int]:
    """Map residual-value decisions back to concrete bin indices.

    Among bins sharing the chosen residual the lowest index is used.
    """
    res = list(caps)
    out: list[int | None] = []
    gain = 0
    for x, v in zip(weights, path):
        if v is None:
            out.append(None)
            continue
        i = min(b for b, r in enumerate(res) if r == v)
        gain += min(x, v)
        res[i] -= x
        out.append(i)
    return out, gain


def _greedy(caps: list[int], weights: list[int], rng: random.Random | None = None) -> list[int | None]:
    """Best fit on residual values; items that fit nowhere top up the roomiest bin."""
    res = list(caps)
    path: list[int | None] = []
    order = range(len(weights))
    for k in order:
        x = weights[k]
        open_vals = [r for r in res if r > 0]
        if not open_vals:
            path.append(None)
            continue
        fits = [r for r in open_vals if r >= x]
        if fits:
            v = min(fits)
            if rng is not None and len(fits) > 1 and rng.random() < 0.3:
                v = rng.choice(fits)
        else:
            v = max(open_vals)
        i = res.index(v)
        res[i] -= x
        path.append(v)
    return path


def _path_gain(caps: list[int], weights: list[int], path: list[int | None]) -> int:
    return _replay(caps, weights, path)[1]


def solve_mc2(
    instance: Instance,
    time_limit: float | None = None,
    seed: int = 0,
    restarts: int = 8,
) -> Mc2Result:
    """Minimum-makespan Lo->Hi assignment.

    ``seed`` drives a few randomised greedy restarts used to seed the
    incumbent; with no time limit the result is the same for every seed.
    """
    _check_two_level(instance)
    t0 = time.monotonic()
    his = instance.with_criticality(2)
    los = sorted(instance.with_criticality(1), key=lambda t: (-t.p(1), t.id))
    caps = [h.p(2) - h.p(1) for h in his]
    weights = [lo.p(1) for lo in los]
    base = sum(h.p(2) for h in his) + sum(weights)

    rng = random.Random(seed)
    best_path = _greedy(caps, weights)
    best_gain = _path_gain(caps, weights, best_path)
    for _ in range(restarts):
        cand = _greedy(caps, weights, rng)
        g = _path_gain(caps, weights, cand)
        if g > best_gain:
            best_gain, best_path = g, cand

    deadline = None if time_limit is None else t0 + time_limit
    search = _Search(caps, weights, deadline)
    root_bound = search.bound(0, search.root)
    search.run(best_gain, best_path)

    bins, gain = _replay(caps, weights, search.best_path)
    assign = {lo.id: (UNCOVERED if b is None else his[b].id) for lo, b in zip(los, bins)}
    # Items that landed in an already full bin contribute nothing; report them uncovered.
    assign = _drop_waste(instance, his, assign)
    cov = Mc2Covering.from_assignment(instance, assign)
    value = objective_mc2(instance, cov)
    assert value == base - gain, (value, base, gain)

    optimal = not search.timed_out
    lower = value if optimal else max(base - root_bound, level_sum_lower_bound(instance))
    gap = None if optimal else 100.0 * (value - lower) / value if value else 0.0
    return Mc2Result(cov, value, optimal, gap, lower, time.monotonic() - t0, search.nodes)


def _drop_waste(instance: Instance, his: list[FShape], assign: dict) -> dict:
    out = dict(assign)
    for hi in his:
        members = sorted((lo for lo, h in assign.items() if h == hi.id),
                         key=lambda lo: (-instance[lo].p(1), lo))
        room = hi.p(2) - hi.p(1)
        for lo in members:
            if room <= 0:
                out[lo] = UNCOVERED
            room -= instance[lo].p(1)
    return out


def optimal_makespan_mc2(instance: Instance) -> int:
    """Convenience wrapper returning only the optimal makespan."""
    return solve_mc2(instance).makespan


def export_lp_mc2(instance: Instance) -> str:
    """The covering model in CPLEX LP format, for cross-checking with an external solver.

    Row families ``c2_*``, ``c3_*`` and ``c4_*`` are the block-length lower
    envelopes and the at-most-one-coverer rows.
    """
    _check_two_level(instance)
    his = instance.with_criticality(2)
    los = instance.with_criticality(1)
    hn = {h.id: f"h{k}" for k, h in enumerate(his)}
    ln = {lo.id: f"l{k}" for k, lo in enumerate(los)}

    def x(h: FShape, lo: FShape) -> str:
        return f"x_{hn[h.id]}_{ln[lo.id]}"

    model = LpModel()
    model.comments.append(f"two-level covering model: {len(his)} Hi-tasks, {len(los)} Lo-tasks")
    model.comments += [f"{hn[h.id]} = task {h.id!r} p={h.proc}" for h in his]
    model.comments += [f"{ln[lo.id]} = task {lo.id!r} p={lo.proc}" for lo in los]
    model.objective = [(1, f"B_{hn[h.id]}") for h in his]
    model.objective += [(-lo.p(1), x(h, lo)) for lo in los for h in his]
    model.constant = sum(lo.p(1) for lo in los)
    for h in his:
        terms = [(1, f"B_{hn[h.id]}")] + [(-lo.p(1), x(h, lo)) for lo in los]
        model.add_row(f"c2_{hn[h.id]}", terms, ">=", h.p(1))
    for h in his:
        model.add_row(f"c3_{hn[h.id]}", [(1, f"B_{hn[h.id]}")], ">=", h.p(2))
    if his:
        for lo in los:
            model.add_row(f"c4_{ln[lo.id]}", [(1, x(h, lo)) for h in his], "<=", 1)
    model.generals = [f"B_{hn[h.id]}" for h in his]
    model.binaries = [x(h, lo) for h in his for lo in los]
    return model.to_text()

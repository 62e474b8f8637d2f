"""Three-level solvers: the Bottom-up heuristic and an exact nested-covering search.

Tasks of criticality 3, 2 and 1 are called Great, Hi and Lo.  An optimal
three-level schedule can be read as a sequence of blocks:

* a Great block: the Great-task, Lo-tasks it covers directly, then Hi-blocks
  nested under its levels 2..3;
* a free Hi-block: a Hi-task and the Lo-tasks under its level-2 window;
* an uncovered Lo-task.

A Hi-block lasts ``P = max(p2, p1 + nested Lo work)`` and a Great block lasts
``max(g3, g2 + sum P, g1 + sum P + direct Lo work)``.
"""

from __future__ import annotations

import enum
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .core import (
    InputError,
    Instance,
    Permutation,
    Schedule,
    TaskId,
    left_shift,
    makespan,
    tight_links,
)
from .covering2 import Mc2Result, solve_mc2
from .lpformat import LpModel
from .transforms import FShape, level_sum_lower_bound, minus, plus

FREE = None

Mc2Solver = Callable[[Instance], Mc2Result]


def _check_three_level(instance: Instance) -> None:
    if instance.max_criticality > 3:
        raise InputError("three-level solver got a task of criticality > 3")


@dataclass(frozen=True)
class Mc3Covering:
    """Nested assignment: Lo -> (Great | None, Hi | None), Hi -> Great | None.

    ``(None, None)`` leaves a Lo-task uncovered; ``(g, None)`` puts it directly
    under Great ``g``; ``(g, h)`` nests it in Hi ``h``, which must then sit in
    ``g`` (``g`` is None for a free Hi).
    """

    lo_assign: Mapping[TaskId, tuple[TaskId | None, TaskId | None]]
    hi_assign: Mapping[TaskId, TaskId | None]
    hi_block_lengths: Mapping[tuple[TaskId, TaskId | None], int] = field(default_factory=dict)
    great_lengths: Mapping[TaskId, int] = field(default_factory=dict)

    @classmethod
    def from_assignment(
        cls,
        instance: Instance,
        lo_assign: Mapping[TaskId, tuple[TaskId | None, TaskId | None]],
        hi_assign: Mapping[TaskId, TaskId | None],
    ) -> "Mc3Covering":
        _check_three_level(instance)
        lo_assign = dict(lo_assign)
        hi_assign = dict(hi_assign)
        for t in instance.with_criticality(1):
            lo_assign.setdefault(t.id, (None, None))
        for t in instance.with_criticality(2):
            hi_assign.setdefault(t.id, FREE)
        greats = {t.id for t in instance.with_criticality(3)}
        for h, g in hi_assign.items():
            if instance[h].criticality != 2:
                raise InputError(f"{h!r} is not a Hi-task")
            if g is not FREE and g not in greats:
                raise InputError(f"Hi {h!r} assigned to non-Great {g!r}")
        nested: dict[TaskId, int] = {h: 0 for h in hi_assign}
        direct: dict[TaskId, int] = {g: 0 for g in greats}
        for lo, (g, h) in lo_assign.items():
            if instance[lo].criticality != 1:
                raise InputError(f"{lo!r} is not a Lo-task")
            w = instance[lo].p(1)
            if h is not None:
                if h not in hi_assign:
                    raise InputError(f"Lo {lo!r} nested in non-Hi {h!r}")
                if hi_assign[h] != g:
                    raise InputError(f"Lo {lo!r} nested in Hi {h!r} which does not sit in {g!r}")
                nested[h] += w
            elif g is not None:
                if g not in greats:
                    raise InputError(f"Lo {lo!r} assigned to non-Great {g!r}")
                direct[g] += w
        hi_len = {}
        for h, g in hi_assign.items():
            t = instance[h]
            hi_len[(h, g)] = max(t.p(2), t.p(1) + nested[h])
        great_len = {}
        for g in greats:
            t = instance[g]
            sum_p = sum(hi_len[(h, gg)] for h, gg in hi_assign.items() if gg == g)
            great_len[g] = max(t.p(3), t.p(2) + sum_p, t.p(1) + sum_p + direct[g])
        return cls(lo_assign, hi_assign, hi_len, great_len)

    def his_in(self, g: TaskId | None) -> list[TaskId]:
        return sorted(h for h, gg in self.hi_assign.items() if gg == g)

    def los_in(self, g: TaskId | None, h: TaskId | None) -> list[TaskId]:
        return sorted(lo for lo, gh in self.lo_assign.items() if gh == (g, h))


def objective_mc3(instance: Instance, cov: Mc3Covering) -> int:
    # Recompute from the assignment so stale or hand-edited lengths cannot leak in.
    cov = Mc3Covering.from_assignment(instance, cov.lo_assign, cov.hi_assign)
    free = sum(cov.hi_block_lengths[(h, FREE)] for h in cov.his_in(FREE))
    uncovered = sum(instance[lo].p(1) for lo in cov.los_in(None, None))
    return sum(cov.great_lengths.values()) + free + uncovered


def rebuild_schedule_mc3(instance: Instance, cov: Mc3Covering) -> Permutation:
    """Uncovered Lo-tasks, then free Hi-blocks, then Great blocks.

    A Great block is emitted as the Great-task, its direct Lo-tasks and its
    Hi-blocks.  Anything emitted after a block with slack would slide into
    it, so the blocks that nothing can slide into come last.
    """
    order: list[TaskId] = list(cov.los_in(None, None))
    for h in cov.his_in(FREE):
        order.append(h)
        order.extend(cov.los_in(None, h))
    for g in sorted(t.id for t in instance.with_criticality(3)):
        order.append(g)
        order.extend(cov.los_in(g, None))
        for h in cov.his_in(g):
            order.append(h)
            order.extend(cov.los_in(g, h))
    return Permutation(tuple(order))


def extract_covering_mc3(instance: Instance, perm: Permutation) -> Mc3Covering:
    """Read the nested covering off the left-shifted schedule of ``perm``.

    A Lo-task goes to the Hi-task whose level-1..2 window holds its start,
    else to the Great-task whose level-1..3 window does; a Hi-task goes to
    the Great-task whose level-2..3 window holds its start.  The objective of
    the result never exceeds the makespan of ``perm``.
    """
    _check_three_level(instance)
    sched = left_shift(instance, perm)
    greats = instance.with_criticality(3)
    his = instance.with_criticality(2)

    def window_owner(start: int, owners, lo_level: int, hi_level: int):
        for o in owners:
            s = sched[o.id]
            if s + o.p(lo_level) <= start < s + o.p(hi_level):
                return o.id
        return None

    hi_assign = {h.id: window_owner(sched[h.id], greats, 2, 3) for h in his}
    lo_assign = {}
    for lo in instance.with_criticality(1):
        s = sched[lo.id]
        h = window_owner(s, his, 1, 2)
        if h is not None:
            lo_assign[lo.id] = (hi_assign[h], h)
        else:
            lo_assign[lo.id] = (window_owner(s, greats, 1, 3), None)
    return Mc3Covering.from_assignment(instance, lo_assign, hi_assign)


class Certificate(enum.Enum):
    NONE = "none"
    CRITICAL_PATH_LEVELS_1_2 = "critical_path_levels_1_2"
    ALL_LO_FULLY_COVERED = "all_lo_fully_covered"


def _has_low_level_critical_path(instance: Instance, sched: Schedule) -> bool:
    """Whether some critical path uses levels 1 and 2 only.

    Forward reachability over tight links: a task is reachable if it starts
    at 0 or a reachable predecessor ends exactly at its start on a level <= 2.
    """
    if instance.n == 0:
        return True
    cmax = makespan(instance, sched)
    links = tight_links(instance, sched)
    ok: dict[TaskId, bool] = {}
    for tid in sched.order():
        ok[tid] = sched[tid] == 0 or any(ok[p] and lvl <= 2 for p, lvl in links[tid])
    return any(
        ok[t.id] and t.criticality <= 2 and sched[t.id] + t.top == cmax
        for t in instance
    )


def _all_lo_fully_covered(instance: Instance, sched: Schedule) -> bool:
    coverers = [t for t in instance if t.criticality >= 2]
    los = [t for t in instance if t.criticality == 1]
    windows: dict[TaskId, list] = {c.id: [] for c in coverers}
    for lo in los:
        s = sched[lo.id]
        owner = next((c for c in coverers if sched[c.id] + c.p(1) <= s < sched[c.id] + c.p(2)), None)
        if owner is None:
            return False
        windows[owner.id].append(lo)
    for c in coverers:
        limit = sched[c.id] + c.p(2)
        if any(sched[lo.id] + lo.p(1) > limit for lo in windows[c.id]):
            return False
    return True


def check_optimality_conditions(instance: Instance, perm: Permutation) -> Certificate:
    """Which sufficient optimality condition, if any, the schedule of ``perm`` meets.

    Meaningful for Bottom-up output, whose schedule has the 2- restriction
    optimum as its level-1/2 makespan and the 2+ restriction optimum as its
    makespan once Lo-tasks vanish.
    """
    sched = left_shift(instance, perm)
    if _has_low_level_critical_path(instance, sched):
        return Certificate.CRITICAL_PATH_LEVELS_1_2
    if _all_lo_fully_covered(instance, sched):
        return Certificate.ALL_LO_FULLY_COVERED
    return Certificate.NONE


@dataclass(frozen=True)
class BottomUpResult:
    permutation: Permutation
    makespan: int
    lb_minus: int
    certificate: Certificate
    stages_optimal: bool = True
    elapsed_time: float = 0.0

    @property
    def certified(self) -> bool:
        return self.certificate is not Certificate.NONE


def bottom_up(
    instance: Instance,
    mc2_solver: Mc2Solver = solve_mc2,
) -> BottomUpResult:
    """Two-stage heuristic: solve the 2- restriction, then re-solve the blocks as a two-level instance."""
    _check_three_level(instance)
    t0 = time.monotonic()
    first = mc2_solver(minus(instance, 2))
    cov = first.covering
    lb_minus = first.makespan if first.optimal else first.lower_bound

    leaders = sorted((t for t in instance if t.criticality >= 2), key=lambda t: t.id)
    members: dict[TaskId, list[TaskId]] = {t.id: list(cov.covered_by(t.id)) for t in leaders}
    length: dict[TaskId, int] = {t.id: cov.block_lengths[t.id] for t in leaders}

    passthrough: list[FShape] = []
    for lo_id in sorted(cov.uncovered(), key=lambda i: (-instance[i].p(1), i)):
        w = instance[lo_id].p(1)
        if not leaders:
            passthrough.append(instance[lo_id])
            continue

        def grown(t: FShape) -> int:
            return max(t.p(1) + sum(instance[x].p(1) for x in members[t.id]) + w, t.p(2))

        target = min(leaders, key=lambda t: (grown(t) - length[t.id], t.id))
        length[target.id] = grown(target)
        members[target.id].append(lo_id)

    # Stage 2 instance: Hi-led blocks become Lo-tasks, unsaturated Great-led
    # blocks become Hi-tasks, saturated Great-led blocks are a constant.
    stage2: list[FShape] = [FShape(t.id, 1, t.proc) for t in passthrough]
    saturated: list[TaskId] = []
    for t in leaders:
        b = length[t.id]
        if t.criticality == 2:
            stage2.append(FShape(t.id, 1, (b,)))
        elif b < t.p(3):
            stage2.append(FShape(t.id, 2, (b, t.p(3))))
        else:
            saturated.append(t.id)
    second = mc2_solver(Instance(tuple(stage2)))
    cov2 = second.covering

    def expand(unit: TaskId) -> list[TaskId]:
        if instance[unit].criticality == 1:
            return [unit]
        return [unit] + sorted(members[unit])

    order: list[TaskId] = []
    for unit in cov2.uncovered():
        order.extend(expand(unit))
    for t in leaders:
        if t.criticality == 3 and t.id not in saturated:
            order.extend(expand(t.id))
            for unit in cov2.covered_by(t.id):
                order.extend(expand(unit))
    for g in saturated:
        order.extend(expand(g))
    perm = Permutation(tuple(order))
    value = makespan(instance, left_shift(instance, perm))

    stages_optimal = first.optimal and second.optimal
    cert = check_optimality_conditions(instance, perm) if stages_optimal else Certificate.NONE
    return BottomUpResult(perm, value, lb_minus, cert, stages_optimal, time.monotonic() - t0)


@dataclass(frozen=True)
class Mc3Result:
    covering: Mc3Covering
    makespan: int
    optimal: bool
    gap: float | None
    lower_bound: int
    lb_minus: int | None
    lb_plus: int | None
    certificate: Certificate
    elapsed_time: float
    nodes: int = 0

    def record(self) -> dict:
        return {
            "makespan": self.makespan,
            "optimal": self.optimal,
            "gap": self.gap,
            "certificate": self.certificate.value,
            "lb_minus": self.lb_minus,
            "lb_plus": self.lb_plus,
            "elapsed_time": self.elapsed_time,
        }


class _Timeout(Exception):
    pass


class _Search:
    """Depth-first branch and bound: Hi-tasks to Greats first, then Lo-tasks to slots.

    The running objective counts every Great block, every placed free Hi-block
    and every uncovered Lo-task.  The bound adds whatever work is still to be
    placed beyond the room the current blocks can absorb without growing.
    """

    def __init__(self, instance: Instance, deadline: float | None, node_lb: int):
        greats = instance.with_criticality(3)
        his = sorted(instance.with_criticality(2), key=lambda t: (-t.p(2), -t.p(1), t.id))
        los = sorted(instance.with_criticality(1), key=lambda t: (-t.p(1), t.id))
        self.great_ids = [t.id for t in greats]
        self.hi_ids = [t.id for t in his]
        self.lo_ids = [t.id for t in los]
        self.g = [t.proc for t in greats]
        self.h = [t.proc for t in his]
        self.w = [t.p(1) for t in los]
        nh = len(his)
        self.sum_p = [0] * len(greats)
        self.direct = [0] * len(greats)
        self.nested: list[list[int]] = [[] for _ in greats]
        self.host: list[int | None] = [None] * nh  # index of Great, -1 for free
        self.load = [0] * nh
        self.hi_choice: list[int] = [0] * nh
        self.lo_choice: list[tuple[str, int] | None] = [None] * len(los)
        self.rem_w = [0] * (len(los) + 1)
        for k in range(len(los) - 1, -1, -1):
            self.rem_w[k] = self.rem_w[k + 1] + self.w[k]
        self.rem_p2 = [0] * (nh + 1)
        for j in range(nh - 1, -1, -1):
            self.rem_p2[j] = self.rem_p2[j + 1] + self.h[j][1]
        self.deadline = deadline
        self.node_lb = node_lb
        self.best = None
        self.best_hi: list[int] = []
        self.best_lo: list = []
        self.memo: dict = {}
        self.nodes = 0
        self.timed_out = False

    # block bookkeeping

    def glen(self, i: int) -> int:
        g1, g2, g3 = self.g[i]
        return max(g3, g2 + self.sum_p[i], g1 + self.sum_p[i] + self.direct[i])

    def hlen(self, j: int) -> int:
        p1, p2 = self.h[j]
        return max(p2, p1 + self.load[j])

    def room(self) -> int:
        r = 0
        for i, (g1, _, _) in enumerate(self.g):
            r += self.glen(i) - (g1 + self.sum_p[i] + self.direct[i])
        for j, (p1, p2) in enumerate(self.h):
            r += max(0, p2 - p1 - self.load[j])
        return r

    def gsig(self, i: int) -> tuple:
        return (self.g[i], self.direct[i], tuple(sorted((self.h[j], self.load[j]) for j in self.nested[i])))

    def key(self, phase: int, idx: int) -> tuple:
        greats = tuple(sorted(self.gsig(i) for i in range(len(self.g))))
        free = tuple(sorted((self.h[j], self.load[j]) for j in range(len(self.h)) if self.host[j] == -1))
        return (phase, idx, greats, free)

    def tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout

    def run(self, incumbent: int) -> None:
        self.best = incumbent
        need = len(self.h) + len(self.w) + 100
        limit = sys.getrecursionlimit()
        if limit < need:
            sys.setrecursionlimit(need)
        cur = sum(g[2] for g in self.g)
        try:
            self._hi(0, cur)
        except _Timeout:
            self.timed_out = True
        finally:
            sys.setrecursionlimit(limit)

    def _prune(self, cur: int, pending: int, key: tuple) -> bool:
        lb = max(self.node_lb, cur + max(0, pending - self.room()))
        if lb >= self.best:
            return True
        if self.memo.get(key, cur + 1) <= cur:
            return True
        self.memo[key] = cur
        return False

    def _hi(self, j: int, cur: int) -> None:
        self.tick()
        if j == len(self.h):
            self._lo(0, cur)
            return
        if self._prune(cur, self.rem_p2[j] + self.rem_w[0], self.key(0, j)):
            return
        p2 = self.h[j][1]
        options = []
        seen = set()
        for i in range(len(self.g)):
            sig = self.gsig(i)
            if sig in seen:
                continue
            seen.add(sig)
            old = self.glen(i)
            self.sum_p[i] += p2
            delta = self.glen(i) - old
            self.sum_p[i] -= p2
            options.append((delta, 0, i))
        options.append((p2, 1, -1))
        options.sort()
        for delta, _, i in options:
            self.host[j] = i
            self.hi_choice[j] = i
            if i >= 0:
                self.sum_p[i] += p2
                self.nested[i].append(j)
            self._hi(j + 1, cur + delta)
            if i >= 0:
                self.sum_p[i] -= p2
                self.nested[i].pop()
            self.host[j] = None

    def _lo(self, k: int, cur: int) -> None:
        self.tick()
        if k == len(self.w):
            if cur < self.best:
                self.best = cur
                self.best_hi = list(self.hi_choice)
                self.best_lo = list(self.lo_choice)
            return
        if self._prune(cur, self.rem_w[k], self.key(1, k)):
            return
        x = self.w[k]
        options = []
        seen = set()
        for i in range(len(self.g)):
            sig = ("g", self.gsig(i))
            if sig in seen:
                continue
            seen.add(sig)
            old = self.glen(i)
            self.direct[i] += x
            options.append((self.glen(i) - old, 0, ("g", i)))
            self.direct[i] -= x
        for j in range(len(self.h)):
            host = self.host[j]
            sig = ("h", self.h[j], self.load[j], None if host == -1 else self.gsig(host))
            if sig in seen:
                continue
            seen.add(sig)
            old_h = self.hlen(j)
            self.load[j] += x
            dp = self.hlen(j) - old_h
            self.load[j] -= x
            if host == -1:
                delta = dp
            else:
                old = self.glen(host)
                self.sum_p[host] += dp
                delta = self.glen(host) - old
                self.sum_p[host] -= dp
            options.append((delta, 0, ("h", j)))
        options.append((x, 1, None))
        options.sort(key=lambda o: (o[0], o[1]))
        for delta, _, opt in options:
            self.lo_choice[k] = opt
            self._apply_lo(opt, x, +1)
            self._lo(k + 1, cur + delta)
            self._apply_lo(opt, x, -1)
        self.lo_choice[k] = None

    def _apply_lo(self, opt, x: int, sign: int) -> None:
        if opt is None:
            return
        kind, idx = opt
        if kind == "g":
            self.direct[idx] += sign * x
            return
        host = self.host[idx]
        old_h = self.hlen(idx)
        self.load[idx] += sign * x
        if host != -1:
            self.sum_p[host] += self.hlen(idx) - old_h

    def covering(self, instance: Instance) -> Mc3Covering:
        hi_assign = {}
        for j, i in enumerate(self.best_hi):
            hi_assign[self.hi_ids[j]] = FREE if i < 0 else self.great_ids[i]
        lo_assign = {}
        for k, opt in enumerate(self.best_lo):
            lo = self.lo_ids[k]
            if opt is None:
                lo_assign[lo] = (None, None)
            elif opt[0] == "g":
                lo_assign[lo] = (self.great_ids[opt[1]], None)
            else:
                h = self.hi_ids[opt[1]]
                lo_assign[lo] = (hi_assign[h], h)
        return Mc3Covering.from_assignment(instance, lo_assign, hi_assign)


def _mc2_with_limit(deadline: float | None) -> Mc2Solver:
    def run(inst: Instance) -> Mc2Result:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        return solve_mc2(inst, time_limit=left)
    return run


def solve_mc3(
    instance: Instance,
    time_limit: float | None = None,
    seed: int = 0,
    warm_start: BottomUpResult | None = None,
) -> Mc3Result:
    """Minimum-makespan nested covering.

    With a warm start the incumbent begins at the Bottom-up schedule; the
    lower bound is the best of the 2-/2+ restriction optima and the level
    sums.  ``seed`` is forwarded to the two-level restriction solves.
    """
    _check_three_level(instance)
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    mc2 = _mc2_with_limit(deadline)

    r_minus = mc2(minus(instance, 2))
    r_plus = mc2(plus(instance, 2))
    lb_minus = r_minus.makespan if r_minus.optimal else r_minus.lower_bound
    lb_plus = r_plus.makespan if r_plus.optimal else r_plus.lower_bound
    lower = max(lb_minus, lb_plus, level_sum_lower_bound(instance))

    if warm_start is not None:
        start_cov = extract_covering_mc3(instance, warm_start.permutation)
    else:
        start_cov = _trivial_covering(instance)
    start_value = objective_mc3(instance, start_cov)

    search = _Search(instance, deadline, lower)
    if start_value > lower:
        search.run(start_value)
    improved = search.best is not None and search.best < start_value and search.best_hi is not None \
        and len(search.best_lo) == len(search.w)
    cov = search.covering(instance) if improved else start_cov
    value = objective_mc3(instance, cov)
    optimal = not search.timed_out
    if optimal:
        lower = value
    gap = None if optimal else (100.0 * (value - lower) / value if value else 0.0)
    cert = warm_start.certificate if warm_start is not None else Certificate.NONE
    return Mc3Result(cov, value, optimal, gap, lower, lb_minus, lb_plus, cert,
                     time.monotonic() - t0, search.nodes)


def _trivial_covering(instance: Instance) -> Mc3Covering:
    return Mc3Covering.from_assignment(instance, {}, {})


def solve_bottom_up_then_mc3(instance: Instance, time_limit: float | None = None, seed: int = 0) -> Mc3Result:
    """Bottom-up first; the exact search runs only when no certificate is issued."""
    t0 = time.monotonic()
    deadline = None if time_limit is None else t0 + time_limit
    bu = bottom_up(instance, _mc2_with_limit(deadline))
    if bu.certified:
        cov = extract_covering_mc3(instance, bu.permutation)
        return Mc3Result(cov, bu.makespan, True, None, bu.makespan, bu.lb_minus, None,
                         bu.certificate, time.monotonic() - t0)
    left = None if deadline is None else max(0.0, deadline - time.monotonic())
    res = solve_mc3(instance, time_limit=left, seed=seed, warm_start=bu)
    return Mc3Result(res.covering, res.makespan, res.optimal, res.gap, res.lower_bound,
                     res.lb_minus, res.lb_plus, res.certificate, time.monotonic() - t0, res.nodes)


def export_lp_mc3(instance: Instance) -> str:
    """The nested covering model in CPLEX LP format.

    The empty coverer is a real index ``E`` in the ``x``/``y``/``P`` families;
    the big-M equals the number of Lo-tasks.  Every Lo-task and every
    Hi-task takes exactly one slot, the empty one included.
    """
    _check_three_level(instance)
    greats = instance.with_criticality(3)
    his = instance.with_criticality(2)
    los = instance.with_criticality(1)
    gn = {t.id: f"g{k}" for k, t in enumerate(greats)}
    hn = {t.id: f"h{k}" for k, t in enumerate(his)}
    ln = {t.id: f"l{k}" for k, t in enumerate(los)}
    big_m = len(los)
    g_idx = [gn[t.id] for t in greats] + ["E"]
    h_idx = [hn[t.id] for t in his] + ["E"]

    model = LpModel()
    model.comments.append(
        f"three-level covering model: {len(greats)} Great, {len(his)} Hi, {len(los)} Lo; M = {big_m}")
    for t in greats + his + los:
        name = gn.get(t.id) or hn.get(t.id) or ln[t.id]
        model.comments.append(f"{name} = task {t.id!r} p={t.proc}")

    x_vars = [(gi, hj, ln[lo.id]) for gi in g_idx for hj in h_idx for lo in los]

    def x(gi: str, hj: str, lk: str) -> str:
        return f"x_{gi}_{hj}_{lk}"

    def y(gi: str, hj: str) -> str:
        return f"y_{gi}_{hj}"

    def P(hj: str, gi: str) -> str:
        return f"P_{hj}_{gi}"

    model.objective = [(1, f"p_{gn[t.id]}") for t in greats]
    model.objective += [(1, P(hn[t.id], "E")) for t in his]
    model.objective += [(lo.p(1), x("E", "E", ln[lo.id])) for lo in los]

    for t in greats:
        model.add_row(f"c6_{gn[t.id]}", [(1, f"p_{gn[t.id]}")], ">=", t.p(3))
    for gi in g_idx:
        for t in his:
            hj = hn[t.id]
            terms = [(big_m, y(gi, hj))] + [(-1, x(gi, hj, ln[lo.id])) for lo in los]
            model.add_row(f"c7_{gi}_{hj}", terms, ">=", 0)
    for gi in g_idx:
        for t in his:
            hj = hn[t.id]
            model.add_row(f"c8_{hj}_{gi}", [(1, P(hj, gi)), (-t.p(2), y(gi, hj))], ">=", 0)
    for gi in g_idx:
        for t in his:
            hj = hn[t.id]
            terms = [(1, P(hj, gi)), (-t.p(1), y(gi, hj))]
            terms += [(-lo.p(1), x(gi, hj, ln[lo.id])) for lo in los]
            model.add_row(f"c9_{hj}_{gi}", terms, ">=", 0)
    for t in greats:
        gi = gn[t.id]
        terms = [(1, f"p_{gi}")] + [(-1, P(hn[h.id], gi)) for h in his]
        model.add_row(f"c10_{gi}", terms, ">=", t.p(2))
    for t in greats:
        gi = gn[t.id]
        terms = [(1, f"p_{gi}")] + [(-1, P(hn[h.id], gi)) for h in his]
        terms += [(-lo.p(1), x(gi, "E", ln[lo.id])) for lo in los]
        model.add_row(f"c11_{gi}", terms, ">=", t.p(1))
    for lo in los:
        terms = [(1, x(gi, hj, ln[lo.id])) for gi in g_idx for hj in h_idx]
        model.add_row(f"c12_{ln[lo.id]}", terms, "=", 1)
    for t in his:
        model.add_row(f"c13_{hn[t.id]}", [(1, y(gi, hn[t.id])) for gi in g_idx], "=", 1)

    model.generals = [f"p_{gn[t.id]}" for t in greats]
    model.generals += [P(hn[t.id], gi) for t in his for gi in g_idx]
    model.binaries = [y(gi, hn[t.id]) for gi in g_idx for t in his]
    model.binaries += [x(*v) for v in x_vars]
    return model.to_text()

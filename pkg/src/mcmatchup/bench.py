"""Random instance generation, a solver registry and the benchmark harness."""

from __future__ import annotations

import logging
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import FShape, InputError, Instance, Permutation, left_shift, makespan
from .covering2 import rebuild_schedule_mc2, solve_mc2
from .covering3 import bottom_up, rebuild_schedule_mc3, solve_mc3
from .oracle import brute_force_optimum
from .transforms import lcf, level_sum_lower_bound

log = logging.getLogger(__name__)

DEFAULT_P1_RANGE = (1, 11)
DEFAULT_PROLONGATION = (1, 10)


@dataclass(frozen=True)
class GeneratorConfig:
    """Integer ranges are inclusive.  ``prolongation_ranges[k]`` is the
    increment from level k+1 to level k+2; a single range is reused."""

    n: int
    max_criticality: int = 2
    criticality_split: tuple[float, ...] | None = None
    p1_range: tuple[int, int] = DEFAULT_P1_RANGE
    prolongation_ranges: tuple[tuple[int, int], ...] = (DEFAULT_PROLONGATION,)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InputError("n must be >= 0")
        if self.max_criticality < 1:
            raise InputError("max_criticality must be >= 1")
        split = self.split()
        if len(split) != self.max_criticality:
            raise InputError("criticality_split needs one proportion per level")
        if any(p < 0 for p in split) or not math.isclose(sum(split), 1.0, abs_tol=1e-9):
            raise InputError("criticality_split must be nonnegative and sum to 1")
        for lo, hi in (self.p1_range, *self.prolongation_ranges):
            if lo < 1 or hi < lo:
                raise InputError(f"range ({lo}, {hi}) must be nonempty with lower bound >= 1")
        if not self.prolongation_ranges:
            raise InputError("at least one prolongation range is required")

    def split(self) -> tuple[float, ...]:
        if self.criticality_split is None:
            return (1.0 / self.max_criticality,) * self.max_criticality
        return tuple(self.criticality_split)

    def prolongation(self, step: int) -> tuple[int, int]:
        ranges = self.prolongation_ranges
        return ranges[min(step, len(ranges) - 1)]


def generate(config: GeneratorConfig) -> Instance:
    rng = random.Random(config.seed)
    levels = list(range(1, config.max_criticality + 1))
    split = config.split()
    tasks = []
    for i in range(config.n):
        x = rng.choices(levels, weights=split)[0]
        proc = [rng.randint(*config.p1_range)]
        for step in range(x - 1):
            proc.append(proc[-1] + rng.randint(*config.prolongation(step)))
        tasks.append(FShape(i, x, tuple(proc)))
    return Instance(tuple(tasks))


@dataclass(frozen=True)
class SolveOutcome:
    permutation: Permutation
    makespan: int
    optimal: bool
    gap: float | None
    lower_bound: int
    timed_out: bool = False
    certificate: str | None = None
    extra: dict = field(default_factory=dict)


def _gap(ub: int, lb: int) -> float:
    return 100.0 * (ub - lb) / ub if ub else 0.0


def _run_lcf(inst: Instance, time_limit, seed) -> SolveOutcome:
    perm, value = lcf(inst)
    lb = level_sum_lower_bound(inst)
    ok = value == lb
    return SolveOutcome(perm, value, ok, None if ok else _gap(value, lb), lb)


def _run_mc2(inst: Instance, time_limit, seed) -> SolveOutcome:
    r = solve_mc2(inst, time_limit=time_limit, seed=seed)
    perm = rebuild_schedule_mc2(inst, r.covering)
    return SolveOutcome(perm, r.makespan, r.optimal, r.gap, r.lower_bound, timed_out=not r.optimal,
                        extra={"nodes": r.nodes})


def _run_bottom_up(inst: Instance, time_limit, seed) -> SolveOutcome:
    r = bottom_up(inst)
    ok = r.certified
    return SolveOutcome(r.permutation, r.makespan, ok, None if ok else _gap(r.makespan, r.lb_minus),
                        r.makespan if ok else r.lb_minus, certificate=r.certificate.value,
                        extra={"lb_minus": r.lb_minus})


def _run_mc3(inst: Instance, time_limit, seed) -> SolveOutcome:
    t0 = time.monotonic()
    warm = bottom_up(inst)
    left = None if time_limit is None else max(0.0, time_limit - (time.monotonic() - t0))
    r = solve_mc3(inst, time_limit=left, seed=seed, warm_start=warm)
    perm = rebuild_schedule_mc3(inst, r.covering)
    return SolveOutcome(perm, r.makespan, r.optimal, r.gap, r.lower_bound, timed_out=not r.optimal,
                        certificate=r.certificate.value,
                        extra={"lb_minus": r.lb_minus, "lb_plus": r.lb_plus, "nodes": r.nodes})


def _run_oracle(inst: Instance, time_limit, seed) -> SolveOutcome:
    perm, value = brute_force_optimum(inst)
    return SolveOutcome(perm, value, True, None, value)


SOLVERS: dict[str, Callable[[Instance, float | None, int], SolveOutcome]] = {
    "lcf": _run_lcf,
    "mc2": _run_mc2,
    "bottomup": _run_bottom_up,
    "mc3": _run_mc3,
    "oracle": _run_oracle,
}


def run_solver(name: str, inst: Instance, time_limit: float | None = None, seed: int = 0) -> SolveOutcome:
    if name not in SOLVERS:
        raise InputError(f"unknown solver {name!r}; choose from {', '.join(SOLVERS)}")
    out = SOLVERS[name](inst, time_limit, seed)
    # Every solver must report the makespan its permutation actually achieves.
    achieved = makespan(inst, left_shift(inst, out.permutation))
    if achieved != out.makespan:
        raise RuntimeError(f"{name}: reported makespan {out.makespan}, permutation gives {achieved}")
    return out


@dataclass(frozen=True)
class BenchRecord:
    instance_id: str
    n: int
    solver: str
    elapsed: float
    makespan: int | None
    optimal: bool
    gap: float | None
    certificate: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class SuiteConfig:
    sizes: tuple[int, ...]
    count: int = 20
    max_criticality: int = 2
    solvers: tuple[str, ...] = ("mc2",)
    time_limit: float | None = 300.0
    seed: int = 0
    p1_range: tuple[int, int] = DEFAULT_P1_RANGE
    prolongation_ranges: tuple[tuple[int, int], ...] = (DEFAULT_PROLONGATION,)

    def instances(self) -> Iterable[tuple[str, Instance]]:
        for n in self.sizes:
            for k in range(self.count):
                cfg = GeneratorConfig(n, self.max_criticality, None, self.p1_range,
                                      self.prolongation_ranges, seed=self.seed + 1000 * n + k)
                yield f"n{n}-{k}", generate(cfg)


def bench_instance(instance_id: str, inst: Instance, solver: str, time_limit: float | None, seed: int) -> BenchRecord:
    t0 = time.monotonic()
    try:
        out = run_solver(solver, inst, time_limit, seed)
    except Exception as exc:  # a crash is an unsolved instance, not a failed run
        log.warning("%s on %s failed: %r", solver, instance_id, exc)
        # No incumbent at all counts as the worst possible gap.
        return BenchRecord(instance_id, inst.n, solver, time.monotonic() - t0, None, False, 100.0,
                           note=f"error: {exc!r}")
    elapsed = time.monotonic() - t0
    gap = None if out.optimal else (out.gap if out.gap is not None else 100.0)
    return BenchRecord(instance_id, inst.n, solver, elapsed, out.makespan, out.optimal, gap, out.certificate)


def run_bench(suite: SuiteConfig) -> list[BenchRecord]:
    records = []
    for iid, inst in suite.instances():
        for solver in suite.solvers:
            records.append(bench_instance(iid, inst, solver, suite.time_limit, suite.seed))
    return records


@dataclass(frozen=True)
class SummaryRow:
    n: int
    solver: str
    count: int
    avg_t: float
    max_t: float
    unsolved_pct: float
    avg_gap: float | None


def summarize(records: Sequence[BenchRecord]) -> list[SummaryRow]:
    """Per (n, solver): mean and max time, share not proven optimal, mean gap of the unsolved ones."""
    groups: dict[tuple[int, str], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.solver), []).append(r)
    rows = []
    for (n, solver), rs in sorted(groups.items()):
        times = [r.elapsed for r in rs]
        gaps = [r.gap for r in rs if r.gap is not None]
        unsolved = sum(not r.optimal for r in rs)
        rows.append(SummaryRow(n, solver, len(rs), statistics.fmean(times), max(times),
                               100.0 * unsolved / len(rs), statistics.fmean(gaps) if gaps else None))
    return rows


def format_table(rows: Sequence[SummaryRow]) -> str:
    header = f"{'n':>5} {'solver':<9} {'count':>5} {'avg t [s]':>10} {'max t [s]':>10} {'unsl [%]':>9} {'avg gap [%]':>12}"
    lines = [header]
    for r in rows:
        gap = "-" if r.avg_gap is None else f"{r.avg_gap:.2f}"
        lines.append(f"{r.n:>5} {r.solver:<9} {r.count:>5} {r.avg_t:>10.3f} {r.max_t:>10.3f} "
                     f"{r.unsolved_pct:>9.1f} {gap:>12}")
    return "\n".join(lines)

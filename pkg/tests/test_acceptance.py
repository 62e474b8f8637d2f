"""Acceptance suite: ten criteria, each printing one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the result lines are
printed straight to the terminal, bypassing output capture.
"""

from __future__ import annotations

import random
import time

import pytest

from helpers import random_instance, seeded_instances
from mcmatchup.bench import SuiteConfig
from mcmatchup.core import FShape, Instance, Permutation, critical_path, left_shift, makespan
from mcmatchup.covering2 import optimal_makespan_mc2, rebuild_schedule_mc2, solve_mc2
from mcmatchup.covering3 import bottom_up, rebuild_schedule_mc3, solve_mc3
from mcmatchup.oracle import brute_force_assignments_mc2, brute_force_optimum
from mcmatchup.runtime import Scenario, simulate
from mcmatchup.transforms import lcf, level_sum_lower_bound, restriction_lower_bounds

TIME_LIMIT = 300.0


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}")
    return emit


def test_c01_mc2_oracle_equivalence(report):
    t0 = time.monotonic()
    mismatches = []
    for inst in seeded_instances(500, (2, 8), 2, base=1):
        got, want = solve_mc2(inst).makespan, brute_force_optimum(inst)[1]
        if got != want:
            mismatches.append((inst, got, want))
    elapsed = time.monotonic() - t0
    ok = not mismatches and elapsed <= 300
    report(1, "solve_mc2 == oracle", ok, f"500 instances, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches, mismatches[:3]
    assert elapsed <= 300


def test_c02_assignment_oracle_equivalence(report):
    mismatches = []
    for inst in seeded_instances(200, (2, 7), 2, base=2):
        a, b = brute_force_assignments_mc2(inst), brute_force_optimum(inst)[1]
        if a != b:
            mismatches.append((inst, a, b))
    report(2, "assignment oracle == permutation oracle", not mismatches,
           f"200 instances, {len(mismatches)} mismatches")
    assert not mismatches, mismatches[:3]


def test_c03_mc3_oracle_equivalence(report):
    mismatches = []
    for inst in seeded_instances(300, (2, 7), 3, base=3):
        r = solve_mc3(inst)
        want = brute_force_optimum(inst)[1]
        if not r.optimal or r.makespan != want:
            mismatches.append((inst, r.makespan, want))
    report(3, "solve_mc3 == oracle", not mismatches, f"300 instances, {len(mismatches)} mismatches")
    assert not mismatches, mismatches[:3]


def test_c04_approximation_sandwich(report):
    violations = []
    rng = random.Random(4)
    for k in range(1000):
        L = rng.choice((2, 3))
        inst = random_instance(400_000 + k, rng.randint(1, 8), L)
        opt = brute_force_optimum(inst)[1]
        lb, ub = level_sum_lower_bound(inst), lcf(inst)[1]
        if not lb <= opt <= ub <= inst.max_criticality * opt:
            violations.append((inst, lb, opt, ub))
    report(4, "level-sum <= OPT <= LCF <= L*OPT", not violations, f"1000 instances, {len(violations)} violations")
    assert not violations, violations[:3]


def test_c05_restriction_lower_bounds(report):
    violations = []
    for inst in seeded_instances(300, (1, 7), 3, base=5):
        opt = brute_force_optimum(inst)[1]
        lb_minus, lb_plus = restriction_lower_bounds(inst, optimal_makespan_mc2)
        if lb_minus > opt or lb_plus > opt:
            violations.append((inst, lb_minus, lb_plus, opt))
    report(5, "lb- <= OPT and lb+ <= OPT", not violations, f"300 instances, {len(violations)} violations")
    assert not violations, violations[:3]


def test_c06_certificate_soundness(report):
    violations = []
    certified = 0
    for inst in seeded_instances(300, (1, 7), 3, base=6):
        r = bottom_up(inst)
        if r.certified:
            certified += 1
            if r.makespan != brute_force_optimum(inst)[1]:
                violations.append((inst, r))
    report(6, "certified Bottom-up is optimal", not violations,
           f"300 instances, {certified} certified, {len(violations)} violations")
    assert not violations, violations[:3]


def _mc2_orders(inst, cov, rng, shuffle_members, shuffle_blocks):
    blocks = [[h.id] + cov.covered_by(h.id) for h in inst.with_criticality(2)]
    if shuffle_blocks:
        rng.shuffle(blocks)
    order = list(cov.uncovered())
    if shuffle_members:
        rng.shuffle(order)
    for head, *members in blocks:
        if shuffle_members:
            rng.shuffle(members)
        order += [head] + members
    return order


def _mc3_orders(inst, cov, rng, shuffle_members, shuffle_blocks):
    def maybe(seq, flag):
        seq = list(seq)
        if flag:
            rng.shuffle(seq)
        return seq

    def hi_block(g, h):
        return [h] + maybe(cov.los_in(g, h), shuffle_members)

    order = maybe(cov.los_in(None, None), shuffle_members)
    for block in maybe([hi_block(None, h) for h in cov.his_in(None)], shuffle_blocks):
        order += block
    for g in maybe([t.id for t in inst.with_criticality(3)], shuffle_blocks):
        order += [g] + maybe(cov.los_in(g, None), shuffle_members)
        for block in maybe([hi_block(g, h) for h in cov.his_in(g)], shuffle_blocks):
            order += block
    return order


def test_c07_structural_invariance(report):
    rng = random.Random(7)
    bad = []
    checked = 0
    for k in range(50):
        L = 2 if k % 2 == 0 else 3
        inst = random_instance(700_000 + k, rng.randint(8, 20), L)
        if L == 2:
            cov = solve_mc2(inst).covering
            base = makespan(inst, left_shift(inst, rebuild_schedule_mc2(inst, cov)))
            orders = _mc2_orders
        else:
            cov = solve_mc3(inst).covering
            base = makespan(inst, left_shift(inst, rebuild_schedule_mc3(inst, cov)))
            orders = _mc3_orders
        for members, blocks in ((True, False), (False, True)):
            for _ in range(100):
                order = orders(inst, cov, rng, members, blocks)
                checked += 1
                if makespan(inst, left_shift(inst, order)) != base:
                    bad.append((inst, order))
    report(7, "within-block and block-order shuffles", not bad, f"{checked} shuffles, {len(bad)} changed makespan")
    assert not bad, bad[:3]


def test_c08_execution_safety(report):
    rng = random.Random(8)
    violations = []
    skipped_total = 0
    for k in range(10_000):
        inst = random_instance(800_000 + k, rng.randint(1, 12), rng.choice((1, 2, 3)))
        ids = inst.ids
        rng.shuffle(ids)
        sched = left_shift(inst, Permutation(tuple(ids)))
        scen = Scenario({t.id: rng.randint(1, t.criticality) for t in inst})
        tr = simulate(inst, sched, scen)
        top = inst.max_criticality
        skipped_total += len(tr.skipped)
        for j in tr.skipped:
            xj = inst[j].criticality
            blocked = any(scen.realized[i] > xj and s <= sched[j] < end for i, s, end in tr.executed)
            if not blocked or xj == top:
                violations.append((inst, sched, scen, j))
    report(8, "skips only under a higher prolongation", not violations,
           f"10000 triples, {skipped_total} skips, {len(violations)} violations")
    assert not violations, violations[:3]


def test_c09_throughput(report):
    mc2_solved = 0
    mc2_times = []
    for _, inst in SuiteConfig((100,), count=20, max_criticality=2).instances():
        t0 = time.monotonic()
        r = solve_mc2(inst, time_limit=TIME_LIMIT)
        mc2_times.append(time.monotonic() - t0)
        mc2_solved += r.optimal and mc2_times[-1] <= TIME_LIMIT
    bu_done = 0
    bu_times = []
    for _, inst in SuiteConfig((60,), count=20, max_criticality=3).instances():
        t0 = time.monotonic()
        bottom_up(inst)
        bu_times.append(time.monotonic() - t0)
        bu_done += bu_times[-1] <= TIME_LIMIT
    ok = mc2_solved >= 18 and bu_done >= 18
    report(9, "desk-scale throughput", ok,
           f"mc2 n=100 solved {mc2_solved}/20 (max {max(mc2_times):.2f}s); "
           f"Bottom-up n=60 done {bu_done}/20 (max {max(bu_times):.2f}s)")
    assert ok


def _bumped(inst: Instance, tid, level: int, scale: int) -> Instance | None:
    tasks = []
    for t in inst:
        proc = [p * scale for p in t.proc]
        if t.id == tid:
            proc[level - 1] += 1
        if any(b <= a for a, b in zip(proc, proc[1:])):
            return None
        tasks.append(FShape(t.id, t.criticality, tuple(proc)))
    return Instance(tuple(tasks))


def test_c10_epsilon_perturbation(report):
    rng = random.Random(10)
    bad = []
    bumps = scaled = 0
    for k in range(200):
        inst = random_instance(1_000_000 + k, rng.randint(1, 10), rng.choice((2, 3)))
        ids = inst.ids
        rng.shuffle(ids)
        perm = Permutation(tuple(ids))
        for tid, level in critical_path(inst, perm).entries:
            # A bump that would tie two levels is applied to the instance with
            # all times doubled, where the same path is critical and a +1 bump
            # keeps every vector strictly increasing.
            scale = 1
            bumped = _bumped(inst, tid, level, 1)
            if bumped is None:
                scale = 2
                bumped = _bumped(inst, tid, level, 2)
                scaled += 1
            base = scale * makespan(inst, left_shift(inst, perm))
            bumps += 1
            if makespan(bumped, left_shift(bumped, perm)) != base + 1:
                bad.append((inst, perm, tid, level))
    report(10, "critical-path entry +1 gives makespan +1", not bad,
           f"200 instances, {bumps} bumps ({scaled} on doubled times), {len(bad)} failures")
    assert not bad, bad[:3]

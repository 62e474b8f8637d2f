"""Brute-force ground truth for small instances.

``brute_force_optimum`` enumerates task orders directly and knows nothing
about covering blocks; ``brute_force_assignments_mc2`` enumerates Lo->Hi
assignments and knows nothing about orders.  Agreement of the two is the
empirical check that two-level optima are determined by an assignment alone.
"""

from __future__ import annotations

import itertools

from .core import InputError, Instance, Permutation

DEFAULT_CAP = 9


def brute_force_optimum(instance: Instance, cap: int = DEFAULT_CAP) -> tuple[Permutation, int]:
    """Lexicographically smallest permutation with minimum left-shifted makespan.

    Depth-first in lexicographic id order.  The schedule prefix is summarised
    by its per-level frontier ``F[l] = max_j s_j + p_j^(min(X_j, l))``: a new
    task of criticality ``X`` starts at ``F[X]`` and ``F[L]`` is the makespan
    so far.  Prefixes whose makespan already reaches the incumbent are cut, as
    are prefixes whose placed set was reached before with a frontier that is
    no larger in every level.
    """
    n = instance.n
    if n > cap:
        raise InputError(f"brute force refuses n={n} > cap={cap}")
    if n == 0:
        return Permutation(()), 0
    tasks = sorted(instance.tasks, key=lambda t: t.id)
    L = instance.max_criticality
    # ends[i][l] = p_i^(min(X_i, l + 1))
    ends = [[t.p(min(t.criticality, lvl)) for lvl in range(1, L + 1)] for t in tasks]
    crit = [t.criticality for t in tasks]

    best = [sum(t.top for t in tasks) + 1]
    best_order: list[list[int]] = [[]]
    seen: dict[int, list[tuple[int, ...]]] = {}
    prefix: list[int] = []

    def dominated(mask: int, front: tuple[int, ...]) -> bool:
        bucket = seen.setdefault(mask, [])
        for other in bucket:
            if all(o <= f for o, f in zip(other, front)):
                return True
        bucket[:] = [o for o in bucket if not all(f <= o_ for f, o_ in zip(front, o))]
        bucket.append(front)
        return False

    def dfs(mask: int, front: tuple[int, ...]) -> None:
        if front[-1] >= best[0]:
            return
        if len(prefix) == n:
            best[0] = front[-1]
            best_order[0] = list(prefix)
            return
        if dominated(mask, front):
            return
        for i in range(n):
            if mask >> i & 1:
                continue
            s = front[crit[i] - 1]
            new = tuple(max(f, s + e) for f, e in zip(front, ends[i]))
            prefix.append(i)
            dfs(mask | 1 << i, new)
            prefix.pop()

    dfs(0, (0,) * L)
    return Permutation(tuple(tasks[i].id for i in best_order[0])), best[0]


def brute_force_assignments_mc2(instance: Instance, max_lo: int = 12, max_hi: int = 6) -> int:
    """Minimum over every Lo->(Hi | uncovered) map of the summed block lengths."""
    if instance.max_criticality > 2:
        raise InputError("assignment oracle handles at most two criticality levels")
    his = instance.with_criticality(2)
    los = instance.with_criticality(1)
    if len(los) > max_lo or len(his) > max_hi:
        raise InputError(f"assignment oracle refuses {len(los)} Lo x {len(his)} Hi tasks")
    best = None
    for choice in itertools.product(range(len(his) + 1), repeat=len(los)):
        loads = [0] * len(his)
        uncovered = 0
        for lo, c in zip(los, choice):
            if c == len(his):
                uncovered += lo.p(1)
            else:
                loads[c] += lo.p(1)
        total = uncovered + sum(max(h.p(1) + load, h.p(2)) for h, load in zip(his, loads))
        if best is None or total < best:
            best = total
    return best if best is not None else 0

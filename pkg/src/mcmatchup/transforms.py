"""Level restrictions, least-criticality-first ordering and level-sum bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .core import FShape, InputError, Instance, Permutation, left_shift, makespan


class Direction(enum.Enum):
    MINUS = "minus"
    PLUS = "plus"


@dataclass(frozen=True)
class RestrictionKind:
    h: int
    direction: Direction

    def __post_init__(self) -> None:
        if self.h < 1:
            raise InputError("restriction level h must be >= 1")
        object.__setattr__(self, "direction", Direction(self.direction))


def restrict(instance: Instance, kind: RestrictionKind) -> Instance:
    """Keep levels ``1..h`` of every task (minus) or levels ``h..X`` of tasks with ``X >= h`` (plus)."""
    h = kind.h
    if kind.direction is Direction.MINUS:
        tasks = [FShape(t.id, min(h, t.criticality), t.proc[:h]) for t in instance]
    else:
        tasks = [FShape(t.id, t.criticality - h + 1, t.proc[h - 1:]) for t in instance if t.criticality >= h]
    return Instance(tuple(tasks))


def minus(instance: Instance, h: int) -> Instance:
    return restrict(instance, RestrictionKind(h, Direction.MINUS))


def plus(instance: Instance, h: int) -> Instance:
    return restrict(instance, RestrictionKind(h, Direction.PLUS))


def lcf(instance: Instance) -> tuple[Permutation, int]:
    """Least-criticality-first order and its left-shifted makespan.

    Each task is preceded only by tasks of lower or equal criticality, so it
    waits for their full top level: the makespan is the sum of all top levels.
    """
    order = sorted(instance.tasks, key=lambda t: (t.criticality, t.id))
    perm = Permutation(tuple(t.id for t in order))
    return perm, makespan(instance, left_shift(instance, perm))


def level_sums(instance: Instance) -> list[int]:
    """``sum p_i^(l)`` over tasks with ``X_i >= l``, for l = 1..L."""
    L = instance.max_criticality
    return [sum(t.p(lvl) for t in instance if t.criticality >= lvl) for lvl in range(1, L + 1)]


def level_sum_lower_bound(instance: Instance) -> int:
    if instance.n == 0:
        return 0
    return max(level_sums(instance))


Mc2Solver = Callable[[Instance], int]


def restriction_lower_bounds(instance: Instance, mc2_solver: Mc2Solver) -> tuple[int, int]:
    """Optimal makespans of the 2- and 2+ restrictions of a three-level instance.

    ``mc2_solver`` maps a two-level instance to its optimal makespan.  Either
    value is a valid lower bound; callers usually take the max.
    """
    if instance.max_criticality > 3:
        raise InputError("restriction bounds are defined for at most three levels")
    lb_minus = mc2_solver(minus(instance, 2))
    lb_plus = mc2_solver(plus(instance, 2))
    return lb_minus, lb_plus


def restriction_lower_bound(instance: Instance, mc2_solver: Mc2Solver) -> int:
    """The larger of the two restriction bounds."""
    return max(restriction_lower_bounds(instance, mc2_solver))

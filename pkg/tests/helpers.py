"""Shared generators for tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from mcmatchup.bench import GeneratorConfig, generate
from mcmatchup.core import FShape, Instance


def random_instance(seed: int, n: int, max_criticality: int) -> Instance:
    return generate(GeneratorConfig(n, max_criticality, seed=seed))


def seeded_instances(count: int, n_range: tuple[int, int], max_criticality: int, base: int = 0):
    """Deterministic stream of generator-default instances with n drawn from ``n_range``."""
    rng = random.Random(base)
    for k in range(count):
        n = rng.randint(*n_range)
        yield random_instance(base * 100_003 + k, n, max_criticality)


@st.composite
def fshapes(draw, task_id, max_criticality=3, max_p1=11, max_step=10):
    x = draw(st.integers(1, max_criticality))
    proc = [draw(st.integers(1, max_p1))]
    for _ in range(x - 1):
        proc.append(proc[-1] + draw(st.integers(1, max_step)))
    return FShape(task_id, x, tuple(proc))


@st.composite
def instances(draw, min_n=0, max_n=7, max_criticality=3):
    n = draw(st.integers(min_n, max_n))
    return Instance(tuple(draw(fshapes(i, max_criticality)) for i in range(n)))


@st.composite
def instances_with_permutation(draw, min_n=1, max_n=8, max_criticality=3):
    inst = draw(instances(min_n, max_n, max_criticality))
    perm = draw(st.permutations(inst.ids))
    return inst, perm

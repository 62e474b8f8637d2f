import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import instances_with_permutation
from mcmatchup.core import FShape, InputError, Instance, Schedule, left_shift, makespan
from mcmatchup.runtime import Scenario, sample_scenario, simulate

FIG = Instance((
    FShape("T1", 2, (5, 9)), FShape("T2", 1, (2,)), FShape("T3", 1, (2,)),
    FShape("T4", 3, (2, 4, 6)), FShape("T5", 2, (1, 3)),
))
FIG_STARTS = Schedule({"T1": 0, "T2": 5, "T3": 7, "T4": 9, "T5": 13})


def scenario(inst, **levels):
    base = {t.id: 1 for t in inst}
    base.update(levels)
    return Scenario(base)


class TestSimulate:
    def test_prolonged_first_task_skips_the_lo_tasks(self):
        tr = simulate(FIG, FIG_STARTS, scenario(FIG, T1=2))
        assert tr.skipped == {"T2", "T3"}
        assert [e[0] for e in tr.executed] == ["T1", "T4", "T5"]
        assert tr.executed[0] == ("T1", 0, 9)

    def test_nominal_scenario_runs_everything(self):
        tr = simulate(FIG, FIG_STARTS, Scenario.nominal(FIG))
        assert not tr.skipped
        assert tr.executed == tuple((t, FIG_STARTS[t], FIG_STARTS[t] + FIG[t].p(1)) for t in FIG_STARTS.order())

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_single_task(self, level):
        inst = Instance((FShape(0, 3, (1, 2, 4)),))
        tr = simulate(inst, Schedule({0: 0}), Scenario({0: level}))
        assert tr.executed == ((0, 0, inst[0].p(level)),) and not tr.skipped

    def test_start_equal_to_realized_end_executes(self):
        inst = Instance((FShape("H", 2, (2, 4)), FShape("L", 1, (1,))))
        tr = simulate(inst, Schedule({"H": 0, "L": 4}), Scenario({"H": 2, "L": 1}))
        assert not tr.skipped

    def test_skipped_tasks_do_not_block(self):
        # L is skipped; its would-be end at 5 must not hold back M at 4.
        inst = Instance((FShape("H", 2, (1, 3)), FShape("L", 1, (3,)), FShape("M", 1, (1,))))
        sched = Schedule({"H": 0, "L": 2, "M": 5})
        tr = simulate(inst, sched, Scenario({"H": 2, "L": 1, "M": 1}))
        assert tr.skipped == {"L"} and [e[0] for e in tr.executed] == ["H", "M"]

    def test_infeasible_schedule(self):
        with pytest.raises(InputError):
            simulate(FIG, Schedule({**FIG_STARTS.starts, "T5": 12}), Scenario.nominal(FIG))

    def test_bad_scenario(self):
        with pytest.raises(InputError):
            simulate(FIG, FIG_STARTS, scenario(FIG, T2=2))
        with pytest.raises(InputError):
            simulate(FIG, FIG_STARTS, Scenario({"T1": 1}))

    def test_trace_rows(self):
        tr = simulate(FIG, FIG_STARTS, scenario(FIG, T1=2))
        rows = list(tr.rows(FIG_STARTS))
        assert [(r.task, r.status) for r in rows] == [
            ("T1", "executed"), ("T2", "skipped"), ("T3", "skipped"), ("T4", "executed"), ("T5", "executed")]
        assert rows[1].end is None

    def test_lowering_a_level_can_skip_a_task_that_ran_before(self):
        # Lowering i's level lets k run; k's own prolongation then knocks out m,
        # which ran while i was at level 3.
        inst = Instance((FShape("i", 3, (1, 2, 5)), FShape("k", 2, (1, 10)),
                         FShape("q", 1, (2,)), FShape("m", 1, (1,))))
        sched = left_shift(inst, ["i", "k", "q", "m"])
        assert dict(sched.starts) == {"i": 0, "k": 2, "q": 3, "m": 5}
        high = simulate(inst, sched, Scenario({"i": 3, "k": 2, "q": 1, "m": 1}))
        low = simulate(inst, sched, Scenario({"i": 1, "k": 2, "q": 1, "m": 1}))
        assert "m" not in high.skipped
        assert "m" in low.skipped


class TestSampleScenario:
    def test_degenerate(self):
        probs = {t.id: [1.0] + [0.0] * (t.criticality - 1) for t in FIG}
        assert sample_scenario(FIG, probs, seed=5).realized == {t.id: 1 for t in FIG}

    def test_lo_task_always_level_one(self):
        inst = Instance((FShape(0, 1, (3,)),))
        assert {sample_scenario(inst, {0: [1.0]}, s).realized[0] for s in range(20)} == {1}

    def test_deterministic(self):
        probs = {t.id: [1 / t.criticality] * t.criticality for t in FIG}
        assert sample_scenario(FIG, probs, 9) == sample_scenario(FIG, probs, 9)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            sample_scenario(FIG, {"T1": [0.5, 0.25, 0.25]}, 0)

    def test_mass_must_sum_to_one(self):
        with pytest.raises(InputError):
            sample_scenario(FIG, {"T1": [0.5, 0.4]}, 0)

    def test_missing_tasks_realize_level_one(self):
        assert sample_scenario(FIG, {}, 0).realized == {t.id: 1 for t in FIG}


@st.composite
def triples(draw, max_n=10):
    inst, perm = draw(instances_with_permutation(min_n=1, max_n=max_n))
    realized = {t.id: draw(st.integers(1, t.criticality)) for t in inst}
    return inst, left_shift(inst, perm), Scenario(realized)


@settings(max_examples=500, deadline=None)
@given(triples())
def test_execution_invariants(case):
    inst, sched, scen = case
    tr = simulate(inst, sched, scen)
    executed = [e[0] for e in tr.executed]
    assert set(executed) | tr.skipped == set(inst.ids)
    assert not set(executed) & tr.skipped
    for (_, _, end), (_, start, _) in zip(tr.executed, tr.executed[1:]):
        assert end <= start
    top = inst.max_criticality
    for tid, s, end in tr.executed:
        assert end <= s + inst[tid].top
    assert tr.last_completion <= makespan(inst, sched)
    for j in tr.skipped:
        assert inst[j].criticality < top
        sj = sched[j]
        assert any(scen.realized[i] > inst[j].criticality and s <= sj < end for i, s, end in tr.executed)

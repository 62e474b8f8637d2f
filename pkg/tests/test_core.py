import pytest
from hypothesis import given, settings

from helpers import instances, instances_with_permutation
from mcmatchup.core import (
    FShape,
    InputError,
    Instance,
    Permutation,
    Schedule,
    check_feasibility,
    critical_path,
    left_shift,
    makespan,
    tight_links,
)

H1, L1, H2 = FShape("H1", 2, (3, 6)), FShape("L1", 1, (2,)), FShape("H2", 2, (4, 7))
EXAMPLE = Instance((H1, L1, H2))


class TestFShape:
    def test_valid(self):
        t = FShape(0, 3, (1, 2, 4))
        assert t.p(1) == 1 and t.p(3) == 4 and t.top == 4

    @pytest.mark.parametrize("crit, proc", [(2, (3,)), (1, (0,)), (2, (4, 4)), (3, (1, 5, 2)), (0, ())])
    def test_invalid(self, crit, proc):
        with pytest.raises(InputError):
            FShape(0, crit, proc)


class TestInstance:
    def test_duplicate_ids(self):
        with pytest.raises(InputError):
            Instance((FShape(1, 1, (2,)), FShape(1, 1, (3,))))

    def test_max_criticality_is_derived(self):
        assert EXAMPLE.max_criticality == 2
        assert Instance(()).max_criticality == 1

    def test_from_pairs_and_lookup(self):
        inst = Instance.from_pairs([(1, (2,)), (2, (3, 5))])
        assert inst.ids == [0, 1]
        assert inst[1].proc == (3, 5)
        with pytest.raises(InputError):
            inst[7]


def test_permutation_rejects_repeats_and_unknown_ids():
    with pytest.raises(InputError):
        Permutation(("H1", "H1", "L1"))
    with pytest.raises(InputError):
        left_shift(EXAMPLE, ["H1", "L1", "X"])
    with pytest.raises(InputError):
        left_shift(EXAMPLE, ["H1", "L1"])


class TestLeftShift:
    def test_worked_example(self):
        s = left_shift(EXAMPLE, ["H1", "L1", "H2"])
        assert dict(s.starts) == {"H1": 0, "L1": 3, "H2": 6}
        assert makespan(EXAMPLE, s) == 13

    def test_single_task(self):
        inst = Instance((FShape(0, 3, (1, 2, 4)),))
        assert left_shift(inst, [0])[0] == 0

    def test_lo_concatenation(self):
        inst = Instance.from_pairs([(1, (2,)), (1, (5,))])
        assert dict(left_shift(inst, [0, 1]).starts) == {0: 0, 1: 2}
        assert dict(left_shift(inst, [1, 0]).starts) == {1: 0, 0: 5}

    def test_depends_on_all_predecessors(self):
        # The Lo-task hides under the Great's level-2 window but the Hi after
        # it still waits for the Great's level-2 end.
        inst = Instance((FShape("G", 3, (1, 10, 12)), FShape("L", 1, (1,)), FShape("H", 2, (1, 2))))
        s = left_shift(inst, ["G", "L", "H"])
        assert s["L"] == 1 and s["H"] == 10

    @settings(max_examples=300, deadline=None)
    @given(instances_with_permutation(max_n=12))
    def test_output_is_feasible_and_tight(self, case):
        inst, perm = case
        s = left_shift(inst, perm)
        assert check_feasibility(inst, s)
        for tid in perm:
            if s[tid] > 0:
                earlier = dict(s.starts)
                earlier[tid] -= 1
                assert not check_feasibility(inst, Schedule(earlier))


class TestMakespan:
    def test_empty(self):
        inst = Instance(())
        assert makespan(inst, left_shift(inst, [])) == 0

    def test_single(self):
        inst = Instance((FShape(0, 2, (5, 9)),))
        assert makespan(inst, Schedule({0: 0})) == 9

    def test_missing_task(self):
        with pytest.raises(InputError):
            makespan(EXAMPLE, Schedule({"H1": 0}))


class TestFeasibility:
    def test_same_start_overlaps_at_level_2(self):
        inst = Instance((FShape(0, 2, (3, 6)), FShape(1, 2, (4, 7))))
        rep = check_feasibility(inst, Schedule({0: 0, 1: 0}))
        assert not rep and rep.violation.level == 2

    def test_lo_under_hi(self):
        inst = Instance((FShape(0, 2, (3, 6)), FShape(1, 1, (2,))))
        assert check_feasibility(inst, Schedule({0: 0, 1: 3}))

    def test_figure_layout(self):
        # A Hi-task after a Great-task may start at the Great's level-2 end.
        inst = Instance((FShape(4, 3, (2, 4, 6)), FShape(5, 2, (1, 3))))
        assert check_feasibility(inst, Schedule({4: 0, 5: 4}))
        assert not check_feasibility(inst, Schedule({4: 0, 5: 3}))


class TestCriticalPath:
    def test_worked_example(self):
        cp = critical_path(EXAMPLE, ["H1", "L1", "H2"])
        assert cp.entries == (("H1", 2), ("H2", 2))
        assert cp.length(EXAMPLE) == 13

    def test_single(self):
        inst = Instance((FShape(0, 2, (5, 9)),))
        assert critical_path(inst, [0]).entries == ((0, 2),)

    def test_lo_chain(self):
        inst = Instance.from_pairs([(1, (2,)), (1, (3,)), (1, (4,))])
        cp = critical_path(inst, [2, 0, 1])
        assert [lvl for _, lvl in cp.entries] == [1, 1, 1] and cp.length(inst) == 9

    @settings(max_examples=300, deadline=None)
    @given(instances_with_permutation(max_n=12))
    def test_chains_and_sums(self, case):
        inst, perm = case
        s = left_shift(inst, perm)
        cp = critical_path(inst, perm)
        assert cp.length(inst) == makespan(inst, s)
        assert s[cp.entries[0][0]] == 0
        for (a, la), (b, _) in zip(cp.entries, cp.entries[1:]):
            assert s[a] + inst[a].p(la) == s[b]
        last, lvl = cp.entries[-1]
        assert lvl == inst[last].criticality


@settings(max_examples=200, deadline=None)
@given(instances_with_permutation(max_n=10))
def test_tight_links_are_tight(case):
    inst, perm = case
    s = left_shift(inst, perm)
    for k, links in tight_links(inst, s).items():
        for j, lvl in links:
            assert lvl == min(inst[j].criticality, inst[k].criticality)
            assert s[j] + inst[j].p(lvl) == s[k]


@settings(max_examples=100, deadline=None)
@given(instances(max_n=9))
def test_schedule_order_is_by_start_then_id(inst):
    s = left_shift(inst, inst.ids)
    order = s.order()
    assert order == sorted(inst.ids, key=lambda t: (s[t], t))

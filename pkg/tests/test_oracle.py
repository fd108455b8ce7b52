from fractions import Fraction

import pytest

from conftest import random_plts, seeded
from pbisim.core import bisim_finite, sim_n
from pbisim.errors import ResourceGuardError
from pbisim.gadgets import afa_to_poca, example_afa
from pbisim.machines import Config
from pbisim.oracle import (
    BoundedChecker,
    ExplicitSystem,
    PpdaSystem,
    UnionSystem,
    bounded_equiv,
    full_equiv_finite,
    materialize,
)
from pbisim.reduction import lift_plts


def test_bounded_equiv_fourstate(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = fourstate.state_id("s"), fourstate.state_id("u")
    assert bounded_equiv(system, s, u, 1)
    assert not bounded_equiv(system, s, u, 2)


def test_bounded_equiv_reflexive(fourstate):
    system = ExplicitSystem(fourstate)
    for n in range(5):
        assert bounded_equiv(system, fourstate.state_id("t1"), fourstate.state_id("t1"), n)


def test_bounded_equiv_mixed_bisimilar_pair(mixed):
    system = PpdaSystem(mixed)
    a, b = Config("p", ("X", "Z")), Config("r", ("X",))
    for n in range(7):
        assert bounded_equiv(system, a, b, n)


def test_bounded_matches_partition_refinement():
    for seed in range(25):
        plts = random_plts(seeded(300 + seed), max_states=6)
        system = ExplicitSystem(plts)
        checker = BoundedChecker(system)
        for n in range(5):
            partition = sim_n(plts, n)
            for s in range(plts.num_states):
                for t in range(s, plts.num_states):
                    assert checker.equiv(s, t, n) == partition.same_block(s, t)


def test_bounded_agrees_with_lifted_triple_level():
    # the core correspondence, spot-checked through the recursive oracle
    for seed in range(10):
        plts = random_plts(seeded(400 + seed), max_states=5)
        lifted = lift_plts(plts)
        sys_l = ExplicitSystem(plts)
        sys_lp = ExplicitSystem(lifted.plts)
        ch_l = BoundedChecker(sys_l)
        ch_lp = BoundedChecker(sys_lp)
        for n in range(4):
            for s in range(plts.num_states):
                for t in range(s, plts.num_states):
                    assert ch_l.equiv(s, t, n) == ch_lp.equiv(
                        lifted.orig_id[s], lifted.orig_id[t], 3 * n
                    )


def test_full_equiv_fourstate(fourstate):
    system = ExplicitSystem(fourstate)
    assert full_equiv_finite(system, fourstate.state_id("t1"), fourstate.state_id("t2"))
    assert full_equiv_finite(system, fourstate.state_id("s"), fourstate.state_id("s"))
    assert not full_equiv_finite(system, fourstate.state_id("s"), fourstate.state_id("u"))


def test_full_equiv_afa_reduction_top_pair():
    machine, _ = afa_to_poca(example_afa())
    system = PpdaSystem(machine)
    left = Config("q0", ("I", "Z"))
    right = Config("q0_prime", ("I", "Z"))
    assert full_equiv_finite(system, left, right)


def test_full_equiv_budget_error(mixed):
    system = PpdaSystem(mixed)
    with pytest.raises(ResourceGuardError):
        full_equiv_finite(system, Config("p", ("X", "Z")), Config("r", ("X",)), budget=30)


def test_full_equiv_implies_every_bounded_level(fourstate):
    system = ExplicitSystem(fourstate)
    t1, t2 = fourstate.state_id("t1"), fourstate.state_id("t2")
    assert full_equiv_finite(system, t1, t2)
    checker = BoundedChecker(system)
    for n in range(6):
        assert checker.equiv(t1, t2, n)


def test_union_system_tags_states(fourstate):
    union = UnionSystem(ExplicitSystem(fourstate), ExplicitSystem(fourstate))
    s = fourstate.state_id("s")
    checker = BoundedChecker(union)
    # the same state in both copies is equivalent at every level
    for n in range(4):
        assert checker.equiv((0, s), (1, s), n)
    assert union.state_name((1, s)) == "1:s"


def test_materialize_closure_is_transition_closed():
    machine, _ = afa_to_poca(example_afa())
    system = PpdaSystem(machine)
    root = Config("q0", ("I", "I", "Z"))
    plts, ids = materialize(system, [root], budget=500)
    assert root in ids
    # every reachable target is indexed, i.e. the closure is transition-closed
    for _, _, dist in plts.transitions:
        for t, _ in dist.entries:
            assert 0 <= t < plts.num_states

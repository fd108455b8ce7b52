from fractions import Fraction

import pytest

from conftest import random_plts, seeded
from pbisim.core import (
    Dist,
    Partition,
    bisim_finite,
    dist_equiv,
    make_plts,
    refine_step,
    sim_n,
)
from pbisim.errors import InvalidInputError

F = Fraction


def blocks_by_name(plts, partition):
    return [tuple(plts.state_names[i] for i in block) for block in partition.blocks]


def test_dist_requires_exact_unit_sum():
    with pytest.raises(InvalidInputError):
        Dist({0: F(9, 10)})
    with pytest.raises(InvalidInputError):
        Dist({0: F(1, 2), 1: F(1, 3)})
    with pytest.raises(InvalidInputError):
        Dist({0: F(1, 2), 1: F(0)})
    Dist({0: F(1, 2), 1: F(1, 2)})


def test_dist_equiv_identity():
    d = Dist({0: 1})
    p = Partition([[0], [1]])
    assert dist_equiv(d, d, p)


def test_dist_equiv_fourstate_distinguishing_move(fourstate):
    # under the bisimilarity classes the two b-distributions of s and u differ
    s = {n: i for i, n in enumerate(fourstate.state_names)}
    d1 = Dist({s["u"]: F(1, 2), s["t1"]: F(1, 2)})
    d2 = Dist({s["t1"]: F(1, 3), s["t2"]: F(2, 3)})
    classes = Partition([[s["s"]], [s["t1"], s["t2"]], [s["u"]]])
    assert not dist_equiv(d1, d2, classes)


def test_dist_equiv_single_block_always_matches():
    d1 = Dist({0: F(1, 3), 1: F(2, 3)})
    d2 = Dist({0: F(2, 3), 1: F(1, 3)})
    assert dist_equiv(d1, d2, Partition([[0, 1]]))


def test_dist_equiv_unindexed_state_errors():
    d = Dist({5: 1})
    with pytest.raises(InvalidInputError):
        dist_equiv(d, d, Partition([[0]]))


def test_refine_step_fourstate_rounds(fourstate):
    p0 = Partition.trivial(fourstate.num_states)
    p1 = refine_step(fourstate, p0)
    assert blocks_by_name(fourstate, p1) == [("s", "u"), ("t1", "t2")]
    p2 = refine_step(fourstate, p1)
    assert blocks_by_name(fourstate, p2) == [("s",), ("t1", "t2"), ("u",)]


def test_refine_step_no_transitions_is_identity():
    plts = make_plts(["a", "b", "c"], ["x"], [])
    p = Partition.trivial(3)
    assert refine_step(plts, p) == p


def test_refine_step_refines_input_partition():
    # two deadlocked states in different blocks must stay apart
    plts = make_plts(["a", "b"], ["x"], [])
    p = Partition([[0], [1]])
    assert refine_step(plts, p) == p


def test_bisim_finite_fourstate_golden(fourstate):
    assert blocks_by_name(fourstate, bisim_finite(fourstate)) == [("s",), ("t1", "t2"), ("u",)]


def test_bisim_finite_self_loop_single_block():
    plts = make_plts(["x"], ["a"], [("x", "a", {"x": 1})])
    assert bisim_finite(plts).blocks == ((0,),)


def test_bisim_finite_equals_iterated_refinement():
    for seed in range(12):
        rng = seeded(seed)
        plts = random_plts(rng, max_states=6)
        p = Partition.trivial(plts.num_states)
        for _ in range(plts.num_states):
            p = refine_step(plts, p)
        assert bisim_finite(plts) == p


def test_sim_zero_is_single_block(fourstate):
    assert len(sim_n(fourstate, 0)) == 1


def test_sim_n_fourstate_levels(fourstate):
    s, u = fourstate.state_id("s"), fourstate.state_id("u")
    assert sim_n(fourstate, 1).same_block(s, u)
    assert not sim_n(fourstate, 2).same_block(s, u)


def test_sim_chain_refines_and_stabilizes():
    for seed in range(15):
        rng = seeded(100 + seed)
        plts = random_plts(rng)
        k = plts.num_states
        prev = sim_n(plts, 0)
        for n in range(1, k + 1):
            cur = sim_n(plts, n)
            assert cur.refines(prev)
            prev = cur
        assert sim_n(plts, k - 1) == sim_n(plts, k) == bisim_finite(plts)


def test_bisim_transfer_property():
    for seed in range(10):
        rng = seeded(200 + seed)
        plts = random_plts(rng)
        partition = bisim_finite(plts)
        for block in partition.blocks:
            for s in block:
                for t in block:
                    for action, dist in plts.transitions_of(s):
                        assert any(
                            a == action and dist_equiv(dist, d2, partition)
                            for a, d2 in plts.transitions_of(t)
                        )


def test_identical_inputs_identical_block_order(fourstate):
    a = bisim_finite(fourstate)
    b = bisim_finite(fourstate)
    assert a.blocks == b.blocks
    # canonical order: blocks sorted by smallest member
    firsts = [block[0] for block in a.blocks]
    assert firsts == sorted(firsts)

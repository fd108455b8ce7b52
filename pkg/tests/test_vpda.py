from fractions import Fraction

import pytest

from conftest import random_vpda, seeded
from pbisim.core import Dist
from pbisim.errors import InvalidInputError, ResourceGuardError
from pbisim.machines import Config, Ppda
from pbisim.oracle import BoundedChecker, PpdaSystem, full_equiv_finite
from pbisim.vpda import ForceTable, force_a, force_long, vpda_decide

F = Fraction


def heads(*pairs):
    return frozenset(pairs)


def test_force_a_call_outcome(visibly):
    hp = (("p", "X"), ("p'", "X"))
    assert force_a(visibly, hp, "c", {(("p", ("X", "X")), ("p'", ("X", "X")))})


def test_force_a_return_outcomes(visibly):
    hp = (("p", "X"), ("p'", "X"))
    assert force_a(visibly, hp, "r", {(("q", ()), ("q'", ()))})
    assert force_a(visibly, (("q", "X"), ("q'", "X")), "r", frozenset())


def test_force_a_mirror_is_false(visibly):
    # identical heads with an enabled action cannot be forced into nothing
    assert not force_a(visibly, (("p", "X"), ("p", "X")), "c", frozenset())
    assert not force_a(visibly, (("p", "X"), ("p", "X")), "r", frozenset())


def test_force_a_rejects_mistyped_outcomes(visibly):
    hp = (("p", "X"), ("p'", "X"))
    with pytest.raises(InvalidInputError):
        force_a(visibly, hp, "c", {(("q", ()), ("q'", ()))})
    with pytest.raises(InvalidInputError):
        force_a(visibly, hp, "r", {(("p", ("X", "X")), ("p'", ("X", "X")))})


def test_force_a_requires_vpda(mixed):
    with pytest.raises(InvalidInputError):
        force_a(mixed, (("p", "X"), ("q", "X")), "a", frozenset())


def test_force_long_example_facts(visibly):
    hp = (("p", "X"), ("p'", "X"))
    assert force_long(visibly, hp, {("q", "q'")})
    assert force_long(visibly, (("q", "X"), ("q'", "X")), frozenset())
    assert force_long(visibly, hp, frozenset())


def test_force_long_monotone_in_target(visibly):
    hp = (("p", "X"), ("p'", "X"))
    assert force_long(visibly, hp, {("q", "q'")})
    assert force_long(visibly, hp, {("q", "q'"), ("p", "p")})


def test_force_table_reusable_and_consistent(visibly):
    table = ForceTable(visibly)
    first = [table.holds((("p", "X"), ("p'", "X")), frozenset())]
    first.append(table.holds((("p", "X"), ("p'", "X")), frozenset({("q", "q'")})))
    # a fresh table queried in the opposite order gives the same answers
    other = ForceTable(visibly)
    second = [other.holds((("p", "X"), ("p'", "X")), frozenset({("q", "q'")}))]
    second.insert(0, other.holds((("p", "X"), ("p'", "X")), frozenset()))
    assert first == second == [True, True]


def test_vpda_decide_example(visibly):
    assert not vpda_decide(visibly, Config("p", ("X",)), Config("p'", ("X",)))
    assert vpda_decide(visibly, Config("p", ("X",)), Config("p", ("X",)))
    assert vpda_decide(visibly, Config("p", ()), Config("p", ()))


def test_vpda_decide_unequal_lengths(visibly):
    # qX pops to q forever; against the empty stack the shorter side is dead
    assert not vpda_decide(visibly, Config("q", ()), Config("q", ("X",)))
    assert vpda_decide(visibly, Config("q'", ()), Config("q'", ("X",)))


def test_control_guard():
    m = Ppda(
        tuple(f"p{i}" for i in range(7)),
        ("X",),
        ("i",),
        tuple((f"p{i}", "X", "i", Dist({(f"p{i}", ("X",)): 1})) for i in range(7)),
        vpda_partition={"r": (), "i": ("i",), "c": ()},
    )
    with pytest.raises(ResourceGuardError):
        vpda_decide(m, Config("p0", ("X",)), Config("p1", ("X",)))
    assert vpda_decide(m, Config("p0", ("X",)), Config("p1", ("X",)), max_controls=10)


@pytest.mark.parametrize("seed", range(25))
def test_decide_matches_oracle_on_random_instances(seed):
    rng = seeded(1000 + seed)
    machine = random_vpda(rng, num_controls=rng.choice([2, 3]), num_symbols=2)
    system = PpdaSystem(machine)
    controls = machine.controls
    symbols = machine.stack_alphabet
    configs = [Config(controls[0], (symbols[-1],)), Config(controls[-1], (symbols[-1],))]
    if len(symbols) > 1:
        configs.append(Config(controls[0], (symbols[-1], symbols[0])))
        configs.append(Config(controls[-1], (symbols[-1], symbols[0])))
    for i, c1 in enumerate(configs):
        for c2 in configs[i:]:
            expected = full_equiv_finite(system, c1, c2, budget=60000)
            got = vpda_decide(machine, c1, c2)
            assert got == expected, (seed, c1, c2)
            if not got:
                # a sound NO must come with a separating approximant level
                checker = BoundedChecker(system)
                assert any(not checker.equiv(c1, c2, n) for n in range(1, 14)), (seed, c1, c2)


@pytest.mark.parametrize("seed", range(8))
def test_prune_differential(seed):
    rng = seeded(2000 + seed)
    machine = random_vpda(rng, num_controls=2, num_symbols=2)
    controls = machine.controls
    symbols = machine.stack_alphabet
    for c1_ctl in controls:
        for c2_ctl in controls:
            c1 = Config(c1_ctl, (symbols[-1],))
            c2 = Config(c2_ctl, (symbols[-1],))
            assert vpda_decide(machine, c1, c2, prune_pop_results=True) == vpda_decide(
                machine, c1, c2, prune_pop_results=False
            )

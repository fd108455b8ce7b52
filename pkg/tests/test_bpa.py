from fractions import Fraction

import pytest

from conftest import random_bpa, seeded
from pbisim.bpa import congruence_check, norm_witness, norms
from pbisim.core import Dist
from pbisim.errors import InvalidInputError
from pbisim.machines import Config, Ppda

F = Fraction


def test_norms_example(single_control):
    table = norms(single_control)
    assert table.macrostep == {"X": 1, "X'": 1, "Y": 3}
    assert table.lifted("Y") == 9


def test_norms_reject_multi_control(mixed):
    with pytest.raises(InvalidInputError):
        norms(mixed)


def test_norm_unnormed_growing_symbol():
    m = Ppda(("r",), ("X",), ("a",), (("r", "X", "a", Dist({("r", ("X", "X")): 1})),))
    assert norms(m).macrostep == {"X": None}
    assert norm_witness(m, "X") is None


def test_norm_immediate_pop():
    m = Ppda(("r",), ("X",), ("a",), (("r", "X", "a", Dist({("r", ()): 1})),))
    assert norms(m).macrostep == {"X": 1}


def test_norm_fixpoint_resubstitution():
    for seed in range(20):
        machine = random_bpa(seeded(4000 + seed))
        table = norms(machine).macrostep
        for x in machine.stack_alphabet:
            candidates = []
            for _q, head, _a, dist in machine.rules:
                if head != x:
                    continue
                for (_p, alpha), _prob in dist.entries:
                    if all(table[s] is not None for s in alpha):
                        candidates.append(1 + sum(table[s] for s in alpha))
            if table[x] is None:
                assert not candidates, (seed, x)
            else:
                assert table[x] == min(candidates), (seed, x)


def test_norm_witness_replays(single_control):
    table = norms(single_control)
    for symbol in single_control.stack_alphabet:
        path = norm_witness(single_control, symbol)
        assert len(path) == table.macrostep[symbol]
        assert path[0][0] == (symbol,)
        assert path[-1][1] == ()
        rule_words = {
            (head, alpha)
            for _q, head, _a, dist in single_control.rules
            for (_p, alpha), _ in dist.entries
        }
        for before, after in path:
            top, rest = before[0], before[1:]
            assert after[len(after) - len(rest):] == rest or rest == ()
            assert (top, after[: len(after) - len(rest)]) in rule_words


def test_congruence_trivial_instance(single_control):
    report = congruence_check(single_control, ("X",), ("X",), ("Y",), ("Y",), 3)
    assert report.checked and report.implication_holds


def test_congruence_example_pair(single_control):
    # X and X' stay equivalent at every tested level, and so do Xb vs X'b
    for beta in ((), ("Y",), ("X", "X'"), ("Y", "Y")):
        for n in range(4):
            report = congruence_check(single_control, ("X",), ("X'",), beta, beta, n)
            assert report.checked
            assert report.left_equiv
            assert report.implication_holds, (beta, n)


def test_congruence_proviso_violation_skips():
    m = Ppda(
        ("r",),
        ("X", "D"),
        ("a",),
        (("r", "X", "a", Dist({("r", ()): 1})),),
    )
    report = congruence_check(m, ("X",), ("X",), ("D",), ("D",), 2)
    assert not report.checked
    assert "D" in report.reason


def test_congruence_randomized_instances():
    trials = 0
    for seed in range(40):
        rng = seeded(4100 + seed)
        machine = random_bpa(rng)
        symbols = machine.stack_alphabet
        words = [(), (symbols[0],), (symbols[-1],), (symbols[0], symbols[-1])]
        for _ in range(5):
            alpha, alpha2, beta, beta2 = (rng.choice(words) for _ in range(4))
            n = rng.randint(0, 3)
            report = congruence_check(machine, alpha, alpha2, beta, beta2, n)
            assert report.checked
            assert report.implication_holds, (seed, alpha, alpha2, beta, beta2, n)
            trials += 1
    assert trials == 200

from fractions import Fraction

import pytest

from conftest import random_plts, seeded
from pbisim.core import Dist, dist_equiv, sim_n
from pbisim.game import (
    ATTACKER,
    DEFENDER,
    DefPick,
    DefSubset,
    DefTrans,
    DistPair,
    GameSolver,
    PairPos,
    SetPair,
    apply_move,
    attacker_wins_within,
    legal_moves,
    owner,
    pick_move,
    subset_move,
    transition_move,
)
from pbisim.oracle import ExplicitSystem
from pbisim.reduction import lift_plts
from pbisim.session import Session

F = Fraction


def ids(plts, *names):
    return tuple(plts.state_id(n) for n in names)


def test_legal_moves_fourstate_openings(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = ids(fourstate, "s", "u")
    moves = legal_moves(system, PairPos(s, u))
    assert len(moves) == 4  # two transitions each side
    t1, t2 = ids(fourstate, "t1", "t2")
    d_su = Dist({t1: F(1, 2), u: F(1, 2)})
    d_a = Dist({t1: F(1, 3), t2: F(2, 3)})
    assert transition_move(ATTACKER, 1, "b", d_su) in moves
    assert transition_move(ATTACKER, 2, "b", d_a) in moves


def test_legal_moves_dist_pair_subset(fourstate):
    system = ExplicitSystem(fourstate)
    t1, t2, u = ids(fourstate, "t1", "t2", "u")
    d1 = Dist({u: F(1, 2), t1: F(1, 2)})
    d2 = Dist({t1: F(1, 3), t2: F(2, 3)})
    moves = legal_moves(system, DistPair(d1, d2))
    assert subset_move(ATTACKER, 2, {t2}) in moves
    # nonempty subsets of both supports: 3 + 3
    assert len(moves) == 6


def test_defender_subset_reply_is_forced(fourstate):
    system = ExplicitSystem(fourstate)
    t1, t2, u = ids(fourstate, "t1", "t2", "u")
    d1 = Dist({u: F(1, 2), t1: F(1, 2)})
    pos = DefSubset(chosen_side=2, subset=frozenset({t2}), other_d=d1, rho=F(2, 3))
    moves = legal_moves(system, pos)
    assert moves == [subset_move(DEFENDER, 1, {u, t1})]


def test_example_play_sequence_ends_in_attacker_win(fourstate):
    system = ExplicitSystem(fourstate)
    s, u, t1, t2 = ids(fourstate, "s", "u", "t1", "t2")
    d1 = Dist({u: F(1, 2), t1: F(1, 2)})
    d2 = Dist({t1: F(1, 3), t2: F(2, 3)})
    pos = PairPos(s, u)
    script = [
        transition_move(ATTACKER, 1, "b", d1),
        transition_move(DEFENDER, 2, "b", d2),
        subset_move(ATTACKER, 2, {t2}),
        subset_move(DEFENDER, 1, {u, t1}),
        pick_move(ATTACKER, 1, u),
        pick_move(DEFENDER, 2, t2),
        transition_move(ATTACKER, 1, "b", d2),
    ]
    for move in script:
        assert move in legal_moves(system, pos), move
        pos = apply_move(pos, move)
    # Defender must now answer action b from t2, which has none: Attacker won
    assert owner(pos) == DEFENDER
    assert legal_moves(system, pos) == []


def test_attacker_wins_within_fourstate(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = ids(fourstate, "s", "u")
    win1, _ = attacker_wins_within(system, s, u, 1)
    win2, strategy = attacker_wins_within(system, s, u, 2)
    assert not win1 and win2
    assert strategy.side == ATTACKER


def test_attacker_never_wins_identical_states(fourstate):
    system = ExplicitSystem(fourstate)
    s = fourstate.state_id("s")
    for n in range(4):
        win, strategy = attacker_wins_within(system, s, s, n)
        assert not win
        assert strategy.side == DEFENDER


def test_dead_pair_is_defender_win():
    from pbisim.core import make_plts

    plts = make_plts(["x", "y"], ["a"], [])
    system = ExplicitSystem(plts)
    assert legal_moves(system, PairPos(0, 1)) == []
    win, _ = attacker_wins_within(system, 0, 1, 5)
    assert not win


def test_one_sided_dead_pair_is_attacker_win():
    from pbisim.core import make_plts

    plts = make_plts(["x", "y"], ["a"], [("x", "a", {"x": 1})])
    system = ExplicitSystem(plts)
    win, _ = attacker_wins_within(system, 0, 1, 1)
    assert win


def test_game_matches_approximants_on_random_systems():
    for seed in range(14):
        size = 8 if seed < 4 else 5
        plts = random_plts(seeded(500 + seed), max_states=size, max_actions=2)
        system = ExplicitSystem(plts)
        solver = GameSolver(system)
        for n in range(5):
            partition = sim_n(plts, n)
            for s in range(plts.num_states):
                for t in range(s, plts.num_states):
                    assert solver.wins(PairPos(s, t), n) == (not partition.same_block(s, t)), (
                        seed, n, s, t,
                    )


def test_monotone_in_horizon():
    for seed in range(8):
        plts = random_plts(seeded(600 + seed), max_states=5, max_actions=2)
        system = ExplicitSystem(plts)
        solver = GameSolver(system)
        for s in range(plts.num_states):
            for t in range(plts.num_states):
                for n in range(3):
                    if solver.wins(PairPos(s, t), n):
                        assert solver.wins(PairPos(s, t), n + 1)


# -- independent standard-game solver on the lifted system ---------------------


def std_attacker_wins(plts, u, v, k, memo=None):
    """Plain bisimulation-game solver for a standard (all-Dirac) system."""
    if memo is None:
        memo = {}
    if k <= 0:
        return False
    key = (u, v, k)
    if key in memo:
        return memo[key]
    memo[key] = False
    edges_u = [(a, d.support[0]) for a, d in plts.transitions_of(u)]
    edges_v = [(a, d.support[0]) for a, d in plts.transitions_of(v)]
    result = False
    for own, other, flip in ((edges_u, edges_v, False), (edges_v, edges_u, True)):
        for action, target in own:
            replies = [t2 for a2, t2 in other if a2 == action]
            if not replies:
                result = True
                break
            if all(
                std_attacker_wins(plts, target if not flip else r, r if not flip else target, k - 1, memo)
                for r in replies
            ):
                result = True
                break
        if result:
            break
    memo[key] = result
    return result


def test_game_agrees_with_standard_game_on_lift():
    for seed in range(6):
        plts = random_plts(seeded(800 + seed), max_states=4, max_actions=2, trans_prob=0.6)
        lifted = lift_plts(plts)
        system = ExplicitSystem(plts)
        solver = GameSolver(system)
        memo = {}
        for n in range(3):
            for s in range(plts.num_states):
                for t in range(s, plts.num_states):
                    probabilistic = solver.wins(PairPos(s, t), n)
                    standard = std_attacker_wins(
                        lifted.plts, lifted.orig_id[s], lifted.orig_id[t], 3 * n, memo
                    )
                    assert probabilistic == standard, (seed, n, s, t)


# -- strategies -----------------------------------------------------------------


def walk_all_defender_replies(system, strategy, pos, rounds):
    """Follow an attacker strategy against every defender reply; every play
    must end in a stuck Defender within the horizon."""
    if owner(pos) == ATTACKER:
        move = strategy.move_at(pos, rounds)
        assert move is not None, (pos, rounds)
        nxt = rounds - 1 if isinstance(pos, DefPick) else rounds
        walk_all_defender_replies(system, strategy, apply_move(pos, move), nxt)
        return
    moves = legal_moves(system, pos)
    if not moves:
        return  # Defender stuck: Attacker has won this branch
    assert rounds > 0
    for move in moves:
        nxt = rounds - 1 if isinstance(pos, DefPick) else rounds
        walk_all_defender_replies(system, strategy, apply_move(pos, move), nxt)


def test_attacker_strategy_sound(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = ids(fourstate, "s", "u")
    win, strategy = attacker_wins_within(system, s, u, 2)
    assert win
    walk_all_defender_replies(system, strategy, PairPos(s, u), 2)


def test_attacker_strategies_sound_on_randoms():
    for seed in range(10):
        plts = random_plts(seeded(900 + seed), max_states=5, max_actions=2)
        system = ExplicitSystem(plts)
        for n in (1, 2):
            partition = sim_n(plts, n)
            for s in range(plts.num_states):
                for t in range(s, plts.num_states):
                    if partition.same_block(s, t):
                        continue
                    win, strategy = attacker_wins_within(system, s, t, n)
                    assert win
                    walk_all_defender_replies(system, strategy, PairPos(s, t), n)


def test_defender_strategy_survives(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = ids(fourstate, "s", "u")
    win, strategy = attacker_wins_within(system, s, u, 1)
    assert not win and strategy.side == DEFENDER

    def walk(pos, rounds, depth=0):
        if isinstance(pos, PairPos) and rounds <= 0:
            return
        moves = legal_moves(system, pos)
        if owner(pos) == DEFENDER:
            move = strategy.move_at(pos, rounds)
            assert move is not None and moves, "defender must always have a reply"
            walk(apply_move(pos, move), rounds - 1 if isinstance(pos, DefPick) else rounds)
            return
        if not moves:
            return  # dead pair: Defender wins outright
        for move in moves:
            walk(apply_move(pos, move), rounds)

    walk(PairPos(s, u), 1)


# -- engine ----------------------------------------------------------------------


def brute_force_winning_openings(plts, s, t):
    """Openings after which every Defender reply leaves the distributions
    distinguishable under the one-round approximant (independent of the
    game-module solver)."""
    p1 = sim_n(plts, 1)
    winning = []
    for side, state, other in ((1, s, t), (2, t, s)):
        for action, dist in plts.transitions_of(state):
            replies = [d2 for a2, d2 in plts.transitions_of(other) if a2 == action]
            if not replies or all(not dist_equiv(dist, d2, p1) for d2 in replies):
                winning.append((side, action, dist))
    return winning


def test_engine_opening_golden(fourstate):
    system = ExplicitSystem(fourstate)
    s, u, t1 = ids(fourstate, "s", "u", "t1")
    session = Session(
        model_name="fourstate",
        system=system,
        s1=s,
        s2=u,
        human_side=DEFENDER,
        horizon=2,
        name_of=lambda i: fourstate.state_names[i],
    )
    opening = session.history[0]["move"]
    assert opening["actor"] == ATTACKER
    assert opening["side"] == 1 and opening["action"] == "b"
    assert opening["dist"] == [
        {"state": "t1", "prob": {"num": 1, "den": 2}},
        {"state": "u", "prob": {"num": 1, "den": 2}},
    ]
    # cross-check with the independent opening enumeration: the engine's pick
    # is the least winning opening
    winning = brute_force_winning_openings(fourstate, s, u)
    assert (1, "b", Dist({t1: F(1, 2), u: F(1, 2)})) in winning
    assert all(side != 1 or action == "b" for side, action, _ in winning)


def test_engine_survives_against_attacker_on_equal_pair(fourstate):
    system = ExplicitSystem(fourstate)
    s = fourstate.state_id("s")
    session = Session(
        model_name="fourstate",
        system=system,
        s1=s,
        s2=s,
        human_side=ATTACKER,
        horizon=3,
        name_of=lambda i: fourstate.state_names[i],
    )
    # drive the human side greedily through any legal move; engine must survive
    while session.status == "active":
        session.play(session.describe()["legal_moves"][0])
    assert session.status == "defender_survived"


def test_scripted_replay_session_reaches_attacker_win(fourstate):
    system = ExplicitSystem(fourstate)
    s, u = ids(fourstate, "s", "u")
    session = Session(
        model_name="fourstate",
        system=system,
        s1=s,
        s2=u,
        human_side=DEFENDER,
        horizon=2,
        name_of=lambda i: fourstate.state_names[i],
    )
    while session.status == "active":
        moves = session.describe()["legal_moves"]
        session.play(moves[0])
    assert session.status == "attacker_won"
    assert session.rounds_used <= 2

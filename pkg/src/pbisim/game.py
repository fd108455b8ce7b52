"""The three-stage probabilistic bisimulation game.

One protocol round from a pair (s1, s2):
  1. Attacker picks a transition on one side; Defender matches the action on
     the other side (stuck Defender loses the play, a pair with no
     transitions at all is a Defender win).
  2. Attacker picks a nonempty subset T of one chosen distribution's
     support; Defender picks a subset of the other support carrying at
     least the same mass.
  3. Attacker picks an element of one subset; Defender picks an element of
     the other; the two elements form the next pair.

Positions carry which stage is in progress; Attacker owns PairPos, DistPair
and SetPair, Defender owns the Def* positions.  The bounded solver performs
backward induction over rounds and doubles as the engine for interactive
sessions.
"""

from dataclasses import dataclass
from fractions import Fraction

from .core import Dist

ATTACKER = "attacker"
DEFENDER = "defender"


@dataclass(frozen=True)
class PairPos:
    s1: object
    s2: object


@dataclass(frozen=True)
class DefTrans:
    attacked_side: int
    action: str
    d_chosen: object
    other: object


@dataclass(frozen=True)
class DistPair:
    d1: object
    d2: object


@dataclass(frozen=True)
class DefSubset:
    chosen_side: int
    subset: frozenset
    other_d: object
    rho: Fraction


@dataclass(frozen=True)
class SetPair:
    t1: frozenset
    t2: frozenset


@dataclass(frozen=True)
class DefPick:
    chosen_side: int
    state: object
    other_set: frozenset


@dataclass(frozen=True, order=True)
class Move:
    actor: str
    kind: str
    side: int
    payload: tuple
    """payload: ("transition", action, dist-entries) / ("subset", members) / ("pick", state)."""


def _sorted_set(states):
    return tuple(sorted(states, key=repr))


def transition_move(actor, side, action, dist):
    return Move(actor, "transition", side, (action, dist.entries))


def subset_move(actor, side, members):
    return Move(actor, "subset", side, (_sorted_set(members),))


def pick_move(actor, side, state):
    return Move(actor, "pick", side, (state,))


def _nonempty_subsets(support):
    items = list(support)
    out = []
    for mask in range(1, 1 << len(items)):
        out.append(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
    return out


def owner(pos):
    return ATTACKER if isinstance(pos, (PairPos, DistPair, SetPair)) else DEFENDER


def legal_moves(system, pos):
    """All legal moves at a position; [] marks a terminal position."""
    if isinstance(pos, PairPos):
        moves = []
        for side, state in ((1, pos.s1), (2, pos.s2)):
            for action, dist in system.transitions_of(state):
                moves.append(transition_move(ATTACKER, side, action, dist))
        return sorted(moves)
    if isinstance(pos, DefTrans):
        side = 3 - pos.attacked_side
        moves = []
        for action, dist in system.transitions_of(pos.other):
            if action == pos.action:
                moves.append(transition_move(DEFENDER, side, action, dist))
        return sorted(moves)
    if isinstance(pos, DistPair):
        moves = []
        for side, dist in ((1, pos.d1), (2, pos.d2)):
            for subset in _nonempty_subsets(dist.support):
                moves.append(subset_move(ATTACKER, side, subset))
        return sorted(moves)
    if isinstance(pos, DefSubset):
        side = 3 - pos.chosen_side
        moves = []
        for subset in _nonempty_subsets(pos.other_d.support):
            if pos.other_d.mass(subset) >= pos.rho:
                moves.append(subset_move(DEFENDER, side, subset))
        return sorted(moves)
    if isinstance(pos, SetPair):
        moves = []
        for side, subset in ((1, pos.t1), (2, pos.t2)):
            for state in _sorted_set(subset):
                moves.append(pick_move(ATTACKER, side, state))
        return sorted(moves)
    if isinstance(pos, DefPick):
        side = 3 - pos.chosen_side
        return sorted(pick_move(DEFENDER, side, state) for state in _sorted_set(pos.other_set))
    raise TypeError(f"not a game position: {pos!r}")


def apply_move(pos, move):
    """Successor position after a legal move."""
    if isinstance(pos, PairPos):
        action, entries = move.payload
        other = pos.s2 if move.side == 1 else pos.s1
        return DefTrans(move.side, action, Dist(dict(entries)), other)
    if isinstance(pos, DefTrans):
        action, entries = move.payload
        dist = Dist(dict(entries))
        if pos.attacked_side == 1:
            return DistPair(pos.d_chosen, dist)
        return DistPair(dist, pos.d_chosen)
    if isinstance(pos, DistPair):
        (members,) = move.payload
        subset = frozenset(members)
        chosen = pos.d1 if move.side == 1 else pos.d2
        other = pos.d2 if move.side == 1 else pos.d1
        return DefSubset(move.side, subset, other, chosen.mass(subset))
    if isinstance(pos, DefSubset):
        (members,) = move.payload
        subset = frozenset(members)
        if pos.chosen_side == 1:
            return SetPair(pos.subset, subset)
        return SetPair(subset, pos.subset)
    if isinstance(pos, SetPair):
        (state,) = move.payload
        other = pos.t2 if move.side == 1 else pos.t1
        return DefPick(move.side, state, other)
    if isinstance(pos, DefPick):
        (state,) = move.payload
        if pos.chosen_side == 1:
            return PairPos(pos.state, state)
        return PairPos(state, pos.state)
    raise TypeError(f"not a game position: {pos!r}")


class GameSolver:
    """Backward-induction evaluation of Attacker's bounded reachability objective.

    `wins(pos, rounds)` is True iff Attacker can force a win within `rounds`
    full protocol rounds from the position (intermediate positions count as
    part of the round in progress).  Optimal moves are memoized alongside,
    lexicographically least among equally good ones, so engine play is
    deterministic.
    """

    def __init__(self, system):
        self.system = system
        self._memo = {}

    def wins(self, pos, rounds):
        return self._eval(pos, rounds)[0]

    def best_move(self, pos, rounds):
        return self._eval(pos, rounds)[1]

    def _eval(self, pos, rounds):
        key = (pos, rounds)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if isinstance(pos, PairPos) and rounds <= 0:
            result = (False, None)
            self._memo[key] = result
            return result
        moves = legal_moves(self.system, pos)
        if not moves:
            # stuck Defender loses; a dead pair (no attacker move) is a Defender win
            result = (owner(pos) == DEFENDER, None)
            self._memo[key] = result
            return result
        next_rounds = rounds - 1 if isinstance(pos, DefPick) else rounds
        outcomes = [(self._eval(apply_move(pos, m), next_rounds)[0], m) for m in moves]
        if owner(pos) == ATTACKER:
            win = next((m for w, m in outcomes if w), None)
            result = (win is not None, win if win is not None else moves[0])
        else:
            survive = next((m for w, m in outcomes if not w), None)
            result = (survive is None, survive if survive is not None else moves[0])
        self._memo[key] = result
        return result


def attacker_wins_within(system, s, t, n):
    """Decide whether Attacker forces a win within n rounds from (s, t).

    Returns (True, attacker strategy) or (False, defender strategy); the
    strategy maps (position, rounds remaining) to the move to play.
    """
    solver = GameSolver(system)
    root = PairPos(s, t)
    win = solver.wins(root, n)
    side = ATTACKER if win else DEFENDER
    strategy = {}
    seen = set()
    stack = [(root, n)]
    while stack:
        pos, rounds = stack.pop()
        if (pos, rounds) in seen:
            continue
        seen.add((pos, rounds))
        if isinstance(pos, PairPos) and rounds <= 0:
            continue
        moves = legal_moves(system, pos)
        if not moves:
            continue
        next_rounds = rounds - 1 if isinstance(pos, DefPick) else rounds
        if owner(pos) == side:
            move = solver.best_move(pos, rounds)
            strategy[(pos, rounds)] = move
            stack.append((apply_move(pos, move), next_rounds))
        else:
            for move in moves:
                stack.append((apply_move(pos, move), next_rounds))
    return win, Strategy(side, n, strategy)


@dataclass
class Strategy:
    """Decision table for one player with the horizon it was computed for."""

    side: str
    horizon: int
    moves: dict

    def move_at(self, pos, rounds):
        return self.moves.get((pos, rounds))

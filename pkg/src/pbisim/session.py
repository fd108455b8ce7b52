"""Interactive game sessions and their JSON wire encoding.

A session fixes a model, a start pair, the human's side and a horizon in
protocol rounds.  The engine plays the other side using the bounded solver,
replying deterministically (lexicographically least optimal move).  All
rationals travel as {"num": .., "den": ..} objects; states travel as display
names and moves are matched against the server-computed legal list, so the
client never re-implements game rules.
"""

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Dist
from .errors import InvalidInputError
from .game import (
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
    legal_moves,
    owner,
)

STATUS_ACTIVE = "active"
STATUS_ATTACKER_WON = "attacker_won"
STATUS_DEFENDER_SURVIVED = "defender_survived"
STATUS_DEFENDER_WON_DEAD = "defender_won_dead"

_LIFTED_OFFSET = {
    PairPos: 0,
    DefTrans: 0,
    DistPair: 1,
    DefSubset: 1,
    SetPair: 2,
    DefPick: 2,
}


def encode_rational(value):
    f = Fraction(value)
    return {"num": f.numerator, "den": f.denominator}


def encode_dist(dist, name_of):
    return [
        {"state": name_of(s), "prob": encode_rational(p)} for s, p in dist.entries
    ]


def encode_state_set(states, name_of):
    return sorted(name_of(s) for s in states)


def encode_position(pos, name_of):
    if isinstance(pos, PairPos):
        return {"kind": "pair", "s1": name_of(pos.s1), "s2": name_of(pos.s2)}
    if isinstance(pos, DefTrans):
        return {
            "kind": "def_trans",
            "attacked_side": pos.attacked_side,
            "action": pos.action,
            "dist": encode_dist(pos.d_chosen, name_of),
            "other": name_of(pos.other),
        }
    if isinstance(pos, DistPair):
        return {
            "kind": "dist_pair",
            "d1": encode_dist(pos.d1, name_of),
            "d2": encode_dist(pos.d2, name_of),
        }
    if isinstance(pos, DefSubset):
        return {
            "kind": "def_subset",
            "chosen_side": pos.chosen_side,
            "subset": encode_state_set(pos.subset, name_of),
            "other_dist": encode_dist(pos.other_d, name_of),
            "rho": encode_rational(pos.rho),
        }
    if isinstance(pos, SetPair):
        return {
            "kind": "set_pair",
            "t1": encode_state_set(pos.t1, name_of),
            "t2": encode_state_set(pos.t2, name_of),
        }
    if isinstance(pos, DefPick):
        return {
            "kind": "def_pick",
            "chosen_side": pos.chosen_side,
            "state": name_of(pos.state),
            "other_set": encode_state_set(pos.other_set, name_of),
        }
    raise TypeError(f"not a position: {pos!r}")


def encode_move(move, name_of):
    body = {"actor": move.actor, "kind": move.kind, "side": move.side}
    if move.kind == "transition":
        action, entries = move.payload
        body["action"] = action
        body["dist"] = encode_dist(Dist(dict(entries)), name_of)
    elif move.kind == "subset":
        (members,) = move.payload
        body["subset"] = encode_state_set(members, name_of)
    else:
        (state,) = move.payload
        body["state"] = name_of(state)
    return body


def _canonical(obj):
    if isinstance(obj, dict):
        return tuple(sorted((k, _canonical(v)) for k, v in obj.items()))
    if isinstance(obj, list):
        return tuple(_canonical(v) for v in obj)
    return obj


class Session:
    """One play-through; processes moves serially under its own lock."""

    _ids = itertools.count(1)

    def __init__(self, model_name, system, s1, s2, human_side, horizon, name_of):
        if human_side not in (ATTACKER, DEFENDER):
            raise InvalidInputError(f"bad side {human_side!r}")
        if horizon < 1:
            raise InvalidInputError("horizon must be at least 1")
        self.id = str(next(Session._ids))
        self.model_name = model_name
        self.system = system
        self.human_side = human_side
        self.engine_side = DEFENDER if human_side == ATTACKER else ATTACKER
        self.horizon = horizon
        self.name_of = name_of
        self.position = PairPos(s1, s2)
        self.rounds_used = 0
        self.history = []
        self.status = STATUS_ACTIVE
        self.solver = GameSolver(system)
        self.lock = threading.Lock()
        self._settle()

    # -- state transitions ------------------------------------------------

    def _rounds_left(self):
        return self.horizon - self.rounds_used

    def _record(self, move, by):
        self.history.append(
            {
                "position": encode_position(self.position, self.name_of),
                "move": encode_move(move, self.name_of),
                "by": by,
                "round": self.rounds_used,
            }
        )

    def _apply(self, move, by):
        self._record(move, by)
        finished_round = isinstance(self.position, DefPick)
        self.position = apply_move(self.position, move)
        if finished_round:
            self.rounds_used += 1

    def _settle(self):
        """Advance terminal detection and engine replies until it is the
        human's turn or the play is over."""
        while self.status == STATUS_ACTIVE:
            moves = legal_moves(self.system, self.position)
            if not moves:
                if owner(self.position) == ATTACKER:
                    self.status = STATUS_DEFENDER_WON_DEAD
                else:
                    self.status = STATUS_ATTACKER_WON
                return
            if isinstance(self.position, PairPos) and self._rounds_left() <= 0:
                self.status = STATUS_DEFENDER_SURVIVED
                return
            if owner(self.position) != self.engine_side:
                return
            move = self.solver.best_move(self.position, self._rounds_left())
            self._apply(move, "engine")

    # -- public API --------------------------------------------------------

    def legal_moves(self):
        if self.status != STATUS_ACTIVE:
            return []
        return legal_moves(self.system, self.position)

    def play(self, move_body):
        with self.lock:
            if self.status != STATUS_ACTIVE:
                raise InvalidInputError(f"session is over ({self.status})")
            if owner(self.position) != self.human_side:
                raise InvalidInputError("not the human player's turn")
            wanted = _canonical(move_body)
            for move in self.legal_moves():
                if _canonical(encode_move(move, self.name_of)) == wanted:
                    self._apply(move, "human")
                    self._settle()
                    return
            raise InvalidInputError("illegal move: not in the legal move list")

    def lifted_rounds(self):
        return 3 * self.rounds_used + _LIFTED_OFFSET[type(self.position)]

    def describe(self):
        return {
            "id": self.id,
            "model": self.model_name,
            "status": self.status,
            "human_side": self.human_side,
            "engine_side": self.engine_side,
            "horizon": self.horizon,
            "rounds_used": self.rounds_used,
            "lifted_rounds": self.lifted_rounds(),
            "position": encode_position(self.position, self.name_of),
            "legal_moves": [encode_move(m, self.name_of) for m in self.legal_moves()],
            "history": list(self.history),
        }


@dataclass
class SessionStore:
    sessions: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def add(self, session):
        with self.lock:
            self.sessions[session.id] = session
        return session.id

    def get(self, session_id):
        with self.lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

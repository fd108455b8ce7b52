"""Lower-bound constructions as instance generators with ground truth.

AND/OR gadgets wire conjunction/disjunction of state equivalences into a
pLTS with uniform one-action, probability-1/2 transitions.  The alternating
automaton reduction compiles acceptance of counter values into counter
configurations of a unary fully probabilistic one-counter machine; the
reachability-game reduction compiles the winner of a pushdown reachability
game into a visibly pushdown pair.
"""

from dataclasses import dataclass
from fractions import Fraction

from .core import Dist, Plts
from .errors import InvalidInputError, ResourceGuardError
from .machines import Config, Ppda

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class OneLetterAfa:
    """Alternating finite automaton over a one-letter alphabet.

    `delta` maps every state to (op, left, right) with op "and"/"or".
    """

    states: tuple
    delta: dict
    initial: str
    accepting: frozenset

    def __post_init__(self):
        for q in self.states:
            if q not in self.delta:
                raise InvalidInputError(f"delta not total: missing {q!r}")
            op, q1, q2 = self.delta[q]
            if op not in ("and", "or") or q1 not in self.states or q2 not in self.states:
                raise InvalidInputError(f"bad delta entry for {q!r}")
        if self.initial not in self.states:
            raise InvalidInputError("unknown initial state")
        if not self.accepting <= set(self.states):
            raise InvalidInputError("accepting states not a subset of states")


def acc(afa, q, n):
    """Acceptance of the length-n one-letter word from state q."""
    memo = {}

    def go(state, k):
        if k == 0:
            return state in afa.accepting
        key = (state, k)
        if key not in memo:
            op, q1, q2 = afa.delta[state]
            a, b = go(q1, k - 1), go(q2, k - 1)
            memo[key] = (a and b) if op == "and" else (a or b)
        return memo[key]

    return go(q, n)


class PltsBuilder:
    """Incremental construction of an explicit pLTS (used by gadget wiring)."""

    def __init__(self, actions=("a",)):
        self.actions = list(actions)
        self.names = []
        self.index = {}
        self.transitions = []

    def state(self, name):
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]

    def transition(self, src, action, entries):
        if action not in self.actions:
            self.actions.append(action)
        pairs = entries.items() if isinstance(entries, dict) else entries
        merged = {}
        for target, prob in pairs:
            tid = self.state(target)
            merged[tid] = merged.get(tid, Fraction(0)) + Fraction(prob)
        self.transitions.append((self.state(src), action, Dist(merged)))

    def build(self):
        return Plts(tuple(self.names), tuple(self.actions), tuple(self.transitions))


def and_gadget(builder, s, s2, t1, t12, t2, t22, action="a"):
    """Wire s/s2 so that they are bisimilar iff t1~t12 and t2~t22.

    Caller must guarantee t1 is not bisimilar to t22; s and s2 must have no
    other outgoing transitions.
    """
    builder.transition(s, action, [(t1, HALF), (t2, HALF)])
    builder.transition(s2, action, [(t12, HALF), (t22, HALF)])


def or_gadget(builder, s, s2, t1, t12, t2, t22, action="a", tag=""):
    """Wire s/s2 through four intermediates so that s~s2 iff t1~t12 or t2~t22."""
    u11 = f"u11{tag}"
    upp = f"upp{tag}"
    u1p = f"u1p{tag}"
    up1 = f"up1{tag}"
    builder.transition(s, action, [(u11, HALF), (upp, HALF)])
    builder.transition(s2, action, [(u1p, HALF), (up1, HALF)])
    builder.transition(u11, action, [(t1, HALF), (t2, HALF)])
    builder.transition(upp, action, [(t12, HALF), (t22, HALF)])
    builder.transition(u1p, action, [(t1, HALF), (t22, HALF)])
    builder.transition(up1, action, [(t12, HALF), (t2, HALF)])
    return u11, upp, u1p, up1


def prime(name):
    return f"{name}_prime"


def afa_to_poca(afa):
    """Compile a one-letter AFA into a unary fully probabilistic pOCA.

    Returns (machine, (left, right)) where the configurations are bisimilar
    iff the automaton accepts no counter value; along the way the q/q_prime
    pairs at counter n are bisimilar iff the automaton rejects n from q.
    AFA disjunction becomes an AND gadget over the popped children (with the
    s1/s2 loop states breaking the cross pair), conjunction an OR gadget.
    """
    controls = ["p0", prime("p0"), "r"]
    for q in afa.states:
        controls.append(q)
        controls.append(prime(q))
    controls += ["s1", "s2"]
    rules = []

    def rule(control, symbol, entries):
        merged = {}
        for target, prob in entries:
            merged[target] = merged.get(target, Fraction(0)) + prob
        rules.append((control, symbol, "a", Dist(merged)))

    for q in afa.states:
        if q in afa.accepting:
            rule(q, "Z", [(("r", ("Z",)), 1)])
        op, q1, q2 = afa.delta[q]
        if op == "or":
            r1, r2 = f"r1_{q}", f"r2_{q}"
            r1p, r2p = prime(r1), prime(r2)
            controls += [r1, r2, r1p, r2p]
            rule(q, "I", [((r1, ("I",)), HALF), ((r2, ("I",)), HALF)])
            rule(prime(q), "I", [((r1p, ("I",)), HALF), ((r2p, ("I",)), HALF)])
            rule(r1, "I", [((q1, ()), HALF), (("s1", ("I",)), HALF)])
            rule(r2, "I", [((q2, ()), HALF), (("s2", ("I",)), HALF)])
            rule(r1p, "I", [((prime(q1), ()), HALF), (("s1", ("I",)), HALF)])
            rule(r2p, "I", [((prime(q2), ()), HALF), (("s2", ("I",)), HALF)])
        else:
            u11, upp, u1p, up1 = (f"u11_{q}", f"upp_{q}", f"u1p_{q}", f"up1_{q}")
            controls += [u11, upp, u1p, up1]
            rule(q, "I", [((u11, ("I",)), HALF), ((upp, ("I",)), HALF)])
            rule(prime(q), "I", [((u1p, ("I",)), HALF), ((up1, ("I",)), HALF)])
            rule(u11, "I", [((q1, ()), HALF), ((q2, ()), HALF)])
            rule(upp, "I", [((prime(q1), ()), HALF), ((prime(q2), ()), HALF)])
            rule(u1p, "I", [((q1, ()), HALF), ((prime(q2), ()), HALF)])
            rule(up1, "I", [((prime(q1), ()), HALF), ((q2, ()), HALF)])
    rule("s1", "I", [(("s1", ("I",)), HALF), (("r", ()), HALF)])
    rule("s2", "I", [(("s2", ("I",)), Fraction(2, 5)), (("r", ()), Fraction(3, 5))])
    rule("p0", "I", [(("p0", ("I", "I")), THIRD), ((afa.initial, ()), THIRD), (("r", ("I",)), THIRD)])
    rule(prime("p0"), "I", [((prime("p0"), ("I", "I")), THIRD), ((prime(afa.initial), ()), THIRD), (("r", ("I",)), THIRD)])

    machine = Ppda(
        controls=tuple(controls),
        stack_alphabet=("I", "Z"),
        actions=("a",),
        rules=tuple(rules),
    )
    left = Config("p0", ("I", "Z"))
    right = Config(prime("p0"), ("I", "Z"))
    return machine, (left, right)


@dataclass(frozen=True)
class ReachGame:
    """Reachability game on a unary standard PDA.

    `owner` assigns each control state to player 0 or 1; player 1 tries to
    drive the token into a configuration with no successors.  Heads carry at
    most two rules, and two-rule heads must rewrite into single-symbol
    targets.
    """

    machine: Ppda
    owner: dict
    initial: Config

    def __post_init__(self):
        m = self.machine
        if len(m.actions) != 1:
            raise InvalidInputError("reachability game machine must be unary")
        for q, x, a, dist in m.rules:
            if not dist.is_dirac():
                raise InvalidInputError("reachability game machine must be standard")
        for p in m.controls:
            if self.owner.get(p) not in (0, 1):
                raise InvalidInputError(f"control {p!r} lacks an owner")
            for x in m.stack_alphabet:
                rules = m.head_rules(p, x)
                if len(rules) > 2:
                    raise InvalidInputError(f"head {p}{x} has more than two rules")
                if len(rules) == 2:
                    for _a, dist in rules:
                        ((_q, alpha),) = dist.support
                        if len(alpha) != 1:
                            raise InvalidInputError(
                                f"two-rule head {p}{x} must rewrite to single symbols"
                            )


def game_successors(game, config):
    out = []
    if not config.stack:
        return out
    top, rest = config.stack[0], config.stack[1:]
    for _a, dist in game.machine.head_rules(config.control, top):
        ((q, alpha),) = dist.support
        out.append(Config(q, tuple(alpha) + rest))
    return out


def solve_reach_game_finite(game, budget=20000):
    """Attractor computation on the explicit configuration graph.

    Returns 1 if player 1 can force a dead configuration from the initial
    one, else 0.  Errors out if the reachable graph exceeds the budget.
    """
    succ = {}
    queue = [game.initial]
    seen = {game.initial}
    while queue:
        config = queue.pop()
        targets = game_successors(game, config)
        succ[config] = targets
        for t in targets:
            if t not in seen:
                if len(seen) >= budget:
                    raise ResourceGuardError(
                        f"reachability game budget {budget} exceeded", size=len(seen)
                    )
                seen.add(t)
                queue.append(t)

    win1 = {c for c, targets in succ.items() if not targets}
    changed = True
    while changed:
        changed = False
        for config, targets in succ.items():
            if config in win1 or not targets:
                continue
            player = game.owner[config.control]
            if player == 1:
                hit = any(t in win1 for t in targets)
            else:
                hit = all(t in win1 for t in targets)
            if hit:
                win1.add(config)
                changed = True
    return 1 if game.initial in win1 else 0


def game_to_pvpda(game):
    """Compile a reachability game into a fully probabilistic visibly pushdown
    machine with one action per visibility class.

    Returns (machine, (left, right)): the two configurations are bisimilar
    iff player 0 wins.  Dead heads split the primed copy off via the inert
    control z; player-0 branching becomes an OR gadget, player-1 branching an
    AND gadget whose z-edges break the cross pair.
    """
    src = game.machine
    controls = []
    for p in src.controls:
        controls.append(p)
        controls.append(prime(p))
    controls.append("z")
    rules = []
    class_of_len = {0: "ar", 1: "ai", 2: "ac"}

    def rule(control, symbol, action, entries):
        rules.append((control, symbol, action, Dist(entries)))

    for p in src.controls:
        for x in src.stack_alphabet:
            head_rules = src.head_rules(p, x)
            if not head_rules:
                rule(p, x, "ai", {(p, (x,)): 1})
                rule(prime(p), x, "ai", {("z", (x,)): 1})
            elif len(head_rules) == 1:
                ((_a, dist),) = head_rules
                ((q, alpha),) = dist.support
                action = class_of_len[len(alpha)]
                rule(p, x, action, {(q, alpha): 1})
                rule(prime(p), x, action, {(prime(q), alpha): 1})
            else:
                (_a1, d1), (_a2, d2) = head_rules
                ((p1, a1),) = d1.support
                ((p2, a2),) = d2.support
                x1, x2 = a1[0], a2[0]
                base = f"{p}_{x}"
                if game.owner[p] == 0:
                    o11, opp, o1p, op1 = (f"or11_{base}", f"orpp_{base}", f"or1p_{base}", f"orp1_{base}")
                    controls += [o11, opp, o1p, op1]
                    rule(p, x, "ai", {(o11, (x,)): HALF, (opp, (x,)): HALF})
                    rule(prime(p), x, "ai", {(o1p, (x,)): HALF, (op1, (x,)): HALF})
                    rule(o11, x, "ai", {(p1, (x1,)): HALF, (p2, (x2,)): HALF})
                    rule(opp, x, "ai", {(prime(p1), (x1,)): HALF, (prime(p2), (x2,)): HALF})
                    rule(o1p, x, "ai", {(p1, (x1,)): HALF, (prime(p2), (x2,)): HALF})
                    rule(op1, x, "ai", {(prime(p1), (x1,)): HALF, (p2, (x2,)): HALF})
                else:
                    n1, n1p, n2, n2p = (f"and1_{base}", f"and1p_{base}", f"and2_{base}", f"and2p_{base}")
                    controls += [n1, n1p, n2, n2p]
                    rule(p, x, "ai", {(n1, (x,)): HALF, (n2, (x,)): HALF})
                    rule(prime(p), x, "ai", {(n1p, (x,)): HALF, (n2p, (x,)): HALF})
                    rule(n1, x, "ai", {(p1, (x1,)): 1})
                    rule(n1p, x, "ai", {(prime(p1), (x1,)): 1})
                    rule(n2, x, "ai", {(p2, (x2,)): HALF, ("z", (x,)): HALF})
                    rule(n2p, x, "ai", {(prime(p2), (x2,)): HALF, ("z", (x,)): HALF})

    machine = Ppda(
        controls=tuple(controls),
        stack_alphabet=src.stack_alphabet,
        actions=("ar", "ai", "ac"),
        rules=tuple(rules),
        vpda_partition={"r": ("ar",), "i": ("ai",), "c": ("ac",)},
    )
    left = game.initial
    right = Config(prime(game.initial.control), game.initial.stack)
    return machine, (left, right)


def example_afa():
    """The worked three-state automaton: and/or/or with the last state accepting."""
    return OneLetterAfa(
        states=("q0", "q1", "q2"),
        delta={
            "q0": ("and", "q1", "q2"),
            "q1": ("or", "q1", "q2"),
            "q2": ("or", "q1", "q1"),
        },
        initial="q0",
        accepting=frozenset({"q2"}),
    )

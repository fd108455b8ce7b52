"""Exact-rational probabilistic labelled transition systems and partition refinement.

States are integer ids into a list of display names; all probabilities are
`fractions.Fraction` and every comparison is exact.  Values are immutable
after construction, so they can be shared freely.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInputError

ONE = Fraction(1)


class Dist:
    """Finite probability distribution with strictly positive entries summing to 1."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries):
        items = tuple(sorted(dict(entries).items()))
        if not items:
            raise InvalidInputError("distribution must have nonempty support")
        total = Fraction(0)
        for state, prob in items:
            prob = Fraction(prob)
            if prob <= 0:
                raise InvalidInputError(f"nonpositive probability {prob} for {state!r}")
            total += prob
        if total != ONE:
            raise InvalidInputError(f"distribution sums to {total}, expected 1")
        self.entries = tuple((s, Fraction(p)) for s, p in items)
        self._hash = hash(self.entries)

    @property
    def support(self):
        return tuple(s for s, _ in self.entries)

    def get(self, state):
        for s, p in self.entries:
            if s == state:
                return p
        return Fraction(0)

    def mass(self, states):
        """Total probability of a set of states (d(B) in the usual notation)."""
        states = set(states)
        return sum((p for s, p in self.entries if s in states), Fraction(0))

    def is_dirac(self):
        return len(self.entries) == 1

    def map_states(self, fn):
        """Push the distribution forward along fn, merging collided states."""
        merged = {}
        for s, p in self.entries:
            t = fn(s)
            merged[t] = merged.get(t, Fraction(0)) + p
        return Dist(merged)

    def __eq__(self, other):
        return isinstance(other, Dist) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Dist(" + " + ".join(f"{p} {s!r}" for s, p in self.entries) + ")"


@dataclass(frozen=True)
class Plts:
    """Explicit finite pLTS: display names, action alphabet, transition set.

    `transitions` is a tuple of (source id, action, Dist over ids).  The
    structure is image-finite by construction.
    """

    state_names: tuple
    actions: tuple
    transitions: tuple
    _by_state: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.state_names)
        if len(set(self.state_names)) != n:
            raise InvalidInputError("duplicate state names")
        seen = set()
        for src, act, dist in self.transitions:
            if not (0 <= src < n):
                raise InvalidInputError(f"unknown source state id {src}")
            if act not in self.actions:
                raise InvalidInputError(f"undeclared action {act!r}")
            for tgt in dist.support:
                if not (0 <= tgt < n):
                    raise InvalidInputError(f"unknown target state id {tgt}")
            seen.add((src, act, dist))
        canonical = tuple(
            sorted(dict.fromkeys(self.transitions), key=lambda t: (t[0], t[1], t[2].entries))
        )
        object.__setattr__(self, "transitions", canonical)
        by_state = {i: [] for i in range(n)}
        for src, act, dist in canonical:
            by_state[src].append((act, dist))
        object.__setattr__(self, "_by_state", by_state)

    @property
    def num_states(self):
        return len(self.state_names)

    def transitions_of(self, state):
        return self._by_state[state]

    def state_id(self, name):
        try:
            return self.state_names.index(name)
        except ValueError:
            raise InvalidInputError(f"unknown state {name!r}") from None

    def enabled_actions(self, state):
        return sorted({a for a, _ in self._by_state[state]})

    def is_fully_probabilistic(self):
        per_head = {}
        for src, act, dist in self.transitions:
            per_head.setdefault((src, act), set()).add(dist)
        return all(len(ds) <= 1 for ds in per_head.values())

    def is_standard(self):
        return all(dist.is_dirac() for _, _, dist in self.transitions)


def make_plts(state_names, actions, transitions):
    """Build a Plts from name-based transitions [(src_name, action, {tgt_name: prob})]."""
    names = tuple(state_names)
    index = {n: i for i, n in enumerate(names)}
    rows = []
    for src, act, entries in transitions:
        dist = Dist({index[t]: Fraction(p) for t, p in dict(entries).items()})
        rows.append((index[src], act, dist))
    return Plts(names, tuple(actions), tuple(rows))


class Partition:
    """Disjoint nonempty blocks covering all states, in canonical order.

    Canonical form: each block sorted ascending, blocks ordered by their
    smallest member, so identical inputs always produce identical output.
    """

    __slots__ = ("blocks", "index")

    def __init__(self, blocks):
        canon = sorted((tuple(sorted(b)) for b in blocks if b), key=lambda b: b[0])
        self.blocks = tuple(canon)
        self.index = {}
        for i, block in enumerate(self.blocks):
            for s in block:
                if s in self.index:
                    raise InvalidInputError(f"state {s} occurs in two blocks")
                self.index[s] = i

    @classmethod
    def trivial(cls, num_states):
        if num_states == 0:
            return cls([])
        return cls([range(num_states)])

    @classmethod
    def discrete(cls, num_states):
        return cls([[i] for i in range(num_states)])

    def block_of(self, state):
        try:
            return self.index[state]
        except KeyError:
            raise InvalidInputError(f"state {state} not indexed by partition") from None

    def same_block(self, s, t):
        return self.block_of(s) == self.block_of(t)

    def refines(self, other):
        """True if every block of self lies inside a block of other."""
        return all(len({other.block_of(s) for s in block}) == 1 for block in self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return "Partition(" + ", ".join("{" + " ".join(map(str, b)) + "}" for b in self.blocks) + ")"


def dist_equiv(d1, d2, partition):
    """Exact test that d1 and d2 assign the same mass to every block."""
    masses = {}
    for s, p in d1.entries:
        b = partition.block_of(s)
        masses[b] = masses.get(b, Fraction(0)) + p
    for s, p in d2.entries:
        b = partition.block_of(s)
        masses[b] = masses.get(b, Fraction(0)) - p
    return all(v == 0 for v in masses.values())


def _dist_signature(dist, partition):
    masses = {}
    for s, p in dist.entries:
        b = partition.block_of(s)
        masses[b] = masses.get(b, Fraction(0)) + p
    return tuple(sorted(masses.items()))


def refine_step(plts, partition):
    """One round of refinement: split blocks by per-action distribution signatures.

    Two states stay together iff they sit in the same input block and every
    transition of one is matched by the other with a block-mass-equal
    distribution under the input partition (and symmetrically).
    """
    for s in range(plts.num_states):
        partition.block_of(s)
    groups = {}
    for state in range(plts.num_states):
        sig = frozenset(
            (act, _dist_signature(dist, partition)) for act, dist in plts.transitions_of(state)
        )
        groups.setdefault((partition.block_of(state), sig), []).append(state)
    return Partition(groups.values())


def sim_n(plts, n):
    """The n-round approximant: n refinement rounds from the one-block partition."""
    p = Partition.trivial(plts.num_states)
    for _ in range(n):
        q = refine_step(plts, p)
        if q == p:
            break
        p = q
    return p


def bisim_finite(plts):
    """Bisimilarity partition: refine to the fixed point (at most |S|-1 rounds)."""
    p = Partition.trivial(plts.num_states)
    while True:
        q = refine_step(plts, p)
        if q == p:
            return p
        p = q

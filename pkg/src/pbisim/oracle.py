"""Brute-force ground truth: the inductive approximants by direct recursion.

Works uniformly over explicit pLTSs, lazily unfolded pPDA configuration
spaces and disjoint unions of both, so heterogeneous comparisons (a machine
configuration against a finite-system state) need no special casing.
"""

from fractions import Fraction

from . import machines
from .core import Dist, Plts, bisim_finite
from .errors import ResourceGuardError


class ExplicitSystem:
    """Adapter over a Plts; states are the integer ids."""

    def __init__(self, plts):
        self.plts = plts

    def transitions_of(self, state):
        return self.plts.transitions_of(state)

    def state_name(self, state):
        return self.plts.state_names[state]


class PpdaSystem:
    """Lazy adapter over a pPDA; states are Config values."""

    def __init__(self, machine):
        self.machine = machine

    def transitions_of(self, state):
        return machines.step(self.machine, state)

    def state_name(self, state):
        return machines.config_str(state)


class UnionSystem:
    """Disjoint union of systems; states are (system index, inner state)."""

    def __init__(self, *systems):
        self.systems = systems

    def transitions_of(self, state):
        idx, inner = state
        out = []
        for action, dist in self.systems[idx].transitions_of(inner):
            out.append((action, dist.map_states(lambda s: (idx, s))))
        return out

    def state_name(self, state):
        idx, inner = state
        return f"{idx}:{self.systems[idx].state_name(inner)}"


class BoundedChecker:
    """Memoized evaluator of the n-round approximants on any system."""

    def __init__(self, system):
        self.system = system
        self._memo = {}

    def equiv(self, s, t, n):
        if s == t:
            return True
        if n <= 0:
            return True
        key = (s, t, n) if repr(s) <= repr(t) else (t, s, n)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        ts = self.system.transitions_of(s)
        tt = self.system.transitions_of(t)
        ok = self._match(ts, tt, n - 1) and self._match(tt, ts, n - 1)
        self._memo[key] = ok
        return ok

    def _match(self, own, other, level):
        for action, dist in own:
            if not any(
                a == action and self.dists_equiv(dist, d2, level) for a, d2 in other
            ):
                return False
        return True

    def dists_equiv(self, d1, d2, level):
        """Exact class-mass comparison with classes of the level-n approximant."""
        seen = list(dict.fromkeys(d1.support + d2.support))
        classes = []
        for state in seen:
            for cls in classes:
                if self.equiv(state, cls[0], level):
                    cls.append(state)
                    break
            else:
                classes.append([state])
        for cls in classes:
            block = set(cls)
            if d1.mass(block) != d2.mass(block):
                return False
        return True


def bounded_equiv(system, s, t, n):
    """Literal recursive evaluation of the n-round approximant."""
    return BoundedChecker(system).equiv(s, t, n)


def equiv_level(system, s, t, max_n):
    """Least n <= max_n with s,t inequivalent at level n, or None if none found."""
    checker = BoundedChecker(system)
    for n in range(1, max_n + 1):
        if not checker.equiv(s, t, n):
            return n
    return None


def materialize(system, roots, budget=10000, actions=None):
    """Explicit Plts over everything reachable from `roots` (errors if infinite/big)."""
    order = []
    ids = {}
    queue = list(dict.fromkeys(roots))
    for state in queue:
        ids[state] = len(order)
        order.append(state)
    transitions = []
    pos = 0
    while pos < len(queue):
        state = queue[pos]
        pos += 1
        for action, dist in system.transitions_of(state):
            entries = {}
            for target, prob in dist.entries:
                if target not in ids:
                    if len(order) >= budget:
                        raise ResourceGuardError(
                            f"reachable-set budget {budget} exceeded", size=len(order)
                        )
                    ids[target] = len(order)
                    order.append(target)
                    queue.append(target)
                entries[ids[target]] = prob
            transitions.append((ids[state], action, Dist(entries)))

    names = []
    used = set()
    for state in order:
        name = system.state_name(state)
        while name in used:
            name += "'"
        used.add(name)
        names.append(name)
    if actions is None:
        actions = tuple(sorted({a for _, a, _ in transitions}))
    plts = Plts(tuple(names), tuple(actions), tuple(transitions))
    return plts, ids


def full_equiv_finite(system, s, t, budget=10000):
    """Exact bisimilarity via partition refinement on the finite reachable closure."""
    plts, ids = materialize(system, [s, t], budget=budget)
    partition = bisim_finite(plts)
    return partition.same_block(ids[s], ids[t])

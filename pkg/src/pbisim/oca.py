"""One-counter machinery: the underlying finite system, INC, distINC, and the
difference filter.

A counter configuration (p, m) stands for the stack p I^m Z.  The underlying
finite system collapses every counter-rule target to its control state and
describes behaviour with an always-positive counter.  INC collects the
configurations that are incompatible with every state of the underlying
system; macrostep distances to INC differ only between inequivalent
configurations, which yields a sound non-bisimilarity filter.
"""

from dataclasses import dataclass
from fractions import Fraction

from .core import Dist, Plts
from .errors import InvalidInputError, ResourceGuardError
from .machines import Config, classify
from .oracle import BoundedChecker, ExplicitSystem, PpdaSystem, UnionSystem


@dataclass(frozen=True, order=True)
class CounterConfig:
    control: str
    counter: int

    def to_config(self):
        return Config(self.control, ("I",) * self.counter + ("Z",))

    def __str__(self):
        if self.counter == 0:
            return f"{self.control}Z"
        return f"{self.control}I^{self.counter}Z"


def _require_oca(machine):
    report = classify(machine)
    if not report.oca:
        raise InvalidInputError("machine does not classify as a pOCA: " + "; ".join(report.diagnostics))


def underlying(machine):
    """Finite pLTS over the control states; I-rule targets collapse to their
    control state (counter treated as always positive), Z-rules are ignored."""
    _require_oca(machine)
    transitions = []
    index = {q: i for i, q in enumerate(machine.controls)}
    for q, x, a, dist in machine.rules:
        if x != "I":
            continue
        collapsed = {}
        for (p, _alpha), prob in dist.entries:
            collapsed[index[p]] = collapsed.get(index[p], Fraction(0)) + prob
        transitions.append((index[q], a, Dist(collapsed)))
    return Plts(tuple(machine.controls), tuple(machine.actions), tuple(dict.fromkeys(transitions)))


def _union_checker(machine):
    """Checker over the disjoint union of the machine's configuration space and
    its underlying finite system; the union shares one relevant-number
    alphabet, which is what makes level-k comparison across the two sound."""
    finite = underlying(machine)
    union = UnionSystem(PpdaSystem(machine), ExplicitSystem(finite))
    return finite, union, BoundedChecker(union)


def inc_set(machine, conservative_bound=False):
    """Configurations pI^mZ inequivalent at level k=|Q| with every state of the
    underlying system.  Members have m < k; the conservative flag scans the
    looser m < 3k window instead (useful for differential testing)."""
    _require_oca(machine)
    finite, _, checker = _union_checker(machine)
    k = len(machine.controls)
    bound = 3 * k if conservative_bound else k
    members = []
    for p in machine.controls:
        for m in range(bound):
            cfg = CounterConfig(p, m)
            machine_state = (0, cfg.to_config())
            if all(
                not checker.equiv(machine_state, (1, finite.state_id(q)), k)
                for q in machine.controls
            ):
                members.append(cfg)
    return sorted(members)


def macrosteps(machine, counter_config):
    """Successor counter configurations in one protocol round (counter moves by
    at most one).  Every support element of a rule from the current head is a
    possible round outcome."""
    p, m = counter_config.control, counter_config.counter
    out = set()
    if m > 0:
        for _a, dist in machine.head_rules(p, "I"):
            for (q, alpha), _prob in dist.entries:
                out.add(CounterConfig(q, m - 1 + len(alpha)))
    else:
        for _a, dist in machine.head_rules(p, "Z"):
            for (q, alpha), _prob in dist.entries:
                out.add(CounterConfig(q, len(alpha) - 1))
    return sorted(out)


@dataclass(frozen=True)
class DistInc:
    """Macrostep distance to INC; `value` is None when no path was found.

    `exhausted` records whether the search closed off every reachable
    configuration without hitting the counter ceiling, in which case the
    distance is certifiably infinite; otherwise an unfound path is
    inconclusive.
    """

    value: int | None
    exhausted: bool
    ceiling: int

    @property
    def infinite(self):
        return self.value is None


def dist_inc(machine, counter_config, cap=50, inc=None, conservative_bound=False):
    """BFS over macrosteps from `counter_config` to the INC set.

    Exploration is limited to counters up to max(m, 3k) + cap; reaching the
    ceiling taints the search (`exhausted` False).
    """
    _require_oca(machine)
    if inc is None:
        inc = inc_set(machine, conservative_bound=conservative_bound)
    inc = set(inc)
    k = len(machine.controls)
    ceiling = max(counter_config.counter, 3 * k) + cap
    if (ceiling + 1) * k > 500_000:
        raise ResourceGuardError(
            f"counter region {ceiling} x {k} controls too large for the distance search",
            size=ceiling,
        )

    seen = {counter_config}
    frontier = [counter_config]
    distance = 0
    exhausted = True
    while frontier:
        for cfg in frontier:
            if cfg in inc:
                return DistInc(distance, True, ceiling)
        nxt = []
        for cfg in frontier:
            for succ in macrosteps(machine, cfg):
                if succ.counter > ceiling:
                    exhausted = False
                    continue
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
        distance += 1
    return DistInc(None, exhausted, ceiling)


@dataclass(frozen=True)
class FilterVerdict:
    not_bisimilar: bool
    reason: str
    left: DistInc
    right: DistInc


def not_bisim_filter(machine, c1, c2, cap=50, inc=None, conservative_bound=False):
    """Sound non-bisimilarity test: differing distINC values separate the two
    configurations; equal or uncertified-infinite distances stay Unknown."""
    _require_oca(machine)
    if inc is None:
        inc = inc_set(machine, conservative_bound=conservative_bound)
    d1 = dist_inc(machine, c1, cap=cap, inc=inc)
    d2 = dist_inc(machine, c2, cap=cap, inc=inc)
    if not d1.infinite and not d2.infinite:
        if d1.value != d2.value:
            return FilterVerdict(True, f"distINC {d1.value} != {d2.value}", d1, d2)
        return FilterVerdict(False, f"equal distINC {d1.value}", d1, d2)
    if d1.infinite != d2.infinite:
        finite, infinite = (d2, d1) if d1.infinite else (d1, d2)
        if infinite.exhausted:
            return FilterVerdict(
                True, f"distINC {finite.value} vs certified infinite", d1, d2
            )
        return FilterVerdict(
            False, "one distance unresolved within the explored region", d1, d2
        )
    if d1.exhausted and d2.exhausted:
        return FilterVerdict(False, "both distances certifiably infinite", d1, d2)
    return FilterVerdict(False, "distances unresolved within the explored region", d1, d2)

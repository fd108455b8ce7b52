"""Visibly-pushdown bisimilarity via force relations, at desk scale.

`force_a` decides one protocol round restricted to an action; `force_long`
queries the least relation closed under the return/internal/call deduction
rules; `vpda_decide` builds the inequivalence sets right-to-left over the
two stacks and answers from the top pair.
"""

from .errors import InvalidInputError, ResourceGuardError
from .machines import Config, classify

OUT_WORD_LEN = {"r": 0, "i": 1, "c": 2}


def _require_vpda(machine):
    report = classify(machine)
    if not report.vpda:
        raise InvalidInputError(
            "machine does not classify as a vpda: " + "; ".join(report.diagnostics)
        )


def _nonempty_subsets(items):
    items = list(items)
    out = []
    for mask in range(1, 1 << len(items)):
        out.append(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
    return out


def _force_a_impl(machine, head_pair, action, out):
    (p, x), (q, y) = head_pair
    rules1 = [d for a, d in machine.head_rules(p, x) if a == action]
    rules2 = [d for a, d in machine.head_rules(q, y) if a == action]
    for side, own, other in ((1, rules1, rules2), (2, rules2, rules1)):
        for dist in own:
            if not other:
                return True
            if all(_attacker_settles(dist, reply, side, out) for reply in other):
                return True
    return False


def _attacker_settles(d_att, d_def, att_side, out):
    """Stages 2-3 from a fixed distribution pair: Attacker lands the round in `out`."""
    d1, d2 = (d_att, d_def) if att_side == 1 else (d_def, d_att)
    for j, dj, dother in ((1, d1, d2), (2, d2, d1)):
        for tj in _nonempty_subsets(dj.support):
            rho = dj.mass(tj)
            replies = [t for t in _nonempty_subsets(dother.support) if dother.mass(t) >= rho]
            if all(
                _attacker_picks(tj if j == 1 else reply, reply if j == 1 else tj, out)
                for reply in replies
            ):
                return True
    return False


def _attacker_picks(t1, t2, out):
    for k, tk, tother in ((1, t1, t2), (2, t2, t1)):
        for sk in tk:
            if all((((sk, so) if k == 1 else (so, sk)) in out) for so in tother):
                return True
    return False


def force_a(machine, head_pair, action, out):
    """One-round force: from the head pair, Attacker can use an `action`
    transition guaranteeing that Defender gets stuck or the outcome is in `out`.

    The outcome set must be typed by the action's visibility class (pairs of
    popped / single-symbol / two-symbol targets).
    """
    _require_vpda(machine)
    cls = machine.action_class(action)
    if cls is None:
        raise InvalidInputError(f"action {action!r} is not in the visibility partition")
    out = frozenset(out)
    want = OUT_WORD_LEN[cls]
    for left, right in out:
        if len(left[1]) != want or len(right[1]) != want:
            raise InvalidInputError(
                f"outcome set mismatches {cls!r}-action typing: words must have length {want}"
            )
    return _force_a_impl(machine, head_pair, action, out)


class ForceTable:
    """Demand-driven least-fixpoint evaluation of the iterated force relation.

    Facts are keyed (head pair, target set over control pairs).  Evaluation
    is standard worklist tabling: a demanded fact starts False, evaluations
    read premise facts through the table while recording reverse
    dependencies, and a fact flipping to True re-enqueues its dependents.
    Monotonicity of the deduction rules makes the result exact; answers are
    reusable across queries since a fact's value never depends on which
    queries were asked.
    """

    def __init__(self, machine, max_controls=5, prune_pop_results=True, max_facts=500000):
        _require_vpda(machine)
        if len(machine.controls) > max_controls:
            raise ResourceGuardError(
                f"control-state guard: {len(machine.controls)} > {max_controls}",
                size=len(machine.controls),
            )
        self.machine = machine
        self.prune_pop_results = prune_pop_results
        self.max_facts = max_facts
        self._value = {}
        self._deps = {}
        self._work = []
        self._true_targets = {}
        self._force_memo = {}
        cls = {a: machine.action_class(a) for a in machine.actions}
        self._returns = [a for a in machine.actions if cls[a] == "r"]
        self._internals = [a for a in machine.actions if cls[a] == "i"]
        self._calls = [a for a in machine.actions if cls[a] == "c"]
        pop = set()
        for _, _, a, dist in machine.rules:
            if cls[a] == "r":
                pop.update(ctrl for ctrl, _ in dist.support)
        self._pop_controls = sorted(pop)
        if prune_pop_results:
            self._universe = [(p, q) for p in self._pop_controls for q in self._pop_controls]
        else:
            self._universe = [(p, q) for p in machine.controls for q in machine.controls]

    def holds(self, head_pair, target):
        """Membership of (head_pair, target ⊆ Q×Q) in the least relation."""
        key = (head_pair, frozenset(target))
        self._demand(key)
        self._run()
        return self._value[key]

    def _demand(self, key):
        if key not in self._value:
            if len(self._value) >= self.max_facts:
                raise ResourceGuardError(
                    f"force-relation fact budget {self.max_facts} exceeded",
                    size=len(self._value),
                )
            head_pair, target = key
            # monotonicity in the target: a known smaller true target settles it
            if any(t0 <= target for t0 in self._true_targets.get(head_pair, ())):
                self._value[key] = True
                self._deps[key] = set()
                return
            self._value[key] = False
            self._deps[key] = set()
            self._work.append(key)

    def _read(self, key, reader):
        self._demand(key)
        self._deps[key].add(reader)
        return self._value[key]

    def _mark_true(self, key):
        self._value[key] = True
        head_pair, target = key
        known = self._true_targets.setdefault(head_pair, [])
        if not any(t0 <= target for t0 in known):
            known[:] = [t0 for t0 in known if not target <= t0] + [target]
        self._work.extend(self._deps[key])

    def _run(self):
        while self._work:
            key = self._work.pop()
            if self._value[key]:
                continue
            if self._evaluate(key):
                self._mark_true(key)

    def _force(self, head_pair, action, out):
        memo_key = (head_pair, action, out)
        cached = self._force_memo.get(memo_key)
        if cached is None:
            cached = _force_a_impl(self.machine, head_pair, action, out)
            self._force_memo[memo_key] = cached
        return cached

    def _evaluate(self, key):
        head_pair, target = key
        return (
            self._rule_return(head_pair, target)
            or self._rule_outcome(key, self._internals, self._internal_outcomes)
            or self._rule_outcome(key, self._calls, self._call_outcomes)
        )

    def _rule_return(self, head_pair, target):
        if not self._returns:
            return False
        out = frozenset(((a, ()), (b, ())) for a, b in target)
        return any(self._force(head_pair, action, out) for action in self._returns)

    def _real_outcomes(self, head_pair, action):
        """Pairs that a completed round under `action` can actually produce."""
        (p, x), (q, y) = head_pair
        supports1 = [d.support for a, d in self.machine.head_rules(p, x) if a == action]
        supports2 = [d.support for a, d in self.machine.head_rules(q, y) if a == action]
        out = set()
        for s1 in supports1:
            for s2 in supports2:
                for t1 in s1:
                    for t2 in s2:
                        out.add((t1, t2))
        return out

    def _rule_outcome(self, key, actions, admissible):
        """Shared shape of the internal and call rules: build the maximal
        admissible outcome set (restricted to outcomes the round can actually
        produce, which force ignores anything else) and test the one-round force."""
        head_pair, target = key
        for action in actions:
            out = frozenset(
                pair for pair in self._real_outcomes(head_pair, action)
                if admissible(pair, target, key)
            )
            if self._force(head_pair, action, out):
                return True
        return False

    def _internal_outcomes(self, pair, target, key):
        (p2, alpha), (q2, beta) = pair
        return self._read((((p2, alpha[0]), (q2, beta[0])), target), key)

    def _call_outcomes(self, pair, target, key):
        (p2, (x1, x2)), (q2, (y1, y2)) = pair
        # the iterated force is superset-closed in its target, so the
        # existential intermediate target has the canonical maximal witness:
        # all control pairs whose continuation heads force `target`
        cont = frozenset(
            (pp, qq)
            for pp, qq in self._universe
            if self._read((((pp, x2), (qq, y2)), target), key)
        )
        return self._read((((p2, x1), (q2, y1)), cont), key)


def force_long(machine, head_pair, target, max_controls=5, prune_pop_results=True):
    """Iterated force: (head_pair, target) in the least relation closed under rules 1-3."""
    table = ForceTable(machine, max_controls=max_controls, prune_pop_results=prune_pop_results)
    return table.holds(head_pair, target)


def vpda_decide(machine, c1, c2, max_controls=5, prune_pop_results=True):
    """Decide bisimilarity of two configurations of a visibly pushdown machine.

    Builds the sets of control-state pairs inequivalent above each aligned
    suffix of the two stacks, from the bottoms towards the tops.
    """
    _require_vpda(machine)
    p, alpha = (c1.control, c1.stack) if isinstance(c1, Config) else c1
    q, beta = (c2.control, c2.stack) if isinstance(c2, Config) else c2
    if len(alpha) > len(beta):
        # bisimilarity is symmetric, decide the swapped instance
        (p, alpha), (q, beta) = (q, beta), (p, alpha)
    m, n = len(alpha), len(beta)
    if m == 0 and n == 0:
        return True

    table = ForceTable(machine, max_controls=max_controls, prune_pop_results=prune_pop_results)
    controls = machine.controls
    if n > m:
        top = beta[m]
        current = frozenset(
            (pp, qq) for pp in controls for qq in controls if machine.head_rules(qq, top)
        )
    else:
        current = frozenset()
    for i in range(m - 1, -1, -1):
        current = frozenset(
            (pp, qq)
            for pp in controls
            for qq in controls
            if table.holds(((pp, alpha[i]), (qq, beta[i])), current)
        )
    return (p, q) not in current

"""The probabilistic-to-nondeterministic lift, explicit and symbolic.

`lift_plts` inserts distribution states and support-subset states into an
explicit pLTS, with the subset masses turned into fresh actions plus a
marker action "#"; every original transition becomes a three-edge segment.
`lift_ppda_stack` and `lift_ppda_state` perform the same construction on a
pPDA symbolically, storing the fresh objects in the stack alphabet or in
the control-state set respectively.

State/action provenance is kept in tag maps:
  states:  ("orig", x) | ("dist", Dist) | ("set", frozenset)
  actions: ("orig", a) | ("prob", Fraction) | ("hash",)
"""

from dataclasses import dataclass
from fractions import Fraction

from .core import Dist, Plts
from .errors import ResourceGuardError
from .machines import Ppda

HASH_ACTION = "#"


def size_estimate(dists):
    """Pre-materialization estimate: one term 2^|supp(d)| per distinct distribution."""
    return sum(2 ** len(d.support) for d in set(dists))


def _nonempty_subsets(support):
    items = list(support)
    out = []
    for mask in range(1, 1 << len(items)):
        out.append(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
    return out


def _fresh(name, used):
    while name in used:
        name += "'"
    used.add(name)
    return name


def _prob_action_names(numbers, used):
    names = {}
    for rho in sorted(numbers):
        names[rho] = _fresh(str(rho), used)
    return names


@dataclass(frozen=True)
class LiftedPlts:
    plts: Plts
    state_tags: tuple
    action_tags: dict
    orig_id: dict
    dist_id: dict
    subset_id: dict


def lift_plts(source, extra_numbers=(), cap=None):
    """Explicit lift of a finite pLTS; standard (all-Dirac) by construction.

    `extra_numbers` enlarges the probability-action alphabet, which leaves
    original-state equivalences untouched; it is used when two separately
    lifted systems must share one alphabet.
    """
    dists = [dist for _, _, dist in source.transitions]
    if cap is not None and size_estimate(dists) > cap:
        raise ResourceGuardError(
            f"lift size estimate {size_estimate(dists)} exceeds cap {cap}",
            size=size_estimate(dists),
        )

    relevant_dists = list(dict.fromkeys(dists))
    subsets = {}
    numbers = set(Fraction(x) for x in extra_numbers)
    for dist in relevant_dists:
        for subset in _nonempty_subsets(dist.support):
            subsets.setdefault(subset, None)
            numbers.add(dist.mass(subset))
    relevant_subsets = list(subsets)

    used_names = set(source.state_names)
    names = list(source.state_names)
    tags = [("orig", i) for i in range(source.num_states)]
    orig_id = {i: i for i in range(source.num_states)}

    dist_id = {}
    for dist in relevant_dists:
        label = "(" + "+".join(f"{p} {source.state_names[s]}".replace(" ", "") for s, p in dist.entries) + ")"
        dist_id[dist] = len(names)
        names.append(_fresh(label, used_names))
        tags.append(("dist", dist))
    subset_id = {}
    for subset in relevant_subsets:
        label = "{" + ",".join(source.state_names[s] for s in sorted(subset)) + "}"
        subset_id[subset] = len(names)
        names.append(_fresh(label, used_names))
        tags.append(("set", subset))

    used_actions = set(source.actions)
    action_tags = {a: ("orig", a) for a in source.actions}
    prob_names = _prob_action_names(numbers, used_actions)
    for rho, name in prob_names.items():
        action_tags[name] = ("prob", rho)
    hash_name = _fresh(HASH_ACTION, used_actions)
    action_tags[hash_name] = ("hash",)

    transitions = []
    for src, act, dist in source.transitions:
        transitions.append((orig_id[src], act, Dist({dist_id[dist]: 1})))
    for dist in relevant_dists:
        for subset in _nonempty_subsets(dist.support):
            reachable_mass = dist.mass(subset)
            for rho, name in prob_names.items():
                if reachable_mass >= rho:
                    transitions.append((dist_id[dist], name, Dist({subset_id[subset]: 1})))
    for subset in relevant_subsets:
        for s in sorted(subset):
            transitions.append((subset_id[subset], hash_name, Dist({orig_id[s]: 1})))

    actions = tuple(source.actions) + tuple(prob_names.values()) + (hash_name,)
    plts = Plts(tuple(names), actions, tuple(transitions))
    return LiftedPlts(plts, tuple(tags), action_tags, orig_id, dist_id, subset_id)


@dataclass(frozen=True)
class LiftedPpda:
    ppda: Ppda
    fresh_tags: dict
    action_tags: dict
    anchor: str

    def tag_of_symbol(self, sym):
        return self.fresh_tags.get(sym, ("orig", sym))

    def tag_of_action(self, act):
        return self.action_tags.get(act, ("orig", act))


def _machine_lift_parts(machine, extra_numbers, cap):
    dists = [dist for _, _, _, dist in machine.rules]
    if cap is not None and size_estimate(dists) > cap:
        raise ResourceGuardError(
            f"lift size estimate {size_estimate(dists)} exceeds cap {cap}",
            size=size_estimate(dists),
        )
    relevant_dists = list(dict.fromkeys(dists))
    numbers = set(Fraction(x) for x in extra_numbers)
    subset_heads = {}
    for dist in relevant_dists:
        for subset in _nonempty_subsets(dist.support):
            subset_heads.setdefault(subset, None)
            numbers.add(dist.mass(subset))
    return relevant_dists, list(subset_heads), sorted(numbers)


def _head_label(head):
    control, alpha = head
    return control + "".join(alpha)


def _dist_label(dist):
    return "(" + "+".join(f"{p}{_head_label(h)}" for h, p in dist.entries) + ")"


def _subset_label(subset):
    return "{" + ",".join(_head_label(h) for h in sorted(subset)) + "}"


def lift_ppda_stack(machine, extra_numbers=(), cap=None):
    """Stack-symbol encoding: fresh symbols <d>, <T>, rules anchored at the first control state."""
    relevant_dists, relevant_subsets, numbers = _machine_lift_parts(machine, extra_numbers, cap)
    q0 = machine.controls[0]

    used = set(machine.stack_alphabet)
    symbol_tags = {}
    dist_sym = {}
    for dist in relevant_dists:
        name = _fresh("<" + _dist_label(dist) + ">", used)
        dist_sym[dist] = name
        symbol_tags[name] = ("dist", dist)
    subset_sym = {}
    for subset in relevant_subsets:
        name = _fresh("<" + _subset_label(subset) + ">", used)
        subset_sym[subset] = name
        symbol_tags[name] = ("set", subset)

    used_actions = set(machine.actions)
    action_tags = {a: ("orig", a) for a in machine.actions}
    prob_names = _prob_action_names(numbers, used_actions)
    for rho, name in prob_names.items():
        action_tags[name] = ("prob", rho)
    hash_name = _fresh(HASH_ACTION, used_actions)
    action_tags[hash_name] = ("hash",)

    rules = []
    for q, x, a, dist in machine.rules:
        rules.append((q, x, a, Dist({(q0, (dist_sym[dist],)): 1})))
    for dist in relevant_dists:
        for subset in _nonempty_subsets(dist.support):
            reachable_mass = dist.mass(subset)
            for rho, name in prob_names.items():
                if reachable_mass >= rho:
                    rules.append((q0, dist_sym[dist], name, Dist({(q0, (subset_sym[subset],)): 1})))
    for subset in relevant_subsets:
        for head in sorted(subset):
            rules.append((q0, subset_sym[subset], hash_name, Dist({head: 1})))

    ppda = Ppda(
        controls=machine.controls,
        stack_alphabet=tuple(machine.stack_alphabet) + tuple(dist_sym.values()) + tuple(subset_sym.values()),
        actions=tuple(machine.actions) + tuple(prob_names.values()) + (hash_name,),
        rules=tuple(dict.fromkeys(rules)),
    )
    return LiftedPpda(ppda, symbol_tags, action_tags, q0)


def lift_ppda_state(machine, extra_numbers=(), cap=None):
    """Control-state encoding: fresh controls <d>, <T>; the symbol under them is inert.

    Each original rule qX -a-> d contributes its chain with the head symbol X,
    so the fresh controls only ever sit on symbols they can actually reach
    (this keeps a pOCA input an OCA).
    """
    relevant_dists, relevant_subsets, numbers = _machine_lift_parts(machine, extra_numbers, cap)

    used = set(machine.controls)
    control_tags = {}
    dist_ctl = {}
    for dist in relevant_dists:
        name = _fresh("<" + _dist_label(dist) + ">", used)
        dist_ctl[dist] = name
        control_tags[name] = ("dist", dist)
    subset_ctl = {}
    for subset in relevant_subsets:
        name = _fresh("<" + _subset_label(subset) + ">", used)
        subset_ctl[subset] = name
        control_tags[name] = ("set", subset)

    used_actions = set(machine.actions)
    action_tags = {a: ("orig", a) for a in machine.actions}
    prob_names = _prob_action_names(numbers, used_actions)
    for rho, name in prob_names.items():
        action_tags[name] = ("prob", rho)
    hash_name = _fresh(HASH_ACTION, used_actions)
    action_tags[hash_name] = ("hash",)

    rules = []
    head_symbols = {}
    for q, x, a, dist in machine.rules:
        rules.append((q, x, a, Dist({(dist_ctl[dist], (x,)): 1})))
        head_symbols.setdefault(dist, set()).add(x)
    for dist in relevant_dists:
        for x in sorted(head_symbols.get(dist, ())):
            for subset in _nonempty_subsets(dist.support):
                reachable_mass = dist.mass(subset)
                for rho, name in prob_names.items():
                    if reachable_mass >= rho:
                        rules.append((dist_ctl[dist], x, name, Dist({(subset_ctl[subset], (x,)): 1})))
                for head in sorted(subset):
                    rules.append((subset_ctl[subset], x, hash_name, Dist({head: 1})))

    ppda = Ppda(
        controls=tuple(machine.controls) + tuple(dist_ctl.values()) + tuple(subset_ctl.values()),
        stack_alphabet=machine.stack_alphabet,
        actions=tuple(machine.actions) + tuple(prob_names.values()) + (hash_name,),
        rules=tuple(dict.fromkeys(rules)),
    )
    return LiftedPpda(ppda, control_tags, action_tags, None)

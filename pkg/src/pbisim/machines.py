"""Probabilistic pushdown automata, subclass classification, induced-pLTS fragments.

A configuration is a control state plus a finite stack (top at the left,
matching the string notation qXb).  Rules rewrite the top symbol under an
action into a distribution over (control, word of length <= 2).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Dist, Plts
from .errors import InvalidInputError, ResourceGuardError


@dataclass(frozen=True, order=True)
class Config:
    control: str
    stack: tuple

    def __str__(self):
        return config_str(self)


def config_str(config):
    """Display form: compact (pXZ) when every name is one character, else dotted."""
    parts = (config.control,) + config.stack
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ".".join(parts)


@dataclass(frozen=True)
class Ppda:
    """pPDA with optional visibility partition of the action alphabet.

    `rules` is a tuple of (control, symbol, action, Dist over (control, alpha))
    with alpha a symbol tuple of length <= 2.  `vpda_partition`, when given,
    is a dict with keys "r", "i", "c" mapping to action tuples.
    """

    controls: tuple
    stack_alphabet: tuple
    actions: tuple
    rules: tuple
    vpda_partition: dict = None
    _by_head: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        controls = set(self.controls)
        symbols = set(self.stack_alphabet)
        for q, x, a, dist in self.rules:
            if q not in controls:
                raise InvalidInputError(f"unknown control state {q!r} in rule head")
            if x not in symbols:
                raise InvalidInputError(f"unknown stack symbol {x!r} in rule head")
            if a not in self.actions:
                raise InvalidInputError(f"undeclared action {a!r}")
            for p, alpha in dist.support:
                if p not in controls:
                    raise InvalidInputError(f"unknown control state {p!r} in rule target")
                if len(alpha) > 2:
                    raise InvalidInputError(f"target word {alpha!r} longer than 2")
                for sym in alpha:
                    if sym not in symbols:
                        raise InvalidInputError(f"unknown stack symbol {sym!r} in rule target")
        if self.vpda_partition is not None:
            declared = set()
            for key in ("r", "i", "c"):
                for a in self.vpda_partition.get(key, ()):
                    if a in declared:
                        raise InvalidInputError(f"action {a!r} in two visibility classes")
                    declared.add(a)
        canonical = tuple(
            sorted(dict.fromkeys(self.rules), key=lambda r: (r[0], r[1], r[2], r[3].entries))
        )
        object.__setattr__(self, "rules", canonical)
        by_head = {}
        for q, x, a, dist in canonical:
            by_head.setdefault((q, x), []).append((a, dist))
        object.__setattr__(self, "_by_head", by_head)

    def head_rules(self, control, symbol):
        return self._by_head.get((control, symbol), [])

    def action_class(self, action):
        """Visibility class 'r'/'i'/'c' of an action, or None if no partition."""
        if self.vpda_partition is None:
            return None
        for key in ("r", "i", "c"):
            if action in self.vpda_partition.get(key, ()):
                return key
        return None


@dataclass
class SubclassReport:
    fully_probabilistic: bool
    standard: bool
    bpa: bool
    oca: bool
    vpda: bool
    diagnostics: list

    def summary(self):
        flags = []
        for name in ("fully_probabilistic", "standard", "bpa", "oca", "vpda"):
            flags.append(("+" if getattr(self, name) else "-") + name)
        return " ".join(flags)


def _rule_str(q, x, a, dist):
    terms = " + ".join(f"{p} {t[0]}{''.join(t[1])}" for t, p in dist.entries)
    return f"{q} {x} -{a}-> {terms}"


def classify(machine):
    """Check each subclass definition and report violations rule by rule."""
    diags = []

    per_head_action = {}
    for q, x, a, dist in machine.rules:
        per_head_action.setdefault((q, x, a), set()).add(dist)
    fully_probabilistic = True
    for (q, x, a), dists in per_head_action.items():
        if len(dists) > 1:
            fully_probabilistic = False
            diags.append(f"not fully probabilistic: head {q}{x} has {len(dists)} distributions under {a}")

    standard = True
    for q, x, a, dist in machine.rules:
        if not dist.is_dirac():
            standard = False
            diags.append(f"not standard: non-Dirac rule {_rule_str(q, x, a, dist)}")

    bpa = len(machine.controls) == 1
    if not bpa:
        diags.append(f"not bpa: {len(machine.controls)} control states")

    oca = set(machine.stack_alphabet) == {"I", "Z"}
    if not oca:
        diags.append("not oca: stack alphabet is not {I, Z}")
    else:
        for q, x, a, dist in machine.rules:
            for p, alpha in dist.support:
                ok = alpha in ((), ("I",), ("I", "I")) if x == "I" else alpha in (("Z",), ("I", "Z"))
                if not ok:
                    oca = False
                    diags.append(f"not oca: rule {_rule_str(q, x, a, dist)} targets {p}{''.join(alpha)}")

    if machine.vpda_partition is None:
        vpda = False
        diags.append("not vpda: no action partition declared")
    else:
        vpda = True
        expected_len = {"r": 0, "i": 1, "c": 2}
        for q, x, a, dist in machine.rules:
            cls = machine.action_class(a)
            if cls is None:
                vpda = False
                diags.append(f"not vpda: action {a!r} missing from the declared partition")
                continue
            for p, alpha in dist.support:
                if len(alpha) != expected_len[cls]:
                    vpda = False
                    diags.append(
                        f"not vpda: {cls}-action rule {_rule_str(q, x, a, dist)} targets a word of length {len(alpha)}"
                    )
    return SubclassReport(fully_probabilistic, standard, bpa, oca, vpda, diags)


def step(machine, config):
    """Outgoing transitions of a configuration in the induced pLTS.

    Empty-stack configurations are dead and return [].  For qXb each rule
    qX -a-> d contributes (a, d') with d'(p alpha b) = d(p alpha).
    """
    if not config.stack:
        return []
    top, rest = config.stack[0], config.stack[1:]
    out = []
    for action, dist in machine.head_rules(config.control, top):
        entries = {}
        for (p, alpha), prob in dist.entries:
            target = Config(p, tuple(alpha) + rest)
            entries[target] = entries.get(target, Fraction(0)) + prob
        out.append((action, Dist(entries)))
    return out


@dataclass
class Fragment:
    """Depth-bounded explicit piece of an induced pLTS.

    `plts` indexes the discovered configurations; states at `depth` distance
    from the roots form the frontier and have their outgoing transitions
    omitted.  `levels[i]` is the distance of state i from the root set.
    """

    plts: Plts
    configs: list
    ids: dict
    roots: list
    frontier: set
    levels: dict


def reachable_fragment(machine, roots, depth, budget=10000):
    """Breadth-first expansion of the induced pLTS up to `depth` steps from `roots`."""
    configs = []
    ids = {}
    levels = {}

    def intern(config, level):
        if config not in ids:
            if len(configs) >= budget:
                raise ResourceGuardError(
                    f"fragment budget {budget} exceeded after {len(configs)} states",
                    size=len(configs),
                )
            ids[config] = len(configs)
            configs.append(config)
            levels[config] = level
        return ids[config]

    root_ids = [intern(c, 0) for c in roots]
    transitions = []
    frontier = set()
    queue = list(dict.fromkeys(roots))
    while queue:
        config = queue.pop(0)
        level = levels[config]
        if level >= depth:
            frontier.add(ids[config])
            continue
        for action, dist in step(machine, config):
            entries = {}
            for target, prob in dist.entries:
                known = target in ids
                tid = intern(target, level + 1)
                if not known:
                    queue.append(target)
                entries[tid] = prob
            transitions.append((ids[config], action, Dist(entries)))

    names = []
    used = set()
    for config in configs:
        name = config_str(config)
        while name in used:
            name += "'"
        used.add(name)
        names.append(name)
    actions = tuple(dict.fromkeys(machine.actions))
    plts = Plts(tuple(names), actions, tuple(transitions))
    return Fragment(plts, configs, ids, root_ids, frontier, {ids[c]: l for c, l in levels.items()})

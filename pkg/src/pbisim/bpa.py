"""Single-control-state support: norms and the concatenation-congruence check."""

from dataclasses import dataclass

from .errors import InvalidInputError
from .machines import Config, classify
from .oracle import BoundedChecker, PpdaSystem


def _require_bpa(machine):
    report = classify(machine)
    if not report.bpa:
        raise InvalidInputError("machine does not classify as a pBPA: " + "; ".join(report.diagnostics))


@dataclass(frozen=True)
class NormTable:
    """Least number of protocol rounds to empty the stack from each symbol.

    `macrostep` maps a symbol to an int or None (unnormed); the lifted-system
    value is exactly three times the macrostep value, exposed for convenience.
    """

    macrostep: dict

    def lifted(self, symbol):
        v = self.macrostep[symbol]
        return None if v is None else 3 * v

    def of_word(self, word):
        total = 0
        for sym in word:
            v = self.macrostep[sym]
            if v is None:
                return None
            total += v
        return total


def norms(machine):
    """Dijkstra-style settling of the least fixpoint of
    norm(X) = 1 + min over rules and support words of the word's norm."""
    _require_bpa(machine)
    control = machine.controls[0]
    alternatives = {x: [] for x in machine.stack_alphabet}
    for _q, x, _a, dist in machine.rules:
        for (_p, alpha), _prob in dist.entries:
            alternatives[x].append(alpha)

    settled = {}
    while True:
        best_symbol, best_value = None, None
        for x, words in alternatives.items():
            if x in settled:
                continue
            for alpha in words:
                if all(sym in settled for sym in alpha):
                    value = 1 + sum(settled[sym] for sym in alpha)
                    if best_value is None or value < best_value:
                        best_symbol, best_value = x, value
        if best_symbol is None:
            break
        settled[best_symbol] = best_value
    table = {x: settled.get(x) for x in machine.stack_alphabet}
    return NormTable(table)


def norm_witness(machine, symbol):
    """A shortest emptying derivation for a normed symbol: a list of
    (word before, word after) macrostep pairs, replayable against the rules."""
    table = norms(machine)
    if table.macrostep[symbol] is None:
        return None
    control = machine.controls[0]
    word = (symbol,)
    path = []
    while word:
        top, rest = word[0], word[1:]
        best = None
        for _a, dist in machine.head_rules(control, top):
            for (_p, alpha), _prob in dist.entries:
                value = table.of_word(alpha)
                if value is not None and (best is None or value < best[0]):
                    best = (value, alpha)
        nxt = best[1] + rest
        path.append((word, nxt))
        word = nxt
    return path


@dataclass(frozen=True)
class CongruenceReport:
    checked: bool
    reason: str
    left_equiv: bool | None
    right_equiv: bool | None
    concat_equiv: bool | None

    @property
    def implication_holds(self):
        if not self.checked:
            return None
        return (not (self.left_equiv and self.right_equiv)) or self.concat_equiv


def congruence_check(machine, alpha, alpha2, beta, beta2, n):
    """Instance test of the concatenation congruence at level n.

    Requires every stack symbol to enable at least one action; otherwise the
    check is skipped and reported as such.
    """
    _require_bpa(machine)
    control = machine.controls[0]
    for x in machine.stack_alphabet:
        if not machine.head_rules(control, x):
            return CongruenceReport(False, f"symbol {x} enables no action", None, None, None)

    checker = BoundedChecker(PpdaSystem(machine))

    def cfg(word):
        return Config(control, tuple(word))

    left = checker.equiv(cfg(alpha), cfg(alpha2), n)
    right = checker.equiv(cfg(beta), cfg(beta2), n)
    concat = checker.equiv(cfg(tuple(alpha) + tuple(beta)), cfg(tuple(alpha2) + tuple(beta2)), n)
    return CongruenceReport(True, "", left, right, concat)

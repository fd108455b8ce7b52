"""Text formats for explicit systems (.plts) and pushdown machines (.ppda).

.plts:
    plts
    states: s t1 t2 u
    actions: a b
    s -a-> 1/3 t1 + 2/3 t2

.ppda (the vpda(...) clause and the actions: line are optional):
    ppda vpda(r=ar, i=ai, c=ac)
    controls: p q
    stack: X Y Z
    p X -a-> 1/2 q X X + 1/2 p

Probabilities are integers or num/den fractions; a bare control state in a
rule target means the empty word, which can also be written `_`.  Full-line
comments start with `#`.  Parsing and serialization round-trip up to
whitespace and canonical ordering.
"""

import re
from fractions import Fraction

from .core import Dist, Plts
from .errors import InvalidInputError, ParseError
from .machines import Config, Ppda

_TRANS_RE = re.compile(r"^(?P<left>.*?)-(?P<action>\S+?)->(?P<right>.*)$")
_VPDA_RE = re.compile(r"^vpda\((?P<body>.*)\)$")

MAX_EXPANDED_COUNTER = 1_000_000


def _parse_prob(token, lineno):
    if re.fullmatch(r"\d+", token):
        return Fraction(int(token))
    m = re.fullmatch(r"(\d+)/(\d+)", token)
    if not m:
        raise ParseError(f"expected a probability, got {token!r}", lineno)
    if int(m.group(2)) == 0:
        raise ParseError(f"zero denominator in {token!r}", lineno)
    return Fraction(int(m.group(1)), int(m.group(2)))


def _logical_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _split_terms(tokens, lineno):
    """Group `p x y + p x ...` token runs into (prob token, tail tokens) terms."""
    terms = []
    current = []
    for tok in tokens:
        if tok == "+":
            if not current:
                raise ParseError("empty term before '+'", lineno)
            terms.append(current)
            current = []
        else:
            current.append(tok)
    if not current:
        raise ParseError("empty trailing term", lineno)
    terms.append(current)
    return terms


def parse_plts(text):
    states = None
    actions = None
    transitions = []
    index = {}
    header_seen = False
    for lineno, line in _logical_lines(text):
        if not header_seen:
            if line != "plts":
                raise ParseError(f"expected 'plts' header, got {line!r}", lineno)
            header_seen = True
            continue
        if line.startswith("states:"):
            states = tuple(line[len("states:"):].split())
            index = {s: i for i, s in enumerate(states)}
            if len(index) != len(states):
                raise ParseError("duplicate state name", lineno)
            continue
        if line.startswith("actions:"):
            actions = tuple(line[len("actions:"):].split())
            continue
        m = _TRANS_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse transition line {line!r}", lineno)
        if states is None or actions is None:
            raise ParseError("transition before states:/actions: declarations", lineno)
        src_tokens = m.group("left").split()
        if len(src_tokens) != 1:
            raise ParseError(f"expected one source state, got {m.group('left')!r}", lineno)
        src = src_tokens[0]
        action = m.group("action")
        if src not in index:
            raise ParseError(f"unknown state {src!r}", lineno)
        if action not in actions:
            raise ParseError(f"unknown action {action!r}", lineno)
        entries = {}
        for term in _split_terms(m.group("right").split(), lineno):
            if len(term) != 2:
                raise ParseError(f"expected 'prob state', got {' '.join(term)!r}", lineno)
            prob = _parse_prob(term[0], lineno)
            if term[1] not in index:
                raise ParseError(f"unknown state {term[1]!r}", lineno)
            tgt = index[term[1]]
            entries[tgt] = entries.get(tgt, Fraction(0)) + prob
        try:
            dist = Dist(entries)
        except InvalidInputError as exc:
            raise ParseError(f"bad distribution on transition from {src!r}: {exc}", lineno) from None
        transitions.append((index[src], action, dist))
    if not header_seen:
        raise ParseError("empty input, expected 'plts' header")
    if states is None:
        raise ParseError("missing states: declaration")
    if actions is None:
        raise ParseError("missing actions: declaration")
    try:
        return Plts(states, actions, tuple(transitions))
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from None


def _fmt_prob(p):
    return str(p)


def serialize_plts(plts, comments=()):
    lines = [f"# {c}" for c in comments]
    lines.append("plts")
    lines.append("states: " + " ".join(plts.state_names))
    lines.append("actions: " + " ".join(plts.actions))
    for src, action, dist in plts.transitions:
        terms = " + ".join(f"{_fmt_prob(p)} {plts.state_names[s]}" for s, p in dist.entries)
        lines.append(f"{plts.state_names[src]} -{action}-> {terms}")
    return "\n".join(lines) + "\n"


def _parse_vpda_clause(clause, lineno):
    m = _VPDA_RE.match(clause)
    if not m:
        raise ParseError(f"cannot parse vpda clause {clause!r}", lineno)
    partition = {"r": (), "i": (), "c": ()}
    body = m.group("body").strip()
    if body:
        for part in body.split(";") if ";" in body else re.split(r",(?=\s*[ric]\s*=)", body):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ParseError(f"bad vpda class {part!r}", lineno)
            key, _, val = part.partition("=")
            key = key.strip()
            if key not in partition:
                raise ParseError(f"unknown vpda class {key!r}", lineno)
            partition[key] = tuple(t for t in re.split(r"[\s,]+", val.strip()) if t)
    return partition


def parse_ppda(text):
    controls = None
    stack = None
    actions = None
    partition = None
    rules = []
    header_seen = False
    for lineno, line in _logical_lines(text):
        if not header_seen:
            parts = line.split(None, 1)
            if parts[0] != "ppda":
                raise ParseError(f"expected 'ppda' header, got {line!r}", lineno)
            if len(parts) == 2:
                partition = _parse_vpda_clause(parts[1].strip(), lineno)
            header_seen = True
            continue
        if line.startswith("controls:"):
            controls = tuple(line[len("controls:"):].split())
            continue
        if line.startswith("stack:"):
            stack = tuple(line[len("stack:"):].split())
            continue
        if line.startswith("actions:"):
            actions = tuple(line[len("actions:"):].split())
            continue
        m = _TRANS_RE.match(line)
        if not m:
            raise ParseError(f"cannot parse rule line {line!r}", lineno)
        if controls is None or stack is None:
            raise ParseError("rule before controls:/stack: declarations", lineno)
        head = m.group("left").split()
        if len(head) != 2:
            raise ParseError(f"expected 'control symbol' head, got {m.group('left')!r}", lineno)
        control, symbol = head
        action = m.group("action")
        if control not in controls:
            raise ParseError(f"unknown control state {control!r}", lineno)
        if symbol not in stack:
            raise ParseError(f"unknown stack symbol {symbol!r}", lineno)
        entries = {}
        for term in _split_terms(m.group("right").split(), lineno):
            prob = _parse_prob(term[0], lineno)
            if len(term) < 2:
                raise ParseError(f"term lacks a control state: {' '.join(term)!r}", lineno)
            tgt_control = term[1]
            if tgt_control not in controls:
                raise ParseError(f"unknown control state {tgt_control!r}", lineno)
            syms = [t for t in term[2:] if t != "_"]
            if len(term) - 2 != len(syms) and len(term) - 2 > 1:
                raise ParseError("misplaced '_' in rule target", lineno)
            if len(syms) > 2:
                raise ParseError(f"target word longer than 2: {' '.join(term[2:])!r}", lineno)
            for s in syms:
                if s not in stack:
                    raise ParseError(f"unknown stack symbol {s!r}", lineno)
            key = (tgt_control, tuple(syms))
            entries[key] = entries.get(key, Fraction(0)) + prob
        try:
            dist = Dist(entries)
        except InvalidInputError as exc:
            raise ParseError(
                f"bad distribution on rule {control} {symbol} -{action}->: {exc}", lineno
            ) from None
        rules.append((control, symbol, action, dist))
    if not header_seen:
        raise ParseError("empty input, expected 'ppda' header")
    if controls is None:
        raise ParseError("missing controls: declaration")
    if stack is None:
        raise ParseError("missing stack: declaration")
    if actions is None:
        seen = list(dict.fromkeys(a for _, _, a, _ in rules))
        if partition:
            for key in ("r", "i", "c"):
                for a in partition[key]:
                    if a not in seen:
                        seen.append(a)
        actions = tuple(seen)
    try:
        return Ppda(controls, stack, actions, tuple(rules), vpda_partition=partition)
    except InvalidInputError as exc:
        raise ParseError(str(exc)) from None


def serialize_ppda(machine, comments=()):
    lines = [f"# {c}" for c in comments]
    header = "ppda"
    if machine.vpda_partition is not None:
        parts = []
        for key in ("r", "i", "c"):
            parts.append(f"{key}=" + " ".join(machine.vpda_partition.get(key, ())))
        header += " vpda(" + ", ".join(parts) + ")"
    lines.append(header)
    lines.append("controls: " + " ".join(machine.controls))
    lines.append("stack: " + " ".join(machine.stack_alphabet))
    lines.append("actions: " + " ".join(machine.actions))
    for control, symbol, action, dist in machine.rules:
        terms = " + ".join(
            f"{_fmt_prob(p)} " + " ".join((c,) + alpha) for (c, alpha), p in dist.entries
        )
        lines.append(f"{control} {symbol} -{action}-> {terms}")
    return "\n".join(lines) + "\n"


def _expand_symbol_token(token, stack, lineno=None):
    """One stack token, possibly `sym^exp` with a decimal or 0b exponent."""
    if "^" in token:
        sym, _, exp = token.partition("^")
        if sym not in stack:
            raise ParseError(f"unknown stack symbol {sym!r}", lineno)
        if exp.startswith("0b"):
            if not re.fullmatch(r"0b[01]+", exp):
                raise ParseError(f"bad binary exponent {exp!r}", lineno)
            count = int(exp, 2)
        elif re.fullmatch(r"\d+", exp):
            count = int(exp)
        else:
            raise ParseError(f"bad exponent {exp!r}", lineno)
        if count > MAX_EXPANDED_COUNTER:
            raise ParseError(
                f"refusing to expand {token!r} ({count} symbols); use the counter form", lineno
            )
        return (sym,) * count
    if token not in stack:
        raise ParseError(f"unknown stack symbol {token!r}", lineno)
    return (token,)


def _parse_compact_config(text, controls, stack):
    """Backtracking parse of an unseparated configuration like pXZ or pI^12Z."""
    symbols = sorted(stack, key=len, reverse=True)

    def parse_stack(rest):
        if not rest:
            return ()
        for sym in symbols:
            if not rest.startswith(sym):
                continue
            tail = rest[len(sym):]
            m = re.match(r"\^(0b[01]+|\d+)", tail)
            if m:
                count = int(m.group(1), 2) if m.group(1).startswith("0b") else int(m.group(1))
                if count > MAX_EXPANDED_COUNTER:
                    raise ParseError(f"refusing to expand {text!r}; use spaced form")
                parsed = parse_stack(tail[m.end():])
                if parsed is not None:
                    return (sym,) * count + parsed
            parsed = parse_stack(tail)
            if parsed is not None:
                return (sym,) + parsed
        return None

    for control in sorted(controls, key=len, reverse=True):
        if not text.startswith(control):
            continue
        rest = text[len(control):]
        if rest == "_":
            return Config(control, ())
        parsed = parse_stack(rest)
        if parsed is not None:
            return Config(control, parsed)
    raise ParseError(f"cannot parse configuration {text!r}")


def parse_config(text, machine):
    """Configuration from CLI text: `p X Z`, `p.X.Z`, `pXZ`, or `p I^12 Z`."""
    text = text.strip()
    controls = machine.controls
    stack = machine.stack_alphabet
    if " " in text or "." in text:
        tokens = [t for t in re.split(r"[\s.]+", text) if t]
        control = tokens[0]
        if control not in controls:
            raise ParseError(f"unknown control state {control!r}")
        syms = ()
        for tok in tokens[1:]:
            if tok == "_":
                continue
            syms += _expand_symbol_token(tok, stack)
        return Config(control, syms)
    if text in controls:
        return Config(text, ())
    return _parse_compact_config(text, controls, stack)


def parse_counter_text(text, machine):
    """Counter configuration (control, m) without expanding the I-run, so a
    binary exponent of any size parses; accepts pZ, pIIZ, pI^12Z, p I^0b110 Z."""
    text = text.strip()
    tokens = [t for t in re.split(r"[\s.]+", text) if t] if (" " in text or "." in text) else None
    if tokens is None:
        for control in sorted(machine.controls, key=len, reverse=True):
            if text.startswith(control):
                tokens = [control, text[len(control):]]
                break
        else:
            raise ParseError(f"cannot parse counter configuration {text!r}")
        rest = tokens[1]
        m = re.fullmatch(r"(?:I\^(0b[01]+|\d+)|(I*))Z", rest)
        if not m:
            raise ParseError(f"cannot parse counter stack {rest!r}")
        if m.group(1) is not None:
            count = int(m.group(1), 2) if m.group(1).startswith("0b") else int(m.group(1))
        else:
            count = len(m.group(2))
        return tokens[0], count
    control = tokens[0]
    if control not in machine.controls:
        raise ParseError(f"unknown control state {control!r}")
    count = 0
    body = tokens[1:]
    if not body or body[-1] != "Z":
        raise ParseError(f"counter configuration must end in Z: {text!r}")
    for tok in body[:-1]:
        m = re.fullmatch(r"I\^(0b[01]+|\d+)", tok)
        if m:
            count += int(m.group(1), 2) if m.group(1).startswith("0b") else int(m.group(1))
        elif re.fullmatch(r"I+", tok):
            count += len(tok)
        else:
            raise ParseError(f"unexpected token {tok!r} in counter configuration")
    return control, count


def sniff_kind(text):
    for _lineno, line in _logical_lines(text):
        word = line.split(None, 1)[0]
        if word in ("plts", "ppda"):
            return word
        break
    raise ParseError("file does not start with a 'plts' or 'ppda' header")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    kind = sniff_kind(text)
    if kind == "plts":
        return kind, parse_plts(text)
    return kind, parse_ppda(text)


def lift_comments(lifted):
    """Human-readable provenance annotations for a lifted machine or system."""
    out = ["lifted system; fresh objects and probability actions listed below"]
    tags = getattr(lifted, "fresh_tags", None)
    if tags is None:
        tags = {}
        for name, tag in zip(lifted.plts.state_names, lifted.state_tags):
            if tag[0] != "orig":
                tags[name] = tag
    for name, tag in tags.items():
        if tag[0] == "dist":
            out.append(f"state {name} : distribution state")
        elif tag[0] == "set":
            out.append(f"state {name} : support-subset state")
    for name, tag in lifted.action_tags.items():
        if tag[0] == "prob":
            out.append(f"action {name} : probability action {tag[1]}")
        elif tag[0] == "hash":
            out.append(f"action {name} : pick marker")
    return out

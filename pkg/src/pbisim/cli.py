"""Command-line interface.

Exit codes: 0 bisimilar / success, 1 not-bisimilar, 2 unknown or
inconclusive, 3 input error, 4 resource guard tripped.
"""

import argparse
import json
import random
import sys
from pathlib import Path

from . import bpa, formats, gadgets, oca, reduction, vpda
from .core import Dist, bisim_finite
from fractions import Fraction
from .errors import InvalidInputError, ParseError, PbisimError, ResourceGuardError
from .machines import Config, Ppda, classify, config_str
from .oracle import BoundedChecker, ExplicitSystem, PpdaSystem, full_equiv_finite
from .session import Session

EXIT_BISIMILAR = 0
EXIT_OK = 0
EXIT_NOT_BISIMILAR = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3
EXIT_GUARD = 4


def _load(path):
    try:
        return formats.load_model(path)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}") from None


# -- validate ----------------------------------------------------------------


def cmd_validate(args):
    kind, model = _load(args.file)
    if kind == "plts":
        print(f"plts: {model.num_states} states, {len(model.actions)} actions, "
              f"{len(model.transitions)} transitions")
        print(f"fully_probabilistic: {model.is_fully_probabilistic()}")
        print(f"standard: {model.is_standard()}")
        return EXIT_OK
    report = classify(model)
    print(f"ppda: {len(model.controls)} controls, {len(model.stack_alphabet)} stack symbols, "
          f"{len(model.rules)} rules")
    for flag in ("fully_probabilistic", "standard", "bpa", "oca", "vpda"):
        print(f"{flag}: {getattr(report, flag)}")
    for diag in report.diagnostics:
        print(f"  - {diag}")
    return EXIT_OK


# -- classes -------------------------------------------------------------------


def cmd_classes(args):
    kind, model = _load(args.file)
    if kind != "plts":
        raise InvalidInputError("classes requires an explicit .plts file")
    partition = bisim_finite(model)
    for block in partition.blocks:
        print("{" + " ".join(model.state_names[s] for s in block) + "}")
    if args.report_dir:
        from . import report

        report.report_plts(model, args.report_dir, title=Path(args.file).stem)
        print(f"report written to {args.report_dir}", file=sys.stderr)
    return EXIT_OK


# -- check ---------------------------------------------------------------------


def _verdict(code, text, evidence=""):
    print(text + (f" ({evidence})" if evidence else ""))
    return code


def _check_plts(model, args):
    s = model.state_id(args.left)
    t = model.state_id(args.right)
    partition = bisim_finite(model)
    if partition.same_block(s, t):
        return _verdict(EXIT_BISIMILAR, "bisimilar", "partition refinement fixpoint")
    checker = BoundedChecker(ExplicitSystem(model))
    level = next(n for n in range(1, model.num_states + 1) if not checker.equiv(s, t, n))
    return _verdict(EXIT_NOT_BISIMILAR, f"not-bisimilar (n={level})", "partition refinement")


def _bounded_scan(system, c1, c2, bound):
    checker = BoundedChecker(system)
    for n in range(1, bound + 1):
        if not checker.equiv(c1, c2, n):
            return n
    return None


def _check_ppda(model, args):
    system = PpdaSystem(model)
    report = classify(model)
    method = args.method
    if method == "auto":
        if report.vpda:
            method = "vpda"
        elif report.oca:
            method = "oca-filter"
        else:
            method = "finite"

    if method in ("finite", "vpda", "bounded"):
        c1 = formats.parse_config(args.left, model)
        c2 = formats.parse_config(args.right, model)

    if method == "finite":
        try:
            if full_equiv_finite(system, c1, c2, budget=args.budget):
                return _verdict(EXIT_BISIMILAR, "bisimilar", "finite reachable fragment")
            n = _bounded_scan(system, c1, c2, args.n)
            evidence = f"n={n}" if n is not None else "finite reachable fragment"
            return _verdict(EXIT_NOT_BISIMILAR, f"not-bisimilar ({evidence})",
                            "partition refinement on the reachable fragment")
        except ResourceGuardError:
            if args.method == "finite":
                raise
            method = "bounded"

    if method == "vpda":
        if not report.vpda:
            raise InvalidInputError("vpda method on a machine that is not a vpda")
        answer = vpda.vpda_decide(model, c1, c2, max_controls=args.max_controls)
        if answer:
            return _verdict(EXIT_BISIMILAR, "bisimilar", "force-relation decision")
        n = _bounded_scan(system, c1, c2, args.n)
        evidence = f"n={n}" if n is not None else "force-relation decision"
        return _verdict(EXIT_NOT_BISIMILAR, f"not-bisimilar ({evidence})", "")

    if method == "oca-filter":
        if not report.oca:
            raise InvalidInputError("oca-filter method on a machine that is not a pOCA")
        ctl1, m1 = formats.parse_counter_text(args.left, model)
        ctl2, m2 = formats.parse_counter_text(args.right, model)
        cc1 = oca.CounterConfig(ctl1, m1)
        cc2 = oca.CounterConfig(ctl2, m2)
        if cc1 == cc2:
            return _verdict(EXIT_BISIMILAR, "bisimilar", "identical configurations")
        inc = oca.inc_set(model)
        verdict = oca.not_bisim_filter(model, cc1, cc2, cap=args.cap, inc=inc)
        if verdict.not_bisimilar:
            return _verdict(EXIT_NOT_BISIMILAR, "not-bisimilar", verdict.reason)
        try:
            c1 = formats.parse_config(args.left, model)
            c2 = formats.parse_config(args.right, model)
        except ParseError:
            return _verdict(
                EXIT_UNKNOWN, "unknown",
                f"filter: {verdict.reason}; configurations too large to unfold for a bounded scan",
            )
        n = _bounded_scan(system, c1, c2, args.n)
        if n is not None:
            return _verdict(EXIT_NOT_BISIMILAR, f"not-bisimilar (n={n})", "bounded scan")
        return _verdict(
            EXIT_UNKNOWN,
            "unknown",
            f"filter: {verdict.reason}; no separating level up to n={args.n} "
            "(method limitation: the full one-counter decision procedure is out of scope)",
        )

    if method == "bounded":
        n = _bounded_scan(system, c1, c2, args.n)
        if n is not None:
            return _verdict(EXIT_NOT_BISIMILAR, f"not-bisimilar (n={n})", "bounded scan")
        return _verdict(
            EXIT_UNKNOWN, "unknown",
            f"equivalent up to n={args.n} (method limitation: bounded scans prove only inequivalence)",
        )
    raise InvalidInputError(f"method {method!r} not applicable")


def cmd_check(args):
    kind, model = _load(args.file)
    if kind == "plts":
        if args.method not in ("auto", "finite"):
            raise InvalidInputError("explicit systems support only the finite method")
        return _check_plts(model, args)
    return _check_ppda(model, args)


# -- reduce ----------------------------------------------------------------------


def cmd_reduce(args):
    kind, model = _load(args.file)
    if args.mode == "plts":
        if kind != "plts":
            raise InvalidInputError("reduce --mode plts requires an explicit .plts input")
        lifted = reduction.lift_plts(model, cap=args.cap)
        text = formats.serialize_plts(lifted.plts, comments=formats.lift_comments(lifted))
    else:
        if kind != "ppda":
            raise InvalidInputError(f"reduce --mode {args.mode} requires a .ppda input")
        fn = reduction.lift_ppda_stack if args.mode == "stack" else reduction.lift_ppda_state
        lifted = fn(model, cap=args.cap)
        text = formats.serialize_ppda(lifted.ppda, comments=formats.lift_comments(lifted))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- norms ------------------------------------------------------------------------


def cmd_norms(args):
    kind, model = _load(args.file)
    if kind != "ppda":
        raise InvalidInputError("norms requires a .ppda file")
    table = bpa.norms(model)
    print("symbol\tmacrosteps\tlifted")
    for symbol in model.stack_alphabet:
        value = table.macrostep[symbol]
        if value is None:
            print(f"{symbol}\tunnormed\tunnormed")
        else:
            print(f"{symbol}\t{value}\t{3 * value}")
    return EXIT_OK


# -- gen --------------------------------------------------------------------------


def _write_instance(out_dir, name, text, manifest):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / f"{name}.ppda"
    model_path.write_text(text, encoding="utf-8")
    manifest_path = out_dir / f"{name}.manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {model_path} and {manifest_path}")


def random_afa(rng, num_states):
    states = tuple(f"q{i}" for i in range(num_states))
    delta = {
        q: (rng.choice(["and", "or"]), rng.choice(states), rng.choice(states))
        for q in states
    }
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return gadgets.OneLetterAfa(states, delta, states[0], accepting)


def random_reach_game(rng, num_controls=3, num_symbols=2):
    """Random game with rank-decreasing pushes so the reachable graph is finite."""
    controls = tuple(f"p{i}" for i in range(num_controls))
    symbols = tuple(f"X{i}" for i in range(num_symbols))
    rank = {s: i for i, s in enumerate(symbols)}
    rules = []
    for p in controls:
        for x in symbols:
            count = rng.choice([0, 1, 1, 2])
            targets = []
            for _ in range(count):
                q = rng.choice(controls)
                if count == 2:
                    targets.append((q, (rng.choice(symbols[: rank[x] + 1]),)))
                else:
                    kind = rng.choice(["stay", "push", "stay"])
                    if kind == "push" and rank[x] > 0:
                        below = rng.choice(symbols[: rank[x]])
                        above = rng.choice(symbols[: rank[x]])
                        targets.append((q, (above, below)))
                    else:
                        targets.append((q, (rng.choice(symbols[: rank[x] + 1]),)))
            for q, alpha in dict.fromkeys(targets):
                rules.append((p, x, "a", Dist({(q, alpha): 1})))
    machine = Ppda(controls, symbols, ("a",), tuple(rules))
    owner = {p: rng.choice([0, 1]) for p in controls}
    initial = Config(controls[0], (symbols[-1],))
    return gadgets.ReachGame(machine, owner, initial)


def cmd_gen(args):
    rng = random.Random(args.seed)
    if args.kind == "afa":
        afa = gadgets.example_afa() if args.example else random_afa(rng, args.states)
        machine, (left, right) = gadgets.afa_to_poca(afa)
        acc_table = {
            q: [gadgets.acc(afa, q, n) for n in range(args.horizon + 1)] for q in afa.states
        }
        manifest = {
            "kind": "afa_to_poca",
            "afa": {
                "states": list(afa.states),
                "delta": {q: list(afa.delta[q]) for q in afa.states},
                "initial": afa.initial,
                "accepting": sorted(afa.accepting),
            },
            "provenance": "acceptance table evaluated by the inductive definition",
            "acc_table": acc_table,
            "top_pair": [config_str(left), config_str(right)],
            "pairs": [
                {
                    "c1": f"{q} I^{n} Z",
                    "c2": f"{gadgets.prime(q)} I^{n} Z",
                    "expected_bisimilar": not acc_table[q][n],
                }
                for q in afa.states
                for n in range(args.horizon + 1)
            ],
        }
        _write_instance(args.out, args.name or "afa_instance",
                        formats.serialize_ppda(machine), manifest)
        return EXIT_OK
    if args.kind == "game":
        game_inst = random_reach_game(rng)
        machine, (left, right) = gadgets.game_to_pvpda(game_inst)
        winner = gadgets.solve_reach_game_finite(game_inst)
        manifest = {
            "kind": "game_to_pvpda",
            "provenance": "attractor computation on the explicit game graph",
            "owner": game_inst.owner,
            "initial": config_str(game_inst.initial),
            "winner": winner,
            "pairs": [
                {
                    "c1": config_str(left),
                    "c2": config_str(right),
                    "expected_bisimilar": winner == 0,
                }
            ],
        }
        _write_instance(args.out, args.name or "game_instance",
                        formats.serialize_ppda(machine), manifest)
        return EXIT_OK
    # gadget: a random base system with one AND or OR gadget on top
    builder = gadgets.PltsBuilder()
    names = [f"b{i}" for i in range(5)]
    for name in names:
        builder.state(name)
    for name in names:
        if rng.random() < 0.8:
            targets = rng.sample(names, k=rng.choice([1, 2]))
            share = Fraction(1, len(targets))
            builder.transition(name, "a", {t: share for t in targets})
    t1, t12, t2, t22 = (rng.choice(names) for _ in range(4))
    if args.gadget == "and":
        gadgets.and_gadget(builder, "s", "s_prime", t1, t12, t2, t22)
    else:
        gadgets.or_gadget(builder, "s", "s_prime", t1, t12, t2, t22)
    model = builder.build()
    partition = bisim_finite(model)
    same = lambda a, b: partition.same_block(model.state_id(a), model.state_id(b))
    expected = (same(t1, t12) and same(t2, t22)) if args.gadget == "and" else (
        same(t1, t12) or same(t2, t22)
    )
    manifest = {
        "kind": f"{args.gadget}_gadget",
        "provenance": "partition refinement on the composed system",
        "leaves": [t1, t12, t2, t22],
        "precondition_t1_not_t22": not same(t1, t22),
        "pairs": [{"c1": "s", "c2": "s_prime", "expected_bisimilar": bool(expected)}],
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = args.name or f"{args.gadget}_gadget"
    (out_dir / f"{name}.plts").write_text(formats.serialize_plts(model), encoding="utf-8")
    (out_dir / f"{name}.manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                                   encoding="utf-8")
    print(f"wrote {out_dir / (name + '.plts')} and {out_dir / (name + '.manifest.json')}")
    return EXIT_OK


# -- play / serve -----------------------------------------------------------------


def _session_for(args):
    from .server import ModelRegistry

    registry = ModelRegistry()
    name = registry.load(args.file)
    system, s1, s2, name_of = registry.session_parts(name, args.left, args.right)
    return Session(
        model_name=name,
        system=system,
        s1=s1,
        s2=s2,
        human_side=args.side,
        horizon=args.horizon,
        name_of=name_of,
    )


def cmd_play(args):
    session = _session_for(args)
    out = sys.stdout
    while True:
        state = session.describe()
        out.write(f"\n== round {state['rounds_used']}/{session.horizon} "
                  f"(lifted {state['lifted_rounds']}) status={state['status']}\n")
        out.write(json.dumps(state["position"], indent=2) + "\n")
        if state["status"] != "active":
            out.write(f"result: {state['status']}\n")
            return EXIT_OK
        moves = state["legal_moves"]
        for i, move in enumerate(moves):
            out.write(f"  [{i}] {json.dumps(move)}\n")
        out.write("move number> ")
        out.flush()
        line = sys.stdin.readline()
        if not line:
            return EXIT_OK
        line = line.strip()
        if line in ("q", "quit", "exit"):
            return EXIT_OK
        try:
            session.play(moves[int(line)])
        except (ValueError, IndexError):
            out.write("enter one of the listed move numbers\n")
        except InvalidInputError as exc:
            out.write(f"rejected: {exc}\n")


def cmd_serve(args):
    from .server import ModelRegistry, serve

    registry = ModelRegistry()
    for path in args.models:
        name = registry.load(path)
        print(f"loaded model {name!r}")
    static_dir = Path(args.static) if args.static else None
    serve(registry, args.port, host=args.host, static_dir=static_dir)
    return EXIT_OK


# -- report -----------------------------------------------------------------------


def cmd_report(args):
    from . import report

    kind, model = _load(args.file)
    if kind == "plts":
        report.report_plts(model, args.out, title=Path(args.file).stem)
    else:
        if not args.roots:
            raise InvalidInputError("report on a machine needs --roots")
        roots = [formats.parse_config(text, model) for text in args.roots]
        report.report_fragment(model, roots, args.depth, args.out,
                               title=f"{Path(args.file).stem} (depth {args.depth})")
    print(f"report written to {args.out}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pbisim",
        description="probabilistic bisimilarity toolkit for transition systems and pushdown automata",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a model and print its subclass report")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("classes", help="print the bisimilarity classes of an explicit system")
    p.add_argument("file")
    p.add_argument("--report-dir", default=None, help="also write tables and a figure")
    p.set_defaults(fn=cmd_classes)

    p = sub.add_parser("check", help="decide or bound bisimilarity of two states/configurations")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--n", type=int, default=12, help="bound for bounded scans")
    p.add_argument("--method", default="auto",
                   choices=["auto", "finite", "vpda", "oca-filter", "bounded"])
    p.add_argument("--budget", type=int, default=20000, help="state budget for finite closure")
    p.add_argument("--cap", type=int, default=50, help="counter cap for the oca filter")
    p.add_argument("--max-controls", type=int, default=5, help="vpda control-state guard")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reduce", help="emit the nondeterministic lift of a model")
    p.add_argument("file")
    p.add_argument("--mode", default="plts", choices=["plts", "stack", "state"])
    p.add_argument("--cap", type=int, default=100000, help="size-estimate cap")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("norms", help="print the norm table of a single-control machine")
    p.add_argument("file")
    p.set_defaults(fn=cmd_norms)

    p = sub.add_parser("gen", help="generate an instance with a ground-truth manifest")
    p.add_argument("kind", choices=["afa", "game", "gadget"])
    p.add_argument("--out", default="instances")
    p.add_argument("--name", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=int, default=3, help="afa state count")
    p.add_argument("--horizon", type=int, default=4, help="afa acceptance horizon in the manifest")
    p.add_argument("--example", action="store_true", help="use the worked three-state afa")
    p.add_argument("--gadget", default="and", choices=["and", "or"])
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("play", help="play the bisimulation game in the terminal")
    p.add_argument("file")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--side", default="defender", choices=["attacker", "defender"])
    p.add_argument("--horizon", type=int, default=3)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("serve", help="HTTP session API for the browser explorer")
    p.add_argument("models", nargs="*", help="model files to expose")
    p.add_argument("--port", type=int, default=8075)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None, help="directory with the built UI")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("report", help="tables and a figure for a model or fragment")
    p.add_argument("file")
    p.add_argument("--out", default="report")
    p.add_argument("--roots", nargs="*", default=None)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except PbisimError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())

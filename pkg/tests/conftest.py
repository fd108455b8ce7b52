import random
from fractions import Fraction
from pathlib import Path

import pytest

from pbisim import formats
from pbisim.core import Dist, Plts, make_plts
from pbisim.machines import Ppda

MODELS = Path(__file__).resolve().parent.parent / "models"


def load(name):
    return formats.load_model(MODELS / name)[1]


@pytest.fixture(scope="session")
def fourstate():
    return load("fourstate.plts")


@pytest.fixture(scope="session")
def mixed():
    return load("mixed.ppda")


@pytest.fixture(scope="session")
def counter_machine():
    return load("counter.ppda")


@pytest.fixture(scope="session")
def single_control():
    return load("singlecontrol.ppda")


@pytest.fixture(scope="session")
def twocontrol():
    return load("twocontrol.ppda")


@pytest.fixture(scope="session")
def visibly():
    return load("visibly.ppda")


def random_dist(rng, candidates, max_support=3, denom=12):
    """Random distribution over up to max_support of the candidates with
    probabilities in twelfths, so lifted alphabets stay small."""
    size = rng.randint(1, min(max_support, len(candidates)))
    support = rng.sample(list(candidates), size)
    cuts = sorted(rng.sample(range(1, denom), size - 1))
    weights = []
    prev = 0
    for c in cuts + [denom]:
        weights.append(c - prev)
        prev = c
    return {s: Fraction(w, denom) for s, w in zip(support, weights)}


def random_plts(rng, max_states=7, max_actions=3, max_support=3, trans_prob=0.75):
    n = rng.randint(2, max_states)
    names = [f"s{i}" for i in range(n)]
    actions = [chr(ord("a") + i) for i in range(rng.randint(1, max_actions))]
    transitions = []
    for name in names:
        for action in actions:
            if rng.random() < trans_prob:
                for _ in range(rng.choice([1, 1, 1, 2])):
                    transitions.append((name, action, random_dist(rng, names, max_support)))
    return make_plts(names, actions, transitions)


def random_vpda(rng, num_controls=3, num_symbols=2):
    """Visibly pushdown machine whose calls push strictly lower-ranked symbols,
    so reachable fragments from short configurations are finite."""
    controls = tuple(f"p{i}" for i in range(num_controls))
    symbols = tuple(f"X{i}" for i in range(num_symbols))
    rank = {s: i for i, s in enumerate(symbols)}
    actions = ("r", "i", "c")
    rules = []
    for q in controls:
        for x in symbols:
            for action in actions:
                if rng.random() > 0.55:
                    continue
                if action == "c" and rank[x] == 0:
                    continue
                for _ in range(rng.choice([1, 1, 2])):
                    if action == "r":
                        targets = [(p, ()) for p in controls]
                    elif action == "i":
                        targets = [(p, (y,)) for p in controls for y in symbols if rank[y] <= rank[x]]
                    else:
                        lower = [y for y in symbols if rank[y] < rank[x]]
                        targets = [(p, (y, z)) for p in controls for y in lower for z in lower]
                    dist = random_dist(rng, targets, max_support=2)
                    rules.append((q, x, action, Dist(dist)))
    return Ppda(
        controls,
        symbols,
        actions,
        tuple(dict.fromkeys(rules)),
        vpda_partition={"r": ("r",), "i": ("i",), "c": ("c",)},
    )


def random_poca(rng, num_controls=3):
    controls = tuple(f"p{i}" for i in range(num_controls))
    rules = []
    for q in controls:
        if rng.random() < 0.9:
            targets = [(p, alpha) for p in controls for alpha in ((), ("I",), ("I", "I"))]
            for _ in range(rng.choice([1, 1, 2])):
                rules.append((q, "I", "a", Dist(random_dist(rng, targets, max_support=3))))
        if rng.random() < 0.6:
            targets = [(p, alpha) for p in controls for alpha in (("Z",), ("I", "Z"))]
            rules.append((q, "Z", "a", Dist(random_dist(rng, targets, max_support=2))))
    return Ppda(controls, ("I", "Z"), ("a",), tuple(dict.fromkeys(rules)))


def random_bpa(rng, num_symbols=3):
    """Single-control machine in which every symbol enables at least one action."""
    symbols = tuple(f"X{i}" for i in range(num_symbols))
    words = [()] + [(s,) for s in symbols] + [(s, t) for s in symbols for t in symbols]
    rules = []
    for x in symbols:
        for _ in range(rng.choice([1, 1, 2])):
            targets = [("r", w) for w in words]
            rules.append(("r", x, "a", Dist(random_dist(rng, targets, max_support=3))))
    return Ppda(("r",), symbols, ("a",), tuple(dict.fromkeys(rules)))


def seeded(seed):
    return random.Random(seed)

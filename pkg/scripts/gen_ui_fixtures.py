"""Regenerate the recorded subset-stage fixtures for the frontend tests.

Harvests subset-reply positions from random finite systems, recording the
exact position JSON, the server-computed legal moves, and every candidate
selection with its mass-bound status.

Usage: python scripts/gen_ui_fixtures.py [out.json]
"""

import itertools
import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import random_plts  # noqa: E402

from pbisim.game import DefSubset, DistPair, PairPos, apply_move, legal_moves  # noqa: E402
from pbisim.oracle import ExplicitSystem  # noqa: E402
from pbisim.session import encode_move, encode_position  # noqa: E402


def harvest(count=50, seed=424242):
    rng = random.Random(seed)
    fixtures = []
    attempt = 0
    while len(fixtures) < count:
        attempt += 1
        plts = random_plts(random.Random(seed + attempt), max_states=6)
        system = ExplicitSystem(plts)
        name_of = lambda i: plts.state_names[i]
        pairs = [(s, t) for s in range(plts.num_states) for t in range(plts.num_states) if s != t]
        rng.shuffle(pairs)
        for s, t in pairs[:3]:
            pos = PairPos(s, t)
            openings = legal_moves(system, pos)
            if not openings:
                continue
            after = apply_move(pos, rng.choice(openings))
            replies = legal_moves(system, after)
            if not replies:
                continue
            dist_pair = apply_move(after, rng.choice(replies))
            if not isinstance(dist_pair, DistPair):
                continue
            subset_moves = legal_moves(system, dist_pair)
            def_subset = apply_move(dist_pair, rng.choice(subset_moves))
            if not isinstance(def_subset, DefSubset):
                continue
            legal = legal_moves(system, def_subset)
            support = [name_of(x) for x in def_subset.other_d.support]
            candidates = []
            for size in range(0, len(support) + 1):
                for combo in itertools.combinations(sorted(support), size):
                    members = list(combo)
                    mass = def_subset.other_d.mass(
                        {plts.state_id(nm) for nm in members}
                    )
                    violates = not members or mass < def_subset.rho
                    candidates.append({"members": members, "violates": violates})
            fixtures.append(
                {
                    "position": encode_position(def_subset, name_of),
                    "legal_moves": [encode_move(m, name_of) for m in legal],
                    "candidates": candidates,
                }
            )
            if len(fixtures) >= count:
                break
    return fixtures


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures" / "subset_positions.json"
    )
    fixtures = harvest()
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixtures, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(fixtures)} fixtures to {out}")


if __name__ == "__main__":
    main()

"""Bundled plat fronts and the seed-deterministic random plat generator."""

from __future__ import annotations

import random

from .diagram import PlatWord, elaborate_front, parse_plat, plat_word
from .errors import InputError, LegchError, ValidationError

# Named fronts.  The two chekanov entries present the classical pair of
# 5_2-type knots with equal classical invariants (tb = 1, rot = 0) that are
# told apart by linearized homology; see tests/test_acceptance.py.
CORPUS_PLATS = {
    "unknot": "L 1\nR 1\n",
    "trefoil": "L 1\nL 3\nX 2\nX 2\nX 2\nR 1\nR 1\n",
    "chekanov1": "L 1\nL 3\nX 2\nX 2\nX 1\nX 1\nX 2\nR 1\nR 1\n",
    "chekanov2": "L 1\nL 3\nX 2\nX 2\nX 3\nX 3\nX 2\nR 1\nR 1\n",
    "stab_unknot_up": "L 1\nL 2\nR 3\nR 1\n",
    "stab_unknot_down": "L 1\nL 1\nR 2\nR 1\n",
    "stab_trefoil": "L 1\nL 3\nX 2\nX 2\nX 2\nL 1\nR 2\nR 1\nR 1\n",
}

RANDOM_SEEDS = tuple(range(100))

_MASTER = 0x5EED_C4A7


def corpus_list():
    """Names of the bundled plats plus the random generator seed list."""
    return {"plats": dict(CORPUS_PLATS), "random_seeds": RANDOM_SEEDS}


def corpus_plat(name: str) -> PlatWord:
    if name not in CORPUS_PLATS:
        raise InputError(f"no bundled plat named {name!r}; "
                         f"available: {', '.join(sorted(CORPUS_PLATS))}")
    return parse_plat(CORPUS_PLATS[name])


def random_plat(seed: int, max_crossings: int = 4, max_opens: int = 2) -> PlatWord:
    """A connected random plat with at most `max_crossings` front crossings.

    Deterministic in `seed`; invalid draws (disconnected fronts) advance an
    attempt counter, so the result is stable across runs and platforms.
    """
    for attempt in range(10_000):
        rng = random.Random(_MASTER + 1_000_003 * seed + attempt)
        events = [("L", 1)]
        strands, n_x, n_l = 2, 0, 1
        ok = True
        for _ in range(40):
            kinds = []
            if n_l < max_opens:
                kinds.append("L")
            if strands >= 2:
                kinds.append("R")
                if n_x < max_crossings:
                    kinds.extend(["X", "X", "X"])
            kind = rng.choice(kinds)
            if kind == "L":
                events.append(("L", rng.randint(1, strands + 1)))
                strands += 2
                n_l += 1
            elif kind == "X":
                events.append(("X", rng.randint(1, strands - 1)))
                n_x += 1
            else:
                events.append(("R", rng.randint(1, strands - 1)))
                strands -= 2
                if strands == 0:
                    break
        if strands != 0 or not ok:
            continue
        try:
            word = plat_word(events)
            elaborate_front(word)  # connectivity check
        except (InputError, ValidationError):
            continue
        return word
    raise LegchError(f"random plat generation failed for seed {seed}")

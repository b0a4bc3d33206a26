"""Seeded instance generators.

Coordinates are integers in ``[-bound, bound]``.  Points are drawn one at a
time and redrawn until the configuration stays in general position, so the
output depends only on the parameters and the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .kernel import affinely_independent
from .model import Instance, base_vertex_count

PROFILES = ("special", "singletons", "random", "bl")
MAX_DRAWS = 10_000


def class_sizes(profile: str, d: int, r: int, rng: random.Random) -> list[int]:
    if profile == "special":
        return [r - 1] * (d + 1) + [1]
    if profile == "singletons":
        return [1] * base_vertex_count(d, r)
    if profile == "random":
        left = base_vertex_count(d, r)
        sizes = []
        while left:
            s = rng.randint(1, min(r - 1, left))
            sizes.append(s)
            left -= s
        return sizes
    if profile == "bl":
        return [r, r, r]
    raise ValueError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")


def general_position_points(n: int, d: int, bound: int, rng: random.Random) -> list[tuple[Fraction, ...]]:
    points: list[tuple[Fraction, ...]] = []
    for _ in range(n):
        for _attempt in range(MAX_DRAWS):
            p = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(d))
            k = min(d, len(points))
            if all(affinely_independent(list(sub) + [p]) for sub in combinations(points, k)):
                points.append(p)
                break
        else:
            raise ValueError(f"could not place {n} points in general position within bound {bound}")
    return points


def generate(d: int, r: int, profile: str, seed: int, bound: int = 100) -> tuple[Instance, dict]:
    """Instance plus metadata for ``profile`` in {special, singletons, random, bl}."""
    if d < 1 or r < 2:
        raise ValueError("need d >= 1 and r >= 2")
    if bound < 1:
        raise ValueError("bound must be positive")
    if profile == "bl" and d != 2:
        raise ValueError("profile bl requires d=2")
    rng = random.Random(seed)
    sizes = class_sizes(profile, d, r, rng)
    colors = [c for c, s in enumerate(sizes) for _ in range(s)]
    rng.shuffle(colors)
    points = general_position_points(len(colors), d, bound, rng)
    return Instance.build(d, r, points, colors), {"generator": profile, "seed": seed, "bound": bound}

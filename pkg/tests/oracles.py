"""Independent brute-force references used by the tests.

Nothing here imports the solver's enumeration; the LP is only reached through
the public ``lp_feasible(hull_system(...))`` route.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial

from tverberg.kernel import hull_system, lp_feasible


def brute_force_families(class_of, r, use_all=False):
    """All families of r disjoint nonempty rainbow faces, by labelling every vertex."""
    n = len(class_of)
    found = set()
    labels = range(r) if use_all else range(r + 1)
    for assignment in product(labels, repeat=n):
        parts = [[v for v in range(n) if assignment[v] == p] for p in range(r)]
        if any(not part for part in parts):
            continue
        if any(len({class_of[v] for v in part}) != len(part) for part in parts):
            continue
        found.add(tuple(sorted(tuple(p) for p in parts)))
    return found


def label_vector(family, n, r):
    """Vertex labels: part rank by minimum vertex, ``r`` for unused."""
    owner = {v: i for i, face in enumerate(sorted(family)) for v in face}
    return tuple(owner.get(v, r) for v in range(n))


def canonical_order(families, n, r):
    return sorted(families, key=lambda f: label_vector(f, n, r))


def count_all_distinct(n, r, use_all=False):
    """Families when all n vertices have distinct colors (inclusion-exclusion)."""
    bins = r if use_all else r + 1
    total = sum((-1) ** k * comb(r, k) * (bins - k) ** n for k in range(r + 1))
    return total // factorial(r)


def family_feasible(family, points):
    return lp_feasible(hull_system(family, points)).feasible


def segments_meet(segments):
    lo = max(min(a, b) for a, b in segments)
    hi = min(max(a, b) for a, b in segments)
    return lo <= hi


def orientation(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def F(*xs):
    return tuple(Fraction(x) for x in xs)

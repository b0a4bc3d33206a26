"""Search for ``r`` disjoint rainbow faces whose hulls share a point.

Families are produced by a depth-first assignment of vertices, in increasing
index, to one of the parts or to "unused".  Parts are tried in index order,
then a fresh part, then "unused"; a part may only be opened by the smallest
still-unassigned vertex, so part minima increase and every family is emitted
exactly once, already in canonical form.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .kernel import HullOracle
from .model import Face, Instance, TverbergWitness

log = logging.getLogger(__name__)

Family = tuple[Face, ...]


@dataclass(frozen=True)
class SearchConfig:
    require_all_vertices_used: bool = False
    max_solutions: int | None = None
    prune_with_prefix_lp: bool = True
    # >1 evaluates candidate families in a process pool; results keep canonical order
    workers: int = 1

    def __post_init__(self):
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")


def enumerate_rainbow_families(instance: Instance, config: SearchConfig = SearchConfig()) -> Iterator[Family]:
    """Every family of ``r`` disjoint nonempty rainbow faces, in canonical order.

    No geometric pruning happens here; see :func:`candidate_families`.
    """
    return _families(instance, config.require_all_vertices_used, None)


def candidate_families(instance: Instance, config: SearchConfig = SearchConfig()) -> Iterator[Family]:
    """Like :func:`enumerate_rainbow_families`, minus families the prefix LP rules out.

    Whenever a part becomes closed (no later vertex can join it without
    repeating a color), the hulls of each part's *reachable* vertices (its
    vertices plus every later vertex it could still take) are tested for a
    common point.  The final hulls are subsets of those, so an empty
    intersection rules out every completion of the prefix.
    """
    oracle = HullOracle(instance.points) if config.prune_with_prefix_lp else None
    return _families(instance, config.require_all_vertices_used, oracle)


def _families(
    instance: Instance, use_all: bool, oracle: HullOracle | None, maximal_only: bool = False
) -> Iterator[Family]:
    n, r = instance.num_vertices, instance.r
    class_of = instance.coloring.class_of
    parts: list[list[int]] = []
    colors: list[set[int]] = []
    unused: list[int] = []
    # later[v][c]: number of vertices of color c with index >= v
    later: list[dict[int, int]] = [{} for _ in range(n + 1)]
    for v in range(n - 1, -1, -1):
        later[v] = dict(later[v + 1])
        later[v][class_of[v]] = later[v].get(class_of[v], 0) + 1

    def may_leave_out(v: int) -> bool:
        """Could ``v`` stay unused in a family no unused vertex can be added to?

        Every final part then needs its own vertex of ``v``'s color.
        """
        c = class_of[v]
        lacking = sum(1 for used in colors if c not in used) + (r - len(parts))
        return later[v + 1].get(c, 0) >= lacking

    def is_maximal() -> bool:
        return all(class_of[u] in used for u in unused for used in colors)

    def reachable(nxt: int) -> list[list[int]]:
        return [[u for u in range(nxt, n) if class_of[u] not in used] for used in colors]

    def keep(nxt: int, closed_before: int) -> tuple[bool, int]:
        """Prefix test after vertices ``< nxt`` are placed; returns (keep, closed parts)."""
        if oracle is None:
            return True, 0
        reach = reachable(nxt)
        closed = sum(1 for extra in reach if not extra)
        # the LP only runs when another part has just become closed
        if closed <= closed_before:
            return True, closed
        groups = [part + extra for part, extra in zip(parts, reach)]
        if len(parts) < r:
            groups.append(list(range(nxt, n)))
        return len(groups) < 2 or oracle.intersects(groups), closed

    def visit(v: int, closed: int) -> Iterator[Family]:
        if v == n:
            if len(parts) == r and (not maximal_only or is_maximal()):
                yield tuple(tuple(p) for p in parts)
            return
        c = class_of[v]
        remaining_after = n - v - 1
        for i in range(len(parts)):
            if c in colors[i] or r - len(parts) > remaining_after:
                continue
            parts[i].append(v)
            colors[i].add(c)
            ok, now = keep(v + 1, closed)
            if ok:
                yield from visit(v + 1, now)
            parts[i].pop()
            colors[i].discard(c)
        if len(parts) < r and r - len(parts) - 1 <= remaining_after:
            parts.append([v])
            colors.append({c})
            ok, now = keep(v + 1, closed)
            if ok:
                yield from visit(v + 1, now)
            parts.pop()
            colors.pop()
        if not use_all and r - len(parts) <= remaining_after and (not maximal_only or may_leave_out(v)):
            ok, now = keep(v + 1, closed)
            if ok:
                unused.append(v)
                yield from visit(v + 1, now)
                unused.pop()

    return visit(0, 0)


def _witness(instance: Instance, oracle: HullOracle, family: Family) -> TverbergWitness | None:
    found = oracle.common_point(family)
    if found is None:
        return None
    point, coefficients = found
    witness = TverbergWitness(family, point, coefficients)
    witness.check(instance)
    return witness


def _witness_batch(instance: Instance, families: list[Family]) -> list[TverbergWitness | None]:
    oracle = HullOracle(instance.points)
    return [_witness(instance, oracle, f) for f in families]


def _witnesses(instance: Instance, config: SearchConfig, first_only: bool = False) -> Iterator[TverbergWitness]:
    oracle = HullOracle(instance.points) if config.prune_with_prefix_lp else None
    families = _families(instance, config.require_all_vertices_used, oracle, maximal_only=first_only)
    if config.workers == 1:
        oracle = HullOracle(instance.points)
        for family in families:
            w = _witness(instance, oracle, family)
            if w is not None:
                yield w
        return
    # bounded look-ahead window; futures are consumed in submission order
    batch_size = 32
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        window: deque = deque()

        def submit() -> bool:
            batch = list(islice(families, batch_size))
            if batch:
                window.append(pool.submit(_witness_batch, instance, batch))
            return bool(batch)

        for _ in range(2 * config.workers):
            if not submit():
                break
        try:
            while window:
                results = window.popleft().result()
                submit()
                for w in results:
                    if w is not None:
                        yield w
        finally:
            for fut in window:
                fut.cancel()


def solve(instance: Instance, config: SearchConfig = SearchConfig()) -> TverbergWitness | None:
    """First witness in canonical family order, or ``None`` if none exists.

    Only families to which no unused vertex can be added are tested.  A
    family that could take another vertex is contained in an earlier family
    (the vertex sits in a part instead of "unused"), which was already found
    infeasible, and shrinking faces only shrinks their hulls.
    """
    w = next(_witnesses(instance, config, first_only=True), None)
    log.debug("solve n=%d r=%d -> %s", instance.num_vertices, instance.r, w and w.faces)
    return w


def solve_all(instance: Instance, config: SearchConfig = SearchConfig()) -> list[TverbergWitness]:
    return list(islice(_witnesses(instance, config), config.max_solutions))

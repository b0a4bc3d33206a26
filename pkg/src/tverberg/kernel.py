"""Exact linear algebra: phase-one simplex feasibility and hull intersection.

Everything here works on :class:`fractions.Fraction`; there is no tolerance
anywhere.  Feasibility answers carry a certificate that can be re-checked by
substitution (:meth:`Feasible.verify`, :meth:`Infeasible.verify`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Sequence

from gmpy2 import mpq

from .model import Instance, Point

ZERO = Fraction(0)
ONE = Fraction(1)


class MalformedSystem(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    """Equality rows ``rows @ x == rhs`` over variables ``x >= 0``.

    ``labels`` name the columns, e.g. ``(face_index, vertex)`` pairs.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    labels: tuple[Hashable, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise MalformedSystem(f"{len(self.rows)} rows but {len(self.rhs)} right-hand sides")
        width = len(self.labels)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise MalformedSystem(f"row {i} has width {len(row)}, expected {width}")
        if len(set(self.labels)) != width:
            raise MalformedSystem("variable labels are not unique")

    @classmethod
    def build(cls, rows: Sequence[Sequence], rhs: Sequence, labels: Sequence[Hashable] | None = None):
        rows = tuple(tuple(Fraction(a) for a in row) for row in rows)
        if labels is None:
            widths = {len(row) for row in rows}
            if len(widths) > 1:
                raise MalformedSystem(f"ragged rows with widths {sorted(widths)}")
            labels = tuple(range(widths.pop() if widths else 0))
        return cls(rows, tuple(Fraction(b) for b in rhs), tuple(labels))


@dataclass(frozen=True)
class Feasible:
    assignment: dict
    feasible = True

    def verify(self, system: LinearSystem) -> bool:
        if set(self.assignment) != set(system.labels):
            return False
        x = [self.assignment[label] for label in system.labels]
        if any(v < 0 for v in x):
            return False
        return all(
            sum((a * v for a, v in zip(row, x)), ZERO) == b
            for row, b in zip(system.rows, system.rhs)
        )


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``y @ rows >= 0`` entrywise while ``y @ rhs < 0``.

    Any ``x >= 0`` would give ``0 <= (y @ rows) @ x == y @ rhs < 0``.
    """

    certificate: tuple[Fraction, ...]
    feasible = False

    def verify(self, system: LinearSystem) -> bool:
        y = self.certificate
        if len(y) != len(system.rows):
            return False
        for j in range(len(system.labels)):
            if sum((yi * row[j] for yi, row in zip(y, system.rows)), ZERO) < 0:
                return False
        return sum((yi * b for yi, b in zip(y, system.rhs)), ZERO) < 0


def lp_feasible(system: LinearSystem) -> Feasible | Infeasible:
    """Decide ``rows @ x == rhs, x >= 0`` with a phase-one simplex.

    Pivoting follows Bland's least-index rule, so the method terminates on
    degenerate systems too.  The result is deterministic.
    """
    signs = [-1 if b < 0 else 1 for b in system.rhs]
    rows = [[mpq(a) if s > 0 else -mpq(a) for a in row] for s, row in zip(signs, system.rows)]
    rhs = [mpq(b) if s > 0 else -mpq(b) for s, b in zip(signs, system.rhs)]
    ok, values = _phase_one(rows, rhs, len(system.labels))
    if ok:
        return Feasible(dict(zip(system.labels, map(_fraction, values))))
    return Infeasible(tuple(-_fraction(y) * s for y, s in zip(values, signs)))


def _phase_one(rows, rhs, n):
    """Core simplex on mpq data with ``rhs >= 0``; rows are consumed.

    Returns ``(True, x)`` or ``(False, y)`` where ``y`` are the phase-one duals
    (``y @ rows <= 0`` and ``y @ rhs > 0``).
    """
    m = len(rows)
    zero, one = mpq(0), mpq(1)
    # tableau rows: [A | I | b]
    tab = [row + [one if k == i else zero for k in range(m)] + [b] for i, (row, b) in enumerate(zip(rows, rhs))]
    basis = [n + i for i in range(m)]
    width = n + m + 1
    # reduced costs of "minimise the sum of artificials"; last entry is -objective
    obj = [zero] * width
    for row in tab:
        for j in range(n):
            if row[j]:
                obj[j] -= row[j]
        obj[-1] -= row[-1]

    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        # the phase-one objective is bounded below by zero
        assert leave is not None
        _pivot(tab, obj, leave, enter, width)
        basis[leave] = enter

    if obj[-1] == 0:
        values = [zero] * n
        for i, j in enumerate(basis):
            if j < n:
                values[j] = tab[i][-1]
        return True, values
    # reduced cost of artificial i is 1 - y_i
    return False, [one - obj[n + i] for i in range(m)]


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _pivot(tab, obj, leave, enter, width):
    prow = tab[leave]
    inv = 1 / prow[enter]
    nz = [k for k in range(width) if prow[k]]
    for k in nz:
        prow[k] *= inv
    for i, row in enumerate(tab):
        if i != leave:
            f = row[enter]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
    f = obj[enter]
    if f:
        for k in nz:
            obj[k] -= f * prow[k]


def hull_system(groups: Sequence[Sequence[int]], points: Sequence[Point]) -> LinearSystem:
    """Encode "the hulls of the point groups share a point" as a feasibility system.

    Variables are ``(i, v)`` for vertex ``v`` of group ``i``.  Rows: the weights
    of every group sum to one, and for ``i >= 1`` the combination of group 0
    minus the combination of group ``i`` vanishes coordinatewise.
    """
    labels = [(i, v) for i, group in enumerate(groups) for v in group]
    rows = _hull_rows(groups, points, ZERO, ONE)
    rhs = [ONE] * len(groups) + [ZERO] * (len(rows) - len(groups))
    return LinearSystem(tuple(map(tuple, rows)), tuple(rhs), tuple(labels))


def _hull_rows(groups, points, zero, one):
    width = sum(len(g) for g in groups)
    dim = len(points[groups[0][0]])
    rows = []
    offsets = []
    offset = 0
    for group in groups:
        offsets.append(offset)
        row = [zero] * width
        for k in range(len(group)):
            row[offset + k] = one
        rows.append(row)
        offset += len(group)
    first = groups[0]
    for i in range(1, len(groups)):
        base = offsets[i]
        for c in range(dim):
            row = [zero] * width
            for k, v in enumerate(first):
                row[k] = points[v][c]
            for k, v in enumerate(groups[i]):
                row[base + k] = -points[v][c]
            rows.append(row)
    return rows


def boxes_separate(groups: Sequence[Sequence[int]], points: Sequence[Point]) -> bool:
    """True when some coordinate range of one group misses that of another.

    An exact sufficient test for the hulls being disjoint, used to skip the LP.
    """
    dim = len(points[groups[0][0]])
    for c in range(dim):
        lo = max(min(points[v][c] for v in g) for g in groups)
        hi = min(max(points[v][c] for v in g) for g in groups)
        if lo > hi:
            return True
    return False


class HullOracle:
    """Hull-intersection queries against one fixed point list.

    Coordinates are converted to gmpy2 rationals once; answers are identical
    to running :func:`lp_feasible` on :func:`hull_system`.
    """

    def __init__(self, points: Sequence[Point]):
        self.points = tuple(points)
        self._q = [tuple(mpq(x) for x in p) for p in self.points]

    def _solve(self, groups):
        if boxes_separate(groups, self._q):
            return None
        rows = _hull_rows(groups, self._q, mpq(0), mpq(1))
        rhs = [mpq(1)] * len(groups) + [mpq(0)] * (len(rows) - len(groups))
        ok, values = _phase_one(rows, rhs, len(rows[0]))
        return values if ok else None

    def intersects(self, groups: Sequence[Sequence[int]]) -> bool:
        return self._solve(groups) is not None

    def common_point(self, faces: Sequence[Sequence[int]]):
        faces = [tuple(f) for f in faces]
        if not faces:
            raise ValueError("at least one face is required")
        for i, face in enumerate(faces):
            if not face:
                raise ValueError(f"face {i} is empty")
            for v in face:
                if not 0 <= v < len(self.points):
                    raise IndexError(f"vertex {v} out of range")
        values = self._solve(faces)
        if values is None:
            return None
        it = iter(map(_fraction, values))
        coefficients = tuple({v: next(it) for v in face} for face in faces)
        dim = len(self.points[faces[0][0]])
        point = tuple(
            sum((lam * self.points[v][k] for v, lam in coefficients[0].items()), ZERO)
            for k in range(dim)
        )
        return point, coefficients


def hulls_intersect(groups: Sequence[Sequence[int]], points: Sequence[Point]) -> bool:
    return HullOracle(points).intersects(groups)


def common_point(faces: Sequence[Sequence[int]], instance: Instance):
    """Return ``(point, coefficients)`` for a point in every face hull, or ``None``.

    ``coefficients[i]`` maps every vertex of ``faces[i]`` (zeros included) to
    its convex weight.  Which point of a fat intersection comes back depends
    on the pivoting, so callers should only rely on its validity.
    """
    return HullOracle(instance.points).common_point(faces)


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [list(map(Fraction, row)) for row in matrix]
    n = len(a)
    det = ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, n):
            f = a[i][col] / p
            if f:
                for k in range(col, n):
                    a[i][k] -= f * a[col][k]
    return det


def affinely_independent(points: Sequence[Point]) -> bool:
    """True iff ``points`` (at most d+1 of them in R^d) are affinely independent."""
    if len(points) <= 1:
        return True
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    dim = len(base)
    if len(diffs) > dim:
        return False
    if len(diffs) == dim:
        return determinant(diffs) != 0
    # fewer vectors than coordinates: full row rank via the Gram determinant
    gram = [[sum((a * b for a, b in zip(u, w)), ZERO) for w in diffs] for u in diffs]
    return determinant(gram) != 0


def general_position_check(points: Sequence[Sequence], d: int) -> bool:
    """True iff no ``d+1`` of the points are affinely dependent."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    for p in pts:
        if len(p) != d:
            raise ValueError(f"point {p} does not have {d} coordinates")
    return all(affinely_independent(subset) for subset in combinations(pts, d + 1))

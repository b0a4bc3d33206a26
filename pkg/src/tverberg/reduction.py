"""Lift general colorings to special ones and pull witnesses back down.

A lift plan pads color classes with new vertices until every class has
``r-1`` members except one singleton.  The new vertices come in batches of
``r-1``; batch ``s`` is sent to the unit vector of the new axis ``d+s`` and
the original vertices keep their images, padded with zeros.  A witness for
the lifted instance is then peeled one batch at a time, from the top.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain

from .model import (
    Coloring,
    ColoringKind,
    Instance,
    TverbergWitness,
    canonical_family,
    rainbow_check,
    validate_coloring,
)
from .solver import SearchConfig, solve


class InvalidColoring(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class PlanMismatch(ValueError):
    pass


class AssertionBreach(RuntimeError):
    """A pull-back check failed: either a bug or a counterexample to the argument."""

    def __init__(self, layer: int, check: str, detail: str = ""):
        self.layer = layer
        self.check = check
        super().__init__(f"layer {layer}: {check} check failed" + (f" ({detail})" if detail else ""))


class Transform(enum.Enum):
    SPLIT_SINGLETON = "split-singleton"
    SPLIT_CHUNK = "split-chunk"
    SPLIT_TWO_CLASSES = "split-two-classes"
    SPLIT_TWO_SINGLETONS = "split-two-singletons"
    GENERAL_CHAIN = "general-chain"


@dataclass(frozen=True)
class LiftStep:
    paddings: tuple[tuple[int, int], ...]  # (class index, vertices added), by class
    fresh_class_created: bool
    batch: tuple[int, ...]
    target_axis: int  # 1-based, so the first step of a d-dimensional lift targets d+1


@dataclass(frozen=True)
class LiftPlan:
    base_d: int
    base_r: int
    original_class_sizes: tuple[int, ...]
    steps: tuple[LiftStep, ...]
    final_D: int
    final_N: int
    kind: Transform = Transform.GENERAL_CHAIN

    def __post_init__(self):
        r = self.base_r
        for s, step in enumerate(self.steps, 1):
            if len(step.batch) != r - 1:
                raise ValueError(f"step {s} batch has {len(step.batch)} vertices, expected r-1")
            if sum(k for _, k in step.paddings) != r - 1:
                raise ValueError(f"step {s} paddings do not add up to r-1")
            if step.target_axis != self.base_d + s:
                raise ValueError(f"step {s} targets axis {step.target_axis}")
        if self.final_D != self.base_d + len(self.steps):
            raise ValueError("final_D must equal base_d plus the number of steps")
        if self.final_N != (self.final_D + 1) * (r - 1):
            raise ValueError("final_N must equal (final_D+1)(r-1)")
        if self.num_vertices != self.final_N + 1:
            raise ValueError("lifted vertex count must equal final_N+1")
        sizes = self.lifted_class_sizes
        if sorted(sizes) != [1] + [r - 1] * (len(sizes) - 1) or len(sizes) != self.final_D + 2:
            raise ValueError(f"lifted class sizes {list(sizes)} are not a special coloring")

    @property
    def num_original_vertices(self) -> int:
        return sum(self.original_class_sizes)

    @property
    def num_vertices(self) -> int:
        return self.num_original_vertices + sum(len(s.batch) for s in self.steps)

    @property
    def fresh_class(self) -> int | None:
        if any(s.fresh_class_created for s in self.steps):
            return len(self.original_class_sizes)
        return None

    @property
    def lifted_class_sizes(self) -> tuple[int, ...]:
        sizes = list(self.original_class_sizes)
        if self.fresh_class is not None:
            sizes.append(0)
        for step in self.steps:
            for cls, k in step.paddings:
                sizes[cls] += k
        return tuple(sizes)

    @property
    def is_identity(self) -> bool:
        return not self.steps

    def new_vertex_classes(self) -> list[int]:
        """Class of each new vertex, in vertex-index order."""
        return [cls for step in self.steps for cls, k in step.paddings for _ in range(k)]

    def summary(self) -> str:
        """Plain-text table of class sizes before and after the lift, plus the batches."""
        if self.is_identity:
            return (
                f"identity plan: coloring already special (d={self.base_d}, r={self.base_r}, "
                f"N={self.final_N})"
            )
        lines = [
            f"{self.kind.value} plan: d={self.base_d} -> D={self.final_D}, "
            f"N={(self.base_d + 1) * (self.base_r - 1)} -> N'={self.final_N}, "
            f"{len(self.steps)} batch(es) of {self.base_r - 1}",
            "class  before  after  added",
        ]
        before = list(self.original_class_sizes)
        if self.fresh_class is not None:
            before.append(0)
        after = self.lifted_class_sizes
        for cls, (b, a) in enumerate(zip(before, after)):
            mark = "  (fresh)" if cls == self.fresh_class else ""
            lines.append(f"C{cls:<5d}{b:>6d}{a:>7d}  {'*' * (a - b) or '-'}{mark}")
        for s, step in enumerate(self.steps, 1):
            verts = ",".join(map(str, step.batch))
            lines.append(f"layer {s}: vertices {verts} -> e{step.target_axis}")
        return "\n".join(lines)


def _build_plan(coloring: Coloring, d: int, r: int, layers, fresh_class: bool, kind: Transform) -> LiftPlan:
    """Assign vertex indices to per-layer paddings ``[{class: count}, ...]``."""
    next_vertex = coloring.num_vertices
    c = len(coloring.classes)
    steps = []
    for s, layer in enumerate(layers, 1):
        paddings = tuple(sorted((cls, k) for cls, k in layer.items() if k))
        size = sum(k for _, k in paddings)
        batch = tuple(range(next_vertex, next_vertex + size))
        next_vertex += size
        steps.append(LiftStep(paddings, fresh_class and c in dict(paddings), batch, d + s))
    D = d + len(steps)
    return LiftPlan(d, r, coloring.sizes, tuple(steps), D, (D + 1) * (r - 1), kind)


def _require_general(coloring: Coloring, d: int, r: int):
    verdict = validate_coloring(coloring, r, d)
    if verdict.kind is ColoringKind.INVALID:
        raise InvalidColoring(verdict.reason)
    return verdict.kind


def plan_lift(coloring: Coloring, d: int, r: int) -> LiftPlan:
    """Uniform plan: a fresh singleton class, every original class padded to ``r-1``."""
    if _require_general(coloring, d, r) is ColoringKind.SPECIAL:
        return _build_plan(coloring, d, r, [], False, Transform.GENERAL_CHAIN)
    c = len(coloring.classes)
    pads = [cls for cls, size in enumerate(coloring.sizes) for _ in range(r - 1 - size)]
    pads.append(c)
    layers = [Counter(pads[i:i + r - 1]) for i in range(0, len(pads), r - 1)]
    return _build_plan(coloring, d, r, layers, True, Transform.GENERAL_CHAIN)


def _roles(sizes, wanted_first, wanted_last, r, d, extra_full):
    """Pick reduced classes (first matches) and new classes (last matches).

    ``wanted_first``/``wanted_last`` list required sizes; the remaining classes
    must be one singleton plus ``extra_full`` classes of size ``r-1``.
    """
    free = list(range(len(sizes)))
    reduced = []
    for size in wanted_first:
        hit = next((i for i in free if sizes[i] == size), None)
        if hit is None:
            return None
        reduced.append(hit)
        free.remove(hit)
    new = []
    for size in wanted_last:
        hit = next((i for i in reversed(free) if sizes[i] == size), None)
        if hit is None:
            return None
        new.append(hit)
        free.remove(hit)
    rest = sorted(sizes[i] for i in free)
    if rest != [1] + [r - 1] * extra_full:
        return None
    kept = next(i for i in free if sizes[i] == 1)
    return reduced, sorted(new), kept


def named_transform(kind: Transform, coloring: Coloring, d: int, r: int, q: int | None = None) -> LiftPlan:
    """The lift a single proposition of the reduction argument constructs.

    ``SPLIT_SINGLETON``: one class short by one vertex plus an extra singleton;
    ``SPLIT_CHUNK``: ``q`` vertices of one class moved to a new class;
    ``SPLIT_TWO_CLASSES``: one vertex from each of two classes forms a new class;
    ``SPLIT_TWO_SINGLETONS``: two vertices of one class become two singletons
    (two layers).  ``GENERAL_CHAIN`` is :func:`plan_lift`.
    """
    if kind is Transform.GENERAL_CHAIN:
        return plan_lift(coloring, d, r)
    _require_general(coloring, d, r)
    sizes = coloring.sizes
    if kind is Transform.SPLIT_SINGLETON:
        roles = _roles(sizes, [r - 2], [1], r, d, d) if r >= 3 else None
    elif kind is Transform.SPLIT_CHUNK:
        if q is None or not 2 <= q <= r - 2:
            raise ShapeMismatch(f"split-chunk needs 2 <= q <= r-2, got q={q}")
        roles = _roles(sizes, [r - 1 - q], [q], r, d, d)
    elif kind is Transform.SPLIT_TWO_CLASSES:
        roles = _roles(sizes, [r - 2, r - 2], [2], r, d, d - 1) if r >= 3 else None
    elif kind is Transform.SPLIT_TWO_SINGLETONS:
        roles = _roles(sizes, [r - 3], [1, 1], r, d, d) if r >= 4 else None
    else:
        raise ShapeMismatch(f"unknown transform {kind!r}")
    if roles is None:
        raise ShapeMismatch(f"class sizes {list(sizes)} do not have the {kind.value} shape")
    reduced, new, kept = roles

    if kind is Transform.SPLIT_TWO_SINGLETONS:
        (c0,), (a, b) = reduced, new
        layers = [{c0: 1, a: r - 2}, {c0: 1, b: r - 2}]
    else:
        # pad everything except the kept singleton; one layer of r-1 vertices
        layers = [{cls: r - 1 - s for cls, s in enumerate(sizes) if cls != kept}]
    return _build_plan(coloring, d, r, layers, False, kind)


def _check_plan(instance: Instance, plan: LiftPlan):
    if (plan.base_d, plan.base_r) != (instance.d, instance.r):
        raise PlanMismatch(f"plan is for (d, r) = ({plan.base_d}, {plan.base_r})")
    if plan.original_class_sizes != instance.coloring.sizes:
        raise PlanMismatch("plan was built for a coloring with different class sizes")


def lift_instance(instance: Instance, plan: LiftPlan) -> Instance:
    _check_plan(instance, plan)
    D = plan.final_D
    zero, one = Fraction(0), Fraction(1)
    points = [tuple(p) + (zero,) * (D - instance.d) for p in instance.points]
    for step in plan.steps:
        unit = tuple(one if k == step.target_axis - 1 else zero for k in range(D))
        points.extend(unit for _ in step.batch)
    class_of = list(instance.coloring.class_of) + plan.new_vertex_classes()
    coloring = Coloring.from_classes(
        [[v for v, c in enumerate(class_of) if c == cls] for cls in range(max(class_of) + 1)]
    )
    lifted = Instance(D, instance.r, tuple(points), coloring)
    if lifted.classify().kind is not ColoringKind.SPECIAL:
        raise PlanMismatch("lifted coloring is not special")
    return lifted


@dataclass
class LayerAudit:
    layer: int
    axis: int
    batch: tuple[int, ...]
    batch_free_face: int  # index of a face with no vertex in the batch
    top_coordinate: Fraction
    batch_mass: tuple[Fraction, ...]
    dropped: tuple[int, ...] = field(default=())

    def __str__(self):
        masses = ", ".join(str(m) for m in self.batch_mass)
        return (
            f"layer {self.layer} (axis e{self.axis}): face {self.batch_free_face} avoids batch "
            f"{list(self.batch)}; top coordinate = {self.top_coordinate}; "
            f"batch mass per face = [{masses}]; dropped {list(self.dropped)}"
        )


def pullback_with_audit(
    lifted_witness: TverbergWitness, lifted_instance: Instance, plan: LiftPlan, original: Instance
) -> tuple[TverbergWitness, list[LayerAudit]]:
    _check_plan(original, plan)
    if lifted_instance.num_vertices != plan.num_vertices or lifted_instance.d != plan.final_D:
        raise PlanMismatch("lifted instance does not match the plan")
    lifted_witness.check(lifted_instance)

    faces = [list(f) for f in lifted_witness.faces]
    coeffs = [dict(c) for c in lifted_witness.coefficients]
    point = list(lifted_witness.point)
    audits = []
    for layer in range(len(plan.steps), 0, -1):
        step = plan.steps[layer - 1]
        batch = set(step.batch)
        axis = step.target_axis - 1
        if axis != len(point) - 1:
            raise AssertionBreach(layer, "axis-order", f"axis {axis} is not the top coordinate")
        free = next((i for i, f in enumerate(faces) if batch.isdisjoint(f)), None)
        if free is None:
            raise AssertionBreach(layer, "pigeonhole", "every face meets the batch")
        if point[axis] != 0:
            raise AssertionBreach(layer, "top-coordinate", f"coordinate is {point[axis]}")
        masses = tuple(sum((c.get(v, Fraction(0)) for v in batch), Fraction(0)) for c in coeffs)
        for i, mass in enumerate(masses):
            if mass != 0:
                raise AssertionBreach(layer, "batch-mass", f"face {i} has mass {mass}")
        dropped = []
        for i, face in enumerate(faces):
            kept = [v for v in face if v not in batch]
            dropped.extend(v for v in face if v in batch)
            if not kept:
                raise AssertionBreach(layer, "batch-mass", f"face {i} would become empty")
            faces[i] = kept
            coeffs[i] = {v: c for v, c in coeffs[i].items() if v not in batch}
            if sum(coeffs[i].values()) != 1:
                raise AssertionBreach(layer, "batch-mass", f"face {i} lost weight")
        point.pop()
        audits.append(LayerAudit(layer, step.target_axis, step.batch, free, Fraction(0), masses, tuple(sorted(dropped))))

    n = original.num_vertices
    if any(v >= n for v in chain.from_iterable(faces)) or len(point) != original.d:
        raise AssertionBreach(0, "restriction", "faces or point left the original simplex")
    family = canonical_family(faces)
    by_min = {min(f): i for i, f in enumerate(faces)}
    order = [by_min[min(f)] for f in family]
    witness = TverbergWitness(
        family, tuple(point), tuple({v: coeffs[i][v] for v in sorted(coeffs[i])} for i in order)
    )
    if not verify_reduction(original, witness):
        raise AssertionBreach(0, "final-verification", "pulled-back witness does not verify")
    return witness, audits


def pullback(
    lifted_witness: TverbergWitness, lifted_instance: Instance, plan: LiftPlan, original: Instance
) -> TverbergWitness:
    return pullback_with_audit(lifted_witness, lifted_instance, plan, original)[0]


def verify_reduction(original: Instance, witness: TverbergWitness) -> bool:
    """Recheck a witness against ``original`` from scratch; never raises."""
    try:
        n, d, r = original.num_vertices, original.d, original.r
        faces = [tuple(f) for f in witness.faces]
        if len(faces) != r or len(witness.coefficients) != r or len(witness.point) != d:
            return False
        owner = {}
        for i, face in enumerate(faces):
            if not face:
                return False
            for v in face:
                if not (isinstance(v, int) and 0 <= v < n) or v in owner:
                    return False
                owner[v] = i
            if not rainbow_check(face, original.coloring):
                return False
        for i, coeffs in enumerate(witness.coefficients):
            total = Fraction(0)
            combo = [Fraction(0)] * d
            for v, lam in coeffs.items():
                if owner.get(v) != i or not isinstance(lam, (int, Fraction)) or lam < 0:
                    return False
                total += lam
                for k, x in enumerate(original.points[v]):
                    combo[k] += lam * x
            if total != 1 or combo != [Fraction(x) for x in witness.point]:
                return False
        return True
    except (TypeError, ValueError, IndexError, AttributeError):
        return False


@dataclass
class RoundTrip:
    plan: LiftPlan
    lifted: Instance
    lifted_witness: TverbergWitness | None
    witness: TverbergWitness | None = None
    audits: list[LayerAudit] = field(default_factory=list)
    verified: bool = False


def round_trip(instance: Instance, config: SearchConfig | None = None) -> RoundTrip:
    """Plan, lift, solve the lifted instance, pull back and re-verify."""
    plan = plan_lift(instance.coloring, instance.d, instance.r)
    lifted = lift_instance(instance, plan)
    lifted_witness = solve(lifted, config or SearchConfig())
    result = RoundTrip(plan, lifted, lifted_witness)
    if lifted_witness is not None:
        result.witness, result.audits = pullback_with_audit(lifted_witness, lifted, plan, instance)
        result.verified = verify_reduction(instance, result.witness)
    return result

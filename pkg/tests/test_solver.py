import json
import random
from pathlib import Path

import pytest

from tverberg.generate import generate
from tverberg.kernel import Infeasible, hull_system, lp_feasible
from tverberg.model import Instance, make_point
from tverberg.solver import SearchConfig, enumerate_rainbow_families, solve, solve_all

from .oracles import brute_force_families, canonical_order, count_all_distinct, family_feasible

GOLDEN = Path(__file__).parent / "golden" / "moment7.json"


def random_instance(seed, d, r, n, classes):
    rng = random.Random(seed)
    pts = [tuple(rng.randint(-6, 6) for _ in range(d)) for _ in range(n)]
    colors = [rng.randrange(classes) for _ in range(n)]
    return Instance.build(d, r, pts, colors)


def moment(n):
    return Instance.build(2, 3, [(t, t * t) for t in range(1, n + 1)], list(range(n)))


# -- enumeration -------------------------------------------------------------

@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("use_all", [False, True])
def test_enumeration_matches_brute_force(seed, use_all):
    rng = random.Random(seed)
    n, r = rng.randint(3, 7), rng.randint(2, 3)
    inst = random_instance(seed, 1, r, n, rng.randint(2, 4))
    got = list(enumerate_rainbow_families(inst, SearchConfig(require_all_vertices_used=use_all)))
    expected = brute_force_families(inst.coloring.class_of, r, use_all)
    assert len(got) == len(set(got))
    assert set(got) == expected
    assert got == canonical_order(expected, n, r)


@pytest.mark.parametrize("n,r", [(4, 2), (5, 2), (6, 3), (7, 3), (7, 4)])
def test_family_counts_all_distinct(n, r):
    inst = Instance.build(1, r, [(i,) for i in range(n)], list(range(n)))
    assert sum(1 for _ in enumerate_rainbow_families(inst)) == count_all_distinct(n, r)
    everything = SearchConfig(require_all_vertices_used=True)
    assert sum(1 for _ in enumerate_rainbow_families(inst, everything)) == count_all_distinct(n, r, True)


def test_stirling_values():
    # S(7, 3) = 301 and the 7-point tightness count 1701 are fixed reference values
    assert count_all_distinct(7, 3, True) == 301
    assert count_all_distinct(7, 3) == 1701
    assert count_all_distinct(6, 3) == 350


# -- geometric answers ---------------------------------------------------------

def test_square_radon():
    inst = Instance.build(2, 2, [(0, 0), (2, 0), (2, 2), (0, 2)], [0, 1, 2, 3])
    w = solve(inst)
    assert w.faces == ((0, 2), (1, 3))
    assert w.point == make_point((1, 1))


def test_golden_moment_curve():
    golden = json.loads(GOLDEN.read_text())
    inst = Instance.build(golden["d"], golden["r"], golden["points"], golden["colors"])
    w = solve(inst)
    assert [list(f) for f in w.faces] == golden["first_feasible_family"]
    assert w.is_valid(inst)
    assert len(solve_all(inst)) == golden["feasible_total"]


def test_six_point_moment_curve_tight():
    inst = moment(6)
    assert solve(inst) is None
    assert solve_all(inst, SearchConfig(prune_with_prefix_lp=False)) == []
    families = list(enumerate_rainbow_families(inst))
    assert len(families) == 350
    for fam in families:
        res = lp_feasible(hull_system(fam, inst.points))
        assert isinstance(res, Infeasible)
        assert res.verify(hull_system(fam, inst.points))


@pytest.mark.parametrize("seed", range(15))
def test_solve_all_equals_brute_force(seed):
    rng = random.Random(100 + seed)
    d, r = rng.choice([(1, 2), (1, 3), (2, 2), (2, 3)])
    n = rng.randint(r + 1, 7)
    inst = random_instance(seed, d, r, n, rng.randint(2, n))
    expected = [f for f in canonical_order(brute_force_families(inst.coloring.class_of, r), n, r)
                if family_feasible(f, inst.points)]
    got = solve_all(inst)
    assert [w.faces for w in got] == expected
    for w in got:
        assert w.is_valid(inst)
    first = solve(inst)
    if expected:
        assert first is not None and first.faces == expected[0]
    else:
        assert first is None


@pytest.mark.parametrize("seed", range(10))
def test_solve_is_first_of_solve_all(seed):
    inst, _ = generate(2, 3, "random", seed)
    all_ = solve_all(inst, SearchConfig(max_solutions=1))
    w = solve(inst)
    assert w is not None
    assert all_[0].faces == w.faces


@pytest.mark.parametrize("seed", range(10))
def test_pruning_sound(seed):
    rng = random.Random(seed)
    inst = random_instance(seed, 2, 3, 7, rng.randint(3, 7))
    on = solve_all(inst)
    off = solve_all(inst, SearchConfig(prune_with_prefix_lp=False))
    assert [w.faces for w in on] == [w.faces for w in off]
    assert [w.point for w in on] == [w.point for w in off]


@pytest.mark.parametrize("seed", range(8))
def test_relabeling_invariance(seed):
    rng = random.Random(seed)
    inst = random_instance(seed, 2, 3, 7, 7)
    perm = list(range(7))
    rng.shuffle(perm)
    # new vertex perm[v] is old vertex v
    pts = [None] * 7
    colors = [None] * 7
    for old, new in enumerate(perm):
        pts[new] = inst.points[old]
        colors[new] = inst.coloring.class_of[old]
    moved = Instance(2, 3, tuple(pts), Instance.build(2, 3, pts, colors).coloring)
    a = {frozenset(frozenset(perm[v] for v in f) for f in w.faces) for w in solve_all(inst)}
    b = {frozenset(frozenset(f) for f in w.faces) for w in solve_all(moved)}
    assert a == b


def test_coincident_points():
    inst = Instance.build(2, 3, [(1, 1)] * 7, list(range(7)))
    w = solve(inst)
    assert w is not None and w.point == make_point((1, 1))


def test_use_all_vertices():
    inst = moment(7)
    w = solve(inst, SearchConfig(require_all_vertices_used=True))
    assert w is not None
    assert sorted(v for f in w.faces for v in f) == list(range(7))


def test_parallel_matches_sequential():
    inst, _ = generate(2, 3, "singletons", 3)
    seq = solve_all(inst, SearchConfig(max_solutions=20))
    par = solve_all(inst, SearchConfig(max_solutions=20, workers=2))
    assert [w.faces for w in seq] == [w.faces for w in par]
    assert solve(inst, SearchConfig(workers=2)).faces == solve(inst).faces


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_solutions=0)
    with pytest.raises(ValueError):
        SearchConfig(workers=0)


def test_small_enumeration_examples():
    three = Instance.build(1, 2, [(0,), (1,), (2,)], [0, 1, 2])
    fams = list(enumerate_rainbow_families(three))
    assert len(fams) == 6
    assert ((0,), (1, 2)) in fams and ((0, 2), (1,)) in fams
    same = Instance.build(1, 2, [(0,), (1,)], [0, 0])
    assert list(enumerate_rainbow_families(same)) == [((0,), (1,))]
    assert list(enumerate_rainbow_families(Instance.build(1, 3, [(0,), (1,)], [0, 1]))) == []


def test_identical_points_radon():
    inst = Instance.build(1, 2, [(5,), (5,)], [0, 1])
    ws = solve_all(inst)
    assert [w.faces for w in ws] == [((0,), (1,))]
    assert ws[0].point == make_point((5,))

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from perdist.cones import (LatticeCone, UnboundedRegionError, angular_margin, check_disjoint,
                           cone_separation_constant, count_brute_force, count_growth_fit,
                           disjoint_after_negation, intersection_count, split_acute, standard_pair,
                           uniform_directions)

G1, G2 = standard_pair()


# -- membership -------------------------------------------------------------------

@pytest.mark.parametrize("k, inside", [((4, 2), True), ((0, 0), False), ((4, 3), False), ((4, -2), True), ((-4, 0), False)])
def test_contains_examples(k, inside):
    assert G1.contains(k) is inside


def test_contains_many_matches_contains():
    pts = np.stack(np.meshgrid(np.arange(-9, 10), np.arange(-9, 10), indexing="ij"), axis=-1).reshape(-1, 2)
    fast = G1.contains_many(pts)
    assert all(bool(f) == G1.contains(p) for f, p in zip(fast, pts))


def test_contains_is_exact_for_large_points():
    # a float evaluation of 2k2 - k1 loses the unit offset at this size
    big = 2**60
    assert G1.contains((2 * big, big))
    assert not G1.contains((2 * big, big + 1))


def test_mask_and_apex():
    shifted = G1.translated((3, 0))
    assert not shifted.contains((3, 0)) and shifted.contains((4, 0))
    m = G1.mask(2)
    assert m.shape == (5, 5) and m[2 + 2, 2 + 1] and not m[2, 2]


def test_real_normals_are_rationalized():
    c = LatticeCone.from_halfspaces(2, [((0.5, 0.25), False)])
    assert c.normals == ((2, 1),)


def test_invalid_cones_rejected():
    with pytest.raises(ValueError):
        LatticeCone.from_halfspaces(2, [((0, 0), False)])
    with pytest.raises(ValueError):
        LatticeCone.from_halfspaces(2, [((1, 0), True), ((-1, 0), False)])
    with pytest.raises(ValueError):
        LatticeCone.from_halfspaces(2, [])
    with pytest.raises(ValueError):
        LatticeCone.circular((1, 0), 95)


def test_serialization_round_trip():
    obj = json.loads(json.dumps(G1.to_dict()))
    assert obj == {"dim": 2, "apex": [0, 0], "halfspaces": [
        {"normal": [1, 0], "strict": True}, {"normal": [1, -2], "strict": False},
        {"normal": [1, 2], "strict": False}]}
    assert LatticeCone.from_dict(obj) == G1


def test_circular_cones():
    c = LatticeCone.circular((0, 1), 20)
    assert c.contains((0, 5)) and c.contains((1, 5)) and not c.contains((5, 5))
    h = LatticeCone.circular((-1,), 10)
    assert h.contains((-1,)) and not h.contains((0,))
    c3 = LatticeCone.circular((0, 0, 1), 30)
    assert c3.contains((0, 0, 4)) and c3.contains((1, 1, 4)) and not c3.contains((4, 0, 4))


# -- disjointness -------------------------------------------------------------------

def test_standard_pair_disjoint():
    res = check_disjoint(G1, G2)
    assert res.disjoint and res.certified
    assert disjoint_after_negation(G1, G2)


def test_negated_cone_not_disjoint():
    assert not disjoint_after_negation(G1, G1.negated())


def test_shared_boundary_ray_detected():
    a = LatticeCone.from_halfspaces(2, [((1, 0), False), ((1, -1), False), ((1, 1), False)])
    b = LatticeCone.from_halfspaces(2, [((0, 1), False), ((-1, 1), False), ((1, 1), False)])
    res = check_disjoint(a, b)
    assert not res.disjoint and res.witness == (1, -1)


def test_strict_boundary_keeps_cones_disjoint():
    a = LatticeCone.from_halfspaces(2, [((1, 0), False), ((1, -1), False), ((1, 1), True)])
    b = LatticeCone.from_halfspaces(2, [((0, 1), False), ((-1, 1), False), ((1, 1), False)])
    assert disjoint_after_negation(a, b)


def test_disjoint_requires_origin_apex():
    with pytest.raises(ValueError):
        check_disjoint(G1.translated((1, 0)), G2)


# -- counting -----------------------------------------------------------------------

@pytest.mark.parametrize("n, count", [((0, 0), 0), ((2, -2), 0), ((6, 2), 17)])
def test_count_examples(n, count):
    assert intersection_count(G1, G2, n) == count
    assert count_brute_force(G1, G2, n, half_width=20) == count


def test_count_matches_brute_force_on_sampled_points():
    rng = np.random.default_rng(0)
    for n in rng.integers(-24, 25, size=(40, 2)):
        assert intersection_count(G1, G2, n) == count_brute_force(G1, G2, n)


def test_count_symmetric_in_roles():
    rng = np.random.default_rng(1)
    for n in rng.integers(-30, 31, size=(20, 2)):
        assert intersection_count(G1, G2, n) == intersection_count(G2, G1, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(5, 60), st.integers(5, 60))
def test_count_matches_brute_force_for_sectors(n1, n2, a1, a2):
    c1 = LatticeCone.circular((1, 0), a1 / 2, strict=True)
    c2 = LatticeCone.circular((0, 1), a2 / 2)
    assert intersection_count(c1, c2, (n1, n2)) == count_brute_force(c1, c2, (n1, n2))


def test_count_with_obtuse_cone():
    wide = LatticeCone.from_halfspaces(2, [((0, 1), False), ((1, 1), True)])
    narrow = LatticeCone.circular((0, 1), 20)
    assert len(split_acute(wide)) == 2
    for n in [(5, -40), (0, -30), (17, -9), (-8, -3)]:
        assert intersection_count(wide, narrow, n) == count_brute_force(wide, narrow, n)


def test_count_in_one_and_three_dimensions():
    pos, neg = LatticeCone.circular((1,), 0), LatticeCone.circular((1,), 0)
    # k > 0 and n - k > 0: n - 1 points
    assert intersection_count(pos, neg, (7,)) == 6
    a, b = LatticeCone.circular((0, 0, 1), 30), LatticeCone.circular((1, 0, 0), 30)
    for n in [(3, 0, 4), (5, -2, 6), (8, 1, 8)]:
        assert intersection_count(a, b, n) == count_brute_force(a, b, n)


def test_unbounded_region_rejected():
    with pytest.raises(UnboundedRegionError):
        intersection_count(G1, G1.negated(), (3, 0))


def test_growth_fit_standard_pair():
    fit = count_growth_fit(G1, G2, radii=(8, 16, 32, 64, 128), n_directions=16)
    assert 1.7 <= fit.gamma <= 2.1
    assert fit.gamma == pytest.approx(1.9476, abs=1e-3)
    assert fit.counts.shape == (80,)
    assert set(fit.to_dict()) == {"gamma", "constant", "samples"}


def test_quadratic_ratio_is_stable_across_radii():
    dirs = uniform_directions(2, 16)
    ratios = []
    for r in (16, 32, 64, 128, 256):
        ratios.append(max(intersection_count(G1, G2, np.rint(r * u).astype(np.int64)) for u in dirs) / r**2)
    assert max(ratios) / min(ratios) <= 1.1
    assert ratios[-1] == pytest.approx(0.53616, abs=1e-4)


def test_growth_fit_for_a_ray_is_linear():
    ray = LatticeCone.from_halfspaces(2, [((0, 1), False), ((0, -1), False), ((1, 0), True)])
    assert disjoint_after_negation(G2, ray)
    assert count_growth_fit(G2, ray).gamma <= 1.1


def test_growth_fit_all_zero():
    ray = LatticeCone.from_halfspaces(2, [((0, 1), False), ((0, -1), False), ((1, 0), True)])
    fit = count_growth_fit(ray, ray.negated().negated(), directions=[(0.0, -1.0)], radii=(8, 16))
    assert fit.gamma == 0.0 and np.all(fit.counts == 0)


def test_growth_fit_three_dimensions_exploratory():
    a, b = LatticeCone.circular((0, 0, 1), 30), LatticeCone.circular((1, 0, 0), 30)
    fit = count_growth_fit(a, b, radii=(4, 8, 16), n_directions=8)
    assert np.isfinite(fit.gamma) and fit.gamma > 0


def test_uniform_directions_are_unit():
    for d in (2, 3):
        u = uniform_directions(d, 12)
        assert np.allclose(np.linalg.norm(u, axis=1), 1.0)


# -- separation ---------------------------------------------------------------------

def test_separation_constant_stabilizes():
    inner, outer = LatticeCone.circular((1, 0), 15), LatticeCone.circular((1, 0), 30)
    assert angular_margin(inner, outer) == pytest.approx(np.radians(15))
    c100 = cone_separation_constant(inner, outer, 100)
    c200 = cone_separation_constant(inner, outer, 200)
    assert c200 > 0 and abs(c200 - c100) <= 0.1 * c100
    assert c200 == pytest.approx(0.258889, abs=1e-5)


def test_separation_constant_half_line():
    h = LatticeCone.circular((1,), 0)
    assert cone_separation_constant(h, h, 50) >= 1.0


def test_separation_rejects_equal_cones():
    outer = LatticeCone.circular((1, 0), 30)
    with pytest.raises(ValueError):
        cone_separation_constant(outer, outer, 50)

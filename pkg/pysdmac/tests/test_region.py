import logging
import os
import tempfile
import unittest

import numpy as np

from pysdmac.api import hull
from pysdmac.api.channel import (
    SchemeKind, StateModel, ValidationError, direct_scheme, random_scheme)
from pysdmac.api.prob import SizeLimitError, make_rng
from pysdmac.api.region import (
    RateBounds, RegionCloud, RegionError, SearchParams, THEOREMS,
    bounds_cover_leung, bounds_for, bounds_nofeedback, bounds_thm1,
    bounds_thm2, bounds_thm3, compare_regions, point_in_region, region_search,
    theorem_id)
from pysdmac.tests.helpers import (
    additive_state_kernel, binary_states, constant_kernel, identity_kernel,
    identity_scheme, noisy_state_kernel)

logger = logging.getLogger(__name__)

"""
レート領域の評価関数と探索のテスト。

このモジュールのテストを行なうには、次のコマンドを実行してください。

python -m unittest -v pysdmac.tests.test_region
"""


class TestHull(unittest.TestCase):

    def test_square_with_interior_points(self):
        points = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (0.5, 0)]
        h = hull.convex_hull(points)
        self.assertEqual(h, [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
        self.assertEqual(hull.area(h), 1.0)
        for pt in points:
            self.assertTrue(hull.contains(h, pt))

        self.assertFalse(hull.contains(h, (1.1, 0.5)))

    def test_degenerate(self):
        h = hull.convex_hull([(0, 0), (0, 0)])
        self.assertEqual(h, [(0.0, 0.0)])
        self.assertTrue(hull.contains(h, (0.0, 0.0)))
        self.assertFalse(hull.contains(h, (0.0, 0.1)))
        self.assertEqual(hull.area(h), 0.0)

        h = hull.convex_hull([(0, 0), (0.5, 0), (1, 0)])
        self.assertEqual(h, [(0.0, 0.0), (1.0, 0.0)])
        self.assertTrue(hull.contains(h, (0.25, 0.0)))
        self.assertFalse(hull.contains(h, (1.5, 0.0)))
        self.assertFalse(hull.contains(h, (0.5, 0.01)))

    def test_empty(self):
        with self.assertRaises(ValueError):
            hull.contains([], (0, 0))


class TestRateBounds(unittest.TestCase):

    def test_corner_points(self):
        b = RateBounds(1.0, 1.0, 1.5, theorem=1)
        self.assertEqual(b.corner_points(), [
            (0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 1.0)])

    def test_sum_not_binding(self):
        b = RateBounds(0.5, 0.25, 2.0, theorem=1)
        self.assertEqual(b.corner_points(), [
            (0.0, 0.0), (0.5, 0.0), (0.5, 0.25), (0.0, 0.25)])

    def test_clamp(self):
        b = RateBounds(-1e-13, 0.5, -0.2, theorem=2)
        self.assertEqual((b.r1_max, b.r2_max, b.rsum_max), (0.0, 0.5, 0.0))
        self.assertEqual(b.raw, (-1e-13, 0.5, -0.2))
        self.assertEqual(b.corner_points(), [(0.0, 0.0)])

    def test_contains(self):
        b = RateBounds(1.0, 1.0, 1.5, theorem=1)
        self.assertTrue(b.contains(0.75, 0.75))
        self.assertFalse(b.contains(1.0, 1.0))


class TestEvaluators(unittest.TestCase):

    def test_identity_channel(self):
        p = identity_scheme()
        for t in THEOREMS:
            raw = bounds_for(t, p).raw
            np.testing.assert_allclose(raw, (1.0, 1.0, 2.0), atol=1e-9)

    def test_degenerate_output(self):
        p = direct_scheme(StateModel.null(), constant_kernel())
        for t in range(1, 7):
            self.assertEqual(bounds_for(t, p).corner_points(), [(0.0, 0.0)])

    def test_causal_bounds_dominate(self):
        states = binary_states(q1=(0.3, 0.7))
        for i in range(20):
            p = random_scheme(states, noisy_state_kernel(), rng=make_rng(9, i))
            b1, b2 = bounds_thm1(p).raw, bounds_thm2(p).raw
            for lo, hi in zip(b1, b2):
                self.assertLessEqual(lo, hi + 1e-12)

    def test_dispatch(self):
        self.assertEqual(theorem_id(SchemeKind.parse('partial-causal')), 5)
        self.assertEqual(theorem_id('cover-leung'), 'cover-leung')
        self.assertEqual(bounds_for('6', identity_scheme()).theorem, 6)
        with self.assertRaises(RegionError):
            theorem_id(7)

    def test_nofeedback_requires_single_cloud(self):
        p = random_scheme(StateModel.null(), identity_kernel(), (2, 2, 2),
                          rng=make_rng(0))
        with self.assertRaises(RegionError):
            bounds_nofeedback(p)

    def test_cover_leung_preconditions(self):
        p = random_scheme(binary_states(), additive_state_kernel(),
                          rng=make_rng(0))
        with self.assertRaises(RegionError):
            bounds_cover_leung(p)

        with self.assertRaises(TypeError):
            bounds_cover_leung(identity_scheme().joint())

    def test_invalid_scheme(self):
        p = random_scheme(StateModel.null(), identity_kernel(),
                          rng=make_rng(0), maps=(
                              np.full((2, 2, 1, 1), -1),
                              np.zeros((2, 2, 1, 1), dtype=int)))
        with self.assertRaises(ValidationError):
            bounds_thm1(p)


class TestRegionSearch(unittest.TestCase):

    def test_identity_channel_reaches_corner(self):
        search = SearchParams(cardinalities=(1, 2, 2), samples=500, seed=0)
        cloud = region_search(3, StateModel.null(), identity_kernel(), search)
        self.assertTrue(point_in_region((0.95, 0.95), cloud))
        self.assertFalse(point_in_region((1.05, 1.05), cloud))
        for pt in cloud.points:
            self.assertTrue(cloud.contains(pt))

        r1, r2 = cloud.max_rates()
        self.assertLessEqual(r1, 1.0 + 1e-9)
        self.assertLessEqual(r2, 1.0 + 1e-9)

    def test_degenerate_channel(self):
        cloud = region_search(1, StateModel.null(), constant_kernel(),
                              SearchParams(samples=10))
        self.assertEqual(cloud.hull, [(0.0, 0.0)])
        self.assertEqual(cloud.area(), 0.0)

    def test_reproducible(self):
        search = SearchParams(samples=30, seed=5)
        states = binary_states()
        a = region_search(2, states, additive_state_kernel(), search)
        b = region_search(2, states, additive_state_kernel(), search)
        self.assertEqual(a.to_csv_text(), b.to_csv_text())

    def test_independent_of_processes(self):
        search = SearchParams(samples=12, seed=3, processes=1)
        states = binary_states(q1=(0.3, 0.7))
        a = region_search(4, states, noisy_state_kernel(), search)
        b = region_search(4, states, noisy_state_kernel(),
                          search.replace(processes=2))
        self.assertEqual(a.to_csv_text(), b.to_csv_text())

    def test_provenance(self):
        cloud = region_search(1, StateModel.null(), identity_kernel(),
                              SearchParams(samples=5, seed=1))
        self.assertEqual(int(cloud.sample_indices[0]), -1)
        self.assertEqual(sorted(cloud.schemes), [0, 1, 2, 3, 4])
        index = int(cloud.sample_indices[-1])
        scheme = cloud.schemes[index]
        corners = bounds_thm1(scheme).corner_points()
        self.assertIn(tuple(cloud.points[-1]), corners)

    def test_provenance_with_enumerated_maps(self):
        search = SearchParams(cardinalities=(1, 2, 2), samples=2, seed=6,
                              enumerate_maps=True)
        cloud = region_search(3, StateModel.null(), identity_kernel(), search)
        self.assertGreater(len(cloud.points), 1)
        for pt, index in zip(cloud.points[1:], cloud.sample_indices[1:]):
            corners = bounds_thm3(cloud.schemes[int(index)]).corner_points()
            self.assertIn(tuple(pt), corners)

    def test_hull_ignores_point_order(self):
        cloud = region_search(2, binary_states(), additive_state_kernel(),
                              SearchParams(samples=40, seed=9))
        rng = np.random.default_rng(0)
        for _ in range(5):
            order = rng.permutation(len(cloud.points))
            shuffled = RegionCloud(cloud.points[order],
                                   cloud.sample_indices[order])
            self.assertEqual(shuffled.hull, cloud.hull)
            self.assertEqual(shuffled.area(), cloud.area())

    def test_nofeedback_search_uses_single_cloud(self):
        cloud = region_search('no-feedback', StateModel.null(),
                              identity_kernel(), SearchParams(samples=5))
        for scheme in cloud.schemes.values():
            self.assertEqual(scheme.cardinalities[0], 1)

    def test_enumerate_maps(self):
        search = SearchParams(cardinalities=(1, 2, 2), samples=3,
                              enumerate_maps=True)
        cloud = region_search(3, StateModel.null(), identity_kernel(), search)
        self.assertGreater(len(cloud.points), 1)

        # 4 * 4 個の (f1, f2) の組にそれぞれ別の番号が付く
        self.assertEqual(sorted(cloud.schemes), list(range(3 * 16)))

        search = SearchParams(enumerate_maps=True)
        with self.assertRaises(SizeLimitError):
            region_search(3, binary_states(), additive_state_kernel(), search)

    def test_compare_regions(self):
        clouds = compare_regions(
            [1, 2, 3, SchemeKind.parse('full-strict')], StateModel.null(),
            identity_kernel(), SearchParams(samples=40, seed=2))
        self.assertEqual(list(clouds), [1, 2, 3])
        # 状態が退化していれば3つの領域は一致する
        self.assertAlmostEqual(clouds[1].area(), clouds[3].area(), places=9)
        self.assertAlmostEqual(clouds[2].area(), clouds[3].area(), places=9)

    def test_search_params(self):
        with self.assertRaises(RegionError):
            SearchParams(samples=0)

        with self.assertRaises(RegionError):
            SearchParams(cardinalities=(0, 2, 2))

        with self.assertRaises(RegionError):
            SearchParams(concentration=0.0)


class TestRegionCloud(unittest.TestCase):

    def test_csv_round_trip(self):
        cloud = region_search(2, binary_states(), additive_state_kernel(),
                              SearchParams(samples=10, seed=4))
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'points.csv')
            cloud.to_csv(path)
            loaded = RegionCloud.read_csv(path, theorem=2)

        np.testing.assert_array_equal(loaded.points, cloud.points)
        np.testing.assert_array_equal(loaded.sample_indices,
                                      cloud.sample_indices)
        self.assertEqual(loaded.hull, cloud.hull)

    def test_read_csv_rejects_other_columns(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'other.csv')
            with open(path, 'w', encoding='utf-8') as f:
                f.write("x,y\n0,0\n")

            with self.assertRaises(RegionError):
                RegionCloud.read_csv(path)

    def test_hull_vertex_mask(self):
        cloud = RegionCloud([(0.0, 0.0), (1.0, 0.0), (0.2, 0.2), (0.0, 1.0)])
        np.testing.assert_array_equal(
            cloud.hull_vertex_mask(), [True, True, False, True])
        self.assertAlmostEqual(cloud.area(), 0.5)

    def test_mismatched_indices(self):
        with self.assertRaises(RegionError):
            RegionCloud([(0.0, 0.0)], sample_indices=[0, 1])


if __name__ == '__main__':
    unittest.main()

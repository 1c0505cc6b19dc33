import logging
import unittest

from pysdmac.api.channel import StateModel, random_scheme
from pysdmac.api.prob import make_rng
from pysdmac.api.reduction import (
    IDENTITIES, IdentityReport, check_identities, direct_thm1)
from pysdmac.api.region import (
    SearchParams, bounds_cover_leung, bounds_thm1, bounds_thm3)
from pysdmac.tests.helpers import (
    additive_state_kernel, binary_states, bsc_pair_kernel, identity_kernel,
    noisy_state_kernel)

logger = logging.getLogger(__name__)

"""
評価関数どうしの恒等式のテスト。

このモジュールのテストを行なうには、次のコマンドを実行してください。

python -m unittest -v pysdmac.tests.test_reduction
"""


class TestIdentities(unittest.TestCase):

    def test_null_state_channel(self):
        report = check_identities(
            StateModel.null(), bsc_pair_kernel(0.1),
            SearchParams(samples=50, seed=1))
        self.assertTrue(report.passed, report.as_dict())
        self.assertEqual(sorted(report.deviations), sorted(IDENTITIES))
        self.assertLess(report.deviations['null-state-collapse'], 1e-12)

    def test_stateful_channel(self):
        report = check_identities(
            binary_states(q1=(0.3, 0.7)), noisy_state_kernel(),
            SearchParams(samples=200, seed=2))
        self.assertTrue(report.passed, report.as_dict())
        self.assertLess(report.deviations['penalty-thm2-thm1'], 1e-12)
        self.assertLess(report.deviations['penalty-thm5-thm4'], 1e-12)
        self.assertEqual(report.deviations['thm6-equals-thm3'], 0.0)

    def test_larger_auxiliaries(self):
        report = check_identities(
            binary_states(), additive_state_kernel(),
            SearchParams(cardinalities=(2, 3, 2), samples=20, seed=3))
        self.assertTrue(report.passed, report.as_dict())

    def test_cover_leung_collapse(self):
        for i in range(50):
            p = random_scheme(StateModel.null(), identity_kernel(),
                              rng=make_rng(4, i))
            self.assertAlmostEqual(
                max(abs(a - b) for a, b in zip(
                    bounds_thm3(p).raw, bounds_cover_leung(p).raw)),
                0.0, places=9)

    def test_direct_thm1(self):
        for i in range(10):
            p = random_scheme(binary_states(), noisy_state_kernel(),
                              rng=make_rng(5, i))
            for a, b in zip(bounds_thm1(p).raw, direct_thm1(p)):
                self.assertAlmostEqual(a, b, places=9)


class TestIdentityReport(unittest.TestCase):

    def test_failures(self):
        report = IdentityReport({'a': 0.0, 'b': 1e-6}, samples=3)
        self.assertFalse(report.passed)
        self.assertEqual(report.failures, ['b'])
        self.assertEqual(report.as_dict()['samples'], 3)


if __name__ == '__main__':
    unittest.main()

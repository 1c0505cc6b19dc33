import logging
import unittest

import numpy as np

from pysdmac.api.channel import (
    ChannelError, ChannelKernel, SchemeDistribution, SchemeKind, StateModel,
    ValidationError, build_joint, count_maps, direct_scheme, enumerate_maps,
    is_valid, random_scheme, validate)
from pysdmac.api.prob import SizeLimitError, make_rng, marginalize
from pysdmac.tests.helpers import (
    additive_state_kernel, binary_states, identity_kernel,
    noisy_state_kernel)

logger = logging.getLogger(__name__)

"""
状態モデル・通信路・分布族の要素のテスト。

このモジュールのテストを行なうには、次のコマンドを実行してください。

python -m unittest -v pysdmac.tests.test_channel
"""


class TestStateModel(unittest.TestCase):

    def test_entropies(self):
        states = StateModel([1.0], [0.5, 0.5], [0.3, 0.7])
        h0, h1, h2 = states.entropies()
        self.assertEqual(h0, 0.0)
        self.assertAlmostEqual(h1, 1.0, places=12)
        self.assertAlmostEqual(h2, 0.88129, places=5)

    def test_invalid_pmf(self):
        with self.assertRaises(ChannelError):
            StateModel([0.5, 0.6], [1.0], [1.0])

        with self.assertRaises(ChannelError):
            StateModel([], [1.0], [1.0])

    def test_sample(self):
        states = binary_states(q1=(1.0, 0.0))
        s0, s1, s2 = states.sample(50, make_rng(0))
        self.assertEqual((len(s0), len(s1), len(s2)), (50, 50, 50))
        self.assertTrue(np.all(s1 == 0))

    def test_null(self):
        self.assertTrue(StateModel.null().is_null)
        self.assertFalse(binary_states().is_null)


class TestChannelKernel(unittest.TestCase):

    def test_rows_must_be_pmfs(self):
        table = np.zeros((1, 1, 1, 2, 2, 2))
        table[..., 0] = 1.0
        table[0, 0, 0, 1, 0] = [0.5, 0.4]
        with self.assertRaises(ChannelError) as cm:
            ChannelKernel(table)

        self.assertIn('[0, 0, 0, 1, 0]', str(cm.exception))

    def test_wrong_rank(self):
        with self.assertRaises(ChannelError):
            ChannelKernel(np.ones((2, 2, 1)))

    def test_sample_deterministic(self):
        kernel = identity_kernel()
        x1 = np.array([0, 1, 0, 1])
        x2 = np.array([0, 0, 1, 1])
        zeros = np.zeros(4, dtype=int)
        y = kernel.sample(zeros, zeros, zeros, x1, x2, make_rng(0))
        np.testing.assert_array_equal(y, [0, 2, 1, 3])

    def test_averaged(self):
        states = binary_states(q0=(1.0, 0.0), q1=(0.25, 0.75))
        averaged = additive_state_kernel().averaged(states)
        self.assertEqual(averaged.state_sizes, (1, 1, 1))
        # s0 = 0, s1 は確率 0.75 で x1 を反転する
        np.testing.assert_allclose(
            averaged.table[0, 0, 0, 0, 0], [0.125, 0.125, 0.375, 0.375])

    def test_statistics(self):
        kernel = noisy_state_kernel()
        self.assertFalse(kernel.is_deterministic)
        self.assertTrue(identity_kernel().is_deterministic)
        self.assertEqual(len(kernel.output_entropies()), 32)


class TestSchemeKind(unittest.TestCase):

    def test_theorems(self):
        expected = {
            'full-noncausal': 1, 'full-causal': 2, 'full-strict': 3,
            'partial-noncausal': 4, 'partial-causal': 5, 'partial-strict': 6,
            'none': 'no-feedback',
        }
        for label, theorem in expected.items():
            kind = SchemeKind.parse(label)
            self.assertEqual(kind.theorem, theorem)
            self.assertEqual(kind.label, label)

    def test_lag(self):
        self.assertEqual(SchemeKind.parse('full-strict').lag, 1)
        self.assertEqual(SchemeKind.parse('full-strict', lag=3).lag, 3)
        self.assertIsNone(SchemeKind.parse('full-causal', lag=3).lag)
        with self.assertRaises(ChannelError):
            SchemeKind(SchemeKind.TWO_SIDED, SchemeKind.CAUSAL, lag=2)

        with self.assertRaises(ChannelError):
            SchemeKind(SchemeKind.PARTIAL, SchemeKind.STRICT, lag=0)

    def test_unknown_label(self):
        with self.assertRaises(ChannelError):
            SchemeKind.parse('half-causal')

    def test_equality(self):
        self.assertEqual(SchemeKind.parse('partial-causal'),
                         SchemeKind(SchemeKind.PARTIAL, SchemeKind.CAUSAL))
        self.assertNotEqual(SchemeKind.parse('full-strict', lag=1),
                            SchemeKind.parse('full-strict', lag=2))


class TestSchemeDistribution(unittest.TestCase):

    def setUp(self):
        self.states = binary_states(q1=(0.3, 0.7))
        self.kernel = noisy_state_kernel()

    def test_shape_errors(self):
        with self.assertRaises(ChannelError):
            SchemeDistribution(
                StateModel.null(), self.kernel, [1.0],
                [[[[1.0]]]], [[[[1.0]]]], [[[[0]]]], [[[[0]]]])

        with self.assertRaises(ChannelError):
            SchemeDistribution(
                StateModel.null(), identity_kernel(), [1.0],
                [[[1.0]]], [[[[1.0]]]], [[[[0]]]], [[[[0]]]])

    def test_validate_reports_every_violation(self):
        p = SchemeDistribution(
            StateModel.null(), identity_kernel(), [0.5, 0.6],
            [[[[1.0]]], [[[1.0]]]], [[[[0.7, 0.7]]], [[[0.5, 0.5]]]],
            [[[[0]]], [[[2]]]], [[[[0]], [[1]]], [[[0]], [[1]]]])
        items = sorted((v.item, v.index) for v in validate(p))
        self.assertEqual(items, [
            ('f1', (1, 0, 0, 0)), ('pu', ()), ('pv2', (0, 0, 0))])
        self.assertFalse(is_valid(p))
        with self.assertRaises(ValidationError):
            build_joint(p)

    def test_joint_marginals(self):
        p = random_scheme(self.states, self.kernel, (2, 3, 2),
                          rng=make_rng(1))
        t = p.joint()
        self.assertAlmostEqual(float(t.probs.sum()), 1.0, places=12)
        np.testing.assert_allclose(
            marginalize(t, ['s1']).probs, [0.3, 0.7], atol=1e-12)
        np.testing.assert_allclose(
            marginalize(t, ['u']).probs, p.pu, atol=1e-12)
        self.assertIs(p.joint(), t)

    def test_encoder_is_deterministic(self):
        p = random_scheme(self.states, self.kernel, rng=make_rng(2))
        t = p.joint().probs
        for index in np.ndindex(*t.shape[:6]):
            s0, s1, s2, u, v1, v2 = index
            x1 = p.f1[u, v1, s0, s1]
            x2 = p.f2[u, v2, s0, s2]
            mass = t[index].sum()
            self.assertAlmostEqual(float(t[index][x1, x2].sum()), mass,
                                   places=14)

    def test_satellite_pmf(self):
        p = random_scheme(self.states, self.kernel, (2, 2, 3),
                          rng=make_rng(3))
        for k, size in ((1, 2), (2, 3)):
            pmf = p.satellite_pmf(k)
            self.assertEqual(pmf.shape, (2, size))
            np.testing.assert_allclose(pmf.sum(axis=1), [1.0, 1.0])

        blind = p.state_blind()
        np.testing.assert_allclose(
            blind.pv1[:, 0, 0], blind.pv1[:, 1, 1])
        np.testing.assert_allclose(blind.satellite_pmf(1),
                                   p.satellite_pmf(1))

    def test_random_scheme_is_reproducible(self):
        a = random_scheme(self.states, self.kernel, rng=make_rng(4))
        b = random_scheme(self.states, self.kernel, rng=make_rng(4))
        np.testing.assert_array_equal(a.pv1, b.pv1)
        np.testing.assert_array_equal(a.f2, b.f2)
        self.assertTrue(is_valid(a))

    def test_size_limit(self):
        with self.assertRaises(SizeLimitError):
            random_scheme(self.states, self.kernel, (64, 64, 64),
                          rng=make_rng(0))

    def test_enumerate_maps(self):
        kernel = identity_kernel()
        maps = list(enumerate_maps(StateModel.null(), kernel, (1, 2, 1)))
        self.assertEqual(len(maps), 8)
        self.assertEqual(count_maps(StateModel.null(), kernel, (1, 2, 1)), 8)
        self.assertEqual(
            len(set(f1.tobytes() + f2.tobytes() for f1, f2 in maps)), 8)

    def test_direct_scheme(self):
        p = direct_scheme(self.states, self.kernel)
        t = marginalize(p.joint(), ['x1', 'x2'])
        np.testing.assert_allclose(t.probs, np.full((2, 2), 0.25))

    def test_round_trip_dict(self):
        p = random_scheme(self.states, self.kernel, rng=make_rng(5))
        q = SchemeDistribution.from_dict(self.states, self.kernel, p.as_dict())
        np.testing.assert_array_equal(p.pv2, q.pv2)
        np.testing.assert_array_equal(p.f1, q.f1)

    def test_from_dict_missing_key(self):
        with self.assertRaises(ChannelError):
            SchemeDistribution.from_dict(
                self.states, self.kernel, {'u': [1.0]})


if __name__ == '__main__':
    unittest.main()

"""
領域の評価関数どうしの恒等式を、無作為に抽出した分布で確認します。

- null-state-collapse : 状態が退化していれば定理 1, 2, 3 の上界は
  Cover-Leung 型の上界（独立な実装）と一致する
- penalty-thm2-thm1, penalty-thm5-thm4 : 因果的な場合と非因果的な場合の
  差は I(V;S|U) の項に等しい
- thm6-equals-thm3 : 2つの式は同一
- arm-ordering : 定理 3 の上界は定理 2 の上界以上
- no-feedback : |U| = 1 のとき和レートは定理 1 と一致し、
  個別レートは定理 1 以上・定理 4 と一致する
- direct-evaluation : 定理 1 の上界を同時確率表から直接和で計算し直した値と一致する
"""
from logging import getLogger

from pysdmac.api.channel import VARIABLES, StateModel, random_scheme
from pysdmac.api.prob import make_rng, mutual_info
from pysdmac.api.region import (
    bounds_cover_leung, bounds_nofeedback, bounds_thm1, bounds_thm2,
    bounds_thm3, bounds_thm4, bounds_thm5, bounds_thm6, direct_cmi)

logger = getLogger(__name__)

TOLERANCE = 1e-9

IDENTITIES = (
    'null-state-collapse',
    'penalty-thm2-thm1',
    'penalty-thm5-thm4',
    'thm6-equals-thm3',
    'arm-ordering',
    'no-feedback',
    'direct-evaluation',
)


class IdentityReport(object):
    """
    恒等式ごとの最大偏差。

    Attributes
    ----------
    deviations : dict
        恒等式の名前から最大偏差への対応。
    samples : int
        恒等式ごとに評価した分布の数。
    tolerance : float
        合否の閾値。
    """

    def __init__(self, deviations, samples, tolerance=TOLERANCE):
        self.deviations = dict(deviations)
        self.samples = samples
        self.tolerance = tolerance

    @property
    def failures(self):
        return [name for name, value in self.deviations.items()
                if value > self.tolerance]

    @property
    def passed(self):
        return len(self.failures) == 0

    def as_dict(self):
        return {
            'samples': self.samples,
            'tolerance': self.tolerance,
            'deviations': self.deviations,
            'failures': self.failures,
            'passed': self.passed,
        }


def _deviation(values, expected):
    return max(abs(a - b) for a, b in zip(values, expected))


def _axes(*names):
    return tuple(VARIABLES.index(n) for n in names)


def direct_thm1(p):
    """
    ``bounds_thm1()`` と同じ式を、prob モジュールを使わずに
    同時確率表の直接和で計算します。

    Returns
    -------
    tuple of float
        切り詰める前の (r1_max, r2_max, rsum_max)。
    """
    probs = p.joint().probs

    def cmi(a, b, c=()):
        return direct_cmi(probs, _axes(*a), _axes(*b), _axes(*c))

    pen1 = cmi(['v1'], ['s0', 's1'], ['u'])
    pen2 = cmi(['v2'], ['s0', 's2'], ['u'])
    r1 = min(cmi(['v1'], ['y'], ['u', 'v2']),
             cmi(['v1'], ['y'], ['u', 'v2', 's0', 's2'])) - pen1
    r2 = min(cmi(['v2'], ['y'], ['u', 'v1']),
             cmi(['v2'], ['y'], ['u', 'v1', 's0', 's1'])) - pen2
    rsum = cmi(['v1', 'v2'], ['y']) - pen1 - pen2
    return (r1, r2, rsum)


def _collapse(p):
    b1, b2, b3 = bounds_thm1(p).raw, bounds_thm2(p).raw, bounds_thm3(p).raw
    cl = bounds_cover_leung(p).raw
    return max(_deviation(b1, b2), _deviation(b1, b3), _deviation(b1, cl))


def _penalties(p):
    t = p.joint()
    pen1 = mutual_info(t, 'v1', ['s0', 's1'], 'u')
    pen2 = mutual_info(t, 'v2', ['s0', 's2'], 'u')
    return (pen1, pen2, pen1 + pen2)


def _penalty_identity(p, causal, noncausal):
    upper, lower = causal(p).raw, noncausal(p).raw
    return _deviation([a - b for a, b in zip(upper, lower)], _penalties(p))


def _arm_ordering(p):
    b2, b3 = bounds_thm2(p).raw, bounds_thm3(p).raw
    return max(0.0, b2[0] - b3[0], b2[1] - b3[1])


def _no_feedback(p):
    nf = bounds_nofeedback(p).raw
    b1 = bounds_thm1(p).raw
    b4 = bounds_thm4(p).raw
    return max(abs(nf[2] - b1[2]), abs(nf[0] - b4[0]),
               b1[0] - nf[0], b1[1] - nf[1], 0.0)


def check_identities(states, kernel, search):
    """
    恒等式を全て評価し、IdentityReport を返します。

    null-state-collapse は、状態について平均した通信路
    （状態が退化したもの）で評価します。

    Parameters
    ----------
    states : StateModel
    kernel : ChannelKernel
    search : SearchParams
        抽出する分布の数・アルファベットの大きさ・シード値。

    Returns
    -------
    IdentityReport
    """
    null_states = StateModel.null()
    null_kernel = kernel.averaged(states)
    _, nv1, nv2 = search.cardinalities
    deviations = {name: 0.0 for name in IDENTITIES}

    def draw(suite, index, st, k, cardinalities):
        rng = make_rng(search.seed, suite, index)
        return random_scheme(st, k, cardinalities, search.concentration, rng)

    for i in range(search.samples):
        p = draw(0, i, null_states, null_kernel, search.cardinalities)
        deviations['null-state-collapse'] = max(
            deviations['null-state-collapse'], _collapse(p))

        p = draw(1, i, states, kernel, search.cardinalities)
        checks = {
            'penalty-thm2-thm1': _penalty_identity(p, bounds_thm2, bounds_thm1),
            'penalty-thm5-thm4': _penalty_identity(p, bounds_thm5, bounds_thm4),
            'thm6-equals-thm3': _deviation(
                bounds_thm6(p).raw, bounds_thm3(p).raw),
            'arm-ordering': _arm_ordering(p),
            'direct-evaluation': _deviation(
                bounds_thm1(p).raw, direct_thm1(p)),
        }
        for name, value in checks.items():
            deviations[name] = max(deviations[name], value)

        p = draw(2, i, states, kernel, (1, nv1, nv2))
        deviations['no-feedback'] = max(
            deviations['no-feedback'], _no_feedback(p))

        logger.debug("sample {}: {}".format(i, deviations))

    report = IdentityReport(deviations, search.samples)
    logger.info("identities: {}".format(
        "passed" if report.passed else "failed: " + ",".join(report.failures)))
    return report

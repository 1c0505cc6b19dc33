import numpy as np

from pysdmac.api.channel import (
    ChannelKernel, SchemeDistribution, StateModel, direct_scheme)
from pysdmac.api.prob import JointTable


def identity_kernel():
    """
    y = 2 x1 + x2 の雑音のない2元 MAC。
    """
    return ChannelKernel.from_function(
        (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)


def constant_kernel():
    """
    |Y| = 1 の情報を運ばない通信路。
    """
    return ChannelKernel.from_function(
        (1, 1, 1), (2, 2), 1, lambda s0, s1, s2, x1, x2: 0)


def bsc_pair_kernel(crossover):
    """
    送信者ごとに独立な反転確率 crossover の2元対称通信路の組。
    y = 2 y1 + y2 です。
    """
    def flip(x):
        return np.array([1.0 - crossover, crossover])[[x, 1 - x]]

    return ChannelKernel.from_function(
        (1, 1, 1), (2, 2), 4,
        lambda s0, s1, s2, x1, x2: np.outer(flip(x1), flip(x2)).ravel())


def binary_states(q0=(0.5, 0.5), q1=(0.5, 0.5), q2=(0.5, 0.5)):
    return StateModel(q0, q1, q2)


def additive_state_kernel():
    """
    y = 2 (x1 xor s0 xor s1) + (x2 xor s0 xor s2)。
    """
    return ChannelKernel.from_function(
        (2, 2, 2), (2, 2), 4,
        lambda s0, s1, s2, x1, x2: 2 * ((x1 + s0 + s1) % 2) +
        (x2 + s0 + s2) % 2)


def noisy_state_kernel():
    """
    状態ごとに出力分布が異なる、決定的でない2元 MAC。
    """
    def pmf(s0, s1, s2, x1, x2):
        a = 0.1 + 0.2 * s0 + 0.1 * s1 + 0.3 * ((x1 + x2 + s2) % 2)
        return [a, 1.0 - a]

    return ChannelKernel.from_function((2, 2, 2), (2, 2), 2, pmf)


def identity_scheme():
    return direct_scheme(StateModel.null(), identity_kernel())


def tracking_scheme(agreement):
    """
    送信者 1 が私的状態 s1 を確率 agreement で写し取る v1 を使う方式。

    送信者 2 は状態を使わず v2 を一様に選びます。GP ビンの大きさと
    符号化の失敗の関係を調べるために使います。
    """
    states = StateModel([1.0], [0.5, 0.5], [1.0])
    kernel = ChannelKernel.from_function(
        (1, 2, 1), (2, 2), 4,
        lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    pv1 = [[[[agreement, 1.0 - agreement], [1.0 - agreement, agreement]]]]
    pv2 = [[[[0.5, 0.5]]]]
    f1 = [[[[0, 0]], [[1, 1]]]]
    f2 = [[[[0]], [[1]]]]
    return SchemeDistribution(states, kernel, [1.0], pv1, pv2, f1, f2)


def random_table(rng, names, max_size=3):
    """
    各変数の大きさが 1〜max_size の無作為な同時確率表を作成します。
    """
    sizes = tuple(int(s) for s in rng.integers(1, max_size + 1, len(names)))
    probs = rng.dirichlet(np.ones(int(np.prod(sizes)))).reshape(sizes)
    return JointTable(names, probs / probs.sum())


def cloud_scheme(carrier, pu=(0.5, 0.5)):
    """
    送信者 carrier が雲の中心 u をそのまま送り、もう一方の送信者が
    一様な v を符号化せずに送る、雑音のない通信路上の方式。

    受信者は y から u と v をともに読み取れるので、ブロックマルコフ
    符号化の全ての段階が誤りなく動作します。
    """
    uniform = [[[[0.5, 0.5]]], [[[0.5, 0.5]]]]
    single = [[[[1.0]]], [[[1.0]]]]
    send_v = [[[[0]], [[1]]], [[[0]], [[1]]]]
    send_u = [[[[0]]], [[[1]]]]
    if carrier == 2:
        pv1, pv2, f1, f2 = uniform, single, send_v, send_u
    else:
        pv1, pv2, f1, f2 = single, uniform, send_u, send_v

    return SchemeDistribution(StateModel.null(), identity_kernel(),
                              list(pu), pv1, pv2, f1, f2)


def state_copy_scheme():
    """
    送信者 1 が私的状態 s1 をそのまま送る方式（x1 = s1）。
    """
    states = StateModel([1.0], [0.5, 0.5], [1.0])
    kernel = ChannelKernel.from_function(
        (1, 2, 1), (2, 2), 4,
        lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    return SchemeDistribution(
        states, kernel, [1.0], [[[[1.0], [1.0]]]], [[[[0.5, 0.5]]]],
        [[[[0, 1]]]], [[[[0]], [[1]]]])

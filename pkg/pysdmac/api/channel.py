"""
channel モジュールは、状態に依存する多元接続通信路（MAC）、
Slepian-Wolf 型の状態モデル、および符号化方式の分布族を表すクラスを
まとめています。

変数の名前は次の通りです。

- s0, s1, s2 : 共通状態と送信者 1, 2 の個別状態
- u : 雲の中心（両送信者の共通補助変数）
- v1, v2 : 各送信者の補助変数（衛星）
- x1, x2 : 通信路入力
- y : 通信路出力
"""
from collections import namedtuple
from itertools import product
from logging import getLogger

import numpy as np
from scipy.stats import entropy as _scipy_entropy

from pysdmac.api.prob import (
    JointTable, check_cells, sample_simplex, SUM_TOLERANCE)

logger = getLogger(__name__)

VARIABLES = ('s0', 's1', 's2', 'u', 'v1', 'v2', 'x1', 'x2', 'y')


class ChannelError(RuntimeError):
    """
    通信路モデルの操作の際に例外が起こると、このクラスが発生します。
    """
    pass


class ValidationError(ChannelError):
    """
    不正な SchemeDistribution を評価しようとした場合に発生します。
    """
    pass


Violation = namedtuple('Violation', ['item', 'index', 'message'])


def _pmf(values, what):
    """
    1次元の確率分布を検査して numpy 配列で返します。
    """
    pmf = np.array(values, dtype=float)
    if pmf.ndim != 1 or pmf.size < 1:
        raise ChannelError("{} は空でない1次元配列で指定してください。".format(what))

    if np.any(pmf < 0.0) or abs(pmf.sum() - 1.0) > SUM_TOLERANCE:
        raise ChannelError(
            "{} は確率分布ではありません: {}".format(what, pmf.tolist()))

    pmf.setflags(write=False)
    return pmf


class StateModel(object):
    """
    3つの互いに独立な状態成分 S0, S1, S2 の分布。

    送信者 k は (S0, Sk) を観測します。

    Attributes
    ----------
    q0, q1, q2 : numpy.ndarray
        各成分の確率分布。
    """

    def __init__(self, q0, q1, q2):
        self.q0 = _pmf(q0, 'q0')
        self.q1 = _pmf(q1, 'q1')
        self.q2 = _pmf(q2, 'q2')

    @classmethod
    def null(cls):
        """
        全ての状態が退化した（アルファベットの大きさが 1 の）モデルを返します。
        """
        return cls([1.0], [1.0], [1.0])

    @property
    def sizes(self):
        return (self.q0.size, self.q1.size, self.q2.size)

    @property
    def is_null(self):
        return self.sizes == (1, 1, 1)

    def product(self):
        """
        p(s0)p(s1)p(s2) を3次元配列で返します。
        """
        return np.einsum('a,b,c->abc', self.q0, self.q1, self.q2)

    def entropies(self):
        """
        (H(S0), H(S1), H(S2)) をビットで返します。
        """
        return tuple(float(_scipy_entropy(q, base=2))
                     for q in (self.q0, self.q1, self.q2))

    def sample(self, length, rng):
        """
        長さ length の i.i.d. 状態系列 (s0, s1, s2) を生成します。
        """
        return tuple(rng.choice(q.size, size=length, p=q)
                     for q in (self.q0, self.q1, self.q2))

    def as_dict(self):
        return {'q0': self.q0.tolist(), 'q1': self.q1.tolist(),
                'q2': self.q2.tolist()}


class ChannelKernel(object):
    """
    通信路の遷移確率 p(y | x1, x2, s0, s1, s2)。

    Attributes
    ----------
    table : numpy.ndarray
        添字 [s0][s1][s2][x1][x2][y] の6次元配列。
    """

    def __init__(self, table):
        table = np.array(table, dtype=float)
        if table.ndim != 6:
            raise ChannelError(
                "通信路の表は [s0][s1][s2][x1][x2][y] の6次元配列で"
                "指定してください（{}次元）。".format(table.ndim))

        if np.any(table < 0.0) or not np.all(np.isfinite(table)):
            raise ChannelError("通信路の表に負の値または非有限値があります。")

        sums = table.sum(axis=-1)
        bad = np.argwhere(np.abs(sums - 1.0) > SUM_TOLERANCE)
        if len(bad) > 0:
            index = tuple(int(i) for i in bad[0])
            raise ChannelError(
                "通信路の表 kernel{} の総和が 1 ではありません: {!r}".format(
                    list(index), float(sums[index])))

        table.setflags(write=False)
        self.table = table

    @classmethod
    def from_function(cls, state_sizes, input_sizes, output_size, func):
        """
        関数から通信路を作成します。

        Parameters
        ----------
        state_sizes : tuple of int
            (|S0|, |S1|, |S2|)。
        input_sizes : tuple of int
            (|X1|, |X2|)。
        output_size : int
            |Y|。
        func : callable
            func(s0, s1, s2, x1, x2) が出力記号（int）または
            長さ |Y| の確率分布を返す関数。

        Examples
        --------
        >>> from pysdmac.api.channel import ChannelKernel
        >>> k = ChannelKernel.from_function(
        ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
        >>> k.table.shape
        (1, 1, 1, 2, 2, 4)
        """
        shape = tuple(state_sizes) + tuple(input_sizes) + (output_size,)
        table = np.zeros(shape)
        for index in product(*[range(s) for s in shape[:-1]]):
            value = func(*index)
            if isinstance(value, (int, np.integer)):
                table[index + (int(value),)] = 1.0
            else:
                table[index] = np.asarray(value, dtype=float)

        return cls(table)

    @property
    def state_sizes(self):
        return self.table.shape[0:3]

    @property
    def input_sizes(self):
        return self.table.shape[3:5]

    @property
    def output_size(self):
        return self.table.shape[5]

    @property
    def is_deterministic(self):
        return bool(np.all((self.table == 0.0) | (self.table == 1.0)))

    def averaged(self, states):
        """
        状態について平均した（状態を持たない）通信路を返します。

        Parameters
        ----------
        states : StateModel
            平均に使う状態モデル。

        Returns
        -------
        ChannelKernel
            状態アルファベットの大きさが全て 1 の通信路。
        """
        if states.sizes != self.state_sizes:
            raise ChannelError("状態モデルと通信路の状態の大きさが一致しません。")

        table = np.einsum('abcxyz,abc->xyz', self.table, states.product())
        table = table / table.sum(axis=-1, keepdims=True)
        return ChannelKernel(table[np.newaxis, np.newaxis, np.newaxis])

    def sample(self, s0, s1, s2, x1, x2, rng):
        """
        入力系列と状態系列から出力系列を生成します。
        """
        rows = self.table[s0, s1, s2, x1, x2]
        cumulative = np.cumsum(rows, axis=-1)
        draws = rng.random(len(rows))
        y = (draws[:, np.newaxis] >= cumulative).sum(axis=-1)
        return np.minimum(y, self.output_size - 1)

    def output_entropies(self):
        """
        各条件 (s0, s1, s2, x1, x2) での H(Y|・) を平坦な配列で返します。
        """
        rows = self.table.reshape(-1, self.output_size)
        return np.array([_scipy_entropy(r, base=2) for r in rows])


class SchemeKind(object):
    """
    フィードバックの種類と状態情報の因果性の組。

    Attributes
    ----------
    feedback : str
        'two-sided', 'partial', 'none' のいずれか。
    causality : str
        'non-causal', 'causal', 'strictly-causal' のいずれか。
    lag : int or None
        strictly-causal の場合の遅延 r（1 以上）。それ以外は None。

    Examples
    --------
    >>> from pysdmac.api.channel import SchemeKind
    >>> SchemeKind.parse('partial-strict')
    SchemeKind('partial', 'strictly-causal', lag=1)
    >>> SchemeKind.parse('full-causal').theorem
    2
    """
    TWO_SIDED = 'two-sided'
    PARTIAL = 'partial'
    NONE = 'none'
    NONCAUSAL = 'non-causal'
    CAUSAL = 'causal'
    STRICT = 'strictly-causal'

    LABELS = {
        'full-noncausal': (TWO_SIDED, NONCAUSAL),
        'full-causal': (TWO_SIDED, CAUSAL),
        'full-strict': (TWO_SIDED, STRICT),
        'partial-noncausal': (PARTIAL, NONCAUSAL),
        'partial-causal': (PARTIAL, CAUSAL),
        'partial-strict': (PARTIAL, STRICT),
        'none': (NONE, NONCAUSAL),
    }

    def __init__(self, feedback, causality, lag=None):
        if feedback not in (self.TWO_SIDED, self.PARTIAL, self.NONE):
            raise ChannelError("未知のフィードバック種別: {!r}".format(feedback))

        if causality not in (self.NONCAUSAL, self.CAUSAL, self.STRICT):
            raise ChannelError("未知の因果性: {!r}".format(causality))

        if causality == self.STRICT:
            lag = 1 if lag is None else int(lag)
            if lag < 1:
                raise ChannelError(
                    "遅延 r は 1 以上で指定してください: {}".format(lag))
        elif lag is not None:
            raise ChannelError(
                "遅延 r は strictly-causal の場合だけ指定できます。")

        self.feedback = feedback
        self.causality = causality
        self.lag = lag

    @classmethod
    def parse(cls, label, lag=None):
        """
        'full-noncausal' などのラベルから SchemeKind を作成します。
        """
        if label not in cls.LABELS:
            raise ChannelError("未知の方式ラベル: {!r}（{} のいずれか）".format(
                label, "|".join(cls.LABELS)))

        feedback, causality = cls.LABELS[label]
        if causality != cls.STRICT:
            lag = None

        return cls(feedback, causality, lag)

    @property
    def label(self):
        for label, pair in self.LABELS.items():
            if pair == (self.feedback, self.causality):
                return label

        return "{}-{}".format(self.feedback, self.causality)

    @property
    def theorem(self):
        """
        この方式に対応する領域評価関数の識別子（1〜6 または 'no-feedback'）。
        """
        if self.feedback == self.NONE:
            return 'no-feedback'

        offset = 0 if self.feedback == self.TWO_SIDED else 3
        order = (self.NONCAUSAL, self.CAUSAL, self.STRICT)
        return offset + order.index(self.causality) + 1

    def __eq__(self, other):
        return isinstance(other, SchemeKind) and \
            (self.feedback, self.causality, self.lag) == \
            (other.feedback, other.causality, other.lag)

    def __hash__(self):
        return hash((self.feedback, self.causality, self.lag))

    def __repr__(self):
        if self.lag is None:
            return "SchemeKind({!r}, {!r})".format(
                self.feedback, self.causality)

        return "SchemeKind({!r}, {!r}, lag={})".format(
            self.feedback, self.causality, self.lag)


def _map_array(f, shape, what):
    """
    決定的写像を整数配列に変換します。未定義の組は -1 になります。
    """
    if isinstance(f, dict):
        array = np.full(shape, -1, dtype=int)
        for key, value in f.items():
            key = tuple(int(k) for k in key)
            if len(key) != len(shape) or \
                    any(not 0 <= k < s for k, s in zip(key, shape)):
                raise ChannelError("{} の定義域外の組です: {}".format(what, key))

            array[key] = int(value)
    else:
        array = np.array(f)
        if array.size > 0 and not np.issubdtype(array.dtype, np.integer):
            if not np.all(np.equal(np.mod(array, 1), 0)):
                raise ChannelError("{} は整数で指定してください。".format(what))

        array = array.astype(int)

    if array.shape != tuple(shape):
        raise ChannelError("{} の形 {} が期待される形 {} と一致しません。".format(
            what, array.shape, tuple(shape)))

    array.setflags(write=False)
    return array


class SchemeDistribution(object):
    """
    分布族の1要素 p(u)p(v1|u,s0,s1)p(v2|u,s0,s2) と
    決定的な符号化写像 f1, f2、および状態モデルと通信路の組。

    x_k = f_k(u, v_k, s0, s_k) です。

    Attributes
    ----------
    states : StateModel
    kernel : ChannelKernel
    pu : numpy.ndarray
        p(u)、形は (|U|,)。
    pv1 : numpy.ndarray
        p(v1|u,s0,s1)、形は (|U|, |S0|, |S1|, |V1|)。
    pv2 : numpy.ndarray
        p(v2|u,s0,s2)、形は (|U|, |S0|, |S2|, |V2|)。
    f1 : numpy.ndarray
        f1(u,v1,s0,s1)、形は (|U|, |V1|, |S0|, |S1|)。未定義は -1。
    f2 : numpy.ndarray
        f2(u,v2,s0,s2)、形は (|U|, |V2|, |S0|, |S2|)。未定義は -1。

    Note
    ----
    インスタンスは変更できません。確率分布としての正しさは
    生成時には検査せず、 ``validate()`` で報告します。
    """

    def __init__(self, states, kernel, pu, pv1, pv2, f1, f2):
        if kernel.state_sizes != states.sizes:
            raise ChannelError(
                "状態モデル {} と通信路の状態 {} の大きさが一致しません。".format(
                    states.sizes, kernel.state_sizes))

        self.states = states
        self.kernel = kernel
        self.pu = np.array(pu, dtype=float)
        self.pv1 = np.array(pv1, dtype=float)
        self.pv2 = np.array(pv2, dtype=float)
        if self.pu.ndim != 1:
            raise ChannelError("pu は1次元配列で指定してください。")

        nu = self.pu.size
        ns0, ns1, ns2 = states.sizes
        if self.pv1.ndim != 4 or self.pv1.shape[:3] != (nu, ns0, ns1):
            raise ChannelError(
                "pv1 の形 {} は (|U|, |S0|, |S1|, |V1|) = ({}, {}, {}, *) "
                "でなければなりません。".format(self.pv1.shape, nu, ns0, ns1))

        if self.pv2.ndim != 4 or self.pv2.shape[:3] != (nu, ns0, ns2):
            raise ChannelError(
                "pv2 の形 {} は (|U|, |S0|, |S2|, |V2|) = ({}, {}, {}, *) "
                "でなければなりません。".format(self.pv2.shape, nu, ns0, ns2))

        for a in (self.pu, self.pv1, self.pv2):
            a.setflags(write=False)

        self.f1 = _map_array(f1, (nu, self.pv1.shape[3], ns0, ns1), 'f1')
        self.f2 = _map_array(f2, (nu, self.pv2.shape[3], ns0, ns2), 'f2')
        self._joint = None

    @property
    def sizes(self):
        """
        全変数のアルファベットの大きさを VARIABLES の順で返します。
        """
        return self.states.sizes + (
            self.pu.size, self.pv1.shape[3], self.pv2.shape[3]) + \
            self.kernel.input_sizes + (self.kernel.output_size,)

    @property
    def cardinalities(self):
        """
        補助変数のアルファベットの大きさ (|U|, |V1|, |V2|)。
        """
        return self.sizes[3:6]

    def satellite_pmf(self, k):
        """
        状態について周辺化した p(v_k | u) を返します。

        衛星符号語の生成に使う分布
        p(v_k|u) = Σ p(s0)p(s_k)p(v_k|u,s0,s_k) です。

        Returns
        -------
        numpy.ndarray
            形 (|U|, |V_k|) の条件付き分布。
        """
        if k == 1:
            return np.einsum('a,b,uabv->uv',
                             self.states.q0, self.states.q1, self.pv1)
        if k == 2:
            return np.einsum('a,b,uabv->uv',
                             self.states.q0, self.states.q2, self.pv2)

        raise ChannelError("送信者番号は 1 または 2 です: {}".format(k))

    def state_blind(self):
        """
        補助変数の分布を p(v_k|u) に置き換えた（状態に依存しない）
        SchemeDistribution を返します。因果的な符号化の動作分布に使います。
        """
        ns0, ns1, ns2 = self.states.sizes
        pv1 = np.broadcast_to(
            self.satellite_pmf(1)[:, None, None, :],
            (self.pu.size, ns0, ns1, self.pv1.shape[3]))
        pv2 = np.broadcast_to(
            self.satellite_pmf(2)[:, None, None, :],
            (self.pu.size, ns0, ns2, self.pv2.shape[3]))
        return SchemeDistribution(
            self.states, self.kernel, self.pu, pv1, pv2, self.f1, self.f2)

    def encoder_tables(self):
        """
        f1, f2 を one-hot 表 (…, |X_k|) に展開して返します。
        """
        if not is_valid(self):
            raise ValidationError("f1, f2 に未定義または範囲外の値があります。")

        x1, x2 = self.kernel.input_sizes
        return np.eye(x1)[self.f1], np.eye(x2)[self.f2]

    def joint(self):
        """
        9変数の同時確率表を返します（一度作成した表を再利用します）。
        """
        if self._joint is None:
            self._joint = build_joint(self)

        return self._joint

    def clear_cache(self):
        """
        ``joint()`` が保持している同時確率表を破棄します。
        """
        self._joint = None

    def as_dict(self):
        """
        通信路文書の scheme セクションと同じ形式の dict を返します。
        """
        return {
            'u': self.pu.tolist(),
            'v1': self.pv1.tolist(),
            'v2': self.pv2.tolist(),
            'f1': self.f1.tolist(),
            'f2': self.f2.tolist(),
        }

    @classmethod
    def from_dict(cls, states, kernel, scheme):
        """
        scheme セクションの dict から SchemeDistribution を作成します。
        """
        try:
            return cls(states, kernel, scheme['u'], scheme['v1'],
                       scheme['v2'], scheme['f1'], scheme['f2'])
        except KeyError as e:
            raise ChannelError("scheme に {} がありません。".format(e))

    def __repr__(self):
        return "SchemeDistribution({})".format(", ".join(
            "{}:{}".format(n, s) for n, s in zip(VARIABLES, self.sizes)))


def validate(p):
    """
    SchemeDistribution の不正な箇所を全て報告します。

    Parameters
    ----------
    p : SchemeDistribution
        検査する分布。

    Returns
    -------
    list of Violation
        違反のリスト。正しい場合は空のリスト。

    Examples
    --------
    >>> from pysdmac.api.channel import (
    ...     StateModel, ChannelKernel, SchemeDistribution, validate)
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> p = SchemeDistribution(
    ...     StateModel.null(), k, [1.0],
    ...     [[[[0.5, 0.4]]]], [[[[0.5, 0.5]]]],
    ...     {(0, 0, 0, 0): 0}, [[[[0]], [[1]]]])
    >>> for v in validate(p):
    ...     print(v.item, v.index)
    pv1 (0, 0, 0)
    f1 (0, 1, 0, 0)
    """
    report = []

    if np.any(p.pu < 0.0) or abs(p.pu.sum() - 1.0) > SUM_TOLERANCE:
        report.append(Violation('pu', (), "p(u) が確率分布ではありません。"))

    for item, table in (('pv1', p.pv1), ('pv2', p.pv2)):
        sums = table.sum(axis=-1)
        for index in np.ndindex(*table.shape[:3]):
            if np.any(table[index] < 0.0):
                report.append(Violation(
                    item, index, "負の確率があります。"))
            elif abs(sums[index] - 1.0) > SUM_TOLERANCE:
                report.append(Violation(
                    item, index, "総和が 1 ではありません: {!r}".format(
                        float(sums[index]))))

    for item, table, size in (('f1', p.f1, p.kernel.input_sizes[0]),
                              ('f2', p.f2, p.kernel.input_sizes[1])):
        for index in np.ndindex(*table.shape):
            value = int(table[index])
            if value < 0:
                report.append(Violation(
                    item, index, "写像が定義されていません。"))
            elif value >= size:
                report.append(Violation(
                    item, index, "入力アルファベットの範囲外です: {}".format(
                        value)))

    return report


def is_valid(p):
    return len(validate(p)) == 0


def check(p):
    """
    p が正しくなければ ValidationError を送出します。
    """
    report = validate(p)
    if report:
        raise ValidationError("不正な SchemeDistribution です: {}".format(
            "; ".join("{}{} {}".format(v.item, list(v.index), v.message)
                      for v in report[:5])))


def build_joint(p):
    """
    9変数 (s0,s1,s2,u,v1,v2,x1,x2,y) の同時確率表を作成します。

    p(s0)p(s1)p(s2)p(u)p(v1|u,s0,s1)p(v2|u,s0,s2)
    × 1[x1=f1(u,v1,s0,s1)] 1[x2=f2(u,v2,s0,s2)] p(y|x1,x2,s0,s1,s2)
    をそのまま積として計算します。

    Parameters
    ----------
    p : SchemeDistribution
        正しい分布。

    Returns
    -------
    JointTable

    Raises
    ------
    SizeLimitError
        セル数が ``SDMAC_MAX_CELLS`` を超える場合。
    ValidationError
        p が正しくない場合。
    """
    check_cells(p.sizes)
    check(p)
    one_hot1, one_hot2 = p.encoder_tables()
    probs = np.einsum(
        'a,b,c,d,dabe,dacf,deabg,dfach,abcghi->abcdefghi',
        p.states.q0, p.states.q1, p.states.q2, p.pu, p.pv1, p.pv2,
        one_hot1, one_hot2, p.kernel.table, optimize='greedy')
    return JointTable(VARIABLES, probs / probs.sum())


def random_scheme(states, kernel, cardinalities=(2, 2, 2),
                  concentration=1.0, rng=None, maps=None):
    """
    分布族から1つの分布を無作為に抽出します。

    p(u), p(v1|u,s0,s1), p(v2|u,s0,s2) の各条件付き分布を
    ``sample_simplex()`` で独立に抽出し、f1, f2 は全ての決定的写像の中から
    一様に選びます。

    Parameters
    ----------
    states : StateModel
    kernel : ChannelKernel
    cardinalities : tuple of int, optional
        (|U|, |V1|, |V2|)。デフォルトは (2, 2, 2) です。
    concentration : float, optional
        ディリクレ分布の集中度。
    rng : numpy.random.Generator
        乱数生成器。
    maps : tuple, optional
        (f1, f2) を指定すると写像は抽出せずにそれを使います。

    Returns
    -------
    SchemeDistribution
    """
    nu, nv1, nv2 = (int(c) for c in cardinalities)
    ns0, ns1, ns2 = states.sizes
    nx1, nx2 = kernel.input_sizes
    check_cells((ns0, ns1, ns2, nu, nv1, nv2, nx1, nx2, kernel.output_size))

    pu = sample_simplex(nu, concentration, rng)
    pv1 = np.array([sample_simplex(nv1, concentration, rng)
                    for _ in range(nu * ns0 * ns1)]).reshape(nu, ns0, ns1, nv1)
    pv2 = np.array([sample_simplex(nv2, concentration, rng)
                    for _ in range(nu * ns0 * ns2)]).reshape(nu, ns0, ns2, nv2)
    if maps is None:
        f1 = rng.integers(0, nx1, size=(nu, nv1, ns0, ns1))
        f2 = rng.integers(0, nx2, size=(nu, nv2, ns0, ns2))
    else:
        f1, f2 = maps

    return SchemeDistribution(states, kernel, pu, pv1, pv2, f1, f2)


def enumerate_maps(states, kernel, cardinalities):
    """
    (f1, f2) の全ての組を順に返すイテレータ。
    """
    nu, nv1, nv2 = (int(c) for c in cardinalities)
    ns0, ns1, ns2 = states.sizes
    nx1, nx2 = kernel.input_sizes
    shape1 = (nu, nv1, ns0, ns1)
    shape2 = (nu, nv2, ns0, ns2)
    cells1 = int(np.prod(shape1))
    cells2 = int(np.prod(shape2))
    for flat1 in product(range(nx1), repeat=cells1):
        for flat2 in product(range(nx2), repeat=cells2):
            yield (np.array(flat1, dtype=int).reshape(shape1),
                   np.array(flat2, dtype=int).reshape(shape2))


def count_maps(states, kernel, cardinalities):
    """
    (f1, f2) の組の総数を返します。
    """
    nu, nv1, nv2 = (int(c) for c in cardinalities)
    ns0, ns1, ns2 = states.sizes
    nx1, nx2 = kernel.input_sizes
    return nx1 ** (nu * nv1 * ns0 * ns1) * nx2 ** (nu * nv2 * ns0 * ns2)


def direct_scheme(states, kernel):
    """
    補助変数を使わない素朴な方式を返します。

    |U| = 1 とし、V_k = X_k を一様分布、f_k(u, v, s0, s_k) = v とします。

    Examples
    --------
    >>> from pysdmac.api.channel import StateModel, ChannelKernel, direct_scheme
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> direct_scheme(StateModel.null(), k).cardinalities
    (1, 2, 2)
    """
    ns0, ns1, ns2 = states.sizes
    nx1, nx2 = kernel.input_sizes
    pv1 = np.full((1, ns0, ns1, nx1), 1.0 / nx1)
    pv2 = np.full((1, ns0, ns2, nx2), 1.0 / nx2)
    f1 = np.broadcast_to(
        np.arange(nx1)[None, :, None, None], (1, nx1, ns0, ns1))
    f2 = np.broadcast_to(
        np.arange(nx2)[None, :, None, None], (1, nx2, ns0, ns2))
    return SchemeDistribution(states, kernel, [1.0], pv1, pv2, f1, f2)

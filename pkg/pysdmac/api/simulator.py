"""
ブロックマルコフ型の Gelfand-Pinsker 符号化のモンテカルロシミュレーション。

1回の試行は B ブロックからなり、最初の B-1 ブロックが新しいメッセージ対を
運びます。各ブロックでは

1. 送信者 k は雲 m0 の中心 u^n の上に重ねた衛星の符号帳から、ビン m_k の
   中で状態と典型的な系列を選び（非因果的な場合）、記号ごとに
   x_k = f_k(u, v_k, s0, s_k) を送ります。
2. 受信者は雲の番号を復号し、それを手がかりに前のブロックの
   メッセージ対を決定します。
3. フィードバックを受ける送信者は相手のメッセージを復号し、
   次のブロックの雲の番号を決めます。
"""
import json
from logging import getLogger
from multiprocessing import Pool
import os

import numpy as np

from pysdmac.api.channel import (
    VARIABLES, SchemeDistribution, SchemeKind, build_joint)
from pysdmac.api.codebook import generate_codebooks
from pysdmac.api.prob import (
    JointTable, PROCESSES, SizeLimitError, check_cells, make_rng)
from pysdmac.api.typicality import (
    SimulationError, typical_indices, typical_mask)

logger = getLogger(__name__)

MAX_CANDIDATES = int(os.environ.get("SDMAC_MAX_CANDIDATES", "1048576"))

__all__ = [
    'SimulationError', 'TrialOutcome', 'SimReport', 'operational_joint',
    'encode_block', 'gp_bin_search', 'decode_cloud', 'cross_decode',
    'candidate_pairs', 'resolve_messages', 'run_trial', 'run_simulation',
]


def _check_mode(kind):
    if not isinstance(kind, SchemeKind):
        raise TypeError("kind は SchemeKind で指定してください。")

    if kind.feedback == SchemeKind.NONE:
        raise SimulationError(
            "フィードバックなしの方式はシミュレーションできません。")


def operational_joint(p, kind):
    """
    シミュレータが実際に実現する (s0,s1,s2,u,v1,v2,x1,x2,y) の同時分布。

    典型性判定の基準に使います。

    - 非因果的 : ``build_joint(p)``
    - 因果的 : 補助変数を p(v_k|u) に置き換えた分布
    - 厳密に因果的 : さらに、符号化に使う状態が遅延 r だけ前の
      （現在の状態と独立な）状態になる分布

    Parameters
    ----------
    p : SchemeDistribution
    kind : SchemeKind

    Returns
    -------
    JointTable
    """
    _check_mode(kind)
    if kind.causality == SchemeKind.NONCAUSAL:
        return p.joint()

    blind = p.state_blind()
    if kind.causality == SchemeKind.CAUSAL:
        return build_joint(blind)

    check_cells(p.sizes)
    one_hot1, one_hot2 = blind.encoder_tables()
    q0, q1, q2 = p.states.q0, p.states.q1, p.states.q2
    # j, k, l は符号化に使われる遅延した状態
    probs = np.einsum(
        'a,b,c,d,de,df,dejkg,dfjlh,j,k,l,abcghi->abcdefghi',
        q0, q1, q2, p.pu, p.satellite_pmf(1), p.satellite_pmf(2),
        one_hot1, one_hot2, q0, q1, q2, p.kernel.table, optimize='greedy')
    return JointTable(VARIABLES, probs / probs.sum())


def _reference(p):
    if isinstance(p, SchemeDistribution):
        return p.joint()

    return p


def encode_block(u, v, s0, sk, f, causality, lag=None, history=None):
    """
    記号ごとに x_i = f(u_i, v_i, s0_j, sk_j) を計算します。

    非因果的・因果的な場合は j = i、厳密に因果的な場合は j = i - lag です。
    ブロックの先頭 lag 記号は、直前の状態 history を使います。

    Parameters
    ----------
    u, v, s0, sk : numpy.ndarray
        長さ n の系列。
    f : numpy.ndarray
        符号化写像、形 (|U|, |V_k|, |S0|, |S_k|)。
    causality : str
        SchemeKind の因果性。
    lag : int, optional
        遅延 r。
    history : tuple of numpy.ndarray, optional
        ブロック直前の r 個の状態 (s0, sk)（古い順）。

    Returns
    -------
    numpy.ndarray
        入力系列 x。

    Examples
    --------
    >>> import numpy as np
    >>> from pysdmac.api.simulator import encode_block
    >>> f = np.zeros((1, 1, 1, 2), dtype=int)
    >>> f[0, 0, 0, 1] = 1
    >>> zeros = np.zeros(4, dtype=int)
    >>> s = np.array([1, 0, 1, 1])
    >>> encode_block(zeros, zeros, zeros, s, f, 'causal').tolist()
    [1, 0, 1, 1]
    >>> encode_block(zeros, zeros, zeros, s, f, 'strictly-causal', lag=1,
    ...              history=(np.array([0]), np.array([0]))).tolist()
    [0, 1, 0, 1]
    """
    u, v, s0, sk = (np.asarray(a) for a in (u, v, s0, sk))
    n = len(u)
    if any(len(a) != n for a in (v, s0, sk)):
        raise SimulationError("系列の長さが一致しません。")

    if causality == SchemeKind.STRICT:
        if lag is None or history is None:
            raise SimulationError("厳密に因果的な符号化には lag と history が必要です。")

        h0, hk = (np.asarray(h) for h in history)
        if len(h0) != lag or len(hk) != lag:
            raise SimulationError("history の長さが lag と一致しません。")

        s0 = np.concatenate([h0, s0])[:n]
        sk = np.concatenate([hk, sk])[:n]
    elif causality not in (SchemeKind.NONCAUSAL, SchemeKind.CAUSAL):
        raise SimulationError("未知の因果性: {!r}".format(causality))

    return f[u, v, s0, sk]


def gp_bin_search(book, u, s0, sk, ref, epsilon, k=1):
    """
    ビンの中から (u, v_k, s0, s_k) が典型的になる最小の番号を探します。

    Parameters
    ----------
    book : numpy.ndarray
        ビン内の系列、形 (M'_k, n)。
    u, s0, sk : numpy.ndarray
        雲の中心と状態の系列。
    ref : JointTable or SchemeDistribution
        典型性の基準。
    epsilon : float
        典型性の許容幅。
    k : int, optional
        送信者の番号。

    Returns
    -------
    int or None
        見つからない場合（符号化失敗）は None。
    """
    found = typical_indices({
        'u': u, 'v{}'.format(k): book, 's0': s0, 's{}'.format(k): sk,
    }, _reference(ref), epsilon)
    if len(found) == 0:
        return None

    return int(found[0])


def decode_cloud(books, ref, y, epsilon):
    """
    (u, y) が典型的になる雲の番号を返します。一意でなければ None。
    """
    found = typical_indices({'u': books.u_book, 'y': y}, ref, epsilon)
    if len(found) != 1:
        return None

    return int(found[0])


def cross_decode(books, target, view, known, ref, epsilon):
    """
    フィードバックを受けた送信者が相手のビン番号を復号します。

    Parameters
    ----------
    books : CodebookEnsemble
    target : int
        復号する相手の番号（1 または 2）。
    view : int
        復号する送信者が使っている雲の番号。
    known : dict
        復号する送信者が知っている系列（'u', 自分の 'v_k', 'y' と状態）。
    ref : JointTable
    epsilon : float

    Returns
    -------
    int or None
        一意に決まらなければ None。
    """
    book = books.v2_book if target == 2 else books.v1_book
    size, inner, n = book.shape[1:]
    if size == 1:
        return 0

    sequences = dict(known)
    sequences['v{}'.format(target)] = book[view].reshape(size * inner, n)
    bins = np.unique(np.flatnonzero(typical_mask(
        sequences, ref, epsilon)) // inner)
    if len(bins) != 1:
        return None

    return int(bins[0])


def candidate_pairs(books, kind, m0_next):
    """
    次のブロックの雲の番号 m0_next と矛盾しないメッセージ対を返します。

    両側フィードバックでは φ(m1, m2) = m0_next、部分フィードバックでは
    c(m2) = m0_next となる対に限ります。
    """
    m0, m1_size, m2_size, _, _ = books.sizes
    m1, m2 = np.meshgrid(
        np.arange(m1_size), np.arange(m2_size), indexing='ij')
    m1, m2 = m1.ravel(), m2.ravel()
    if m0 > 1:
        if kind.feedback == SchemeKind.PARTIAL:
            keep = books.partition[m2] == m0_next
        else:
            keep = (m1 * m2_size + m2) % m0 == m0_next

        m1, m2 = m1[keep], m2[keep]

    return m1, m2


def resolve_messages(books, kind, ref, y, m0_prev, m0_next, epsilon):
    """
    受信者が前のブロックのメッセージ対を決定します。

    雲 m0_prev の符号帳の中から、m0_next と矛盾しない全ての
    (m1, m'1, m2, m'2) を候補とし、(u, v1, v2, y) が典型的になる
    メッセージ対がちょうど1つの場合にそれを返します。
    候補が2つ以上通った場合は None（誤り）です。

    Returns
    -------
    tuple of int or None
    """
    m1, m2 = candidate_pairs(books, kind, m0_next)
    if len(m1) == 0:
        return None

    if len(m1) == 1:
        return (int(m1[0]), int(m2[0]))

    _, _, _, inner1, inner2 = books.sizes
    inner = inner1 * inner2
    i1 = np.repeat(m1, inner)
    i2 = np.repeat(m2, inner)
    j1 = np.tile(np.repeat(np.arange(inner1), inner2), len(m1))
    j2 = np.tile(np.arange(inner2), len(m1) * inner1)
    mask = typical_mask({
        'u': books.u_book[m0_prev],
        'v1': books.v1_book[m0_prev, i1, j1],
        'v2': books.v2_book[m0_prev, i2, j2],
        'y': y,
    }, ref, epsilon)
    passing = set(zip(i1[mask].tolist(), i2[mask].tolist()))
    if len(passing) != 1:
        return None

    return passing.pop()


class TrialOutcome(object):
    """
    1回の試行の結果。

    各カウントはブロック単位の事象の数です。
    """

    def __init__(self, success, encode_failures=0, decode_m0_errors=0,
                 cross_decode_errors=0, message_errors=0):
        self.success = bool(success)
        self.encode_failures = encode_failures
        self.decode_m0_errors = decode_m0_errors
        self.cross_decode_errors = cross_decode_errors
        self.message_errors = message_errors

    def as_dict(self):
        return {
            'success': self.success,
            'encode_failures': self.encode_failures,
            'decode_m0_errors': self.decode_m0_errors,
            'cross_decode_errors': self.cross_decode_errors,
            'message_errors': self.message_errors,
        }

    def __repr__(self):
        return "TrialOutcome({})".format(self.as_dict())


def _check_candidates(sizes):
    _, m1, m2, inner1, inner2 = sizes
    total = m1 * m2 * inner1 * inner2
    if total > MAX_CANDIDATES:
        raise SizeLimitError(
            "復号の候補数 {} が上限 {} を超えています。".format(
                total, MAX_CANDIDATES))


def _next_cloud(books, kind, m1, m2):
    if kind.feedback == SchemeKind.PARTIAL:
        return books.cell(m2)

    return books.helping_index(m1, m2)


def run_trial(p, params, kind, rng, ref=None):
    """
    B ブロックの送受信を1回シミュレートします。

    Parameters
    ----------
    p : SchemeDistribution
    params : CodeParams
    kind : SchemeKind
    rng : numpy.random.Generator
    ref : JointTable, optional
        典型性判定の基準。省略した場合は ``operational_joint()`` で求めます。

    Returns
    -------
    TrialOutcome

    Raises
    ------
    SimulationError
        フィードバックなしの方式が指定された場合。
    SizeLimitError
        符号帳や候補の数が上限を超えた場合。
    """
    _check_mode(kind)
    if ref is None:
        ref = operational_joint(p, kind)

    books = generate_codebooks(p, params, kind, rng)
    sizes = books.sizes
    _check_candidates(sizes)
    m0_size, m1_size, m2_size, _, _ = sizes
    n, blocks, eps = params.n, params.blocks, params.epsilon
    noncausal = kind.causality == SchemeKind.NONCAUSAL
    strict = kind.causality == SchemeKind.STRICT

    messages1 = np.zeros(blocks, dtype=int)
    messages2 = np.zeros(blocks, dtype=int)
    messages1[:-1] = rng.integers(0, m1_size, size=blocks - 1)
    messages2[:-1] = rng.integers(0, m2_size, size=blocks - 1)
    history = p.states.sample(kind.lag, rng) if strict else None

    outcome = TrialOutcome(False)
    views = [0, 0]
    truth = 0
    m0_hat = [0] * blocks
    decoded = [None] * (blocks - 1)
    y_prev = None
    for b in range(blocks):
        s = p.states.sample(n, rng)
        x = []
        chosen = []
        encode_failed = False
        for k, mk, f in ((1, messages1[b], p.f1), (2, messages2[b], p.f2)):
            view = views[k - 1]
            u = books.u_book[view]
            candidates = books.bin(k, view, mk)
            index = 0
            if noncausal:
                index = gp_bin_search(candidates, u, s[0], s[k], ref, eps, k)
                if index is None:
                    encode_failed = True
                    index = 0

            chosen.append(candidates[index])
            hist = (history[0], history[k]) if strict else None
            x.append(encode_block(u, chosen[-1], s[0], s[k], f,
                                  kind.causality, kind.lag, hist))

        outcome.encode_failures += int(encode_failed)
        y = p.kernel.sample(s[0], s[1], s[2], x[0], x[1], rng)
        if strict:
            history = tuple(np.concatenate([h, c])[-kind.lag:]
                            for h, c in zip(history, s))

        if b > 0:
            if m0_size > 1:
                found = decode_cloud(books, ref, y, eps)
                m0_hat[b] = 0 if found is None else found
                if m0_hat[b] != truth:
                    outcome.decode_m0_errors += 1

            decoded[b - 1] = resolve_messages(
                books, kind, ref, y_prev, m0_hat[b - 1], m0_hat[b], eps)

        if b < blocks - 1 and m0_size > 1:
            m1, m2 = int(messages1[b]), int(messages2[b])
            states1 = {} if strict else {'s0': s[0], 's1': s[1]}
            states2 = {} if strict else {'s0': s[0], 's2': s[2]}
            u1 = books.u_book[views[0]]
            m2_hat = cross_decode(books, 2, views[0], dict(
                u=u1, v1=chosen[0], y=y, **states1),
                ref, eps) if m2_size > 1 else 0
            if kind.feedback == SchemeKind.TWO_SIDED:
                u2 = books.u_book[views[1]]
                m1_hat = cross_decode(books, 1, views[1], dict(
                    u=u2, v2=chosen[1], y=y,
                    **states2), ref, eps) if m1_size > 1 else 0
            else:
                m1_hat = m1

            if m2_hat != m2 or m1_hat != m1:
                outcome.cross_decode_errors += 1

            views = [
                _next_cloud(books, kind, m1, 0 if m2_hat is None else m2_hat),
                _next_cloud(books, kind, 0 if m1_hat is None else m1_hat, m2),
            ]
            truth = _next_cloud(books, kind, m1, m2)

        logger.debug("block {}: m0_hat={}, views={}".format(b, m0_hat[b], views))
        y_prev = y

    for b in range(blocks - 1):
        if decoded[b] != (int(messages1[b]), int(messages2[b])):
            outcome.message_errors += 1

    outcome.success = outcome.message_errors == 0
    return outcome


class SimReport(object):
    """
    シミュレーションの集計結果。

    Attributes
    ----------
    encode_failures : int
        GP ビンの中に典型的な系列がなかったブロックの数。
    decode_m0_errors : int
        受信者が雲の番号を誤ったブロックの数。
    cross_decode_errors : int
        送信者が相手のメッセージを誤ったブロックの数。
    final_message_errors : int
        メッセージ対を1つでも誤った試行の数。
    error_rate : float
        final_message_errors / trials。
    effective_rates : tuple of float
        (R1 (B-1)/B, R2 (B-1)/B)。レートは符号帳の大きさから求めた値です。
    """

    def __init__(self, outcomes, params, kind, sizes):
        self.trials = len(outcomes)
        self.encode_failures = sum(o.encode_failures for o in outcomes)
        self.decode_m0_errors = sum(o.decode_m0_errors for o in outcomes)
        self.cross_decode_errors = sum(
            o.cross_decode_errors for o in outcomes)
        self.final_message_errors = sum(
            0 if o.success else 1 for o in outcomes)
        self.error_rate = self.final_message_errors / self.trials
        self.effective_rates = params.effective_rates()
        self.params = params
        self.kind = kind
        self.sizes = tuple(int(s) for s in sizes)

    def as_dict(self):
        return {
            'encode_failures': self.encode_failures,
            'decode_m0_errors': self.decode_m0_errors,
            'cross_decode_errors': self.cross_decode_errors,
            'final_message_errors': self.final_message_errors,
            'error_rate': self.error_rate,
            'effective_rates': list(self.effective_rates),
            'trials': self.trials,
            'kind': self.kind.label,
            'lag': self.kind.lag,
            'codebook_sizes': dict(zip(
                ('M0', 'M1', 'M2', 'Mp1', 'Mp2'), self.sizes)),
            'params': self.params.as_dict(),
        }

    def to_json(self, indent=2):
        return json.dumps(self.as_dict(), indent=indent, ensure_ascii=False)

    def __repr__(self):
        return "SimReport(trials={}, error_rate={})".format(
            self.trials, self.error_rate)


def _indexed_trial(task):
    index, p, params, kind, ref = task
    return run_trial(p, params, kind, make_rng(params.seed, index), ref=ref)


def run_simulation(p, params, kind, processes=None):
    """
    params.trials 回の試行を行い、結果を集計します。

    t 番目の試行は ``make_rng(params.seed, t)`` を使うので、
    結果はプロセス数や実行順序に依存しません。

    Parameters
    ----------
    p : SchemeDistribution
    params : CodeParams
    kind : SchemeKind
    processes : int, optional
        ワーカープロセス数。省略した場合は ``SDMAC_PROCESSES`` の値です。

    Returns
    -------
    SimReport

    Examples
    --------
    >>> from pysdmac.api.channel import (
    ...     StateModel, ChannelKernel, SchemeKind, direct_scheme)
    >>> from pysdmac.api.codebook import CodeParams
    >>> from pysdmac.api.simulator import run_simulation
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> report = run_simulation(
    ...     direct_scheme(StateModel.null(), k),
    ...     CodeParams(n=4, blocks=2, epsilon=3.0, trials=3),
    ...     SchemeKind.parse('full-noncausal'))
    >>> report.error_rate, report.effective_rates
    (0.0, (0.0, 0.0))
    """
    _check_mode(kind)
    ref = operational_joint(p, kind)
    sizes = params.sizes(kind)
    _check_candidates(sizes)
    processes = PROCESSES if processes is None else int(processes)
    tasks = [(t, p, params, kind, ref) for t in range(params.trials)]
    if processes > 1:
        with Pool(processes) as pool:
            outcomes = pool.map(_indexed_trial, tasks)
    else:
        outcomes = [_indexed_trial(task) for task in tasks]

    report = SimReport(outcomes, params, kind, sizes)
    logger.info("{} trials, error rate {} ({})".format(
        report.trials, report.error_rate, kind.label))
    return report

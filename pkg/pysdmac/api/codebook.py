"""
重ね合わせ符号のコードブックの生成。

雲の中心 u^n(m0) を p(u) から、衛星 v_k^n(m0, m_k, m'_k) を
状態について周辺化した p(v_k|u) から、それぞれ独立に生成します。
m_k は GP ビンの番号、m'_k はビン内の番号です。
"""
from logging import getLogger
import math
import os

import numpy as np

from pysdmac.api.channel import SchemeKind, check
from pysdmac.api.prob import SizeLimitError
from pysdmac.api.typicality import SimulationError

logger = getLogger(__name__)

MAX_BLOCKLENGTH = int(os.environ.get("SDMAC_MAX_BLOCKLENGTH", "32"))
MAX_BOOK_SIZE = int(os.environ.get("SDMAC_MAX_BOOK_SIZE", str(2 ** 16)))
MAX_ALPHABET = int(os.environ.get("SDMAC_MAX_ALPHABET", "4"))

# 重複した系列を引き直す回数の上限
MAX_REDRAWS = 1000


def book_size(n, rate):
    """
    レート rate の符号帳の大きさ ⌈2^{n R}⌉ を返します。

    >>> from pysdmac.api.codebook import book_size
    >>> book_size(8, 0.5), book_size(8, 0.0), book_size(3, 1.0)
    (16, 1, 8)
    """
    # 2^{nR} が整数になる場合に浮動小数点誤差で切り上がらないようにする
    return max(1, int(math.ceil(2.0 ** (n * rate) - 1e-9)))


class CodeParams(object):
    """
    符号化シミュレーションのパラメータ。

    Attributes
    ----------
    n : int
        ブロック長。
    blocks : int
        ブロック数 B（2 以上）。最後のブロックは新しいメッセージを運びません。
    r0, r1, r2 : float
        雲の中心と各送信者のレート（ビット/通信路使用）。
    rp1, rp2 : float
        GP ビン内のレート R'_1, R'_2。
    epsilon : float
        典型性の許容幅。
    trials : int
        試行回数。
    seed : int
        シード値。t 番目の試行は ``make_rng(seed, t)`` を使います。
    distinct : bool
        True の場合、同じ雲の v の符号帳の中で重複した系列を引き直します。
        既定値 False では全ての系列を独立に引きます。雲の中心 u は
        常に独立に引きます。
    """

    def __init__(self, n, blocks=4, r0=0.0, r1=0.0, r2=0.0, rp1=0.0,
                 rp2=0.0, epsilon=0.5, trials=100, seed=0, distinct=False):
        self.n = int(n)
        self.blocks = int(blocks)
        self.r0, self.r1, self.r2 = float(r0), float(r1), float(r2)
        self.rp1, self.rp2 = float(rp1), float(rp2)
        self.epsilon = float(epsilon)
        self.trials = int(trials)
        self.seed = int(seed)
        self.distinct = bool(distinct)

        if self.n < 1:
            raise SimulationError("n は 1 以上で指定してください: {}".format(n))

        if self.n > MAX_BLOCKLENGTH:
            raise SizeLimitError("ブロック長 {} が上限 {} を超えています。".format(
                self.n, MAX_BLOCKLENGTH))

        if self.blocks < 2:
            raise SimulationError(
                "ブロック数は 2 以上で指定してください: {}".format(blocks))

        if self.trials < 1:
            raise SimulationError(
                "試行回数は 1 以上で指定してください: {}".format(trials))

        if not self.epsilon > 0.0:
            raise SimulationError(
                "epsilon は正の値で指定してください: {}".format(epsilon))

        for name in ('r0', 'r1', 'r2', 'rp1', 'rp2'):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise SimulationError(
                    "{} は 0 以上の有限値で指定してください: {}".format(
                        name, value))

    def sizes(self, kind):
        """
        符号帳の大きさ (M0, M1, M2, M'1, M'2) を返します。

        因果的・厳密に因果的な方式では GP ビンを使わないので M'_k = 1 です。
        """
        binning = kind.causality == SchemeKind.NONCAUSAL
        return (
            book_size(self.n, self.r0),
            book_size(self.n, self.r1),
            book_size(self.n, self.r2),
            book_size(self.n, self.rp1) if binning else 1,
            book_size(self.n, self.rp2) if binning else 1,
        )

    def effective_rates(self):
        """
        丸めた後のレートに (B-1)/B を掛けた実効レート (R1, R2)。
        """
        factor = (self.blocks - 1) / self.blocks
        return tuple(
            math.log2(book_size(self.n, r)) / self.n * factor
            for r in (self.r1, self.r2))

    def replace(self, **kwargs):
        values = self.as_dict()
        values.update(kwargs)
        return CodeParams(**values)

    def as_dict(self):
        return {
            'n': self.n, 'blocks': self.blocks,
            'r0': self.r0, 'r1': self.r1, 'r2': self.r2,
            'rp1': self.rp1, 'rp2': self.rp2,
            'epsilon': self.epsilon, 'trials': self.trials,
            'seed': self.seed, 'distinct': self.distinct,
        }

    def __repr__(self):
        return "CodeParams({})".format(", ".join(
            "{}={}".format(k, v) for k, v in self.as_dict().items()))


class CodebookEnsemble(object):
    """
    1回の試行で使う符号帳の組。

    Attributes
    ----------
    u_book : numpy.ndarray
        形 (M0, n)。
    v1_book : numpy.ndarray
        形 (M0, M1, M'1, n)。添字は [雲][ビン][ビン内の番号]。
    v2_book : numpy.ndarray
        形 (M0, M2, M'2, n)。
    partition : numpy.ndarray or None
        部分フィードバックの場合、ビン m2 から雲の番号への写像
        c(m2) = m2 mod M0。それ以外は None。
    """

    def __init__(self, u_book, v1_book, v2_book, partition=None):
        self.u_book = np.asarray(u_book)
        self.v1_book = np.asarray(v1_book)
        self.v2_book = np.asarray(v2_book)
        m0 = self.u_book.shape[0]
        if self.v1_book.shape[0] != m0 or self.v2_book.shape[0] != m0:
            raise SimulationError("雲の数が符号帳の間で一致しません。")

        self.partition = None if partition is None else np.asarray(partition)
        for a in (self.u_book, self.v1_book, self.v2_book):
            a.setflags(write=False)

    @property
    def sizes(self):
        """
        (M0, M1, M2, M'1, M'2) を返します。
        """
        return (self.u_book.shape[0],
                self.v1_book.shape[1], self.v2_book.shape[1],
                self.v1_book.shape[2], self.v2_book.shape[2])

    @property
    def n(self):
        return self.u_book.shape[1]

    def helping_index(self, m1, m2):
        """
        両側フィードバックで次のブロックの雲の番号
        φ(m1, m2) = (m1 M2 + m2) mod M0 を返します。
        """
        m0, _, size2, _, _ = self.sizes
        return (m1 * size2 + m2) % m0

    def cell(self, m2):
        """
        部分フィードバックで m2 が属する分割 c(m2) を返します。
        """
        if self.partition is None:
            raise SimulationError("この符号帳には分割がありません。")

        return int(self.partition[m2])

    def bin(self, k, m0, m):
        """
        送信者 k の雲 m0・ビン m の系列を (M'_k, n) で返します。
        """
        book = self.v1_book if k == 1 else self.v2_book
        return book[m0, m]


def make_partition(m2_size, m0_size):
    """
    ビン 0..M2-1 を M0 個の分割に振り分けます（m2 mod M0）。

    M2 ≥ M0 なら全ての分割が使われます。

    >>> from pysdmac.api.codebook import make_partition
    >>> make_partition(5, 2).tolist()
    [0, 1, 0, 1, 0]
    """
    return np.arange(m2_size) % m0_size


def _draw_conditional(cdf_rows, count, rng):
    """
    位置ごとの累積分布 cdf_rows (n, |V|) から count 本の系列を引きます。
    """
    draws = rng.random((count, cdf_rows.shape[0]))
    v = (draws[:, :, np.newaxis] >= cdf_rows[np.newaxis, :, :]).sum(axis=-1)
    return np.minimum(v, cdf_rows.shape[1] - 1)


def _distinct_capacity(pmf_rows):
    """
    位置ごとの台の大きさの積（異なる系列の最大数）。
    """
    support = (pmf_rows > 0.0).sum(axis=1)
    capacity = 1
    for s in support:
        capacity *= int(s)
        if capacity > MAX_BOOK_SIZE:
            break

    return capacity


def _draw_book(pmf_rows, count, rng, distinct, what):
    """
    位置ごとの分布 pmf_rows (n, |V|) に従う count 本の系列を生成します。
    """
    cdf_rows = np.cumsum(pmf_rows, axis=1)
    book = _draw_conditional(cdf_rows, count, rng)
    if not distinct or count == 1:
        return book

    if _distinct_capacity(pmf_rows) < count:
        logger.warning("{}: 異なる系列が {} 本も存在しないため、"
                       "重複を許します。".format(what, count))
        return book

    for _ in range(MAX_REDRAWS):
        _, first = np.unique(book, axis=0, return_index=True)
        if len(first) == count:
            return book

        duplicated = np.setdiff1d(np.arange(count), first)
        book[duplicated] = _draw_conditional(cdf_rows, len(duplicated), rng)

    logger.warning("{}: 重複を取り除けませんでした。".format(what))
    return book


def check_alphabets(p):
    """
    全てのアルファベットの大きさが ``SDMAC_MAX_ALPHABET`` 以下か確認します。
    """
    if max(p.sizes) > MAX_ALPHABET:
        raise SizeLimitError(
            "アルファベットの大きさ {} が上限 {} を超えています。".format(
                max(p.sizes), MAX_ALPHABET))


def generate_codebooks(p, params, kind, rng):
    """
    1回の試行で使う符号帳を生成します。

    Parameters
    ----------
    p : SchemeDistribution
        符号化方式の分布。
    params : CodeParams
        符号のパラメータ。
    kind : SchemeKind
        方式。因果的な方式では GP ビンを使いません。
    rng : numpy.random.Generator
        乱数生成器。

    Returns
    -------
    CodebookEnsemble

    Raises
    ------
    SizeLimitError
        符号帳の大きさやアルファベットの大きさが上限を超えた場合。

    Examples
    --------
    >>> from pysdmac.api.channel import (
    ...     StateModel, ChannelKernel, SchemeKind, direct_scheme)
    >>> from pysdmac.api.codebook import CodeParams, generate_codebooks
    >>> from pysdmac.api.prob import make_rng
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> books = generate_codebooks(
    ...     direct_scheme(StateModel.null(), k), CodeParams(n=4, r1=0.5),
    ...     SchemeKind.parse('full-noncausal'), make_rng(1))
    >>> books.u_book.shape, books.v1_book.shape, books.v2_book.shape
    ((1, 4), (1, 4, 1, 4), (1, 1, 1, 4))
    """
    check(p)
    check_alphabets(p)
    m0, m1, m2, mp1, mp2 = params.sizes(kind)
    for what, size in (('u', m0), ('v1', m1 * mp1), ('v2', m2 * mp2)):
        if size > MAX_BOOK_SIZE:
            raise SizeLimitError(
                "符号帳 {} の大きさ {} が上限 {} を超えています。".format(
                    what, size, MAX_BOOK_SIZE))

    n = params.n
    u_rows = np.broadcast_to(p.pu, (n, p.pu.size))
    u_book = _draw_book(u_rows, m0, rng, False, 'u')
    books = []
    for k, (size, inner) in ((1, (m1, mp1)), (2, (m2, mp2))):
        pmf = p.satellite_pmf(k)
        clouds = []
        for c in range(m0):
            rows = pmf[u_book[c]]
            book = _draw_book(rows, size * inner, rng, params.distinct,
                              'v{}[{}]'.format(k, c))
            clouds.append(book.reshape(size, inner, n))

        books.append(np.array(clouds))

    partition = None
    if kind.feedback == SchemeKind.PARTIAL:
        partition = make_partition(m2, m0)

    logger.debug("codebooks: M0={}, M1={}, M2={}, M'1={}, M'2={}".format(
        m0, m1, m2, mp1, mp2))
    return CodebookEnsemble(u_book, books[0], books[1], partition)

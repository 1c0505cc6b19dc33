"""
prob モジュールは、有限アルファベット上の同時確率表と、
エントロピー・（条件付き）相互情報量の計算をまとめています。

対数の底は全て 2 で、情報量の単位はビットです。
"""
from collections.abc import Iterable
from logging import getLogger
import os

import numpy as np
from scipy.stats import entropy as _scipy_entropy

logger = getLogger(__name__)

MAX_CELLS = int(os.environ.get("SDMAC_MAX_CELLS", str(2 ** 18)))
PROCESSES = int(os.environ.get("SDMAC_PROCESSES", "1"))
SUM_TOLERANCE = 1e-12
NEGATIVE_TOLERANCE = 1e-12


class ProbError(RuntimeError):
    """
    確率表の操作の際に例外が起こると、このクラスが発生します。
    """
    pass


class ConsistencyError(ProbError):
    """
    浮動小数点誤差では説明できない負の情報量が得られた場合に発生します。
    """
    pass


class SizeLimitError(ProbError):
    """
    表やコードブックの大きさが上限を超えた場合に発生します。
    """
    pass


class Alphabet(object):
    """
    有限アルファベットを表すクラス。

    Attributes
    ----------
    name : str
        変数名（'s0', 'u', 'y' など）。
    size : int
        アルファベットの大きさ（1 以上）。
    """

    def __init__(self, name, size):
        if not isinstance(name, str) or name == "":
            raise ProbError("変数名は空でない文字列で指定してください。")

        size = int(size)
        if size < 1:
            raise ProbError(
                "アルファベット {} の大きさが不正です: {}".format(name, size))

        self.name = name
        self.size = size

    def __eq__(self, other):
        return isinstance(other, Alphabet) and \
            (self.name, self.size) == (other.name, other.size)

    def __hash__(self):
        return hash((self.name, self.size))

    def __repr__(self):
        return "Alphabet({!r}, {})".format(self.name, self.size)


def _as_names(variables):
    """
    変数集合の指定を名前のタプルに変換します。
    """
    if variables is None:
        return ()

    if isinstance(variables, str):
        return (variables,)

    if isinstance(variables, Alphabet):
        return (variables.name,)

    if isinstance(variables, Iterable):
        names = []
        for v in variables:
            names.append(v.name if isinstance(v, Alphabet) else v)

        return tuple(names)

    raise TypeError("変数集合は名前の文字列またはそのリストで指定してください。")


def check_cells(sizes, limit=None):
    """
    アルファベットの大きさの積が上限を超えていないか確認します。

    Parameters
    ----------
    sizes : list of int
        各変数のアルファベットの大きさ。
    limit : int, optional
        上限値。省略した場合は ``MAX_CELLS`` を利用します。

    Returns
    -------
    int
        セル数。

    Raises
    ------
    SizeLimitError
        セル数が上限を超えた場合。
    """
    limit = MAX_CELLS if limit is None else limit
    cells = 1
    for size in sizes:
        cells *= int(size)

    if cells > limit:
        raise SizeLimitError(
            "確率表のセル数 {} が上限 {} を超えています。".format(cells, limit))

    return cells


class JointTable(object):
    """
    名前付きの有限アルファベット変数上の同時確率表。

    表は生成後に変更できません。部分集合のエントロピーは
    内部にキャッシュします。

    Attributes
    ----------
    vars : list of Alphabet
        変数の並び。
    probs : numpy.ndarray
        変数ごとに1軸をもつ確率表（読み出し専用）。

    Examples
    --------
    >>> from pysdmac.api.prob import JointTable
    >>> t = JointTable(['x', 'y'], [[0.4, 0.1], [0.1, 0.4]])
    >>> t.names
    ('x', 'y')
    >>> t.cells
    4
    """

    def __init__(self, names, probs):
        names = _as_names(names)
        if len(set(names)) != len(names):
            raise ProbError("変数名が重複しています: {}".format(names))

        probs = np.array(probs, dtype=float)
        if probs.ndim != len(names):
            raise ProbError(
                "確率表の次元 {} が変数の数 {} と一致しません。".format(
                    probs.ndim, len(names)))

        check_cells(probs.shape)
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ProbError("確率表に負の値または非有限値が含まれています。")

        total = probs.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ProbError(
                "確率表の総和が 1 ではありません: {!r}".format(total))

        probs.setflags(write=False)
        self.vars = [Alphabet(n, s) for n, s in zip(names, probs.shape)]
        self.probs = probs
        self._entropy_cache = {}

    @property
    def names(self):
        return tuple(v.name for v in self.vars)

    @property
    def cells(self):
        return int(self.probs.size)

    def size(self, name):
        """
        変数 name のアルファベットの大きさを返します。
        """
        return self.probs.shape[self._axis(name)]

    def _axis(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise ProbError("未知の変数です: {!r}".format(name))

    def _axes(self, variables):
        return tuple(self._axis(n) for n in _as_names(variables))

    def marginal_array(self, keep):
        """
        keep に含まれる変数の周辺分布を、keep の並び順の配列で返します。
        """
        keep = _as_names(keep)
        axes = self._axes(keep)
        if len(set(axes)) != len(axes):
            raise ProbError("変数名が重複しています: {}".format(keep))

        dropped = tuple(i for i in range(len(self.vars)) if i not in axes)
        marginal = self.probs.sum(axis=dropped) if dropped else self.probs
        # sum() は残った軸を元の順で並べる
        remaining = sorted(axes)
        order = [remaining.index(a) for a in axes]
        return np.transpose(marginal, order) if order else np.asarray(marginal)

    def joint_entropy(self, variables):
        """
        variables の同時エントロピー H(variables) をビットで返します。
        空集合のエントロピーは 0 です。
        """
        axes = frozenset(self._axes(variables))
        if not axes:
            return 0.0

        if axes not in self._entropy_cache:
            names = [self.vars[i].name for i in sorted(axes)]
            flat = self.marginal_array(names).ravel()
            self._entropy_cache[axes] = float(
                _scipy_entropy(flat, base=2))

        return self._entropy_cache[axes]

    def __repr__(self):
        return "JointTable({})".format(
            ", ".join("{}:{}".format(v.name, v.size) for v in self.vars))


def _disjoint(*sets):
    seen = set()
    for s in sets:
        names = set(_as_names(s))
        overlap = seen & names
        if overlap:
            raise ProbError(
                "変数集合が重なっています: {}".format(sorted(overlap)))

        seen |= names


def _clamp(value, what):
    if value >= 0.0:
        return value

    if value >= -NEGATIVE_TOLERANCE:
        return 0.0

    raise ConsistencyError(
        "{} が負になりました: {!r}".format(what, value))


def marginalize(t, keep):
    """
    同時確率表 t を keep に含まれる変数の周辺分布に縮約します。

    Parameters
    ----------
    t : JointTable
        元の同時確率表。
    keep : str or list of str
        残す変数の名前。

    Returns
    -------
    JointTable
        keep の変数（t での並び順）上の同時確率表。

    Examples
    --------
    >>> from pysdmac.api.prob import JointTable, marginalize
    >>> t = JointTable(['x', 'y'], [[0.4, 0.1], [0.1, 0.4]])
    >>> marginalize(t, ['x']).probs.tolist()
    [0.5, 0.5]
    """
    keep = set(_as_names(keep))
    t._axes(keep)
    names = [n for n in t.names if n in keep]
    marginal = t.marginal_array(names)
    # 丸め誤差で総和が 1 からずれないように正規化する
    return JointTable(names, marginal / marginal.sum())


def entropy(t, of, given=()):
    """
    条件付きエントロピー H(of | given) をビットで返します。

    Parameters
    ----------
    t : JointTable
        同時確率表。
    of : str or list of str
        エントロピーを求める変数。
    given : str or list of str, optional
        条件とする変数。省略した場合は無条件です。

    Returns
    -------
    float
        0 以上の値。

    Examples
    --------
    >>> from pysdmac.api.prob import JointTable, entropy
    >>> t = JointTable(['x', 'y'], [[0.4, 0.1], [0.1, 0.4]])
    >>> round(entropy(t, 'y', 'x'), 5)
    0.72193
    """
    _disjoint(of, given)
    of, given = _as_names(of), _as_names(given)
    value = t.joint_entropy(of + given) - t.joint_entropy(given)
    return _clamp(value, "H({}|{})".format(",".join(of), ",".join(given)))


def mutual_info(t, a, b, given=()):
    """
    条件付き相互情報量 I(a; b | given) をビットで返します。

    I(a;b|given) = H(a|given) - H(a|b,given) として計算します。
    絶対値が 1e-12 未満の負の値は 0 に丸めます。

    Parameters
    ----------
    t : JointTable
        同時確率表。
    a, b : str or list of str
        相互情報量を求める変数集合。
    given : str or list of str, optional
        条件とする変数集合。

    Returns
    -------
    float
        0 以上の値。

    Raises
    ------
    ProbError
        変数集合が重なっている場合。
    ConsistencyError
        1e-12 を超える負の値が得られた場合。

    Examples
    --------
    >>> from pysdmac.api.prob import JointTable, mutual_info
    >>> t = JointTable(['x', 'y'], [[0.4, 0.1], [0.1, 0.4]])
    >>> round(mutual_info(t, 'x', 'y'), 5)
    0.27807
    """
    _disjoint(a, b, given)
    a, b, given = _as_names(a), _as_names(b), _as_names(given)
    value = t.joint_entropy(a + given) + t.joint_entropy(b + given) \
        - t.joint_entropy(a + b + given) - t.joint_entropy(given)
    return _clamp(value, "I({};{}|{})".format(
        ",".join(a), ",".join(b), ",".join(given)))


def make_rng(seed, *keys):
    """
    seed と整数キーの列から乱数生成器を作成します。

    同じ (seed, keys) からは常に同じ系列が得られ、キーが異なれば
    独立な系列になります。サンプル番号や試行番号をキーに使うことで、
    実行順序に依存しない結果を得られます。

    Parameters
    ----------
    seed : int
        基本のシード値（0 以上）。
    keys : int
        追加のキー（サンプル番号など）。

    Returns
    -------
    numpy.random.Generator
    """
    entropy_words = [int(seed)] + [int(k) for k in keys]
    if any(w < 0 for w in entropy_words):
        raise ProbError("シード値とキーは 0 以上の整数で指定してください。")

    return np.random.default_rng(entropy_words)


def sample_simplex(dim, concentration=1.0, rng=None):
    """
    dim 次元の確率単体から確率ベクトルを1つ抽出します。

    全成分が concentration のディリクレ分布を利用します。
    concentration=1.0 は単体上の一様分布です。

    Parameters
    ----------
    dim : int
        次元（1 以上）。
    concentration : float, optional
        ディリクレ分布の集中度（正の値）。
    rng : numpy.random.Generator
        乱数生成器。

    Returns
    -------
    numpy.ndarray
        非負で総和が 1 のベクトル。

    Examples
    --------
    >>> from pysdmac.api.prob import make_rng, sample_simplex
    >>> sample_simplex(1, rng=make_rng(0)).tolist()
    [1.0]
    """
    dim = int(dim)
    if dim < 1:
        raise ProbError("単体の次元は 1 以上で指定してください: {}".format(dim))

    if not concentration > 0.0:
        raise ProbError(
            "集中度は正の値で指定してください: {}".format(concentration))

    if rng is None:
        raise ProbError("乱数生成器 rng を指定してください。")

    if dim == 1:
        return np.ones(1)

    vector = rng.dirichlet(np.full(dim, float(concentration)))
    total = vector.sum()
    if not total > 0.0:
        # 集中度が非常に小さいとアンダーフローすることがある
        vector = np.zeros(dim)
        vector[rng.integers(dim)] = 1.0
        return vector

    return vector / total

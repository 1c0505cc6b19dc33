"""
頑健な ε-典型性（robust typicality）の判定。

系列の組 (a_1, ..., a_n) の経験分布 f が、基準の分布 p に対して
全ての記号 a で |f(a) - p(a)| ≤ ε p(a) を満たすとき典型的とします。
p(a) = 0 の記号は一度も現れてはいけません。

候補の系列を行に並べた2次元配列を渡すと、まとめて判定します。
"""
from logging import getLogger

import numpy as np

logger = getLogger(__name__)

# 1回の bincount で数えるセル数の上限
CHUNK_CELLS = 1 << 22


class SimulationError(RuntimeError):
    """
    符号化シミュレーションのパラメータや入力が不正な場合に発生します。
    """
    pass


def _broadcast(sequences):
    arrays = [np.asarray(s) for s in sequences]
    for a in arrays:
        if a.ndim not in (1, 2):
            raise SimulationError("系列は1次元または2次元配列で指定してください。")

    lengths = set(a.shape[-1] for a in arrays)
    if len(lengths) != 1:
        raise SimulationError(
            "系列の長さが一致しません: {}".format(sorted(lengths)))

    n = lengths.pop()
    if n == 0:
        raise SimulationError("長さ 0 の系列は判定できません。")

    rows = max(a.shape[0] if a.ndim == 2 else 1 for a in arrays)
    try:
        return [np.broadcast_to(np.atleast_2d(a), (rows, n)) for a in arrays]
    except ValueError:
        raise SimulationError("候補の数が一致しません。")


def typical_mask(sequences, ref, epsilon):
    """
    候補ごとに典型性を判定します。

    Parameters
    ----------
    sequences : dict
        変数名から系列への対応。系列は長さ n の1次元配列、または
        候補を行に並べた (K, n) の2次元配列です。1次元の系列は全ての
        候補に共通として扱います。
    ref : JointTable
        基準の同時確率表。sequences の変数の周辺分布を使います。
    epsilon : float
        許容幅（正の値）。

    Returns
    -------
    numpy.ndarray
        長さ K の bool 配列。

    Raises
    ------
    SimulationError
        系列の長さが一致しない場合、または記号がアルファベットの範囲外の場合。
    """
    if not epsilon > 0.0:
        raise SimulationError("epsilon は正の値で指定してください: {}".format(
            epsilon))

    names = list(sequences.keys())
    table = ref.marginal_array(names)
    arrays = _broadcast([sequences[name] for name in names])
    rows, n = arrays[0].shape
    for name, a, size in zip(names, arrays, table.shape):
        if a.size > 0 and (a.min() < 0 or a.max() >= size):
            raise SimulationError(
                "系列 {} に範囲外の記号があります。".format(name))

    cells = table.size
    pmf = table.ravel()
    slack = epsilon * pmf
    flat = np.ravel_multi_index(arrays, table.shape)
    mask = np.empty(rows, dtype=bool)
    chunk = max(1, CHUNK_CELLS // cells)
    for start in range(0, rows, chunk):
        block = flat[start:start + chunk]
        k = len(block)
        offsets = (np.arange(k) * cells)[:, np.newaxis]
        counts = np.bincount(
            (block + offsets).ravel(), minlength=k * cells).reshape(k, cells)
        freq = counts / n
        mask[start:start + k] = np.all(
            np.abs(freq - pmf) <= slack, axis=1)

    return mask


def is_typical(sequences, ref, epsilon):
    """
    系列の組が ref に対して ε-典型的かどうかを返します。

    Examples
    --------
    >>> from pysdmac.api.prob import JointTable
    >>> from pysdmac.api.typicality import is_typical
    >>> ref = JointTable(['x'], [0.5, 0.5])
    >>> is_typical({'x': [0, 1, 1, 0]}, ref, 0.01)
    True
    >>> is_typical({'x': [0] * 10}, ref, 0.1)
    False
    """
    mask = typical_mask(sequences, ref, epsilon)
    if len(mask) != 1:
        raise SimulationError("is_typical() には1組の系列を指定してください。")

    return bool(mask[0])


def typical_indices(sequences, ref, epsilon):
    """
    典型的な候補の番号を昇順で返します。
    """
    return np.flatnonzero(typical_mask(sequences, ref, epsilon))

from logging import getLogger
import os
import site
import sys

from pysdmac.api.channel import SchemeKind
from pysdmac.api.codebook import CodeParams
from pysdmac.api.document import ChannelDocument
from pysdmac.api.region import SearchParams, bounds_for, region_search
from pysdmac.api.simulator import run_simulation

logger = getLogger(__name__)

__version__ = '1.0.0'

SEED = int(os.environ.get("SDMAC_SEED", "1367"))


def get_seed():
    """
    既定のシード値を取得します。

    環境変数 ``SDMAC_SEED`` が指定されていればその値、
    指定されていなければ 1367 を返します。

    Return
    ------
    int
        シード値。
    """
    return SEED


def get_data_dir():
    """
    パッケージに同梱されているサンプル通信路文書のディレクトリを取得します。

    次の順に探し、最初に見つかったディレクトリを返します。

    - ``sys.prefix`` の下の ``pysdmac_basedata``
    - ``site.USER_BASE`` の下の ``pysdmac_basedata``
    - カレントディレクトリの下の ``base_data``

    Return
    ------
    str or None
        ディレクトリのパス。見つからない場合は None。
    """
    candidates = [
        os.path.join(sys.prefix, 'pysdmac_basedata'),
        os.path.join(site.USER_BASE, 'pysdmac_basedata'),
        os.path.join(os.getcwd(), 'base_data'),
    ]
    for cand in candidates:
        if os.path.isdir(cand):
            return cand

    return None


def load_channel(path):
    """
    通信路文書を読み込みます。

    path が存在せず、同梱のサンプルに同じ名前のファイルがあれば
    そちらを読み込みます。

    Parameters
    ----------
    path : PathLike
        JSON ファイルのパス、またはサンプルのファイル名
        （例: ``identity-mac.json``）。

    Returns
    -------
    ChannelDocument
    """
    if not os.path.exists(path):
        data_dir = get_data_dir()
        if data_dir and os.path.exists(os.path.join(data_dir, path)):
            path = os.path.join(data_dir, path)
            logger.debug("サンプル {} を読み込みます。".format(path))

    return ChannelDocument.load(path)


def bounds(theorem, scheme):
    """
    1つの分布に対するレート上界を求めます。

    Parameters
    ----------
    theorem : int or str or SchemeKind
        1〜6, 'no-feedback', 'cover-leung' または SchemeKind。
    scheme : SchemeDistribution

    Returns
    -------
    RateBounds

    Examples
    --------
    >>> import pysdmac.api as api
    >>> from pysdmac.api.channel import (
    ...     ChannelKernel, StateModel, direct_scheme)
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> b = api.bounds(1, direct_scheme(StateModel.null(), k))
    >>> round(b.r1_max, 9), round(b.r2_max, 9), round(b.rsum_max, 9)
    (1.0, 1.0, 2.0)
    """
    return bounds_for(theorem, scheme)


def search_region(doc, theorem, seed=None, **options):
    """
    文書の通信路について達成可能レート領域を探索します。

    Parameters
    ----------
    doc : ChannelDocument
    theorem : int or str or SchemeKind
    seed : int, optional
        省略した場合は ``get_seed()`` の値です。
    options : dict
        SearchParams のその他の引数。

    Returns
    -------
    RegionCloud

    Examples
    --------
    >>> import pysdmac.api as api
    >>> from pysdmac.api.document import ChannelDocument
    >>> doc = ChannelDocument.from_dict({
    ...     "alphabets": {"x1": 2, "x2": 2, "y": 4},
    ...     "kernel": [[[[[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
    ...                  [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]]]]]})
    >>> cloud = api.search_region(doc, 3, seed=0, cardinalities=(1, 2, 2),
    ...                           samples=20, processes=1)
    >>> cloud.theorem, len(cloud.schemes), cloud.contains((0.0, 0.0))
    (3, 20, True)
    >>> cloud.max_rates()[0] <= 1.0 + 1e-9
    True
    """
    seed = get_seed() if seed is None else seed
    return region_search(theorem, doc.states, doc.kernel,
                         SearchParams(seed=seed, **options))


def simulate(doc, kind, seed=None, processes=None, **options):
    """
    文書の通信路と符号化方式についてシミュレーションを行います。

    文書に scheme がなければ ``direct_scheme()`` を使います。

    Parameters
    ----------
    doc : ChannelDocument
    kind : str or SchemeKind
        'full-noncausal' などのラベル、または SchemeKind。
    seed : int, optional
        省略した場合は ``get_seed()`` の値です。
    processes : int, optional
        ワーカープロセス数。
    options : dict
        CodeParams のその他の引数（n, blocks, r1 など）。

    Returns
    -------
    SimReport

    Examples
    --------
    >>> import pysdmac.api as api
    >>> from pysdmac.api.document import ChannelDocument
    >>> doc = ChannelDocument.from_dict({
    ...     "alphabets": {"x1": 2, "x2": 2, "y": 4},
    ...     "kernel": [[[[[[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]],
    ...                  [[0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]]]]]})
    >>> report = api.simulate(doc, "full-noncausal", seed=1, processes=1,
    ...                       n=8, r1=0.5, r2=0.5, epsilon=3.0, trials=10,
    ...                       distinct=True)
    >>> report.error_rate, report.effective_rates
    (0.0, (0.375, 0.375))
    """
    if isinstance(kind, str):
        kind = SchemeKind.parse(kind)

    seed = get_seed() if seed is None else seed
    params = CodeParams(seed=seed, **options)
    return run_simulation(doc.scheme_or_default(), params, kind,
                          processes=processes)


def get_version() -> str:
    """
    Return version string.

    >>> import pysdmac.api as api
    >>> api.get_version() == api.__version__
    True
    """
    return __version__

"""
region モジュールは、分布族の1要素に対する達成可能レート領域の
評価関数と、分布族を無作為に探索して凸包を求める処理をまとめています。

各評価関数は3つの不等式 R1 ≤ r1_max, R2 ≤ r2_max, R1 + R2 ≤ rsum_max
の右辺を ``RateBounds`` として返します。
"""
import csv
import io
from logging import getLogger
from multiprocessing import Pool
import os

import numpy as np

from pysdmac.api.channel import (
    SchemeDistribution, SchemeKind, check, count_maps, enumerate_maps,
    random_scheme)
from pysdmac.api.document import write_text_atomic
from pysdmac.api import hull as _hull
from pysdmac.api.prob import (
    JointTable, PROCESSES, SizeLimitError, make_rng, mutual_info)

logger = getLogger(__name__)

MAX_MAP_ENUMERATION = int(os.environ.get(
    "SDMAC_MAX_MAP_ENUMERATION", "4096"))

CSV_COLUMNS = ('r1', 'r2', 'is_hull_vertex', 'sample_index')
ZERO_TOLERANCE = 1e-12


class RegionError(RuntimeError):
    """
    領域の評価や探索の前提条件が満たされない場合に発生します。
    """
    pass


class RateBounds(object):
    """
    1つの分布に対する3つのレート上界。

    Attributes
    ----------
    r1_max, r2_max, rsum_max : float
        0 で切り詰めた上界（ビット/通信路使用）。
    raw : tuple of float
        切り詰める前の (r1_max, r2_max, rsum_max)。
    theorem : int or str
        評価に使った式の識別子（1〜6, 'no-feedback', 'cover-leung'）。

    Examples
    --------
    >>> from pysdmac.api.region import RateBounds
    >>> b = RateBounds(1.0, -0.25, 0.5, theorem=3)
    >>> b.r2_max, b.raw[1]
    (0.0, -0.25)
    >>> b.corner_points()
    [(0.0, 0.0), (0.5, 0.0)]
    """

    def __init__(self, r1_max, r2_max, rsum_max, theorem):
        self.raw = (float(r1_max), float(r2_max), float(rsum_max))
        # 丸め誤差程度の値は 0 とみなす
        self.r1_max, self.r2_max, self.rsum_max = \
            (v if v > ZERO_TOLERANCE else 0.0 for v in self.raw)
        self.theorem = theorem

    def corner_points(self):
        """
        3つの不等式と非負条件で定まる五角形の頂点を返します。

        頂点は (0,0) から R1 軸、支配的な2つの角、R2 軸の順に並び、
        重複は取り除きます。
        """
        a, b, c = self.r1_max, self.r2_max, self.rsum_max
        a_ = min(a, c)
        b_ = min(b, c)
        candidates = [
            (0.0, 0.0),
            (a_, 0.0),
            (a_, max(0.0, min(b, c - a_))),
            (max(0.0, min(a, c - b_)), b_),
            (0.0, b_),
        ]
        points = []
        for pt in candidates:
            if pt not in points:
                points.append(pt)

        return points

    def contains(self, r1, r2, tolerance=1e-12):
        """
        (r1, r2) が3つの不等式を満たすかどうかを返します。
        """
        return -tolerance <= r1 <= self.r1_max + tolerance and \
            -tolerance <= r2 <= self.r2_max + tolerance and \
            r1 + r2 <= self.rsum_max + tolerance

    def as_dict(self):
        return {
            'theorem': self.theorem,
            'r1_max': self.r1_max,
            'r2_max': self.r2_max,
            'rsum_max': self.rsum_max,
            'raw': list(self.raw),
        }

    def __eq__(self, other):
        return isinstance(other, RateBounds) and self.raw == other.raw

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        return "RateBounds(theorem={!r}, r1_max={:.6g}, r2_max={:.6g}, " \
            "rsum_max={:.6g})".format(
                self.theorem, self.r1_max, self.r2_max, self.rsum_max)


def _joint_of(p):
    if isinstance(p, SchemeDistribution):
        check(p)
        return p.joint()

    if isinstance(p, JointTable):
        return p

    raise TypeError("p は SchemeDistribution または JointTable で指定してください。")


class _Measures(object):
    """
    1つの同時確率表から各定理に共通する情報量を取り出すヘルパー。
    """

    def __init__(self, p):
        self.t = _joint_of(p)

    def mi(self, a, b, given=()):
        return mutual_info(self.t, a, b, given)

    @property
    def penalty1(self):
        return self.mi('v1', ['s0', 's1'], 'u')

    @property
    def penalty2(self):
        return self.mi('v2', ['s0', 's2'], 'u')

    @property
    def arm1(self):
        return self.mi('v1', 'y', ['u', 'v2'])

    @property
    def arm2(self):
        return self.mi('v2', 'y', ['u', 'v1'])

    @property
    def state_arm1(self):
        return self.mi('v1', 'y', ['u', 'v2', 's0', 's2'])

    @property
    def state_arm2(self):
        return self.mi('v2', 'y', ['u', 'v1', 's0', 's1'])

    @property
    def sum_arm(self):
        return self.mi(['v1', 'v2'], 'y')

    @property
    def cloud(self):
        return self.mi('u', 'y')


def bounds_thm1(p):
    """
    状態を非因果的に知り、両送信者がフィードバックを受ける場合の上界。

    - r1_max = min(I(V1;Y|U,V2), I(V1;Y|U,V2,S0,S2)) - I(V1;S0,S1|U)
    - r2_max = min(I(V2;Y|U,V1), I(V2;Y|U,V1,S0,S1)) - I(V2;S0,S2|U)
    - rsum_max = I(V1,V2;Y) - I(V1;S0,S1|U) - I(V2;S0,S2|U)

    Parameters
    ----------
    p : SchemeDistribution or JointTable
        評価する分布。

    Returns
    -------
    RateBounds

    Raises
    ------
    ValidationError
        p が正しくない場合。

    Examples
    --------
    >>> from pysdmac.api.channel import StateModel, ChannelKernel, direct_scheme
    >>> from pysdmac.api.region import bounds_thm1
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 4, lambda s0, s1, s2, x1, x2: 2 * x1 + x2)
    >>> b = bounds_thm1(direct_scheme(StateModel.null(), k))
    >>> tuple(round(v, 9) for v in b.raw)
    (1.0, 1.0, 2.0)
    """
    m = _Measures(p)
    pen1, pen2 = m.penalty1, m.penalty2
    return RateBounds(
        min(m.arm1, m.state_arm1) - pen1,
        min(m.arm2, m.state_arm2) - pen2,
        m.sum_arm - pen1 - pen2,
        theorem=1)


def bounds_thm2(p):
    """
    状態を因果的に知り、両送信者がフィードバックを受ける場合の上界。
    ``bounds_thm1()`` から I(V;S|U) の項を除いたものです。
    """
    m = _Measures(p)
    return RateBounds(
        min(m.arm1, m.state_arm1),
        min(m.arm2, m.state_arm2),
        m.sum_arm,
        theorem=2)


def _strict(p, theorem):
    m = _Measures(p)
    return RateBounds(m.arm1, m.arm2, m.sum_arm, theorem=theorem)


def bounds_thm3(p):
    """
    状態を厳密に因果的に知り、両送信者がフィードバックを受ける場合の上界。

    r1_max = I(V1;Y|U,V2), r2_max = I(V2;Y|U,V1), rsum_max = I(V1,V2;Y)
    """
    return _strict(p, 3)


def bounds_thm4(p):
    """
    状態を非因果的に知り、送信者 1 だけがフィードバックを受ける場合の上界。

    - r1_max = I(V1;Y|U,V2) - I(V1;S0,S1|U)
    - r2_max = min(I(V2;Y|U,V1) + I(U;Y), I(V2;Y|U,V1,S0,S1)) - I(V2;S0,S2|U)
    - rsum_max = I(V1,V2;Y) - I(V1;S0,S1|U) - I(V2;S0,S2|U)
    """
    m = _Measures(p)
    pen1, pen2 = m.penalty1, m.penalty2
    return RateBounds(
        m.arm1 - pen1,
        min(m.arm2 + m.cloud, m.state_arm2) - pen2,
        m.sum_arm - pen1 - pen2,
        theorem=4)


def bounds_thm5(p):
    """
    状態を因果的に知り、送信者 1 だけがフィードバックを受ける場合の上界。
    ``bounds_thm4()`` から I(V;S|U) の項を除いたものです。
    """
    m = _Measures(p)
    return RateBounds(
        m.arm1,
        min(m.arm2 + m.cloud, m.state_arm2),
        m.sum_arm,
        theorem=5)


def bounds_thm6(p):
    """
    状態を厳密に因果的に知り、送信者 1 だけがフィードバックを受ける場合の上界。
    式は ``bounds_thm3()`` と同じです。
    """
    return _strict(p, 6)


def bounds_nofeedback(p):
    """
    フィードバックがない場合の上界。レート分割をしないので |U| = 1 が前提です。

    - r1_max = I(V1;Y|V2) - I(V1;S0,S1)
    - r2_max = I(V2;Y|V1) - I(V2;S0,S2)
    - rsum_max = I(V1,V2;Y) - I(V1;S0,S1) - I(V2;S0,S2)

    Raises
    ------
    RegionError
        |U| > 1 の場合。
    """
    t = _joint_of(p)
    if t.size('u') != 1:
        raise RegionError(
            "フィードバックなしの領域は |U| = 1 の分布で評価してください"
            "（|U| = {}）。".format(t.size('u')))

    pen1 = mutual_info(t, 'v1', ['s0', 's1'])
    pen2 = mutual_info(t, 'v2', ['s0', 's2'])
    return RateBounds(
        mutual_info(t, 'v1', 'y', 'v2') - pen1,
        mutual_info(t, 'v2', 'y', 'v1') - pen2,
        mutual_info(t, ['v1', 'v2'], 'y') - pen1 - pen2,
        theorem='no-feedback')


def _cover_leung_table(p):
    """
    (u, v1, v2, y) の同時確率を直接組み立てます。
    """
    f1 = p.f1[:, :, 0, 0]
    f2 = p.f2[:, :, 0, 0]
    kernel = p.kernel.table[0, 0, 0]
    pv1 = p.pv1[:, 0, 0, :]
    pv2 = p.pv2[:, 0, 0, :]
    nu, nv1, nv2 = p.cardinalities
    table = np.zeros((nu, nv1, nv2, p.kernel.output_size))
    for u in range(nu):
        for v1 in range(nv1):
            for v2 in range(nv2):
                weight = p.pu[u] * pv1[u, v1] * pv2[u, v2]
                table[u, v1, v2] = weight * kernel[f1[u, v1], f2[u, v2]]

    return table


def direct_cmi(table, a, b, c):
    """
    Σ p(a,b,c) log p(a,b,c)p(c) / (p(a,c)p(b,c)) を直接計算します。
    """
    axes = set(range(table.ndim))
    dropped = tuple(sorted(axes - set(a) - set(b) - set(c)))
    q = table.sum(axis=dropped, keepdims=True) if dropped else table
    pc = q.sum(axis=tuple(a) + tuple(b), keepdims=True)
    pac = q.sum(axis=tuple(b), keepdims=True)
    pbc = q.sum(axis=tuple(a), keepdims=True)
    shape = q.shape
    pc, pac, pbc = (np.broadcast_to(x, shape) for x in (pc, pac, pbc))
    support = q > 0.0
    return float(np.sum(q[support] * np.log2(
        q[support] * pc[support] / (pac[support] * pbc[support]))))


def bounds_cover_leung(p):
    """
    状態が退化している場合のフィードバック付き MAC の上界を、
    同時確率表を経由せずに直接計算します。

    r1_max = I(V1;Y|U,V2), r2_max = I(V2;Y|U,V1), rsum_max = I(V1,V2;Y)

    ``bounds_thm1()`` などの計算結果を照合するための独立した実装です。

    Raises
    ------
    RegionError
        状態アルファベットの大きさが 1 でない場合。
    """
    if not isinstance(p, SchemeDistribution):
        raise TypeError("p は SchemeDistribution で指定してください。")

    if not p.states.is_null:
        raise RegionError("状態が退化していない通信路には使えません。")

    check(p)
    table = _cover_leung_table(p)
    return RateBounds(
        direct_cmi(table, (1,), (3,), (0, 2)),
        direct_cmi(table, (2,), (3,), (0, 1)),
        direct_cmi(table, (1, 2), (3,), ()),
        theorem='cover-leung')


THEOREMS = {
    1: bounds_thm1,
    2: bounds_thm2,
    3: bounds_thm3,
    4: bounds_thm4,
    5: bounds_thm5,
    6: bounds_thm6,
    'no-feedback': bounds_nofeedback,
    'cover-leung': bounds_cover_leung,
}


def theorem_id(selector):
    """
    SchemeKind、整数、または '1'〜'6', 'no-feedback', 'cover-leung' を
    THEOREMS のキーに変換します。

    >>> from pysdmac.api.region import theorem_id
    >>> theorem_id('4'), theorem_id('no-feedback')
    (4, 'no-feedback')
    """
    if isinstance(selector, SchemeKind):
        return selector.theorem

    if isinstance(selector, str) and selector.isdigit():
        selector = int(selector)

    if selector not in THEOREMS:
        raise RegionError("未知の定理番号です: {!r}".format(selector))

    return selector


def bounds_for(selector, p):
    """
    selector が示す評価関数で p を評価します。
    """
    return THEOREMS[theorem_id(selector)](p)


class SearchParams(object):
    """
    分布族の探索パラメータ。

    Attributes
    ----------
    cardinalities : tuple of int
        (|U|, |V1|, |V2|)。
    samples : int
        抽出する分布の数（1 以上）。
    concentration : float
        ディリクレ分布の集中度。
    seed : int
        シード値。i 番目の分布は ``make_rng(seed, i)`` から抽出します。
    enumerate_maps : bool
        True の場合、抽出した確率分布ごとに全ての (f1, f2) を評価します。
    processes : int
        ワーカープロセス数。
    """

    def __init__(self, cardinalities=(2, 2, 2), samples=100,
                 concentration=1.0, seed=0, enumerate_maps=False,
                 processes=None):
        cardinalities = tuple(int(c) for c in cardinalities)
        if len(cardinalities) != 3 or min(cardinalities) < 1:
            raise RegionError(
                "cardinalities は 1 以上の整数3つで指定してください: {}".format(
                    cardinalities))

        if int(samples) < 1:
            raise RegionError(
                "samples は 1 以上で指定してください: {}".format(samples))

        if not concentration > 0.0:
            raise RegionError(
                "concentration は正の値で指定してください: {}".format(
                    concentration))

        self.cardinalities = cardinalities
        self.samples = int(samples)
        self.concentration = float(concentration)
        self.seed = int(seed)
        self.enumerate_maps = bool(enumerate_maps)
        self.processes = PROCESSES if processes is None else int(processes)

    def replace(self, **kwargs):
        values = dict(
            cardinalities=self.cardinalities, samples=self.samples,
            concentration=self.concentration, seed=self.seed,
            enumerate_maps=self.enumerate_maps, processes=self.processes)
        values.update(kwargs)
        return SearchParams(**values)

    def __repr__(self):
        return ("SearchParams(cardinalities={}, samples={}, concentration={}, "
                "seed={}, enumerate_maps={})").format(
                    self.cardinalities, self.samples, self.concentration,
                    self.seed, self.enumerate_maps)


class RegionCloud(object):
    """
    抽出したレート対とその凸包。

    Attributes
    ----------
    points : numpy.ndarray
        形 (N, 2) のレート対。
    sample_indices : numpy.ndarray
        各点を生成した分布の番号。原点は -1 です。
        写像を列挙した探索では、抽出の番号と (f1, f2) の組の番号から
        作った番号になります。
    schemes : dict
        分布の番号から SchemeDistribution への対応。
    theorem : int or str
        評価に使った式の識別子。
    hull : list of tuple
        原点を加えた点集合の凸包の頂点（反時計回り）。
    """

    def __init__(self, points, sample_indices=None, schemes=None,
                 theorem=None):
        points = np.array(points, dtype=float).reshape(-1, 2)
        if sample_indices is None:
            sample_indices = np.full(len(points), -1, dtype=int)

        self.points = points
        self.sample_indices = np.array(sample_indices, dtype=int)
        if len(self.sample_indices) != len(points):
            raise RegionError("点と sample_index の数が一致しません。")

        self.schemes = schemes or {}
        self.theorem = theorem
        self.hull = _hull.convex_hull(
            [(0.0, 0.0)] + [tuple(pt) for pt in points])

    def contains(self, point):
        return _hull.contains(self.hull, point)

    def area(self):
        return _hull.area(self.hull)

    def hull_vertex_mask(self):
        """
        各点が凸包の頂点かどうかを bool 配列で返します。
        """
        vertices = set(self.hull)
        return np.array(
            [(float(x), float(y)) in vertices for x, y in self.points],
            dtype=bool)

    def max_rates(self):
        """
        (max R1, max R2) を返します。
        """
        if len(self.points) == 0:
            return (0.0, 0.0)

        return tuple(float(v) for v in self.points.max(axis=0))

    def to_csv_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for (x, y), flag, index in zip(
                self.points, self.hull_vertex_mask(), self.sample_indices):
            writer.writerow([
                format(float(x), '.17g'), format(float(y), '.17g'),
                int(flag), int(index)])

        return buf.getvalue()

    def to_csv(self, path):
        """
        列 r1, r2, is_hull_vertex, sample_index の CSV として保存します。
        """
        write_text_atomic(path, self.to_csv_text())

    @classmethod
    def read_csv(cls, path, theorem=None):
        """
        ``to_csv()`` で保存したファイルを読み込みます。
        """
        points = []
        indices = []
        with open(path, 'r', encoding='utf-8', newline='') as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise RegionError("CSV の列が {} ではありません: {}".format(
                    ",".join(CSV_COLUMNS), reader.fieldnames))

            for row in reader:
                points.append((float(row['r1']), float(row['r2'])))
                indices.append(int(row['sample_index']))

        return cls(points, indices, theorem=theorem)

    def as_dict(self):
        return {
            'theorem': self.theorem,
            'hull': [list(v) for v in self.hull],
            'area': self.area(),
            'points': len(self.points),
        }

    def __repr__(self):
        return "RegionCloud(theorem={!r}, points={}, hull={})".format(
            self.theorem, len(self.points), len(self.hull))


def point_in_region(pt, cloud):
    """
    pt が cloud の凸包の内部または境界上にあれば True を返します。

    Examples
    --------
    >>> from pysdmac.api.region import RegionCloud, point_in_region
    >>> cloud = RegionCloud([(1.0, 0.0), (0.0, 1.0)])
    >>> point_in_region((0.0, 0.0), cloud), point_in_region((0.5, 0.5), cloud)
    (True, True)
    >>> point_in_region((0.6, 0.6), cloud)
    False
    """
    return cloud.contains(pt)


def _search_cardinalities(theorems, search):
    """
    フィードバックなしの領域だけを探索する場合は |U| = 1 に固定します。
    """
    if all(t == 'no-feedback' for t in theorems) and \
            search.cardinalities[0] != 1:
        logger.debug("no-feedback の探索では |U| = 1 を使います。")
        return (1,) + search.cardinalities[1:]

    return search.cardinalities


def _evaluate_sample(task):
    """
    index 番目の分布を抽出し、分布ごとに各定理の角点を返します。

    写像を列挙する場合、index 番目の抽出から作る j 番目の (f1, f2) の組には
    番号 ``index * per_sample + j`` を付けます。
    Pool.map から呼ばれるのでモジュールレベルの関数にしています。
    """
    index, states, kernel, search, cardinalities, theorems, per_sample = task
    rng = make_rng(search.seed, index)
    if search.enumerate_maps:
        base = random_scheme(
            states, kernel, cardinalities, search.concentration, rng,
            maps=(np.zeros((cardinalities[0], cardinalities[1]) +
                           (states.sizes[0], states.sizes[1]), dtype=int),
                  np.zeros((cardinalities[0], cardinalities[2]) +
                           (states.sizes[0], states.sizes[2]), dtype=int)))
        schemes = [
            SchemeDistribution(states, kernel, base.pu, base.pv1, base.pv2,
                               f1, f2)
            for f1, f2 in enumerate_maps(states, kernel, cardinalities)]
    else:
        schemes = [random_scheme(
            states, kernel, cardinalities, search.concentration, rng)]

    results = []
    for j, scheme in enumerate(schemes):
        emitted = {t: [] for t in theorems}
        for t in theorems:
            bounds = THEOREMS[t](scheme)
            for pt in bounds.corner_points():
                if pt != (0.0, 0.0):
                    emitted[t].append(pt)

        scheme.clear_cache()
        results.append((index * per_sample + j, scheme, emitted))

    logger.debug("sample {}: {} schemes".format(index, len(results)))
    return results


def compare_regions(kinds, states, kernel, search):
    """
    同じ分布の系列を複数の定理で評価し、定理ごとの RegionCloud を返します。

    Parameters
    ----------
    kinds : list
        SchemeKind または定理番号のリスト。
    states : StateModel
    kernel : ChannelKernel
    search : SearchParams

    Returns
    -------
    dict
        定理の識別子から RegionCloud への対応（kinds の順）。

    Raises
    ------
    SizeLimitError
        表の大きさ、または写像の列挙数が上限を超えた場合。
    """
    theorems = []
    for kind in kinds:
        t = theorem_id(kind)
        if t not in theorems:
            theorems.append(t)

    cardinalities = _search_cardinalities(theorems, search)
    per_sample = 1
    if search.enumerate_maps:
        per_sample = count_maps(states, kernel, cardinalities)
        if per_sample > MAX_MAP_ENUMERATION:
            raise SizeLimitError(
                "(f1, f2) の組の数 {} が上限 {} を超えています。".format(
                    per_sample, MAX_MAP_ENUMERATION))

    tasks = [(i, states, kernel, search, cardinalities, theorems, per_sample)
             for i in range(search.samples)]
    if search.processes > 1:
        with Pool(search.processes) as pool:
            results = pool.map(_evaluate_sample, tasks)
    else:
        results = [_evaluate_sample(task) for task in tasks]

    clouds = {}
    for t in theorems:
        points = [(0.0, 0.0)]
        indices = [-1]
        schemes = {}
        for sample in results:
            for key, scheme, emitted in sample:
                schemes[key] = scheme
                points += emitted[t]
                indices += [key] * len(emitted[t])

        clouds[t] = RegionCloud(points, indices, schemes, theorem=t)
        logger.info("theorem {}: {} points, {} hull vertices, area {:.6g}".format(
            t, len(points), len(clouds[t].hull), clouds[t].area()))

    return clouds


def region_search(kind, states, kernel, search):
    """
    分布族を無作為に探索し、達成可能レート対の凸包を求めます。

    i 番目の分布は ``make_rng(search.seed, i)`` から抽出するので、
    結果は評価の順序やプロセス数に依存しません。

    Parameters
    ----------
    kind : SchemeKind or int or str
        方式、または定理番号。
    states : StateModel
    kernel : ChannelKernel
    search : SearchParams

    Returns
    -------
    RegionCloud

    Examples
    --------
    >>> from pysdmac.api.channel import StateModel, ChannelKernel
    >>> from pysdmac.api.region import SearchParams, region_search
    >>> k = ChannelKernel.from_function(
    ...     (1, 1, 1), (2, 2), 1, lambda s0, s1, s2, x1, x2: 0)
    >>> region_search(3, StateModel.null(), k, SearchParams(samples=1)).hull
    [(0.0, 0.0)]
    """
    t = theorem_id(kind)
    return compare_regions([t], states, kernel, search)[t]

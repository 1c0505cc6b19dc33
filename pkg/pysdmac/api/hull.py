"""
2次元の凸包と点の包含判定。

退化した点集合（1点や共線の点列）も扱えるように、
単調連鎖法（Andrew の monotone chain）で凸包を求めます。
"""
from logging import getLogger

import numpy as np

logger = getLogger(__name__)

TOLERANCE = 1e-9


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """
    点集合の凸包の頂点を反時計回りで返します。

    共線上の中間点は頂点に含めません。

    Parameters
    ----------
    points : iterable of (float, float)
        点の集合。重複があってもかまいません。

    Returns
    -------
    list of tuple
        凸包の頂点。点が1つなら1頂点、全て共線なら両端の2頂点です。

    Examples
    --------
    >>> from pysdmac.api.hull import convex_hull
    >>> convex_hull([(0, 0), (1, 0), (0, 1), (0.2, 0.2), (1, 0)])
    [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    >>> convex_hull([(0, 0), (1, 1), (2, 2)])
    [(0.0, 0.0), (2.0, 2.0)]
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()

        lower.append(p)

    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()

        upper.append(p)

    return lower[:-1] + upper[:-1]


def contains(hull, point, tolerance=TOLERANCE):
    """
    point が凸包 hull の内部または境界上にあるかを判定します。

    Parameters
    ----------
    hull : list of (float, float)
        ``convex_hull()`` が返す頂点列（反時計回り）。
    point : (float, float)
        判定する点。
    tolerance : float, optional
        境界判定の許容誤差。

    Returns
    -------
    bool
    """
    if len(hull) == 0:
        raise ValueError("凸包が空です。")

    px, py = float(point[0]), float(point[1])
    if len(hull) == 1:
        return abs(px - hull[0][0]) <= tolerance and \
            abs(py - hull[0][1]) <= tolerance

    if len(hull) == 2:
        (ax, ay), (bx, by) = hull
        dx, dy = bx - ax, by - ay
        length = np.hypot(dx, dy)
        # 線分からの距離で判定する
        if abs(dx * (py - ay) - dy * (px - ax)) > tolerance * length:
            return False

        t = ((px - ax) * dx + (py - ay) * dy) / (length * length)
        return bool(-tolerance <= t * length <= length + tolerance)

    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        edge = np.hypot(b[0] - a[0], b[1] - a[1])
        if _cross(a, b, (px, py)) < -tolerance * edge:
            return False

    return True


def area(hull):
    """
    凸包の面積（靴ひも公式）を返します。頂点が 2 以下なら 0 です。

    >>> from pysdmac.api.hull import area
    >>> area([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    1.0
    """
    if len(hull) < 3:
        return 0.0

    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    return float(0.5 * abs(
        np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))

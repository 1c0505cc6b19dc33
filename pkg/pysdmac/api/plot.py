"""
RegionCloud を静的な SVG 画像として出力します。

横軸が R1、縦軸が R2（ビット/通信路使用）で、凸包を折れ線、
抽出した点を小さな円で描きます。
"""
from logging import getLogger

from lxml import etree

from pysdmac.api.document import write_text_atomic

logger = getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"

WIDTH = 480
HEIGHT = 480
MARGIN = 48
TICKS = 4


def _fmt(value):
    return format(float(value), '.3f')


class _Frame(object):
    """
    レート平面から SVG の座標への変換。
    """

    def __init__(self, r1_max, r2_max):
        # 全ての点が原点の場合も幅を持たせる
        self.r1_max = r1_max if r1_max > 0.0 else 1.0
        self.r2_max = r2_max if r2_max > 0.0 else 1.0
        self.width = WIDTH - 2 * MARGIN
        self.height = HEIGHT - 2 * MARGIN

    def x(self, r1):
        return MARGIN + self.width * r1 / self.r1_max

    def y(self, r2):
        return HEIGHT - MARGIN - self.height * r2 / self.r2_max


def _element(parent, tag, text=None, **attrs):
    e = etree.SubElement(parent, "{%s}%s" % (SVG_NS, tag))
    for key, value in attrs.items():
        e.set(key.replace('_', '-'), str(value))

    if text is not None:
        e.text = text

    return e


def _axes(root, frame):
    g = _element(root, 'g', id='axes', stroke='black', fill='none')
    x0, y0 = frame.x(0.0), frame.y(0.0)
    _element(g, 'line', x1=_fmt(x0), y1=_fmt(y0),
             x2=_fmt(frame.x(frame.r1_max)), y2=_fmt(y0))
    _element(g, 'line', x1=_fmt(x0), y1=_fmt(y0),
             x2=_fmt(x0), y2=_fmt(frame.y(frame.r2_max)))

    labels = _element(root, 'g', id='labels', font_size=11,
                      font_family='sans-serif')
    for i in range(TICKS + 1):
        r1 = frame.r1_max * i / TICKS
        r2 = frame.r2_max * i / TICKS
        _element(labels, 'text', _fmt(r1), x=_fmt(frame.x(r1)),
                 y=_fmt(y0 + 16), text_anchor='middle')
        _element(labels, 'text', _fmt(r2), x=_fmt(x0 - 6),
                 y=_fmt(frame.y(r2) + 4), text_anchor='end')

    _element(labels, 'text', 'R1 [bit]', x=_fmt(frame.x(frame.r1_max)),
             y=_fmt(y0 + 32), text_anchor='end')
    _element(labels, 'text', 'R2 [bit]', x=_fmt(x0),
             y=_fmt(frame.y(frame.r2_max) - 10), text_anchor='middle')


def region_svg(cloud, title=None):
    """
    cloud を描いた SVG 文書を文字列で返します。

    Parameters
    ----------
    cloud : RegionCloud
    title : str, optional
        画像の上部に表示する文字列。省略した場合は定理の識別子です。

    Returns
    -------
    str

    Examples
    --------
    >>> from pysdmac.api.region import RegionCloud
    >>> from pysdmac.api.plot import region_svg
    >>> svg = region_svg(RegionCloud([(1.0, 0.0), (0.0, 1.0)], theorem=3))
    >>> svg.startswith('<svg')
    True
    >>> 'polygon' in svg
    True
    """
    r1_max, r2_max = cloud.max_rates()
    frame = _Frame(r1_max, r2_max)
    root = etree.Element(
        "{%s}svg" % SVG_NS, nsmap={None: SVG_NS},
        width=str(WIDTH), height=str(HEIGHT),
        viewBox="0 0 {} {}".format(WIDTH, HEIGHT))

    if title is None and cloud.theorem is not None:
        title = "theorem {}".format(cloud.theorem)

    if title:
        _element(root, 'title', title)
        _element(root, 'text', title, x=_fmt(WIDTH / 2), y=_fmt(MARGIN / 2),
                 text_anchor='middle', font_size=13,
                 font_family='sans-serif')

    _axes(root, frame)

    points = " ".join(
        "{},{}".format(_fmt(frame.x(r1)), _fmt(frame.y(r2)))
        for r1, r2 in cloud.hull)
    _element(root, 'polygon', id='hull', points=points,
             fill='#cfe2f3', fill_opacity='0.6', stroke='#1f4e79',
             stroke_width='1.5')

    g = _element(root, 'g', id='points', fill='#444444')
    for r1, r2 in cloud.points:
        _element(g, 'circle', cx=_fmt(frame.x(r1)), cy=_fmt(frame.y(r2)),
                 r='1.5')

    return etree.tostring(root, pretty_print=True, encoding='unicode')


def write_region_svg(cloud, path, title=None):
    """
    ``region_svg()`` の結果を path に保存します。

    一時ファイルに書いてから置き換えるので、途中で失敗しても
    不完全なファイルは残りません。

    >>> import os, tempfile
    >>> from pysdmac.api.plot import write_region_svg
    >>> from pysdmac.api.region import RegionCloud
    >>> with tempfile.TemporaryDirectory() as d:
    ...     path = os.path.join(d, 'region.svg')
    ...     write_region_svg(RegionCloud([(1.0, 0.0), (0.0, 1.0)]), path)
    ...     with open(path, encoding='utf-8') as f:
    ...         '<polygon' in f.read()
    True
    """
    write_text_atomic(path, region_svg(cloud, title))
    logger.debug("SVG を {} に保存しました。".format(path))

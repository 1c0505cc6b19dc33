"""
通信路文書（JSON）の読み書き。

文書の形式::

    {
      "name": "identity-mac",
      "description": "...",
      "alphabets": {"s0": 1, "s1": 1, "s2": 1, "x1": 2, "x2": 2, "y": 4},
      "q0": [1.0], "q1": [1.0], "q2": [1.0],
      "kernel": [s0][s1][s2][x1][x2] -> y の確率分布,
      "scheme": {
        "u": [...],
        "v1": [u][s0][s1] -> v1 の確率分布,
        "v2": [u][s0][s2] -> v2 の確率分布,
        "f1": [u][v1][s0][s1] -> x1,
        "f2": [u][v2][s0][s2] -> x2
      }
    }

``scheme`` は省略できます。状態の大きさを省略すると 1 とみなします。
"""
import json
from logging import getLogger
import os
import tempfile

import chardet
import numpy as np

from pysdmac.api.channel import (
    ChannelError, ChannelKernel, SchemeDistribution, StateModel,
    direct_scheme)

logger = getLogger(__name__)

STATE_NAMES = ('s0', 's1', 's2')
REQUIRED_ALPHABETS = ('x1', 'x2', 'y')


class DocumentError(RuntimeError):
    """
    通信路文書の解析に失敗した場合に発生します。
    """
    pass


def decode_bytes(data):
    """
    バイト列の文字コードを推定して文字列に変換します。
    """
    if data[:3] == b'\xef\xbb\xbf':
        return data[3:].decode('utf-8')

    try:
        return data.decode('utf-8')
    except UnicodeDecodeError:
        pass

    encoding = chardet.detect(data)
    if encoding['encoding'] is None:
        raise DocumentError("文字コードを判定できません。")

    return data.decode(encoding['encoding'])


def write_text_atomic(path, text):
    """
    テキストを一時ファイルに書き出してから path に置き換えます。

    書き込みの途中で失敗した場合、path には何も残りません。
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmppath = tempfile.mkstemp(dir=directory, prefix='.pysdmac-')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)

        os.replace(tmppath, path)
    except BaseException:
        if os.path.exists(tmppath):
            os.remove(tmppath)

        raise


def _shape_error(path, expected, value):
    return DocumentError("{} : 長さ {} の配列が必要です（値: {}）".format(
        path, expected, json.dumps(value)[:40]))


def _check_nested(value, shape, path):
    """
    入れ子配列 value の形が shape と一致することを確認します。
    不一致の場合は、最初にずれた要素の JSON パスを示して
    DocumentError を送出します。
    """
    if not shape:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentError("{} : 数値が必要です（値: {}）".format(
                path, json.dumps(value)[:40]))

        return

    if not isinstance(value, list) or len(value) != shape[0]:
        raise _shape_error(path, shape[0], value)

    for i, item in enumerate(value):
        _check_nested(item, shape[1:], "{}[{}]".format(path, i))


class ChannelDocument(object):
    """
    通信路文書を表すクラス。

    Attributes
    ----------
    name : str
        文書の名前。
    description : str
        説明。
    states : StateModel
        状態モデル。
    kernel : ChannelKernel
        通信路。
    scheme : SchemeDistribution or None
        文書に含まれる符号化方式の分布。

    Examples
    --------
    >>> from pysdmac.api.document import ChannelDocument
    >>> doc = ChannelDocument.loads('''{
    ...   "alphabets": {"x1": 2, "x2": 2, "y": 1},
    ...   "kernel": [[[[[[1.0], [1.0]], [[1.0], [1.0]]]]]]
    ... }''')
    >>> doc.kernel.table.shape
    (1, 1, 1, 2, 2, 1)
    >>> doc.scheme is None
    True
    """

    def __init__(self, states, kernel, scheme=None, name=None,
                 description=None):
        self.states = states
        self.kernel = kernel
        self.scheme = scheme
        self.name = name or ''
        self.description = description or ''

    @classmethod
    def load(cls, path):
        """
        ファイルから通信路文書を読み込みます。

        Parameters
        ----------
        path : str
            JSON ファイルのパス。

        Returns
        -------
        ChannelDocument
        """
        if not isinstance(path, (str, os.PathLike)):
            raise TypeError("path は str で指定してください。")

        if not os.path.exists(path):
            raise FileNotFoundError(f"通信路文書({path}) が見つかりません。")

        with open(path, 'rb') as f:
            text = decode_bytes(f.read())

        try:
            return cls.loads(text)
        except DocumentError as e:
            raise DocumentError("{}: {}".format(path, e))

    @classmethod
    def loads(cls, text):
        """
        JSON 文字列から通信路文書を作成します。

        Raises
        ------
        DocumentError
            JSON の構文エラー（行・桁を示します）、
            または形式の誤り（JSON パスを示します）。
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError("JSON の構文エラー {} 行 {} 桁: {}".format(
                e.lineno, e.colno, e.msg))

        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise DocumentError("$ : オブジェクトが必要です。")

        alphabets = data.get('alphabets')
        if not isinstance(alphabets, dict):
            raise DocumentError("$.alphabets : オブジェクトが必要です。")

        sizes = {}
        for name in STATE_NAMES + REQUIRED_ALPHABETS:
            if name not in alphabets:
                if name in STATE_NAMES:
                    sizes[name] = 1
                    continue

                raise DocumentError("$.alphabets.{} がありません。".format(name))

            size = alphabets[name]
            if isinstance(size, bool) or not isinstance(size, int) or size < 1:
                raise DocumentError(
                    "$.alphabets.{} : 1 以上の整数が必要です（値: {}）".format(
                        name, json.dumps(size)))

            sizes[name] = size

        pmfs = []
        for i, name in enumerate(STATE_NAMES):
            key = 'q{}'.format(i)
            q = data.get(key, [1.0] if sizes[name] == 1 else None)
            if q is None:
                raise DocumentError("$.{} がありません。".format(key))

            _check_nested(q, (sizes[name],), "$.{}".format(key))
            pmfs.append(q)

        if 'kernel' not in data:
            raise DocumentError("$.kernel がありません。")

        kernel_shape = tuple(sizes[n] for n in STATE_NAMES) + \
            tuple(sizes[n] for n in REQUIRED_ALPHABETS)
        _check_nested(data['kernel'], kernel_shape, "$.kernel")

        try:
            states = StateModel(*pmfs)
            kernel = ChannelKernel(data['kernel'])
        except ChannelError as e:
            raise DocumentError(str(e))

        scheme = None
        if data.get('scheme') is not None:
            scheme = cls._parse_scheme(data['scheme'], sizes, states, kernel)

        return cls(states, kernel, scheme,
                   name=data.get('name'), description=data.get('description'))

    @staticmethod
    def _parse_scheme(section, sizes, states, kernel):
        if not isinstance(section, dict):
            raise DocumentError("$.scheme : オブジェクトが必要です。")

        for key in ('u', 'v1', 'v2', 'f1', 'f2'):
            if key not in section:
                raise DocumentError("$.scheme.{} がありません。".format(key))

        if not isinstance(section['u'], list) or len(section['u']) == 0:
            raise DocumentError("$.scheme.u : 空でない配列が必要です。")

        nu = len(section['u'])
        _check_nested(section['u'], (nu,), "$.scheme.u")
        nv = []
        for k in (1, 2):
            key = 'v{}'.format(k)
            try:
                size = len(section[key][0][0][0])
            except (TypeError, IndexError, KeyError):
                raise DocumentError("$.scheme.{} : 4重の配列が必要です。".format(key))

            shape = (nu, sizes['s0'], sizes['s{}'.format(k)], size)
            _check_nested(section[key], shape, "$.scheme.{}".format(key))
            nv.append(size)

        for k in (1, 2):
            key = 'f{}'.format(k)
            shape = (nu, nv[k - 1], sizes['s0'], sizes['s{}'.format(k)])
            _check_nested(section[key], shape, "$.scheme.{}".format(key))

        try:
            return SchemeDistribution.from_dict(states, kernel, section)
        except ChannelError as e:
            raise DocumentError("$.scheme : {}".format(e))

    def as_dict(self):
        ns0, ns1, ns2 = self.states.sizes
        nx1, nx2 = self.kernel.input_sizes
        data = {
            'name': self.name,
            'description': self.description,
            'alphabets': {
                's0': ns0, 's1': ns1, 's2': ns2,
                'x1': nx1, 'x2': nx2, 'y': self.kernel.output_size,
            },
        }
        data.update(self.states.as_dict())
        data['kernel'] = self.kernel.table.tolist()
        if self.scheme is not None:
            data['scheme'] = self.scheme.as_dict()

        return data

    def dumps(self, indent=2):
        return json.dumps(self.as_dict(), indent=indent, ensure_ascii=False)

    def dump(self, path):
        """
        通信路文書をファイルに保存します。
        """
        write_text_atomic(path, self.dumps() + "\n")

    def with_scheme(self, scheme):
        """
        scheme を差し替えた文書を返します。
        """
        if not isinstance(scheme, SchemeDistribution) and scheme is not None:
            raise TypeError("scheme は SchemeDistribution で指定してください。")

        return ChannelDocument(self.states, self.kernel, scheme,
                               name=self.name, description=self.description)

    def null_state_variant(self):
        """
        状態について平均した通信路と退化した状態モデルの文書を返します。
        """
        return ChannelDocument(
            StateModel.null(), self.kernel.averaged(self.states),
            name=self.name + '-averaged', description=self.description)

    def scheme_or_default(self):
        """
        文書の scheme、なければ素朴な方式を返します。
        """
        if self.scheme is not None:
            return self.scheme

        return direct_scheme(self.states, self.kernel)

    def __repr__(self):
        return "ChannelDocument(name={!r}, kernel={})".format(
            self.name, "x".join(str(s) for s in np.shape(self.kernel.table)))

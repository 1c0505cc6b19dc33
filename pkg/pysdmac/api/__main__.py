import json
import logging
import os
import sys

from docopt import docopt, DocoptExit
import pysdmac.api
from pysdmac.api.channel import ChannelError, SchemeKind
from pysdmac.api.codebook import CodeParams
from pysdmac.api.document import DocumentError, write_text_atomic
from pysdmac.api.plot import region_svg
from pysdmac.api.prob import ProbError, SizeLimitError
from pysdmac.api.reduction import check_identities
from pysdmac.api.region import (
    RegionError, SearchParams, compare_regions, region_search, theorem_id)
from pysdmac.api.simulator import SimulationError, run_simulation

logger = logging.getLogger(__name__)

HELP = """
'pysdmac' は、状態に依存する多元接続通信路 (MAC) について、
フィードバックと状態情報がある場合の達成可能レート領域を評価し、
ブロックマルコフ符号化のシミュレーションを行なうツールです。

Usage:
  {p} -h
  {p} --version
  {p} region --config=<file> [--theorem=<t>] [--samples=<n>] [--seed=<s>] [--out=<file>] [--svg=<svg>] [--u-size=<k>] [--v-size=<k>] [--concentration=<a>] [--enumerate-maps] [--processes=<k>] [--verbose]
  {p} simulate --config=<file> --kind=<kind> [--r0=<r>] [--r1=<r>] [--r2=<r>] [--rp1=<r>] [--rp2=<r>] [--n=<n>] [--blocks=<b>] [--trials=<t>] [--epsilon=<e>] [--lag=<r>] [--distinct] [--seed=<s>] [--out=<file>] [--processes=<k>] [--verbose]
  {p} reduce --config=<file> [--samples=<n>] [--seed=<s>] [--u-size=<k>] [--v-size=<k>] [--out=<file>] [--verbose]
  {p} info --config=<file> [--verbose]
  {p} compare --config=<file> [--feedback=<f>] [--samples=<n>] [--seed=<s>] [--u-size=<k>] [--v-size=<k>] [--concentration=<a>] [--out=<file>] [--processes=<k>] [--verbose]

Options:
  -h --help             このヘルプを表示します。
  --version             バージョンを表示します。
  --config=<file>       通信路文書 (JSON) を指定します。
  --theorem=<t>         領域の式 1〜6, no-feedback, cover-leung [default: 1]
  --samples=<n>         抽出する分布の数 [default: 100]
  --seed=<s>            シード値（省略時は環境変数 SDMAC_SEED の値）
  --out=<file>          結果を保存するファイル
  --svg=<svg>           領域の SVG 画像を保存するファイル
  --u-size=<k>          |U| [default: 2]
  --v-size=<k>          |V1| = |V2| [default: 2]
  --concentration=<a>   ディリクレ分布の集中度 [default: 1.0]
  --enumerate-maps      分布ごとに全ての (f1, f2) を評価します。
  --processes=<k>       ワーカープロセス数（省略時は環境変数 SDMAC_PROCESSES の値）
  --kind=<kind>         方式 full-noncausal|full-causal|full-strict|
                        partial-noncausal|partial-causal|partial-strict
  --r0=<r>              雲の中心のレート [default: 0]
  --r1=<r>              送信者 1 のレート [default: 0]
  --r2=<r>              送信者 2 のレート [default: 0]
  --rp1=<r>             送信者 1 の GP ビン内レート [default: 0]
  --rp2=<r>             送信者 2 の GP ビン内レート [default: 0]
  --n=<n>               ブロック長 [default: 8]
  --blocks=<b>          ブロック数 [default: 4]
  --trials=<t>          試行回数 [default: 100]
  --epsilon=<e>         典型性の許容幅 [default: 0.5]
  --lag=<r>             strictly-causal の遅延 [default: 1]
  --distinct            同じ雲の v の符号帳から重複した系列を取り除きます。
  --feedback=<f>        比較する方式 full|partial|all [default: full]
  --verbose             デバッグログを表示します。

Exit status:
  0  成功
  1  引数または通信路文書の誤り
  2  大きさの上限を超えた
  3  恒等式の確認に失敗した (reduce)

Examples:
- 定理 3 の領域を探索し、点を CSV、図を SVG に保存します
  {p} region --config=base_data/identity-mac.json --theorem=3 --samples=500 --out=points.csv --svg=region.svg

- 両側フィードバック・非因果的な方式でシミュレーションを行ないます
  {p} simulate --config=base_data/identity-mac.json --kind=full-noncausal --r1=0.5 --r2=0.5 --n=8 --blocks=4 --trials=100 --epsilon=3 --distinct

- 評価関数どうしの恒等式を確認します
  {p} reduce --config=base_data/state-mac.json --samples=200

- 通信路の情報を表示します
  {p} info --config=base_data/bsc-mac.json

- 部分フィードバックの3つの領域を同じ分布で比較します
  {p} compare --config=base_data/state-mac.json --feedback=partial

""".format(p='pysdmac')

FEEDBACK_THEOREMS = {
    'full': [1, 2, 3],
    'partial': [4, 5, 6],
    'all': [1, 2, 3, 4, 5, 6, 'no-feedback'],
}


def _option(args, key, type_):
    value = args[key]
    if value is None:
        return None

    try:
        return type_(value)
    except ValueError:
        raise DocoptExit("{} の値が不正です: {}".format(key, value))


def _seed(args):
    seed = _option(args, '--seed', int)
    return pysdmac.api.get_seed() if seed is None else seed


def _search_params(args):
    v_size = _option(args, '--v-size', int)
    concentration = _option(args, '--concentration', float)
    return SearchParams(
        cardinalities=(_option(args, '--u-size', int), v_size, v_size),
        samples=_option(args, '--samples', int),
        concentration=1.0 if concentration is None else concentration,
        seed=_seed(args),
        enumerate_maps=bool(args['--enumerate-maps']),
        processes=_option(args, '--processes', int))


def _dumps(data):
    return json.dumps(data, indent=2, ensure_ascii=False)


def _emit(args, text):
    """
    結果を標準出力に書き、--out が指定されていればファイルにも保存します。
    """
    print(text)
    if args['--out']:
        write_text_atomic(args['--out'], text + "\n")


def _write_files(outputs):
    """
    (path, text) の組を順に書き出します。途中で失敗した場合は、
    それまでに書き出したファイルを削除します。
    """
    written = []
    try:
        for path, text in outputs:
            write_text_atomic(path, text)
            written.append(path)
    except BaseException:
        for path in written:
            os.remove(path)

        raise


def cmd_region(args, doc):
    """
    領域を探索し、凸包の頂点を JSON で出力します。
    """
    cloud = region_search(
        theorem_id(args['--theorem']), doc.states, doc.kernel,
        _search_params(args))
    outputs = []
    if args['--out']:
        outputs.append((args['--out'], cloud.to_csv_text()))

    if args['--svg']:
        outputs.append((args['--svg'], region_svg(cloud)))

    _write_files(outputs)
    print(_dumps(cloud.as_dict()))
    return 0


def cmd_simulate(args, doc):
    kind = SchemeKind.parse(args['--kind'], lag=_option(args, '--lag', int))
    params = CodeParams(
        n=_option(args, '--n', int),
        blocks=_option(args, '--blocks', int),
        r0=_option(args, '--r0', float),
        r1=_option(args, '--r1', float),
        r2=_option(args, '--r2', float),
        rp1=_option(args, '--rp1', float),
        rp2=_option(args, '--rp2', float),
        epsilon=_option(args, '--epsilon', float),
        trials=_option(args, '--trials', int),
        seed=_seed(args),
        distinct=bool(args['--distinct']))
    report = run_simulation(doc.scheme_or_default(), params, kind,
                            processes=_option(args, '--processes', int))
    _emit(args, report.to_json())
    return 0


def cmd_reduce(args, doc):
    report = check_identities(doc.states, doc.kernel, _search_params(args))
    _emit(args, _dumps(report.as_dict()))
    return 0 if report.passed else 3


def cmd_info(args, doc):
    """
    アルファベットの大きさ、状態のエントロピー、通信路の統計量を出力します。
    """
    h = doc.kernel.output_entropies()
    table = doc.kernel.table
    ns0, ns1, ns2 = doc.states.sizes
    nx1, nx2 = doc.kernel.input_sizes
    info = {
        'name': doc.name,
        'alphabets': {
            's0': ns0, 's1': ns1, 's2': ns2,
            'x1': nx1, 'x2': nx2, 'y': doc.kernel.output_size,
        },
        'state_entropies': dict(zip(
            ('s0', 's1', 's2'), doc.states.entropies())),
        'kernel': {
            'min_output_entropy': float(h.min()),
            'max_output_entropy': float(h.max()),
            'deterministic': doc.kernel.is_deterministic,
            'min_nonzero': float(table[table > 0.0].min()),
        },
        'has_scheme': doc.scheme is not None,
    }
    print(_dumps(info))
    return 0


def cmd_compare(args, doc):
    feedback = args['--feedback']
    if feedback not in FEEDBACK_THEOREMS:
        raise DocoptExit("--feedback は {} のいずれかで指定してください。".format(
            "|".join(FEEDBACK_THEOREMS)))

    clouds = compare_regions(
        FEEDBACK_THEOREMS[feedback], doc.states, doc.kernel,
        _search_params(args))
    _emit(args, _dumps(
        {str(t): cloud.as_dict() for t, cloud in clouds.items()}))
    return 0


COMMANDS = (
    ('region', cmd_region),
    ('simulate', cmd_simulate),
    ('reduce', cmd_reduce),
    ('info', cmd_info),
    ('compare', cmd_compare),
)


def main(argv=None):
    args = docopt(HELP, argv=argv)

    if args['--version']:
        print(pysdmac.api.__version__)
        exit(0)

    if args['--verbose']:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(asctime)s:%(levelname)s:%(filename)s:%(lineno)d:%(message)s")

    try:
        doc = pysdmac.api.load_channel(args['--config'])
        for name, command in COMMANDS:
            if args[name]:
                exit(command(args, doc))

    except SizeLimitError as e:
        print("大きさの上限を超えました: {}".format(e), file=sys.stderr)
        exit(2)
    except (DocumentError, ChannelError, RegionError, SimulationError,
            ProbError, FileNotFoundError) as e:
        print("エラー: {}".format(e), file=sys.stderr)
        exit(1)

    raise RuntimeError('Unexpected args: {}'.format(args))


if __name__ == '__main__':
    main()

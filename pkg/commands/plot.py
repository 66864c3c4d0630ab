"""
Sub-comando `plot`: figuras HTML de experimentos y de una corrida
"""
import logging
from pathlib import Path

from charts import ConfusionHeatmapChart, ScoreCurveChart, ViolationBarChart
from data_loader import read_result, results_frame
from utils.exceptions import PreconditionError

logger = logging.getLogger(__name__)


def register_plot(subparsers):
    parser = subparsers.add_parser('plot', help='Genera figuras HTML con plotly')
    parser.add_argument('--experiments', help='CSV escrito por `experiment`')
    parser.add_argument('--result', help='JSON escrito por `aggregate`')
    parser.add_argument('--out-dir', required=True)
    parser.set_defaults(handler=run_plot)
    return parser


def confusion_matrices(payload):
    params = payload.get('params') or {}
    return params.get('expected_gamma', params.get('gamma_hat'))


def run_plot(args):
    if args.experiments is None and args.result is None:
        raise PreconditionError("plot requiere --experiments o --result")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    if args.experiments is not None:
        df = results_frame(args.experiments)
        for metric in ('macro_f1', 'micro_f1'):
            path = out_dir / f'{metric}.html'
            ScoreCurveChart(df).write_html(path, metric=metric)
            written.append(path)
        path = out_dir / 'violations.html'
        ViolationBarChart(df).write_html(path)
        written.append(path)

    if args.result is not None:
        payload = read_result(args.result)
        gamma = confusion_matrices(payload)
        if gamma is None:
            logger.warning("%s no tiene matrices de confusión (método %s)", args.result, payload.get('method'))
        else:
            path = out_dir / 'confusion.html'
            chart = ConfusionHeatmapChart(gamma, annotators=payload['index_maps'].get('annotators'))
            chart.write_html(path)
            written.append(path)

    logger.info("%d figuras escritas en %s", len(written), out_dir)
    return 0

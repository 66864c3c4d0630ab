"""
Sub-comando `experiment`: barrido de protocolos de restricciones con repeticiones
"""
import logging

from aggregators import FitOptions
from config import get_worker_count, load_priors
from data.synth import generate
from data_loader import read_dataset, read_spec
from experiments.protocols import ExperimentRunner, summarize
from utils.constants import DEFAULT_ETA_GRID, PROTOCOLS
from utils.exceptions import PreconditionError
from .aggregate import parse_eta_grid

logger = logging.getLogger(__name__)


def parse_int_list(value, what):
    try:
        values = [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise PreconditionError(f"{what} inválido: {value}") from None
    if not values or min(values) < 0:
        raise PreconditionError(f"{what} debe ser una lista de enteros no negativos")
    return values


def register_experiment(subparsers):
    parser = subparsers.add_parser('experiment', help='Barrido de N_C por protocolo de restricciones')
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--responses', help='CSV item,annotator,label (requiere --truth)')
    source.add_argument('--spec', help='spec.json escrito por `synth`')
    parser.add_argument('--truth', help='CSV item,label')
    parser.add_argument('--protocol', action='append', choices=PROTOCOLS,
                        help='Repetible; por defecto todos los protocolos')
    parser.add_argument('--sweep', default='0,50,100,150', help='Valores de N_C separados por comas')
    parser.add_argument('--repeats', type=int, default=1)
    parser.add_argument('--priors', default='diagonal')
    parser.add_argument('--n-classes', type=int)
    parser.add_argument('--max-iters', type=int, default=100)
    parser.add_argument('--tol', type=float, default=1e-6)
    parser.add_argument('--eta-grid', default='default')
    parser.add_argument('--selection-source', choices=('vb', 'mv'), default='vb')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--output', required=True, help='CSV largo con una fila por (protocolo, N_C, repetición, método)')
    parser.add_argument('--summary', help='CSV opcional con las medias por (protocolo, N_C, método)')
    parser.set_defaults(handler=run_experiment)
    return parser


def load_experiment_data(args):
    if args.spec is not None:
        return generate(read_spec(args.spec))
    if args.truth is None:
        raise PreconditionError("experiment requiere --truth junto a --responses")
    return read_dataset(args.responses, args.truth, args.n_classes)


def run_experiment(args):
    if args.repeats < 1:
        raise PreconditionError("--repeats debe ser al menos 1")
    sweep = parse_int_list(args.sweep, 'barrido de N_C')
    protocols = args.protocol or list(PROTOCOLS)
    responses, truth = load_experiment_data(args)
    if truth is None or truth.n_known < max(sweep):
        raise PreconditionError(f"verdad insuficiente para N_C={max(sweep)}")

    priors = load_priors(args.priors, responses.n_annotators, responses.n_classes)
    options = FitOptions(max_iters=args.max_iters, tol=args.tol, seed=args.seed)
    runner = ExperimentRunner(
        responses, truth, priors, options,
        eta_grid=parse_eta_grid(args.eta_grid) or DEFAULT_ETA_GRID,
        selection_source=args.selection_source,
        workers=get_worker_count(),
    )
    df = runner.run(protocols, sweep, args.repeats)
    df.to_csv(args.output, index=False, lineterminator='\n')
    logger.info("%d filas de experimento escritas en %s", len(df), args.output)
    if args.summary:
        summarize(df).to_csv(args.summary, index=False, lineterminator='\n')
    return 0

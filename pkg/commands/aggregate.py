"""
Sub-comando `aggregate`: una corrida de la cadena de métodos y su JSON de resultado
"""
import logging

from pydantic import ValidationError

from aggregators import FitOptions
from config import RunConfig, load_priors
from constraints.constraint_set import ConstraintSet, derive_from_labels
from data_loader import read_constraints, read_dataset, read_spec, write_json, write_query_plan
from experiments.pipeline import build_result, run_method, selected_constraints
from selection.uncertainty import answer_queries
from utils.constants import DEFAULT_ETA_GRID, METHODS
from utils.exceptions import PreconditionError

logger = logging.getLogger(__name__)


def parse_eta_grid(value):
    """'default' o lista separada por comas"""
    if value is None:
        return None
    if value.strip().lower() == 'default':
        return list(DEFAULT_ETA_GRID)
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise PreconditionError(f"rejilla de eta inválida: {value}") from None


def register_aggregate(subparsers):
    parser = subparsers.add_parser('aggregate', help='Fusiona las etiquetas de un archivo de respuestas')
    parser.add_argument('--method', choices=METHODS, required=True)
    parser.add_argument('--responses', required=True, help='CSV item,annotator,label')
    parser.add_argument('--truth', help='CSV item,label (opcional)')
    parser.add_argument('--constraints', help='CSV kind,a,b (opcional)')
    parser.add_argument('--spec', help='spec.json de `synth`: fija el orden de ítems y anotadores')
    parser.add_argument('--output', required=True, help='Ruta del JSON de resultado')
    parser.add_argument('--priors', default='diagonal',
                        help="'diagonal', 'uniform' o un JSON con alpha0 y beta0")
    parser.add_argument('--n-classes', type=int)
    parser.add_argument('--max-iters', type=int, default=100)
    parser.add_argument('--tol', type=float, default=1e-6)
    parser.add_argument('--eta', type=float)
    parser.add_argument('--eta-grid', help="'default' o valores separados por comas")
    parser.add_argument('--n-constraints', type=int,
                        help='Presupuesto N_C de consultas respondidas con la verdad')
    parser.add_argument('--selection-source', choices=('vb', 'mv'), default='vb')
    parser.add_argument('--violations-on', choices=('given', 'closed'), default='closed')
    parser.add_argument('--binary-cannot-link', action='store_true',
                        help='Con K = 2, CL(i,j) y CL(j,k) implican ML(i,k)')
    parser.add_argument('--queries-out', help='Exporta el plan de consultas como filas QUERY')
    parser.add_argument('--seed', type=int, default=0)
    parser.set_defaults(handler=run_aggregate)
    return parser


def build_config(args):
    try:
        return RunConfig(
            method=args.method,
            responses=args.responses,
            truth=args.truth,
            constraints=args.constraints,
            spec=args.spec,
            output=args.output,
            priors=args.priors,
            n_classes=args.n_classes,
            max_iters=args.max_iters,
            tol=args.tol,
            eta=args.eta,
            eta_grid=parse_eta_grid(args.eta_grid),
            n_constraints=args.n_constraints,
            selection_source=args.selection_source,
            violations_on=args.violations_on,
            binary_cannot_link=args.binary_cannot_link,
            queries_out=args.queries_out,
            seed=args.seed,
        )
    except ValidationError as exc:
        messages = '; '.join(error['msg'] for error in exc.errors())
        raise PreconditionError(f"configuración inválida: {messages}") from None


def load_file_constraints(config, responses, truth):
    """
    Restricciones del archivo: ML/CL tal cual, LABEL como etiquetas (vb-lc) o
    derivadas a pares (vb-ilc), QUERY respondidas con la verdad si existe
    """
    constraints, labels, queries = read_constraints(config.constraints, responses.item_ids, responses.n_classes)
    if config.method == 'vb-lc':
        return None, labels
    must_link, cannot_link = set(constraints.must_link), set(constraints.cannot_link)
    extra = []
    if labels:
        extra.append(derive_from_labels(labels))
    if queries:
        if truth is None:
            logger.warning("se ignoran %d filas QUERY: no hay verdad para responderlas", len(queries))
        else:
            extra.append(answer_queries(queries, truth))
    for other in extra:
        must_link |= other.must_link
        cannot_link |= other.cannot_link
    return ConstraintSet(frozenset(must_link), frozenset(cannot_link)), labels


def run_aggregate(args):
    config = build_config(args)
    spec = read_spec(config.spec) if config.spec is not None else None
    responses, truth = read_dataset(config.responses, config.truth, config.n_classes, spec=spec)
    priors = load_priors(config.priors, responses.n_annotators, responses.n_classes)
    options = FitOptions(max_iters=config.max_iters, tol=config.tol, seed=config.seed)

    constraints, label_constraints, plan = None, None, None
    if config.constraints is not None:
        constraints, label_constraints = load_file_constraints(config, responses, truth)
    elif config.n_constraints is not None:
        constraints, label_constraints, plan = selected_constraints(
            config.method, responses, truth, priors, options, config.n_constraints, config.selection_source)

    if plan is not None and config.queries_out is not None:
        write_query_plan(config.queries_out, plan, responses.item_ids)

    fit, extras = run_method(
        config.method, responses, priors, options,
        constraints=constraints,
        label_constraints=label_constraints,
        eta=config.eta,
        eta_grid=config.eta_grid,
        violations_on=config.violations_on,
        binary_cannot_link=config.binary_cannot_link,
    )
    result = build_result(fit, responses, config.seed, truth, extras)
    write_json(config.output, result.model_dump())
    logger.info("resultado de %s escrito en %s", config.method, config.output)
    return 0

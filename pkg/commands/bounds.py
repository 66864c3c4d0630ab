"""
Sub-comando `bounds`: cotas teóricas frente a los errores de una corrida sintética
"""
import logging

import numpy as np

from bounds.theory import BoundInputs, constraint_counts, empirical_vs_bound, evaluate_bounds
from config import load_priors
from data.model import GroundTruth
from data_loader import read_constraints, read_result, read_spec, read_truth_table, write_json
from experiments.pipeline import fit_from_result
from utils.constants import EXPONENT_FORMS
from utils.exceptions import PreconditionError
from utils.helpers import one_hot

logger = logging.getLogger(__name__)


def register_bounds(subparsers):
    parser = subparsers.add_parser('bounds', help='Evalúa las cotas de error sobre una especificación sintética')
    parser.add_argument('--spec', required=True, help='spec.json escrito por `synth`')
    parser.add_argument('--result', help='JSON de `aggregate` a contrastar con las cotas')
    parser.add_argument('--truth', help='CSV item,label (requerido con --result)')
    parser.add_argument('--constraints', help='CSV kind,a,b para los conteos por ítem')
    parser.add_argument('--priors', default='diagonal')
    parser.add_argument('--lemma-exponent', choices=EXPONENT_FORMS, default='theorem_form')
    parser.add_argument('--eta', type=float, help='Por defecto el eta del resultado, o 0')
    parser.add_argument('--eps-pi', type=float, help='Por defecto el error empírico del resultado, o 0')
    parser.add_argument('--eps-gamma', type=float)
    parser.add_argument('--eps-q', type=float)
    parser.add_argument('--g-pi', type=float, default=0.0)
    parser.add_argument('--g-gamma', type=float, default=0.0)
    parser.add_argument('--t-frac', type=float,
                        help='t como fracción de su máximo mu_m pi*_k gamma*_(k,k\'); activa nu')
    parser.add_argument('--r-frac', type=float, help='r como fracción de pi*_k; activa nu')
    parser.add_argument('--output', required=True)
    parser.set_defaults(handler=run_bounds)
    return parser


def _positions(ids, expected, what):
    index = {value: n for n, value in enumerate(ids)}
    if len(ids) != len(expected) or any(value not in index for value in expected):
        raise PreconditionError(f"los {what} del resultado no coinciden con la especificación")
    return [index[value] for value in expected]


def align_result(payload, spec):
    """Reordena ítems y anotadores del resultado al orden de la especificación"""
    items = _positions(payload['index_maps']['items'], spec.item_ids(), 'ítems')
    annotators = _positions(payload['index_maps'].get('annotators', []), spec.annotator_ids(), 'anotadores')
    aligned = dict(payload)
    aligned['posterior'] = np.asarray(payload['posterior'], dtype=float)[items].tolist()
    aligned['labels'] = np.asarray(payload['labels'], dtype=np.int64)[items].tolist()
    params = dict(payload.get('params') or {})
    for key in ('beta', 'gamma_hat', 'expected_gamma'):
        if key in params:
            params[key] = np.asarray(params[key], dtype=float)[annotators].tolist()
    aligned['params'] = params
    return aligned


def spec_truth(path, spec):
    by_item = dict(read_truth_table(path))
    labels = np.array([by_item.get(item, 0) for item in spec.item_ids()], dtype=np.int64)
    return GroundTruth(labels, item_ids=spec.item_ids())


def empirical_errors(fit, truth, spec):
    """(eps_pi, eps_gamma, eps_q) observados en un ajuste"""
    known = truth.known_mask
    probs = fit.posterior.probs[known]
    label_error = float(np.abs(probs - one_hot(truth.labels[known], spec.n_classes)).max()) if known.any() else 0.0
    pi_error = float(np.abs(fit.expected_pi() - spec.pi_star).max())
    gamma_error = float(np.abs(fit.expected_gamma() - spec.gamma_star).max())
    return pi_error, gamma_error, label_error


def run_bounds(args):
    spec = read_spec(args.spec)
    priors = load_priors(args.priors, spec.n_annotators, spec.n_classes)
    if args.result is not None and args.truth is None:
        raise PreconditionError("--result requiere --truth")

    fit, truth, beta_bar = None, None, None
    eps = (0.0, 0.0, 0.0)
    eta = args.eta
    if args.result is not None:
        payload = align_result(read_result(args.result), spec)
        fit = fit_from_result(payload)
        truth = spec_truth(args.truth, spec)
        eps = empirical_errors(fit, truth, spec)
        if fit.params is not None:
            beta_bar = fit.params.beta.sum(axis=2)
        if eta is None:
            eta = fit.eta
    eps_pi = eps[0] if args.eps_pi is None else args.eps_pi
    eps_gamma = eps[1] if args.eps_gamma is None else args.eps_gamma
    eps_q = eps[2] if args.eps_q is None else args.eps_q

    counts = {}
    if args.constraints is not None:
        if truth is None:
            if args.truth is None:
                raise PreconditionError("--constraints requiere --truth para los conteos por clase")
            truth = spec_truth(args.truth, spec)
        if not truth.known_mask.all():
            raise PreconditionError("los conteos de restricciones requieren la verdad de todos los ítems")
        constraints, _, _ = read_constraints(args.constraints, spec.item_ids(), spec.n_classes)
        n_ml, n_cl, n_cl_k = constraint_counts(constraints, truth.labels, spec.n_classes)
        counts = {'n_ml': n_ml, 'n_cl': n_cl, 'n_cl_k': n_cl_k}

    inputs = BoundInputs(
        spec=spec,
        priors=priors,
        eps_pi=eps_pi,
        eps_gamma=eps_gamma,
        eps_q=eps_q,
        eta=eta or 0.0,
        lemma_exponent=args.lemma_exponent,
        beta_bar=beta_bar,
        **counts,
    )

    t_params, r_params = None, None
    if (args.t_frac is None) != (args.r_frac is None):
        raise PreconditionError("--t-frac y --r-frac se usan juntos")
    if args.t_frac is not None:
        t_params = args.t_frac * spec.mu[:, None, None] * spec.pi_star[None, :, None] * spec.gamma_star
        r_params = args.r_frac * spec.pi_star

    report = evaluate_bounds(inputs, args.g_pi, args.g_gamma, t_params, r_params)
    if fit is not None:
        report = empirical_vs_bound(fit, truth, spec, report)
    write_json(args.output, report.model_dump())
    logger.info("reporte de cotas escrito en %s", args.output)
    return 0

"""
Cadena de métodos de una corrida: MV -> VB/DS -> VB-LC/VB-ILC
"""
import logging
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from aggregators import FitResult, ds_em_fit, majority_vote, vb_ilc_fit, vb_lc_fit, vbem_fit
from constraints.constraint_set import close, count_violations
from constraints.eta_search import eta_search
from data.model import LabelPosterior, PosteriorParams
from metrics.scoring import score
from selection.uncertainty import answer_queries, plan_queries, random_label_items
from utils.constants import DEFAULT_ETA_GRID, RESULT_SCHEMA_VERSION
from utils.exceptions import PreconditionError

logger = logging.getLogger(__name__)


class RunResult(BaseModel):
    """Resultado JSON de `aggregate`"""

    schema_version: str = RESULT_SCHEMA_VERSION
    method: str
    labels: List[int]
    posterior: List[List[float]]
    params: Dict[str, Any]
    n_v: Optional[int] = None
    scores: Optional[Dict[str, Any]] = None
    iterations: int
    converged: bool
    seed: int
    index_maps: Dict[str, List[str]]
    eta: Optional[float] = None
    eta_table: Optional[List[Dict[str, Any]]] = None
    violations_on: Optional[str] = None
    prior_only_items: List[int] = Field(default_factory=list)
    flags: List[str] = Field(default_factory=list)
    created_at: str = ''


def fit_params(fit):
    """Parámetros del ajuste en forma serializable"""
    if fit.params is not None:
        return {
            'alpha': fit.params.alpha.tolist(),
            'beta': fit.params.beta.tolist(),
            'expected_pi': fit.params.expected_pi().tolist(),
            'expected_gamma': fit.params.expected_gamma().tolist(),
        }
    if fit.pi_hat is not None:
        return {'pi_hat': fit.pi_hat.tolist(), 'gamma_hat': fit.gamma_hat.tolist()}
    return {}


def fit_from_result(payload):
    """Reconstruye un FitResult a partir del JSON de `aggregate`"""
    posterior = LabelPosterior(np.asarray(payload['posterior'], dtype=float))
    params = payload.get('params') or {}
    fit = FitResult(
        method=payload.get('method', ''),
        posterior=posterior,
        hard_labels=np.asarray(payload['labels'], dtype=np.int64),
        iterations_run=int(payload.get('iterations', 0)),
        converged=bool(payload.get('converged', False)),
        n_v=payload.get('n_v'),
        eta=payload.get('eta'),
    )
    if 'alpha' in params:
        fit.params = PosteriorParams(params['alpha'], params['beta'])
    elif 'pi_hat' in params:
        fit.pi_hat = np.asarray(params['pi_hat'], dtype=float)
        fit.gamma_hat = np.asarray(params['gamma_hat'], dtype=float)
    else:
        raise PreconditionError(f"el resultado '{fit.method}' no tiene parámetros estimados")
    return fit


def build_result(fit, responses, seed, truth=None, extras=None):
    """Ensambla el RunResult de un ajuste"""
    extras = extras or {}
    scores = None
    if truth is not None and truth.n_known:
        scores = score(fit.hard_labels, truth, responses.n_classes).to_dict()
    return RunResult(
        method=fit.method,
        labels=[int(v) for v in fit.hard_labels],
        posterior=fit.posterior.probs.tolist(),
        params=fit_params(fit),
        n_v=extras.get('n_v', fit.n_v),
        scores=scores,
        iterations=fit.iterations_run,
        converged=fit.converged,
        seed=int(seed),
        index_maps={'items': list(responses.item_ids), 'annotators': list(responses.annotator_ids)},
        eta=fit.eta,
        eta_table=extras.get('eta_table'),
        violations_on=extras.get('violations_on'),
        prior_only_items=list(fit.prior_only_items),
        flags=list(fit.flags),
        created_at=datetime.now(timezone.utc).isoformat(timespec='seconds'),
    )


def selection_posterior(responses, priors, options, source='vb'):
    """Posterior usado para elegir consultas: VB (por defecto) o histograma de votos"""
    if source == 'mv':
        return majority_vote(responses).posterior
    return vbem_fit(responses, priors, options).posterior


def run_vb_ilc(responses, priors, constraints, options, vb_fit, eta=None, eta_grid=None,
               violations_on='closed', binary_cannot_link=False, workers=None):
    """
    VB-ILC inicializado con VB; eta fijo o elegido por rejilla
    Returns:
        (FitResult, extras) con la tabla de eta y el N_V según violations_on
    """
    closed = constraints if constraints.closed else close(constraints, binary_cannot_link)
    start = options.with_posterior(vb_fit.posterior)
    extras = {'violations_on': violations_on}
    if eta is not None:
        fit = vb_ilc_fit(responses, priors, closed, start.with_eta(eta))
    else:
        search = eta_search(responses, priors, closed, eta_grid or DEFAULT_ETA_GRID, start, workers=workers)
        fit = search.best_fit
        extras['eta_table'] = search.table_dicts()
    given = constraints if violations_on == 'given' else closed
    extras['n_v'] = count_violations(given, fit.hard_labels)
    return fit, extras


def run_method(method, responses, priors, options, constraints=None, label_constraints=None,
               eta=None, eta_grid=None, violations_on='closed', binary_cannot_link=False):
    """
    Ejecuta la cadena de métodos hasta `method`
    Returns:
        (FitResult, extras)
    """
    if method == 'mv':
        return majority_vote(responses, options.seed), {}
    if method == 'ds':
        return ds_em_fit(responses, options), {}

    vb_fit = vbem_fit(responses, priors, options)
    if method == 'vb':
        return vb_fit, {}
    if method == 'vb-lc':
        if not label_constraints:
            logger.warning("vb-lc sin restricciones de etiqueta: equivale a vb")
        return vb_lc_fit(responses, priors, label_constraints or {}, options.with_posterior(vb_fit.posterior)), {}
    if method == 'vb-ilc':
        if constraints is None:
            raise PreconditionError("vb-ilc requiere un conjunto de restricciones")
        return run_vb_ilc(responses, priors, constraints, options, vb_fit, eta, eta_grid,
                          violations_on, binary_cannot_link)
    raise PreconditionError(f"método desconocido: {method}")


def selected_constraints(method, responses, truth, priors, options, n_constraints, source='vb'):
    """
    Restricciones obtenidas consultando la verdad: etiquetas al azar (vb-lc) o
    pares elegidos por incertidumbre (vb-ilc)
    Returns:
        (ConstraintSet o None, dict de etiquetas o None, QueryPlan o None)
    """
    if method == 'vb-lc':
        return None, random_label_items(truth, n_constraints, options.seed), None
    posterior = selection_posterior(responses, priors, options, source)
    plan = plan_queries(posterior, n_constraints, options.seed)
    return answer_queries(plan, truth), None, plan

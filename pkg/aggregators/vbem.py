"""
EM variacional bayesiano (VBEM) para el modelo de Dawid-Skene con priors de Dirichlet
"""
import logging

import numpy as np

from data.model import (
    LabelPosterior,
    PosteriorParams,
    PriorConfig,
    expected_log_gamma_all,
    expected_log_pi,
)
from utils.numerics import normalize_log_rows
from .base_aggregator import BaseAggregator, FitOptions

logger = logging.getLogger(__name__)


def _as_probs(posterior):
    if isinstance(posterior, LabelPosterior):
        return posterior.probs
    return np.asarray(posterior, dtype=float)


def m_step(responses, posterior, priors):
    """
    Actualización de los Dirichlet posteriores
    alpha_k = sum_n q(y_n = k) + alpha0_k
    beta_{k,k'}^(m) = sum_n q(y_n = k) delta_{n,k'}^(m) + beta0_{k,k'}^(m)
    Args:
        responses: ResponseMatrix
        posterior: LabelPosterior o matriz (N, K)
        priors: PriorConfig
    Returns:
        PosteriorParams
    """
    probs = _as_probs(posterior)
    alpha = probs.sum(axis=0) + priors.alpha0
    beta = np.array(priors.beta0, dtype=float)
    np.add.at(beta, (responses.annotator_idx, slice(None), responses.labels - 1),
              probs[responses.item_idx])
    return PosteriorParams(alpha, beta)


def e_step(responses, params, extra=None):
    """
    Posterior de etiquetas: ln q(y_n = k) = E[ln pi_k] + sum_m E[ln gamma_{k, y_n^(m)}^(m)] + extra_{n,k}
    Args:
        responses: ResponseMatrix
        params: PosteriorParams
        extra: Término aditivo opcional (N, K) en el exponente
    Returns:
        Matriz (N, K) fila-estocástica
    """
    log_gamma = expected_log_gamma_all(params)
    log_weights = np.tile(expected_log_pi(params), (responses.n_items, 1))
    np.add.at(log_weights, responses.item_idx,
              log_gamma[responses.annotator_idx, :, responses.labels - 1])
    if extra is not None:
        log_weights += extra
    return normalize_log_rows(log_weights).reshape(responses.n_items, responses.n_classes)


class VBEMAggregator(BaseAggregator):
    """VBEM de campo medio; las variantes con restricciones redefinen los ganchos"""

    name = 'vb'

    def __init__(self, responses, priors=None, options=None):
        if priors is None:
            priors = PriorConfig.diagonal(responses.n_annotators, responses.n_classes)
        priors.check_compatible(responses)
        super().__init__(responses, priors, options)

    def m_step(self, probs):
        params = m_step(self.responses, probs, self.priors)
        params.check_alpha_total(self.responses.n_items, self.priors)
        return params

    def e_step(self, params, probs_prev):
        return e_step(self.responses, params, extra=self.constraint_term(probs_prev))

    def constraint_term(self, probs_prev):
        return None

    def informed_items(self):
        """Ítems con información más allá de las respuestas (restricciones)"""
        return set()

    def build_result(self, probs, params, iterations, converged, trace):
        result = super().build_result(probs, params, iterations, converged, trace)
        unanswered = np.flatnonzero(self.responses.responses_per_item() == 0)
        informed = self.informed_items()
        result.prior_only_items = [int(n) for n in unanswered if int(n) not in informed]
        if result.prior_only_items:
            result.flags.append('prior_only_items')
            logger.warning("%s: %d ítems sin respuestas ni restricciones conservan el posterior del prior",
                           self.name, len(result.prior_only_items))
        return result


def vbem_fit(responses, priors, options=None):
    """
    Ajuste VBEM
    Args:
        responses: ResponseMatrix
        priors: PriorConfig
        options: FitOptions
    Returns:
        FitResult con los PosteriorParams finales
    """
    return VBEMAggregator(responses, priors, options or FitOptions()).fit()

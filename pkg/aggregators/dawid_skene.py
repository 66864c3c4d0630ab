"""
EM de máxima verosimilitud de Dawid-Skene
"""
import logging

import numpy as np

from utils.constants import DS_SMOOTHING
from utils.numerics import normalize_log_rows
from .base_aggregator import BaseAggregator, FitOptions

logger = logging.getLogger(__name__)


class DawidSkeneAggregator(BaseAggregator):
    """Estimaciones puntuales de pi y Gamma alternadas con el posterior de etiquetas"""

    name = 'ds'

    def m_step(self, probs):
        """
        pi_k = N_k / N y gamma_{k,k'} = N_{k,k'} / sum_l N_{k,l}, con suavizado aditivo
        Returns:
            (pi_hat (K,), gamma_hat (M, K, K))
        """
        rm = self.responses
        class_counts = probs.sum(axis=0) + DS_SMOOTHING
        pi_hat = class_counts / class_counts.sum()

        confusion = np.zeros((rm.n_annotators, rm.n_classes, rm.n_classes))
        np.add.at(confusion, (rm.annotator_idx, slice(None), rm.labels - 1), probs[rm.item_idx])
        confusion += DS_SMOOTHING
        gamma_hat = confusion / confusion.sum(axis=2, keepdims=True)
        return pi_hat, gamma_hat

    def e_step(self, params, probs_prev):
        pi_hat, gamma_hat = params
        rm = self.responses
        log_weights = np.tile(np.log(pi_hat), (rm.n_items, 1))
        np.add.at(log_weights, rm.item_idx, np.log(gamma_hat[rm.annotator_idx, :, rm.labels - 1]))
        return normalize_log_rows(log_weights).reshape(rm.n_items, rm.n_classes)

    def build_result(self, probs, params, iterations, converged, trace):
        result = super().build_result(probs, None, iterations, converged, trace)
        result.pi_hat, result.gamma_hat = params
        return result


def ds_em_fit(responses, options=None):
    """
    Ajuste EM de Dawid-Skene
    Args:
        responses: ResponseMatrix
        options: FitOptions (por defecto inicializa con voto mayoritario)
    Returns:
        FitResult con pi_hat y gamma_hat
    """
    return DawidSkeneAggregator(responses, options=options or FitOptions()).fit()

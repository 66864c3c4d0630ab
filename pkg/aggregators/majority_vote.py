"""
Voto mayoritario
"""
import logging

from data.model import LabelPosterior
from utils.helpers import hard_labels
from .base_aggregator import BaseAggregator, FitOptions, FitResult, vote_histogram

logger = logging.getLogger(__name__)


class MajorityVoteAggregator(BaseAggregator):
    """Histograma de respuestas por ítem; empates hacia la clase de menor índice"""

    name = 'mv'

    def m_step(self, probs):
        return None

    def e_step(self, params, probs_prev):
        return vote_histogram(self.responses)

    def fit(self):
        probs = vote_histogram(self.responses)
        unanswered = (self.responses.responses_per_item() == 0).nonzero()[0].tolist()
        if unanswered:
            logger.warning("%d ítems sin respuestas reciben el posterior uniforme", len(unanswered))
        return FitResult(
            method=self.name,
            posterior=LabelPosterior(probs),
            hard_labels=hard_labels(probs),
            iterations_run=1,
            converged=True,
            trace=[0.0],
            prior_only_items=unanswered,
            flags=['uniform_fallback'] if unanswered else [],
        )


def majority_vote(responses, seed=0):
    """
    Voto mayoritario como FitResult
    La semilla no interviene: el desempate es determinista.
    """
    return MajorityVoteAggregator(responses, options=FitOptions(seed=seed)).fit()

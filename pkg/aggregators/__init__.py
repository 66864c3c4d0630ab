"""
Algoritmos de fusión de etiquetas
"""
from .base_aggregator import BaseAggregator, FitOptions, FitResult
from .majority_vote import MajorityVoteAggregator, majority_vote
from .dawid_skene import DawidSkeneAggregator, ds_em_fit
from .vbem import VBEMAggregator, vbem_fit, m_step, e_step
from .vb_lc import VBLabelConstrainedAggregator, vb_lc_fit
from .vb_ilc import VBInstanceConstrainedAggregator, vb_ilc_fit
from utils.exceptions import PreconditionError

AGGREGATOR_CLASSES = {
    'mv': MajorityVoteAggregator,
    'ds': DawidSkeneAggregator,
    'vb': VBEMAggregator,
    'vb-lc': VBLabelConstrainedAggregator,
    'vb-ilc': VBInstanceConstrainedAggregator,
}


def create_aggregator(method, responses, priors=None, options=None, constraints=None):
    """
    Crea el agregador registrado para `method`
    Args:
        constraints: Restricciones de etiqueta (vb-lc) o ConstraintSet (vb-ilc)
    """
    if method not in AGGREGATOR_CLASSES:
        raise PreconditionError(f"método desconocido: {method}")
    options = options or FitOptions()
    if method == 'mv':
        return MajorityVoteAggregator(responses, options=options)
    if method == 'ds':
        return DawidSkeneAggregator(responses, options=options)
    if method == 'vb':
        return VBEMAggregator(responses, priors, options)
    return AGGREGATOR_CLASSES[method](responses, priors, constraints, options)


__all__ = [
    'BaseAggregator',
    'FitOptions',
    'FitResult',
    'MajorityVoteAggregator',
    'DawidSkeneAggregator',
    'VBEMAggregator',
    'VBLabelConstrainedAggregator',
    'VBInstanceConstrainedAggregator',
    'AGGREGATOR_CLASSES',
    'create_aggregator',
    'majority_vote',
    'ds_em_fit',
    'vbem_fit',
    'vb_lc_fit',
    'vb_ilc_fit',
    'm_step',
    'e_step',
]

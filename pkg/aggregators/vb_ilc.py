"""
VBEM con restricciones a nivel de instancia (must-link / cannot-link)
El paso E añade eta * sum_{n'} w_{n,n'} q_t(y_{n'} = k), calculado con el
posterior completo de la iteración anterior.
"""
import logging

from constraints.constraint_set import ConstraintSet, close, count_violations
from utils.exceptions import PreconditionError
from .base_aggregator import FitOptions
from .vbem import VBEMAggregator

logger = logging.getLogger(__name__)


class VBInstanceConstrainedAggregator(VBEMAggregator):
    """VBEM con un término de campo aleatorio de Markov sobre pares restringidos"""

    name = 'vb-ilc'

    def __init__(self, responses, priors=None, constraints=None, options=None):
        super().__init__(responses, priors, options)
        constraints = constraints if constraints is not None else ConstraintSet(closed=True)
        if not constraints.closed:
            raise PreconditionError("VB-ILC requiere un conjunto de restricciones cerrado")
        derived = close(constraints)
        if not (derived.must_link <= constraints.must_link and derived.cannot_link <= constraints.cannot_link):
            raise PreconditionError("el conjunto marcado como cerrado no lo es: la clausura agrega pares")
        self.constraints = constraints
        self.weights = constraints.weight_matrix(responses.n_items)

    def constraint_term(self, probs_prev):
        if self.options.eta == 0 or self.constraints.is_empty():
            return None
        return self.options.eta * (self.weights @ probs_prev)

    def informed_items(self):
        return set(self.constraints.items())

    def build_result(self, probs, params, iterations, converged, trace):
        result = super().build_result(probs, params, iterations, converged, trace)
        result.eta = float(self.options.eta)
        result.n_v = count_violations(self.constraints, result.hard_labels)
        logger.info("vb-ilc eta=%g: %d restricciones violadas de %d",
                    result.eta, result.n_v, len(self.constraints))
        return result


def vb_ilc_fit(responses, priors, constraints, options=None):
    """
    VBEM con restricciones por pares
    Args:
        constraints: ConstraintSet cerrado
        options: FitOptions; options.eta pondera el término de restricciones
    Returns:
        FitResult con n_v calculado sobre las etiquetas duras
    """
    aggregator = VBInstanceConstrainedAggregator(responses, priors, constraints, options or FitOptions())
    return aggregator.fit()

"""
VBEM con restricciones de etiqueta: filas del posterior fijadas a la clase conocida
"""
import logging

import numpy as np

from constraints.constraint_set import as_label_map
from utils.exceptions import PreconditionError
from .base_aggregator import FitOptions
from .vbem import VBEMAggregator

logger = logging.getLogger(__name__)


class VBLabelConstrainedAggregator(VBEMAggregator):
    """Las filas restringidas valen e_k en todas las iteraciones y cuentan con peso 1 en el paso M"""

    name = 'vb-lc'

    def __init__(self, responses, priors=None, label_constraints=None, options=None):
        super().__init__(responses, priors, options)
        self.label_constraints = as_label_map(label_constraints or {})
        for item, label in self.label_constraints.items():
            if not 0 <= item < responses.n_items:
                raise PreconditionError(f"restricción de etiqueta sobre un ítem inexistente: {item}")
            if not 1 <= label <= responses.n_classes:
                raise PreconditionError(f"clase {label} fuera de 1..{responses.n_classes} (ítem {item})")
        self._pinned_items = np.array(sorted(self.label_constraints), dtype=np.int64)
        self._pinned_classes = np.array([self.label_constraints[n] - 1 for n in self._pinned_items],
                                        dtype=np.int64)

    def clamp(self, probs):
        if not self._pinned_items.size:
            return probs
        probs = np.array(probs, dtype=float)
        probs[self._pinned_items] = 0.0
        probs[self._pinned_items, self._pinned_classes] = 1.0
        return probs

    def informed_items(self):
        return set(self.label_constraints)


def vb_lc_fit(responses, priors, label_constraints, options=None):
    """
    VBEM con restricciones de etiqueta
    Args:
        label_constraints: Mapeo item (0-based) -> clase (1..K), o pares (item, clase)
    """
    aggregator = VBLabelConstrainedAggregator(responses, priors, label_constraints, options or FitOptions())
    return aggregator.fit()

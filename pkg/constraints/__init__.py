"""
Restricciones por pares: representación, clausura y conteo de violaciones
La búsqueda de eta vive en constraints.eta_search (depende de los agregadores).
"""
from .constraint_set import (
    ConstraintSet,
    UnionFind,
    as_label_map,
    close,
    count_violations,
    derive_from_labels,
)

__all__ = [
    'ConstraintSet',
    'UnionFind',
    'as_label_map',
    'close',
    'count_violations',
    'derive_from_labels',
]

"""
Selección de restricciones a consultar
"""
from .uncertainty import (
    QueryPlan,
    answer_queries,
    bvsb,
    bvsb_scores,
    plan_queries,
    random_label_items,
    random_pairs,
    weighted_draw,
)

__all__ = [
    'QueryPlan',
    'answer_queries',
    'bvsb',
    'bvsb_scores',
    'plan_queries',
    'random_label_items',
    'random_pairs',
    'weighted_draw',
]

"""
Utilidades numéricas, constantes y excepciones compartidas
"""
from .exceptions import (
    CrowdFuseError,
    InputFormatError,
    PreconditionError,
    ConstraintConflictError,
    NumericDomainError,
)
from .numerics import digamma, log_sum_exp, kl_divergence, normalize_log_rows

__all__ = [
    'CrowdFuseError',
    'InputFormatError',
    'PreconditionError',
    'ConstraintConflictError',
    'NumericDomainError',
    'digamma',
    'log_sum_exp',
    'kl_divergence',
    'normalize_log_rows',
]

"""
Cotas teóricas de error y su contraste con corridas sintéticas
"""
from .theory import (
    BoundInputs,
    BoundReport,
    EmpiricalErrors,
    LabelErrorBound,
    constraint_counts,
    d_gamma,
    d_pi,
    empirical_vs_bound,
    evaluate_bounds,
    f_gamma,
    f_pi,
    label_error_bound,
    nu_probability,
    parameter_error_bounds,
)

__all__ = [
    'BoundInputs',
    'BoundReport',
    'EmpiricalErrors',
    'LabelErrorBound',
    'constraint_counts',
    'd_gamma',
    'd_pi',
    'empirical_vs_bound',
    'evaluate_bounds',
    'f_gamma',
    'f_pi',
    'label_error_bound',
    'nu_probability',
    'parameter_error_bounds',
]

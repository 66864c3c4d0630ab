"""
Corridas de punta a punta y barridos de experimentos
"""
from .pipeline import RunResult, build_result, fit_from_result, run_method, run_vb_ilc, selected_constraints
from .protocols import ExperimentRunner, protocol_constraints, summarize

__all__ = [
    'RunResult',
    'build_result',
    'fit_from_result',
    'run_method',
    'run_vb_ilc',
    'selected_constraints',
    'ExperimentRunner',
    'protocol_constraints',
    'summarize',
]

"""
Tipos del modelo de crowdsourcing y generador sintético
"""
from .model import (
    ResponseMatrix,
    LabelPosterior,
    PriorConfig,
    PosteriorParams,
    GroundTruth,
    DatasetStats,
    expected_log_pi,
    expected_log_gamma,
    dataset_stats,
)
from .synth import CrowdSpec, generate, diag_dominant_spec

__all__ = [
    'ResponseMatrix',
    'LabelPosterior',
    'PriorConfig',
    'PosteriorParams',
    'GroundTruth',
    'DatasetStats',
    'expected_log_pi',
    'expected_log_gamma',
    'dataset_stats',
    'CrowdSpec',
    'generate',
    'diag_dominant_spec',
]

"""
Configuración de corridas, priors y logging
"""
import json
import logging
import os
from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from data.model import PriorConfig
from utils.constants import DEFAULT_MAX_ITERS, DEFAULT_TOL, LOG_LEVEL_ENV, THREADS_ENV
from utils.exceptions import InputFormatError, PreconditionError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

PRIOR_PRESETS = ('diagonal', 'uniform')


class RunConfig(BaseModel):
    """Configuración de una corrida de `aggregate`"""

    method: Literal['mv', 'ds', 'vb', 'vb-lc', 'vb-ilc']
    responses: Path
    truth: Optional[Path] = None
    constraints: Optional[Path] = None
    spec: Optional[Path] = None
    output: Path
    priors: str = 'diagonal'
    n_classes: Optional[int] = Field(default=None, ge=2)
    max_iters: int = Field(default=DEFAULT_MAX_ITERS, ge=1)
    tol: float = Field(default=DEFAULT_TOL, ge=0)
    eta: Optional[float] = Field(default=None, ge=0)
    eta_grid: Optional[List[float]] = None
    n_constraints: Optional[int] = Field(default=None, ge=0)
    selection_source: Literal['vb', 'mv'] = 'vb'
    violations_on: Literal['given', 'closed'] = 'closed'
    binary_cannot_link: bool = False
    queries_out: Optional[Path] = None
    seed: int = 0

    @model_validator(mode='after')
    def check_method_requirements(self):
        if self.eta is not None and self.eta_grid is not None:
            raise ValueError("eta y eta_grid son excluyentes")
        if self.eta_grid is not None and not self.eta_grid:
            raise ValueError("eta_grid no puede estar vacía")
        if self.method in ('vb-lc', 'vb-ilc'):
            from_selection = self.n_constraints is not None
            if self.constraints is None and not from_selection:
                raise ValueError(f"{self.method} requiere --constraints o --n-constraints")
            if from_selection and self.truth is None:
                raise ValueError("--n-constraints requiere --truth para responder las consultas")
        if self.queries_out is not None and self.method != 'vb-ilc':
            raise ValueError("--queries-out solo aplica a vb-ilc")
        return self


def get_worker_count():
    """Hilos permitidos según CROWDFUSE_THREADS; ausente o inválido -> 1"""
    raw = os.environ.get(THREADS_ENV, '')
    try:
        return max(1, int(raw))
    except ValueError:
        if raw:
            logger.warning("%s=%r no es un entero; se usa 1 hilo", THREADS_ENV, raw)
        return 1


def configure_logging(level=None):
    """
    Configura el logging raíz una sola vez
    Args:
        level: Nombre del nivel; por defecto CROWDFUSE_LOG_LEVEL o WARNING
    """
    level = (level or os.environ.get(LOG_LEVEL_ENV) or 'WARNING').upper()
    root = logging.getLogger()
    if not any(getattr(h, '_crowdfuse', False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._crowdfuse = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.WARNING))


def load_priors(preset, n_annotators, n_classes):
    """
    Priors desde un preset ('diagonal', 'uniform') o un JSON con alpha0 y beta0
    beta0 puede ser una plantilla (K, K) o el arreglo completo (M, K, K).
    """
    if preset == 'diagonal':
        return PriorConfig.diagonal(n_annotators, n_classes)
    if preset == 'uniform':
        return PriorConfig.uniform(n_annotators, n_classes)

    path = Path(preset)
    if not path.exists():
        raise InputFormatError(f"preset de priors desconocido o archivo inexistente: {preset}")
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
        alpha0 = np.asarray(payload['alpha0'], dtype=float)
        beta0 = np.asarray(payload['beta0'], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputFormatError(f"archivo de priors inválido: {exc}", path=path) from exc

    if beta0.ndim == 2:
        priors = PriorConfig.from_template(alpha0, beta0, n_annotators)
    else:
        priors = PriorConfig(alpha0, beta0)
    if (priors.n_annotators, priors.n_classes) != (n_annotators, n_classes):
        raise PreconditionError(
            f"priors de {path} para M={priors.n_annotators}, K={priors.n_classes}; "
            f"los datos tienen M={n_annotators}, K={n_classes}")
    return priors

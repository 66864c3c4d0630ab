"""
Clase base para todos los algoritmos de fusión de etiquetas
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from data.model import LabelPosterior, PosteriorParams
from utils.constants import DEFAULT_MAX_ITERS, DEFAULT_TOL, INIT_METHODS, PROB_TOL
from utils.exceptions import NumericDomainError, PreconditionError
from utils.helpers import hard_labels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitOptions:
    """
    Opciones de ajuste comunes a todos los algoritmos
    Args:
        max_iters: Número máximo de iteraciones T (>= 1)
        tol: Umbral de cambio máximo del posterior para declarar convergencia
        eta: Peso del término de restricciones (solo VB-ILC)
        seed: Semilla de 64 bits
        init: 'majority_vote', 'given_posterior' o 'uniform'
        initial_posterior: Matriz (N, K) usada cuando init == 'given_posterior'
    """
    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_TOL
    eta: float = 0.0
    seed: int = 0
    init: str = 'majority_vote'
    initial_posterior: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise PreconditionError(f"max_iters debe ser >= 1 (recibido {self.max_iters})")
        if self.tol < 0:
            raise PreconditionError("tol debe ser no negativo")
        if self.eta < 0:
            raise PreconditionError("eta debe ser no negativo")
        if self.init not in INIT_METHODS:
            raise PreconditionError(f"inicialización desconocida: {self.init}")
        if self.init == 'given_posterior' and self.initial_posterior is None:
            raise PreconditionError("init='given_posterior' requiere initial_posterior")

    def with_posterior(self, posterior):
        """Copia que inicializa desde un posterior dado"""
        probs = posterior.probs if isinstance(posterior, LabelPosterior) else np.asarray(posterior)
        return replace(self, init='given_posterior', initial_posterior=probs)

    def with_eta(self, eta):
        return replace(self, eta=float(eta))


@dataclass
class FitResult:
    """
    Resultado de un ajuste
    params guarda los Dirichlet posteriores (variantes VB); pi_hat y gamma_hat
    las estimaciones puntuales de Dawid-Skene.
    """
    method: str
    posterior: LabelPosterior
    hard_labels: np.ndarray
    iterations_run: int
    converged: bool
    trace: list = field(default_factory=list)
    params: Optional[PosteriorParams] = None
    pi_hat: Optional[np.ndarray] = None
    gamma_hat: Optional[np.ndarray] = None
    n_v: Optional[int] = None
    eta: Optional[float] = None
    prior_only_items: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def expected_pi(self):
        if self.params is not None:
            return self.params.expected_pi()
        return self.pi_hat

    def expected_gamma(self):
        if self.params is not None:
            return self.params.expected_gamma()
        return self.gamma_hat


def uniform_posterior(n_items, n_classes):
    return np.full((n_items, n_classes), 1.0 / n_classes)


def vote_histogram(responses):
    """
    Posterior aproximado por histograma de respuestas; ítems sin respuestas -> uniforme
    """
    counts = responses.vote_counts()
    totals = counts.sum(axis=1, keepdims=True)
    probs = uniform_posterior(responses.n_items, responses.n_classes)
    answered = totals[:, 0] > 0
    probs[answered] = counts[answered] / totals[answered]
    return probs


class BaseAggregator(ABC):
    """Clase base abstracta: bucle iterativo común y validación de posteriores"""

    name = 'base'

    def __init__(self, responses, priors=None, options=None):
        self.responses = responses
        self.priors = priors
        self.options = options or FitOptions()

    def initial_posterior(self):
        """Posterior q_0 según options.init"""
        n, k = self.responses.n_items, self.responses.n_classes
        if self.options.init == 'uniform':
            return uniform_posterior(n, k)
        if self.options.init == 'given_posterior':
            probs = np.array(self.options.initial_posterior, dtype=float)
            if probs.shape != (n, k):
                raise PreconditionError(
                    f"posterior inicial de forma {probs.shape}, se esperaba {(n, k)}")
            return LabelPosterior(probs).probs.copy()
        return vote_histogram(self.responses)

    @abstractmethod
    def m_step(self, probs):
        """Estima los parámetros a partir del posterior actual"""

    @abstractmethod
    def e_step(self, params, probs_prev):
        """Nuevo posterior (N, K) a partir de parámetros y del posterior anterior"""

    def clamp(self, probs):
        """Gancho para fijar filas (restricciones de etiqueta); identidad por defecto"""
        return probs

    def fit(self):
        """
        Alterna pasos E y M hasta que max |q_{t+1} - q_t| < tol o se agoten T iteraciones
        Returns:
            FitResult
        """
        probs = self.clamp(self.initial_posterior())
        params = self.m_step(probs)
        trace = []
        converged = False
        iteration = 0
        for iteration in range(1, self.options.max_iters + 1):
            new_probs = self.clamp(self.e_step(params, probs))
            check_rows(new_probs)
            change = float(np.max(np.abs(new_probs - probs))) if probs.size else 0.0
            trace.append(change)
            probs = new_probs
            params = self.m_step(probs)
            logger.debug("%s iteración %d: cambio máximo %.3e", self.name, iteration, change)
            if change < self.options.tol:
                converged = True
                break

        result = self.build_result(probs, params, iteration, converged, trace)
        logger.info("%s: %d iteraciones, convergió=%s", self.name, iteration, converged)
        return result

    def build_result(self, probs, params, iterations, converged, trace):
        return FitResult(
            method=self.name,
            posterior=LabelPosterior(probs),
            hard_labels=hard_labels(probs),
            iterations_run=iterations,
            converged=converged,
            trace=trace,
            params=params,
        )


def check_rows(probs):
    """Cada fila del posterior suma 1 tras cada paso E"""
    if probs.size and np.any(np.abs(probs.sum(axis=1) - 1.0) > PROB_TOL):
        raise NumericDomainError("una fila del posterior no suma 1")

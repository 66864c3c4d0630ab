"""
Cantidades teóricas de las cotas de error de VBEM y VB-ILC
Todas las cotas se reportan aunque sean vacías; nunca se recortan en silencio.
"""
import logging
import math
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from utils.constants import BOUND_SENTINEL, EXPONENT_FORMS, LOG_SENTINEL
from utils.exceptions import NumericDomainError, PreconditionError
from utils.helpers import one_hot
from utils.numerics import kl_divergence

logger = logging.getLogger(__name__)

HELD = 'held'
VIOLATED = 'violated'
HELD_VACUOUSLY = 'held-vacuously'


def d_pi(pi_star):
    """
    D_pi = min_{k != k'} ln(pi*_k / pi*_k'); puede ser negativo
    """
    pi_star = np.asarray(pi_star, dtype=float)
    if np.any(pi_star <= 0):
        raise NumericDomainError("D_pi requiere pi* estrictamente positivo")
    return float(math.log(pi_star.min() / pi_star.max()))


def d_gamma(gamma_star, mu):
    """
    D_gamma = min_{k != k'} (1/M) sum_m mu_m KL(gamma*_k^(m), gamma*_k'^(m))
    """
    gamma_star = np.asarray(gamma_star, dtype=float)
    mu = np.asarray(mu, dtype=float)
    n_annotators, n_classes, _ = gamma_star.shape
    best = None
    for k, other in permutations(range(n_classes), 2):
        total = sum(mu[m] * kl_divergence(gamma_star[m, k], gamma_star[m, other])
                    for m in range(n_annotators))
        value = total / n_annotators
        best = value if best is None else min(best, value)
    return float(best)


def _log_or_sentinel(argument):
    if argument <= 0:
        return LOG_SENTINEL
    return math.log(argument)


def f_pi(eps, rho_pi, n_items, alpha0_bar):
    """
    f_pi(eps) = ln((rho_pi - eps)/rho_pi - 1/(2 rho_pi (N + alpha0_bar)))
    Devuelve LOG_SENTINEL cuando el argumento del logaritmo no es positivo.
    """
    if rho_pi <= 0:
        raise NumericDomainError("rho_pi debe ser positivo")
    argument = (rho_pi - eps) / rho_pi - 1.0 / (2.0 * rho_pi * (n_items + alpha0_bar))
    return _log_or_sentinel(argument)


def f_gamma(eps, rho_gamma, beta0_bar):
    """f_gamma(eps) = ln((rho_gamma - eps)/rho_gamma - 1/(2 rho_gamma beta0_bar))"""
    if rho_gamma <= 0:
        raise NumericDomainError("rho_gamma debe ser positivo")
    argument = (rho_gamma - eps) / rho_gamma - 1.0 / (2.0 * rho_gamma * beta0_bar)
    return _log_or_sentinel(argument)


def is_vacuous_log(value):
    return value <= LOG_SENTINEL


def _probability_bound(log_value):
    """exp(log_value) acotado a 1; devuelve (cota, vacía)"""
    if log_value >= 0:
        return 1.0, True
    return math.exp(log_value), False


@dataclass
class BoundInputs:
    """
    Entradas de las cotas
    Args:
        spec: CrowdSpec con pi*, Gamma*, mu
        priors: PriorConfig
        eps_pi, eps_gamma, eps_q: Errores de la iteración anterior
        eta: Peso de las restricciones
        n_ml, n_cl: Restricciones must-link / cannot-link por ítem (N,)
        n_cl_k: Cannot-link por ítem y clase del compañero (N, K)
        lemma_exponent: 'theorem_form' o 'lemma_form'
        beta_bar: Sumas por fila de los beta posteriores (M, K); por defecto N mu_m pi*_k + beta0_bar
    """
    spec: object
    priors: object
    eps_pi: float = 0.0
    eps_gamma: float = 0.0
    eps_q: float = 0.0
    eta: float = 0.0
    n_ml: Optional[np.ndarray] = None
    n_cl: Optional[np.ndarray] = None
    n_cl_k: Optional[np.ndarray] = None
    lemma_exponent: str = 'theorem_form'
    beta_bar: Optional[np.ndarray] = None
    rho_pi: Optional[float] = None
    rho_gamma: Optional[float] = None

    def __post_init__(self):
        for name in ('eps_pi', 'eps_gamma', 'eps_q', 'eta'):
            if getattr(self, name) < 0:
                raise NumericDomainError(f"{name} debe ser no negativo")
        if self.lemma_exponent not in EXPONENT_FORMS:
            raise PreconditionError(f"forma de exponente desconocida: {self.lemma_exponent}")
        n, k = self.spec.n_items, self.spec.n_classes
        self.n_ml = np.zeros(n) if self.n_ml is None else np.asarray(self.n_ml, dtype=float)
        self.n_cl = np.zeros(n) if self.n_cl is None else np.asarray(self.n_cl, dtype=float)
        self.n_cl_k = np.zeros((n, k)) if self.n_cl_k is None else np.asarray(self.n_cl_k, dtype=float)
        if self.n_ml.shape != (n,) or self.n_cl.shape != (n,) or self.n_cl_k.shape != (n, k):
            raise PreconditionError("conteos de restricciones con dimensiones inconsistentes")
        if self.rho_pi is None:
            self.rho_pi = self.spec.rho_pi
        if self.rho_gamma is None:
            self.rho_gamma = self.spec.rho_gamma
        if not 0 < self.rho_pi <= self.spec.rho_pi or not 0 < self.rho_gamma <= self.spec.rho_gamma:
            raise NumericDomainError("rho_pi y rho_gamma deben ser positivos y no mayores que los mínimos")
        if (self.priors.n_annotators, self.priors.n_classes) != (self.spec.n_annotators, k):
            raise PreconditionError("priors y CrowdSpec con dimensiones distintas")

    @property
    def beta0_bar_min(self):
        return float(self.priors.beta0_bar().min())

    def posterior_row_sums(self):
        if self.beta_bar is not None:
            return np.asarray(self.beta_bar, dtype=float)
        spec = self.spec
        return (spec.n_items * spec.mu[:, None] * spec.pi_star[None, :]) + self.priors.beta0_bar()


@dataclass
class LabelErrorBound:
    U: float
    eps_q: float
    eps_q_vacuous: bool
    W_n: np.ndarray
    tilde_eps_q: np.ndarray
    tilde_vacuous: np.ndarray
    f_pi: float
    f_gamma: float

    @property
    def tilde_eps_q_max(self):
        return float(self.tilde_eps_q.max()) if self.tilde_eps_q.size else self.eps_q


def exponent_u(inputs, f_pi_value, f_gamma_value):
    """
    theorem_form: U = D_pi + M D_gamma / 2 + f_pi + M f_gamma
    lemma_form:   U = D_pi + 2 f_pi + M (D_gamma / 2 + 2 f_gamma)
    """
    spec = inputs.spec
    dp = d_pi(spec.pi_star)
    dg = d_gamma(spec.gamma_star, spec.mu)
    m = spec.n_annotators
    if inputs.lemma_exponent == 'lemma_form':
        return dp + 2.0 * f_pi_value + m * (dg / 2.0 + 2.0 * f_gamma_value)
    return dp + m * dg / 2.0 + f_pi_value + m * f_gamma_value


def constraint_weights(inputs):
    """W_n = N_ML,n (1 - 2 eps_q) - 2 N_CL,n eps_q + min_k N_CL,n,k"""
    eps = inputs.eps_q
    return inputs.n_ml * (1.0 - 2.0 * eps) - 2.0 * inputs.n_cl * eps + inputs.n_cl_k.min(axis=1)


def label_error_bound(inputs):
    """
    Cota de error de etiquetas eps_q = K exp(-U) y, por ítem, K exp(-U - eta W_n)
    Las cotas mayores o iguales a 1 se reportan como 1 y se marcan vacías.
    """
    spec = inputs.spec
    fp = f_pi(inputs.eps_pi, inputs.rho_pi, spec.n_items, inputs.priors.alpha0_bar)
    fg = f_gamma(inputs.eps_gamma, inputs.rho_gamma, inputs.beta0_bar_min)
    u = exponent_u(inputs, fp, fg)
    log_k = math.log(spec.n_classes)
    eps_q, vacuous = _probability_bound(log_k - u)

    weights = constraint_weights(inputs)
    tilde = np.empty(spec.n_items)
    tilde_vacuous = np.zeros(spec.n_items, dtype=bool)
    for n in range(spec.n_items):
        tilde[n], tilde_vacuous[n] = _probability_bound(log_k - u - inputs.eta * weights[n])

    if vacuous:
        logger.warning("la cota de error de etiquetas es vacía (U=%.4g)", u)
    return LabelErrorBound(U=u, eps_q=eps_q, eps_q_vacuous=vacuous, W_n=weights,
                           tilde_eps_q=tilde, tilde_vacuous=tilde_vacuous, f_pi=fp, f_gamma=fg)


def parameter_error_bounds(inputs, g_pi, g_gamma, counts=None, eps_q=None, tilde_eps_q=None):
    """
    Cotas de error de E[pi_k] y E[gamma_{k,k'}^(m)]
    Args:
        g_pi, g_gamma: Valores de las funciones decrecientes de nu (entradas explícitas)
        counts: (N_tilde, N_bar) ítems con y sin restricciones; por defecto (0, N)
        eps_q: Cota de etiquetas sin restricciones (por defecto inputs.eps_q)
        tilde_eps_q: Cota de etiquetas con restricciones (por defecto eps_q)
    Returns:
        (eps_pi (K,), eps_gamma (M, K, K)); denominadores no positivos -> BOUND_SENTINEL
    """
    spec, priors = inputs.spec, inputs.priors
    n = spec.n_items
    n_tilde, n_bar = counts if counts is not None else (0, n)
    eps_q = inputs.eps_q if eps_q is None else eps_q
    tilde_eps_q = eps_q if tilde_eps_q is None else tilde_eps_q
    label_mass = n_tilde * tilde_eps_q + n_bar * eps_q

    eps_pi = (label_mass + n * g_pi + priors.alpha0 + inputs.rho_pi * priors.alpha0_bar) / (n + priors.alpha0_bar)

    beta0 = priors.beta0
    beta0_bar = priors.beta0_bar()
    beta_bar = inputs.posterior_row_sums()
    numerator = 2.0 * n * g_gamma + 2.0 * label_mass + beta0 + beta0_bar[:, :, None]
    with np.errstate(divide='ignore', invalid='ignore'):
        denominator = (n * spec.mu[:, None, None] * spec.pi_star[None, :, None]
                       - n * g_gamma / spec.gamma_star
                       - label_mass
                       + beta_bar[:, :, None])
        eps_gamma = np.where(denominator > 0, numerator / denominator, BOUND_SENTINEL)
    return np.asarray(eps_pi, dtype=float), eps_gamma


def nu_probability(spec, t_params, r_params):
    """
    nu = K N exp(-M D_gamma / (33 ln rho_gamma))
         + sum_{m,k,k'} 4 exp(-N t^2 / (3 pi*_k mu_m gamma*_{k,k'}))
         + sum_k 2 exp(-N r_k^2 / (3 pi*_k))
    Args:
        t_params: (M, K, K) con t <= mu_m pi*_k gamma*_{k,k'}
        r_params: (K,) con r_k <= pi*_k
    Returns:
        dict con nu, terms (3 sumandos) y anomalies
    """
    t_params = np.asarray(t_params, dtype=float)
    r_params = np.asarray(r_params, dtype=float)
    n, m_count, k_count = spec.n_items, spec.n_annotators, spec.n_classes
    if t_params.shape != (m_count, k_count, k_count) or r_params.shape != (k_count,):
        raise NumericDomainError("t y r con dimensiones inconsistentes")

    t_caps = spec.mu[:, None, None] * spec.pi_star[None, :, None] * spec.gamma_star
    over = np.argwhere(t_params > t_caps)
    if over.size:
        m, k, other = over[0]
        raise NumericDomainError(f"t[{m},{k},{other}] excede mu_m pi*_k gamma*_(k,k')")
    over = np.flatnonzero(r_params > spec.pi_star)
    if over.size:
        raise NumericDomainError(f"r[{over[0]}] excede pi*_{over[0]}")

    anomalies = []
    dg = d_gamma(spec.gamma_star, spec.mu)
    exponent = -m_count * dg / (33.0 * math.log(spec.rho_gamma))
    if exponent > 0:
        anomalies.append('nu_first_term_positive_exponent')
    if exponent + math.log(k_count * n) >= math.log(BOUND_SENTINEL):
        first = BOUND_SENTINEL
    else:
        first = k_count * n * math.exp(exponent)

    denominators = 3.0 * spec.pi_star[None, :, None] * spec.mu[:, None, None] * spec.gamma_star
    second = float(np.sum(4.0 * np.exp(-n * t_params ** 2 / denominators)))
    third = float(np.sum(2.0 * np.exp(-n * r_params ** 2 / (3.0 * spec.pi_star))))
    terms = [first, second, third]
    nu = min(sum(terms), BOUND_SENTINEL)
    return {'nu': nu, 'terms': terms, 'anomalies': anomalies, 'vacuous': nu >= 1.0}


def constraint_counts(constraints, labels, n_classes):
    """
    Conteos por ítem a partir de un ConstraintSet y las etiquetas verdaderas
    Returns:
        (n_ml (N,), n_cl (N,), n_cl_k (N, K)) donde n_cl_k[n, k] cuenta los compañeros
        cannot-link de n cuya clase verdadera es k + 1
    """
    labels = np.asarray(labels, dtype=np.int64)
    n_items = labels.size
    n_ml = np.zeros(n_items)
    n_cl = np.zeros(n_items)
    n_cl_k = np.zeros((n_items, n_classes))
    for i, j in constraints.must_link:
        n_ml[i] += 1
        n_ml[j] += 1
    for i, j in constraints.cannot_link:
        n_cl[i] += 1
        n_cl[j] += 1
        n_cl_k[i, labels[j] - 1] += 1
        n_cl_k[j, labels[i] - 1] += 1
    return n_ml, n_cl, n_cl_k


class EmpiricalErrors(BaseModel):
    label_error: float
    pi_error: float
    gamma_error: float


class BoundReport(BaseModel):
    """Reporte serializable de todas las cantidades de las cotas"""

    lemma_exponent: str
    D_pi: float
    D_gamma: float
    f_pi: float
    f_gamma: float
    U: float
    eps_q_bound: float
    W_n: List[float]
    tilde_eps_q: List[float]
    tilde_eps_q_max: float
    eps_pi_bound: List[float]
    eps_gamma_bound: List[List[List[float]]]
    nu_terms: Optional[List[float]] = None
    nu: Optional[float] = None
    vacuous: Dict[str, bool] = Field(default_factory=dict)
    anomalies: List[str] = Field(default_factory=list)
    empirical: Optional[EmpiricalErrors] = None
    status: Dict[str, str] = Field(default_factory=dict)


def evaluate_bounds(inputs, g_pi=0.0, g_gamma=0.0, t_params=None, r_params=None):
    """
    Calcula un BoundReport completo a partir de BoundInputs
    Las cotas de parámetros usan la cota de etiquetas de esta misma evaluación;
    nu solo se calcula si se dan t y r.
    """
    spec = inputs.spec
    label_bound = label_error_bound(inputs)
    constrained = (inputs.n_ml + inputs.n_cl) > 0
    n_tilde = int(constrained.sum())
    tilde_max = float(label_bound.tilde_eps_q[constrained].max()) if n_tilde else label_bound.eps_q
    eps_pi, eps_gamma = parameter_error_bounds(
        inputs, g_pi, g_gamma,
        counts=(n_tilde, spec.n_items - n_tilde),
        eps_q=label_bound.eps_q,
        tilde_eps_q=tilde_max,
    )

    vacuous = {
        'f_pi': is_vacuous_log(label_bound.f_pi),
        'f_gamma': is_vacuous_log(label_bound.f_gamma),
        'eps_q': label_bound.eps_q_vacuous,
        'tilde_eps_q': bool(label_bound.tilde_vacuous.all()) if spec.n_items else label_bound.eps_q_vacuous,
        'eps_pi': bool(np.all(eps_pi >= 1.0)),
        'eps_gamma': bool(np.all(eps_gamma >= 1.0)),
    }
    report = BoundReport(
        lemma_exponent=inputs.lemma_exponent,
        D_pi=d_pi(spec.pi_star),
        D_gamma=d_gamma(spec.gamma_star, spec.mu),
        f_pi=label_bound.f_pi,
        f_gamma=label_bound.f_gamma,
        U=label_bound.U,
        eps_q_bound=label_bound.eps_q,
        W_n=label_bound.W_n.tolist(),
        tilde_eps_q=label_bound.tilde_eps_q.tolist(),
        tilde_eps_q_max=tilde_max,
        eps_pi_bound=eps_pi.tolist(),
        eps_gamma_bound=eps_gamma.tolist(),
        vacuous=vacuous,
    )
    if t_params is not None and r_params is not None:
        nu = nu_probability(spec, t_params, r_params)
        report.nu_terms = nu['terms']
        report.nu = nu['nu']
        report.anomalies = nu['anomalies']
        report.vacuous['nu'] = nu['vacuous']
    return report


def _vector_status(errors, bounds):
    errors = np.asarray(errors, dtype=float)
    bounds = np.asarray(bounds, dtype=float)
    informative = bounds < 1.0
    if not informative.any():
        return HELD_VACUOUSLY
    if np.any(errors[informative] > bounds[informative]):
        return VIOLATED
    return HELD


def empirical_vs_bound(fit, truth, spec, report):
    """
    Completa los errores empíricos de un ajuste y marca cada cota como
    held / violated / held-vacuously
    Args:
        fit: FitResult
        truth: GroundTruth completa
        spec: CrowdSpec usada para generar los datos
        report: BoundReport
    Returns:
        Nuevo BoundReport
    """
    probs = fit.posterior.probs
    if probs.shape != (spec.n_items, spec.n_classes) or truth.labels.size != spec.n_items:
        raise PreconditionError("dimensiones del ajuste, la verdad y la especificación no coinciden")
    known = truth.known_mask
    if not known.any():
        raise PreconditionError("no hay ítems con verdad conocida")

    label_errors = np.abs(probs[known] - one_hot(truth.labels[known], spec.n_classes)).max(axis=1)
    pi_errors = np.abs(fit.expected_pi() - spec.pi_star)
    gamma_errors = np.abs(fit.expected_gamma() - spec.gamma_star)
    empirical = EmpiricalErrors(
        label_error=float(label_errors.max()),
        pi_error=float(pi_errors.max()),
        gamma_error=float(gamma_errors.max()),
    )

    tilde = np.asarray(report.tilde_eps_q)[known]
    status = {
        'eps_q': _vector_status([empirical.label_error], [report.eps_q_bound]),
        'tilde_eps_q': _vector_status(label_errors, tilde),
        'eps_pi': _vector_status(pi_errors, report.eps_pi_bound),
        'eps_gamma': _vector_status(gamma_errors, report.eps_gamma_bound),
    }
    return report.model_copy(update={'empirical': empirical, 'status': status})

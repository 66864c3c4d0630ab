"""
Generador de multitudes sintéticas bajo el modelo de Dawid-Skene
"""
import logging
from dataclasses import dataclass

import numpy as np

from utils.exceptions import NumericDomainError
from utils.numerics import is_prob_vector
from .model import GroundTruth, ResponseMatrix

logger = logging.getLogger(__name__)

_ROW_TOL = 1e-9


@dataclass(frozen=True)
class CrowdSpec:
    """
    Especificación de una multitud sintética
    Args:
        pi_star: Prior de clases verdadero (K,)
        gamma_star: Matrices de confusión (M, K, K), filas estocásticas
        mu: Probabilidad de respuesta por anotador (M,), en (0, 1]
    """
    n_items: int
    n_annotators: int
    n_classes: int
    pi_star: np.ndarray
    gamma_star: np.ndarray
    mu: np.ndarray
    seed: int = 0

    def __post_init__(self):
        pi_star = np.array(self.pi_star, dtype=float)
        gamma_star = np.array(self.gamma_star, dtype=float)
        mu = np.array(self.mu, dtype=float)
        k, m = self.n_classes, self.n_annotators
        if k < 2 or m < 1 or self.n_items < 1:
            raise NumericDomainError("se requieren N >= 1, M >= 1 y K >= 2")
        if pi_star.shape != (k,) or gamma_star.shape != (m, k, k) or mu.shape != (m,):
            raise NumericDomainError("dimensiones inconsistentes en CrowdSpec")
        if not is_prob_vector(pi_star, _ROW_TOL):
            raise NumericDomainError("pi_star no es un vector de probabilidad")
        if not is_prob_vector(gamma_star, _ROW_TOL):
            raise NumericDomainError("las filas de gamma_star deben sumar 1")
        if np.any(mu <= 0) or np.any(mu > 1):
            raise NumericDomainError("mu debe estar en (0, 1]")
        object.__setattr__(self, 'pi_star', pi_star)
        object.__setattr__(self, 'gamma_star', gamma_star)
        object.__setattr__(self, 'mu', mu)

    @property
    def rho_pi(self):
        return float(self.pi_star.min())

    @property
    def rho_gamma(self):
        return float(self.gamma_star.min())

    def item_ids(self):
        return tuple(f"i{n}" for n in range(self.n_items))

    def annotator_ids(self):
        return tuple(f"w{m}" for m in range(self.n_annotators))

    def to_dict(self):
        return {
            'N': self.n_items,
            'M': self.n_annotators,
            'K': self.n_classes,
            'pi_star': self.pi_star.tolist(),
            'gamma_star': self.gamma_star.tolist(),
            'mu': self.mu.tolist(),
            'seed': int(self.seed),
            'rho_pi': self.rho_pi,
            'rho_gamma': self.rho_gamma,
            'item_ids': list(self.item_ids()),
            'annotator_ids': list(self.annotator_ids()),
        }

    @classmethod
    def from_dict(cls, payload):
        return cls(
            n_items=int(payload['N']),
            n_annotators=int(payload['M']),
            n_classes=int(payload['K']),
            pi_star=payload['pi_star'],
            gamma_star=payload['gamma_star'],
            mu=payload['mu'],
            seed=int(payload.get('seed', 0)),
        )


def _categorical(rng_uniforms, cdf_rows):
    """Muestreo por CDF inversa: un uniforme por fila de CDF"""
    draws = (rng_uniforms[:, None] >= cdf_rows).sum(axis=1)
    return np.minimum(draws, cdf_rows.shape[1] - 1)


def generate(spec):
    """
    Genera respuestas y verdad de terreno a partir de una CrowdSpec
    Una semilla raíz se divide en flujos independientes (verdad, máscara, etiquetas),
    con un subflujo por anotador, de modo que cambiar N no altera al resto.
    Returns:
        (ResponseMatrix, GroundTruth)
    """
    root = np.random.SeedSequence(int(spec.seed))
    truth_seq, mask_seq, label_seq = root.spawn(3)

    truth_rng = np.random.default_rng(truth_seq)
    pi_cdf = np.cumsum(spec.pi_star)
    truth = _categorical(truth_rng.random(spec.n_items), np.broadcast_to(pi_cdf, (spec.n_items, spec.n_classes))) + 1

    item_rows, annotator_rows, label_rows = [], [], []
    for m, (mask_child, label_child) in enumerate(zip(mask_seq.spawn(spec.n_annotators),
                                                       label_seq.spawn(spec.n_annotators))):
        responds = np.random.default_rng(mask_child).random(spec.n_items) < spec.mu[m]
        uniforms = np.random.default_rng(label_child).random(spec.n_items)
        cdf = np.cumsum(spec.gamma_star[m], axis=1)[truth - 1]
        emitted = _categorical(uniforms, cdf) + 1
        items = np.flatnonzero(responds)
        item_rows.append(items)
        annotator_rows.append(np.full(items.size, m))
        label_rows.append(emitted[items])

    item_idx = np.concatenate(item_rows) if item_rows else np.zeros(0, dtype=np.int64)
    order = np.lexsort((np.concatenate(annotator_rows), item_idx))
    responses = ResponseMatrix(
        n_items=spec.n_items,
        n_annotators=spec.n_annotators,
        n_classes=spec.n_classes,
        item_idx=item_idx[order],
        annotator_idx=np.concatenate(annotator_rows)[order],
        labels=np.concatenate(label_rows)[order],
        item_ids=spec.item_ids(),
        annotator_ids=spec.annotator_ids(),
    )
    logger.debug("multitud sintética: N=%d M=%d K=%d respuestas=%d",
                 spec.n_items, spec.n_annotators, spec.n_classes, responses.n_responses)
    return responses, GroundTruth(truth, item_ids=spec.item_ids())


def diag_dominant_spec(n_items, n_annotators, n_classes, diag, seed=0, mu=1.0, pi_star=None):
    """
    CrowdSpec con matrices de confusión de diagonal `diag` y el resto repartido
    Args:
        diag: Probabilidad de acierto, en (1/K, 1]
        mu: Tasa de respuesta común (o vector por anotador)
        pi_star: Prior de clases (uniforme por defecto)
    """
    if not (1.0 / n_classes < diag <= 1.0):
        raise NumericDomainError(f"diag={diag} debe estar en (1/K, 1] con K={n_classes}")
    off = (1.0 - diag) / (n_classes - 1)
    matrix = np.full((n_classes, n_classes), off)
    np.fill_diagonal(matrix, diag)
    gamma_star = np.broadcast_to(matrix, (n_annotators, n_classes, n_classes)).copy()
    if pi_star is None:
        pi_star = np.full(n_classes, 1.0 / n_classes)
    return CrowdSpec(
        n_items=n_items,
        n_annotators=n_annotators,
        n_classes=n_classes,
        pi_star=pi_star,
        gamma_star=gamma_star,
        mu=np.broadcast_to(np.asarray(mu, dtype=float), (n_annotators,)).copy(),
        seed=seed,
    )


def heterogeneous_spec(n_items, n_classes, diags, seed=0, mu=1.0, pi_star=None):
    """CrowdSpec con una diagonal distinta por anotador"""
    diags = np.asarray(diags, dtype=float)
    if diags.ndim != 1 or diags.size == 0:
        raise NumericDomainError("se necesita al menos una diagonal")
    base = diag_dominant_spec(n_items, diags.size, n_classes, float(diags.max()), seed=seed, mu=mu,
                              pi_star=pi_star)
    gamma_star = np.empty_like(base.gamma_star)
    for m, diag in enumerate(diags):
        gamma_star[m] = diag_dominant_spec(1, 1, n_classes, float(diag)).gamma_star[0]
    return CrowdSpec(n_items, diags.size, n_classes, base.pi_star, gamma_star, base.mu, seed)

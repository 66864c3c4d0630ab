"""
Estructuras de datos del modelo: respuestas, posteriores y priors
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from utils.constants import PROB_TOL
from utils.exceptions import InputFormatError, NumericDomainError, PreconditionError
from utils.helpers import hard_labels
from utils.numerics import digamma, is_prob_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResponseMatrix:
    """
    Matriz dispersa M x N de respuestas de anotadores (almacenamiento por coordenadas)
    La ausencia de una entrada codifica "sin respuesta".
    """
    n_items: int
    n_annotators: int
    n_classes: int
    item_idx: np.ndarray
    annotator_idx: np.ndarray
    labels: np.ndarray
    item_ids: tuple = ()
    annotator_ids: tuple = ()

    def __post_init__(self):
        item_idx = np.asarray(self.item_idx, dtype=np.int64)
        annotator_idx = np.asarray(self.annotator_idx, dtype=np.int64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if not (item_idx.shape == annotator_idx.shape == labels.shape) or item_idx.ndim != 1:
            raise PreconditionError("item_idx, annotator_idx y labels deben ser vectores de igual largo")
        if self.n_classes < 2:
            raise PreconditionError(f"se necesitan al menos 2 clases (K={self.n_classes})")
        if labels.size:
            if labels.min() < 1 or labels.max() > self.n_classes:
                raise PreconditionError(f"etiquetas fuera de 1..{self.n_classes}")
            if item_idx.min() < 0 or item_idx.max() >= self.n_items:
                raise PreconditionError("índice de ítem fuera de rango")
            if annotator_idx.min() < 0 or annotator_idx.max() >= self.n_annotators:
                raise PreconditionError("índice de anotador fuera de rango")
            keys = annotator_idx * max(self.n_items, 1) + item_idx
            if np.unique(keys).size != keys.size:
                raise PreconditionError("un anotador respondió dos veces al mismo ítem")

        item_ids = tuple(self.item_ids) or tuple(str(n) for n in range(self.n_items))
        annotator_ids = tuple(self.annotator_ids) or tuple(str(m) for m in range(self.n_annotators))
        if len(item_ids) != self.n_items or len(annotator_ids) != self.n_annotators:
            raise PreconditionError("los mapas de identificadores no coinciden con N o M")

        for array in (item_idx, annotator_idx, labels):
            array.setflags(write=False)
        object.__setattr__(self, 'item_idx', item_idx)
        object.__setattr__(self, 'annotator_idx', annotator_idx)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'item_ids', item_ids)
        object.__setattr__(self, 'annotator_ids', annotator_ids)

    @classmethod
    def from_records(cls, records, n_classes=None, item_ids=None, item_order=None, annotator_order=None):
        """
        Construye la matriz desde tripletas (item, anotador, etiqueta)
        Args:
            records: Iterable de (item_id, annotator_id, label); label 0 se ignora
            n_classes: K configurado (si None, el máximo observado)
            item_ids: Ítems adicionales a incluir aunque no tengan respuestas
            item_order, annotator_order: Identificadores que ocupan los primeros
                índices, en ese orden, respondan o no
        Returns:
            ResponseMatrix con índices densos: primero el orden dado, luego la
            primera aparición y al final los ítems adicionales
        """
        item_index = {str(item): n for n, item in enumerate(item_order or ())}
        annotator_index = {str(annotator): m for m, annotator in enumerate(annotator_order or ())}
        if len(item_index) != len(item_order or ()) or len(annotator_index) != len(annotator_order or ()):
            raise PreconditionError("identificadores repetidos en el orden dado")
        rows = []
        for item, annotator, label in records:
            label = int(label)
            if label == 0:
                continue
            n = item_index.setdefault(str(item), len(item_index))
            m = annotator_index.setdefault(str(annotator), len(annotator_index))
            rows.append((n, m, label))
        for item in item_ids or ():
            item_index.setdefault(str(item), len(item_index))

        observed_k = max((label for _, _, label in rows), default=0)
        k = resolve_n_classes(n_classes, observed_k)
        arr = np.array(rows, dtype=np.int64).reshape(-1, 3)
        return cls(
            n_items=len(item_index),
            n_annotators=len(annotator_index),
            n_classes=k,
            item_idx=arr[:, 0],
            annotator_idx=arr[:, 1],
            labels=arr[:, 2],
            item_ids=tuple(item_index),
            annotator_ids=tuple(annotator_index),
        )

    @property
    def n_responses(self):
        return int(self.labels.size)

    def to_records(self):
        """Tripletas (item_id, annotator_id, label) en el orden almacenado"""
        return [
            (self.item_ids[n], self.annotator_ids[m], int(label))
            for n, m, label in zip(self.item_idx, self.annotator_idx, self.labels)
        ]

    def responses_per_item(self):
        return np.bincount(self.item_idx, minlength=self.n_items)

    def vote_counts(self):
        """Histograma (N, K) de respuestas por ítem"""
        counts = np.zeros((self.n_items, self.n_classes))
        np.add.at(counts, (self.item_idx, self.labels - 1), 1.0)
        return counts

    def dense(self):
        """Matriz densa (M, N) con 0 como "sin respuesta" """
        out = np.zeros((self.n_annotators, self.n_items), dtype=np.int64)
        out[self.annotator_idx, self.item_idx] = self.labels
        return out

    def permuted(self, item_order):
        """
        Copia con los ítems reordenados: el ítem nuevo i es el viejo item_order[i]
        """
        item_order = np.asarray(item_order, dtype=np.int64)
        new_position = np.empty_like(item_order)
        new_position[item_order] = np.arange(item_order.size)
        return ResponseMatrix(
            n_items=self.n_items,
            n_annotators=self.n_annotators,
            n_classes=self.n_classes,
            item_idx=new_position[self.item_idx],
            annotator_idx=self.annotator_idx,
            labels=self.labels,
            item_ids=tuple(self.item_ids[i] for i in item_order),
            annotator_ids=self.annotator_ids,
        )

    def __eq__(self, other):
        if not isinstance(other, ResponseMatrix):
            return NotImplemented
        return (
            (self.n_items, self.n_annotators, self.n_classes) ==
            (other.n_items, other.n_annotators, other.n_classes)
            and self.item_ids == other.item_ids
            and self.annotator_ids == other.annotator_ids
            and np.array_equal(self.item_idx, other.item_idx)
            and np.array_equal(self.annotator_idx, other.annotator_idx)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


def resolve_n_classes(configured, observed):
    """
    K efectivo: el configurado si existe, si no el máximo observado
    Se avisa cuando ambos no coinciden.
    """
    if configured is None:
        return max(int(observed), 2)
    configured = int(configured)
    if observed > configured:
        raise InputFormatError(f"etiqueta {observed} fuera de 1..{configured}")
    if observed and observed != configured:
        logger.warning("K configurado (%d) difiere del máximo observado (%d)", configured, observed)
    return configured


@dataclass(frozen=True)
class LabelPosterior:
    """Matriz N x K fila-estocástica con q(y_n = k)"""
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 2:
            raise PreconditionError("el posterior debe ser una matriz (N, K)")
        if probs.size and not is_prob_vector(probs, PROB_TOL):
            raise NumericDomainError("las filas del posterior deben sumar 1")
        probs.setflags(write=False)
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def uniform(cls, n_items, n_classes):
        return cls(np.full((n_items, n_classes), 1.0 / n_classes))

    @property
    def n_items(self):
        return self.probs.shape[0]

    @property
    def n_classes(self):
        return self.probs.shape[1]

    def hard_labels(self):
        return hard_labels(self.probs)


@dataclass(frozen=True)
class PriorConfig:
    """
    Priors de Dirichlet: alpha0 (K,) sobre pi y beta0 (M, K, K) sobre cada fila de Gamma
    """
    alpha0: np.ndarray
    beta0: np.ndarray
    shared_beta0: bool = False

    def __post_init__(self):
        alpha0 = np.array(self.alpha0, dtype=float)
        beta0 = np.array(self.beta0, dtype=float)
        if alpha0.ndim != 1 or beta0.ndim != 3 or beta0.shape[1:] != (alpha0.size, alpha0.size):
            raise NumericDomainError(
                f"dimensiones de priors inválidas: alpha0 {alpha0.shape}, beta0 {beta0.shape}")
        if not (np.all(alpha0 > 0) and np.all(beta0 > 0)):
            raise NumericDomainError("todas las entradas de los priors deben ser positivas")
        if np.any(alpha0 < 0.5):
            raise NumericDomainError("alpha0 debe ser >= 1/2 en cada clase")
        if np.any(alpha0 < 1.0):
            logger.warning("alpha0 con entradas menores que 1: %s", alpha0.tolist())
        alpha0.setflags(write=False)
        beta0.setflags(write=False)
        object.__setattr__(self, 'alpha0', alpha0)
        object.__setattr__(self, 'beta0', beta0)

    @classmethod
    def diagonal(cls, n_annotators, n_classes):
        """alpha0 = 1; fila k de beta0 con K en la posición k y unos en el resto"""
        template = np.ones((n_classes, n_classes)) + np.eye(n_classes) * (n_classes - 1)
        beta0 = np.broadcast_to(template, (n_annotators, n_classes, n_classes)).copy()
        return cls(np.ones(n_classes), beta0, shared_beta0=True)

    @classmethod
    def uniform(cls, n_annotators, n_classes):
        return cls(np.ones(n_classes), np.ones((n_annotators, n_classes, n_classes)),
                   shared_beta0=True)

    @classmethod
    def from_template(cls, alpha0, beta0_template, n_annotators):
        """Replica una plantilla beta0 (K, K) para todos los anotadores"""
        template = np.asarray(beta0_template, dtype=float)
        beta0 = np.broadcast_to(template, (n_annotators, *template.shape)).copy()
        return cls(np.asarray(alpha0, dtype=float), beta0, shared_beta0=True)

    @property
    def n_classes(self):
        return self.alpha0.size

    @property
    def n_annotators(self):
        return self.beta0.shape[0]

    @property
    def alpha0_bar(self):
        return float(self.alpha0.sum())

    def beta0_bar(self):
        """Sumas por fila de beta0, forma (M, K)"""
        return self.beta0.sum(axis=2)

    def check_compatible(self, responses):
        if (self.n_annotators, self.n_classes) != (responses.n_annotators, responses.n_classes):
            raise NumericDomainError(
                f"priors para M={self.n_annotators}, K={self.n_classes} y datos con "
                f"M={responses.n_annotators}, K={responses.n_classes}")


@dataclass(frozen=True)
class PosteriorParams:
    """Parámetros de Dirichlet posteriores: alpha (K,) y beta (M, K, K)"""
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        if not (np.all(alpha > 0) and np.all(beta > 0)):
            raise NumericDomainError("parámetros de Dirichlet no positivos")
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)

    def expected_pi(self):
        return self.alpha / self.alpha.sum()

    def expected_gamma(self):
        return self.beta / self.beta.sum(axis=2, keepdims=True)

    def check_alpha_total(self, n_items, priors, tol=1e-9):
        """sum(alpha) == N + sum(alpha0) tras cualquier paso M"""
        expected = n_items + priors.alpha0_bar
        if abs(self.alpha.sum() - expected) > tol * max(1.0, expected):
            raise NumericDomainError(
                f"sum(alpha)={self.alpha.sum():.12g} difiere de N + sum(alpha0)={expected:.12g}")


@dataclass(frozen=True)
class GroundTruth:
    """Etiquetas verdaderas 1..K; 0 marca "desconocida" """
    labels: np.ndarray
    item_ids: tuple = field(default=())

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        if np.any(labels < 0):
            raise PreconditionError("etiquetas verdaderas negativas")
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'item_ids', tuple(self.item_ids))

    @property
    def known_mask(self):
        return self.labels > 0

    @property
    def n_known(self):
        return int(self.known_mask.sum())

    def check_classes(self, n_classes):
        if self.labels.size and self.labels.max() > n_classes:
            raise PreconditionError(f"etiqueta verdadera fuera de 1..{n_classes}")


@dataclass(frozen=True)
class DatasetStats:
    n_items: int
    n_annotators: int
    n_classes: int
    mean_responses_per_annotator: float
    response_rates: np.ndarray

    def to_dict(self):
        return {
            'N': self.n_items,
            'M': self.n_annotators,
            'K': self.n_classes,
            'mean_responses_per_annotator': self.mean_responses_per_annotator,
            'response_rates': self.response_rates.tolist(),
        }


def expected_log_pi(params):
    """
    E[ln pi_k] = psi(alpha_k) - psi(sum alpha)
    """
    return digamma(params.alpha) - digamma(params.alpha.sum())


def expected_log_gamma(params, m, k):
    """
    E[ln gamma_{k,k'}^(m)] para la fila k del anotador m
    Args:
        params: PosteriorParams
        m: Índice de anotador (0-based)
        k: Índice de fila (0-based)
    """
    n_annotators, n_classes, _ = params.beta.shape
    if not (0 <= m < n_annotators and 0 <= k < n_classes):
        raise NumericDomainError(f"índices fuera de rango: m={m}, k={k}")
    row = params.beta[m, k]
    return digamma(row) - digamma(row.sum())


def expected_log_gamma_all(params):
    """Versión vectorizada: arreglo (M, K, K) de E[ln gamma]"""
    beta = params.beta
    return digamma(beta) - digamma(beta.sum(axis=2, keepdims=True))


def dataset_stats(responses):
    """
    Propiedades del conjunto de datos (N, M, K, respuestas medias por anotador)
    Returns:
        DatasetStats con la tasa de respuesta por anotador mu_m = respuestas_m / N
    """
    per_annotator = np.bincount(responses.annotator_idx, minlength=responses.n_annotators)
    mean = responses.n_responses / responses.n_annotators if responses.n_annotators else 0.0
    if responses.n_items:
        rates = per_annotator / responses.n_items
    else:
        rates = np.zeros(responses.n_annotators)
    return DatasetStats(
        n_items=responses.n_items,
        n_annotators=responses.n_annotators,
        n_classes=responses.n_classes,
        mean_responses_per_annotator=float(mean),
        response_rates=rates.astype(float),
    )

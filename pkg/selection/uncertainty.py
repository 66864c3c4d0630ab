"""
Selección de restricciones por muestreo de incertidumbre (margen mejor contra segundo mejor)
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from constraints.constraint_set import ConstraintSet, close
from data.model import LabelPosterior
from utils.exceptions import NumericDomainError, PreconditionError
from utils.helpers import canonical_pair

logger = logging.getLogger(__name__)


def bvsb(posterior_row):
    """
    Margen entre la mayor y la segunda mayor probabilidad de una fila
    Valores grandes indican que la multitud está segura.
    """
    row = np.asarray(posterior_row, dtype=float)
    if row.ndim != 1 or row.size < 2:
        raise NumericDomainError("bvsb requiere al menos 2 clases")
    top_two = np.sort(row)[-2:]
    return float(top_two[1] - top_two[0])


def bvsb_scores(posterior):
    """Margen bvsb por ítem, vector (N,)"""
    probs = posterior.probs if isinstance(posterior, LabelPosterior) else np.asarray(posterior, dtype=float)
    if probs.ndim != 2 or probs.shape[1] < 2:
        raise NumericDomainError("bvsb requiere al menos 2 clases")
    sorted_probs = np.sort(probs, axis=1)
    return sorted_probs[:, -1] - sorted_probs[:, -2]


@dataclass
class QueryPlan:
    """
    Plan de consultas: ítems inciertos, sus K compañeros seguros y los pares a consultar
    """
    uncertain: list = field(default_factory=list)
    partners: dict = field(default_factory=dict)
    queries: list = field(default_factory=list)
    n_constraints: int = 0
    uniform_fallback: bool = False

    def __len__(self):
        return len(self.queries)


def weighted_draw(rng, candidates, weights, size):
    """
    Extracciones secuenciales sin reemplazo con probabilidad proporcional al peso
    Se extrae, se retira y se renormaliza; si los pesos restantes suman cero
    las extracciones que faltan son uniformes.
    Returns:
        (elegidos, usó_uniforme)
    """
    remaining = list(candidates)
    remaining_weights = [float(w) for w in weights]
    chosen = []
    fallback = False
    for _ in range(size):
        w = np.asarray(remaining_weights)
        total = w.sum()
        if total > 0:
            pick = int(rng.choice(len(remaining), p=w / total))
        else:
            fallback = True
            pick = int(rng.integers(len(remaining)))
        chosen.append(remaining.pop(pick))
        remaining_weights.pop(pick)
    return chosen, fallback


def plan_queries(posterior, n_constraints, seed):
    """
    Elige floor(N_C / K) ítems inciertos (peso 1 - H) y, para cada uno, K compañeros
    seguros (peso H) fuera del conjunto incierto
    Args:
        posterior: LabelPosterior (de VB o del histograma de votos)
        n_constraints: Presupuesto N_C (>= K)
        seed: Semilla del generador
    Returns:
        QueryPlan
    """
    probs = posterior.probs if isinstance(posterior, LabelPosterior) else np.asarray(posterior, dtype=float)
    n_items, n_classes = probs.shape
    n_uncertain = int(n_constraints) // n_classes
    if n_constraints < n_classes:
        raise PreconditionError(f"N_C={n_constraints} debe ser al menos K={n_classes}")
    if n_items < n_uncertain + n_classes:
        raise PreconditionError(
            f"se necesitan al menos {n_uncertain + n_classes} ítems para N_C={n_constraints}")

    certainty = bvsb_scores(probs)
    rng = np.random.default_rng(seed)
    uncertain, fallback = weighted_draw(rng, range(n_items), 1.0 - certainty, n_uncertain)

    uncertain_set = set(uncertain)
    outside = [n for n in range(n_items) if n not in uncertain_set]
    partners = {}
    queries = []
    for item in uncertain:
        chosen, used_uniform = weighted_draw(rng, outside, certainty[outside], n_classes)
        fallback |= used_uniform
        partners[item] = chosen
        queries.extend((item, other) for other in chosen)

    if fallback:
        logger.warning("pesos nulos en la selección de consultas; se usó muestreo uniforme")
    return QueryPlan(uncertain=uncertain, partners=partners, queries=queries,
                     n_constraints=int(n_constraints), uniform_fallback=fallback)


def random_pairs(items, n_constraints, seed):
    """
    N_C pares distintos elegidos uniformemente entre los ítems dados
    Args:
        items: Ítems candidatos (por ejemplo, los de verdad conocida)
    Returns:
        Lista de pares canónicos en orden de extracción
    """
    items = np.asarray(items, dtype=np.int64)
    max_pairs = items.size * (items.size - 1) // 2
    if n_constraints > max_pairs:
        raise PreconditionError(f"N_C={n_constraints} supera los {max_pairs} pares posibles")
    rng = np.random.default_rng(seed)
    seen = set()
    pairs = []
    while len(pairs) < n_constraints:
        i, j = rng.choice(items.size, size=2, replace=False)
        pair = canonical_pair(items[i], items[j])
        if pair not in seen:
            seen.add(pair)
            pairs.append(pair)
    return pairs


def random_label_items(truth, n_constraints, seed):
    """
    N_C ítems con verdad conocida elegidos sin reemplazo
    Returns:
        dict item -> clase verdadera
    """
    known = np.flatnonzero(truth.known_mask)
    if n_constraints > known.size:
        raise PreconditionError(
            f"N_C={n_constraints} supera los {known.size} ítems con verdad conocida")
    rng = np.random.default_rng(seed)
    items = np.sort(rng.choice(known, size=int(n_constraints), replace=False))
    return {int(n): int(truth.labels[n]) for n in items}


def answer_queries(plan, truth):
    """
    Responde las consultas con la verdad de terreno y cierra el conjunto resultante
    Args:
        plan: QueryPlan o lista de pares
        truth: GroundTruth
    Returns:
        ConstraintSet cerrado
    Raises:
        PreconditionError listando los ítems consultados sin verdad conocida
    """
    queries = plan.queries if isinstance(plan, QueryPlan) else list(plan)
    labels = truth.labels
    unknown = sorted({n for pair in queries for n in pair if n >= labels.size or labels[n] == 0})
    if unknown:
        raise PreconditionError(f"ítems consultados sin verdad conocida: {unknown}")

    must_link, cannot_link = set(), set()
    for i, j in queries:
        target = must_link if labels[i] == labels[j] else cannot_link
        target.add(canonical_pair(i, j))
    return close(ConstraintSet(frozenset(must_link), frozenset(cannot_link)))

"""
Conjuntos de restricciones must-link / cannot-link y su clausura lógica
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import sparse

from utils.exceptions import ConstraintConflictError, PreconditionError
from utils.helpers import canonical_pair

logger = logging.getLogger(__name__)


class UnionFind:
    """Conjuntos disjuntos con compresión de caminos y unión por rango"""

    def __init__(self):
        self.parent = {}
        self.rank = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0
            return x
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        """Une los conjuntos de x e y; devuelve True si eran distintos"""
        px, py = self.find(x), self.find(y)
        if px == py:
            return False
        if self.rank[px] < self.rank[py]:
            px, py = py, px
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1
        return True

    def groups(self):
        members = defaultdict(list)
        for x in list(self.parent):
            members[self.find(x)].append(x)
        return {root: sorted(items) for root, items in members.items()}


def _canonical_set(pairs):
    out = set()
    for i, j in pairs:
        if int(i) == int(j):
            raise PreconditionError(f"restricción sobre el mismo ítem: ({i}, {j})")
        out.add(canonical_pair(i, j))
    return frozenset(out)


@dataclass(frozen=True)
class ConstraintSet:
    """
    Restricciones por pares de ítems (índices 0-based), en forma canónica i < j
    Args:
        must_link: Pares que comparten clase
        cannot_link: Pares de clases distintas
        closed: True si el conjunto es cerrado bajo las reglas de clausura
    """
    must_link: frozenset = field(default_factory=frozenset)
    cannot_link: frozenset = field(default_factory=frozenset)
    closed: bool = False

    def __post_init__(self):
        must_link = _canonical_set(self.must_link)
        cannot_link = _canonical_set(self.cannot_link)
        overlap = must_link & cannot_link
        if overlap:
            pair = min(overlap)
            raise ConstraintConflictError(f"el par {pair} es must-link y cannot-link a la vez", pair=pair)
        object.__setattr__(self, 'must_link', must_link)
        object.__setattr__(self, 'cannot_link', cannot_link)

    @property
    def n_ml(self):
        return len(self.must_link)

    @property
    def n_cl(self):
        return len(self.cannot_link)

    def __len__(self):
        return self.n_ml + self.n_cl

    def is_empty(self):
        return len(self) == 0

    def items(self):
        """Ítems involucrados en al menos una restricción"""
        out = set()
        for i, j in self.must_link | self.cannot_link:
            out.update((i, j))
        return sorted(out)

    def max_item(self):
        items = self.items()
        return items[-1] if items else -1

    def weight_matrix(self, n_items):
        """
        Matriz dispersa simétrica (N, N) con w = +1 (must-link) y -1 (cannot-link)
        """
        if self.max_item() >= n_items:
            raise PreconditionError(
                f"restricción sobre el ítem {self.max_item()} con solo {n_items} ítems")
        rows, cols, vals = [], [], []
        for pairs, weight in ((self.must_link, 1.0), (self.cannot_link, -1.0)):
            for i, j in sorted(pairs):
                rows.extend((i, j))
                cols.extend((j, i))
                vals.extend((weight, weight))
        return sparse.csr_matrix((vals, (rows, cols)), shape=(n_items, n_items))

    def to_rows(self):
        """Filas (kind, a, b) ordenadas para serializar"""
        rows = [('ML', i, j) for i, j in sorted(self.must_link)]
        rows += [('CL', i, j) for i, j in sorted(self.cannot_link)]
        return rows


def close(constraints, binary_cannot_link=False):
    """
    Clausura lógica del conjunto de restricciones
    Reglas: ML(i,j) y ML(j,k) => ML(i,k); ML(i,j) y CL(j,k) => CL(i,k).
    Con binary_cannot_link (solo válido para K = 2) además CL(i,j) y CL(j,k) => ML(i,k).
    Args:
        constraints: ConstraintSet sin conflictos directos
    Returns:
        ConstraintSet cerrado
    Raises:
        ConstraintConflictError si la clausura deriva ML y CL sobre el mismo par
    """
    components = UnionFind()
    for i, j in constraints.must_link:
        components.union(i, j)
    for i, j in constraints.cannot_link:
        components.find(i)
        components.find(j)

    if binary_cannot_link:
        # Todos los vecinos cannot-link de una componente caen en la misma clase
        changed = True
        while changed:
            changed = False
            neighbours = defaultdict(set)
            for i, j in constraints.cannot_link:
                ri, rj = components.find(i), components.find(j)
                neighbours[ri].add(rj)
                neighbours[rj].add(ri)
            for group in neighbours.values():
                group = sorted(group)
                for other in group[1:]:
                    changed |= components.union(group[0], other)

    lifted = set()
    for i, j in sorted(constraints.cannot_link):
        ri, rj = components.find(i), components.find(j)
        if ri == rj:
            raise ConstraintConflictError(
                f"la clausura deriva must-link y cannot-link para el par {(i, j)}", pair=(i, j))
        lifted.add(canonical_pair(ri, rj))

    groups = components.groups()
    must_link = set()
    for members in groups.values():
        must_link.update(combinations(members, 2))

    cannot_link = set()
    for ra, rb in lifted:
        for a in groups[ra]:
            for b in groups[rb]:
                cannot_link.add(canonical_pair(a, b))

    closed = ConstraintSet(frozenset(must_link), frozenset(cannot_link), closed=True)
    logger.debug("clausura: ML %d -> %d, CL %d -> %d",
                 constraints.n_ml, closed.n_ml, constraints.n_cl, closed.n_cl)
    return closed


def count_violations(constraints, labels):
    """
    Número de restricciones violadas N_V por un etiquetado duro
    Args:
        constraints: ConstraintSet (se cuentan los pares almacenados)
        labels: Vector de etiquetas 1..K indexado por ítem
    """
    labels = np.asarray(labels)
    if constraints.max_item() >= labels.size:
        raise PreconditionError("el etiquetado no cubre todos los ítems restringidos")
    violated = 0
    for i, j in constraints.must_link:
        violated += int(labels[i] != labels[j])
    for i, j in constraints.cannot_link:
        violated += int(labels[i] == labels[j])
    return violated


def derive_from_labels(label_constraints):
    """
    Restricciones por pares implicadas por restricciones de etiqueta
    Args:
        label_constraints: Mapeo item -> clase (o iterable de pares (item, clase))
    Returns:
        ConstraintSet cerrado: ML entre ítems de la misma clase, CL entre clases distintas
    """
    label_constraints = as_label_map(label_constraints)
    by_class = defaultdict(list)
    for item, label in sorted(label_constraints.items()):
        by_class[label].append(item)

    must_link = set()
    for members in by_class.values():
        must_link.update(combinations(members, 2))
    cannot_link = set()
    for class_a, class_b in combinations(sorted(by_class), 2):
        for a in by_class[class_a]:
            for b in by_class[class_b]:
                cannot_link.add(canonical_pair(a, b))
    return ConstraintSet(frozenset(must_link), frozenset(cannot_link), closed=True)


def as_label_map(label_constraints):
    """
    Normaliza restricciones de etiqueta a un dict item -> clase
    Raises:
        ConstraintConflictError si un ítem recibe dos clases distintas
    """
    if hasattr(label_constraints, 'items'):
        pairs = label_constraints.items()
    else:
        pairs = label_constraints
    out = {}
    for item, label in pairs:
        item, label = int(item), int(label)
        if out.get(item, label) != label:
            raise ConstraintConflictError(
                f"el ítem {item} tiene dos restricciones de etiqueta ({out[item]} y {label})",
                pair=(item, item))
        out[item] = label
    return out

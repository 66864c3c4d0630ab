"""
Evaluación de etiquetas fusionadas contra la verdad de terreno
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from sklearn.metrics import accuracy_score, precision_recall_fscore_support

from utils.exceptions import NumericDomainError

logger = logging.getLogger(__name__)


@dataclass
class ScoreCard:
    accuracy: float
    micro_f1: float
    macro_f1: float
    per_class: dict = field(default_factory=dict)
    n_evaluated: int = 0
    absent_classes: list = field(default_factory=list)

    def to_dict(self):
        return {
            'accuracy': self.accuracy,
            'micro_f1': self.micro_f1,
            'macro_f1': self.macro_f1,
            'per_class': {str(k): v for k, v in self.per_class.items()},
            'n_evaluated': self.n_evaluated,
            'absent_classes': list(self.absent_classes),
        }


def score(pred, truth, n_classes=None):
    """
    Exactitud y F-score micro / macro sobre los ítems con verdad conocida
    Args:
        pred: Etiquetas predichas 1..K (N,)
        truth: GroundTruth (0 = desconocida)
        n_classes: K; por defecto el máximo entre predicciones y verdad
    Returns:
        ScoreCard; las clases ausentes de ambos lados aportan F1 = 0 al macro
    """
    pred = np.asarray(pred, dtype=np.int64)
    labels = truth.labels
    if pred.shape != labels.shape:
        raise NumericDomainError(f"predicciones {pred.shape} y verdad {labels.shape} de distinto largo")
    known = truth.known_mask
    if not known.any():
        raise NumericDomainError("no hay ítems con verdad conocida para evaluar")

    y_true, y_pred = labels[known], pred[known]
    k = n_classes or int(max(y_true.max(), y_pred.max()))
    classes = list(range(1, k + 1))
    precision, recall, f1, support = precision_recall_fscore_support(
        y_true, y_pred, labels=classes, average=None, zero_division=0)

    predicted = np.bincount(y_pred, minlength=k + 1)[1:]
    absent = [c for c, s, p in zip(classes, support, predicted) if s == 0 and p == 0]
    if absent:
        logger.warning("clases ausentes en predicción y verdad: %s", absent)

    correct = int(np.sum(y_true == y_pred))
    per_class = {
        c: {'precision': float(p), 'recall': float(r), 'f1': float(f), 'support': int(s)}
        for c, p, r, f, s in zip(classes, precision, recall, f1, support)
    }
    return ScoreCard(
        accuracy=float(accuracy_score(y_true, y_pred)),
        # TP agregado = aciertos y FP = FN = errores, así que 2TP/(2TP+FP+FN) = aciertos/n
        micro_f1=correct / y_true.size,
        macro_f1=float(np.mean(f1)),
        per_class=per_class,
        n_evaluated=int(y_true.size),
        absent_classes=absent,
    )

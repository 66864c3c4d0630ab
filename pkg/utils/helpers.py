"""
Funciones auxiliares compartidas por los módulos
"""
import numpy as np


def hard_labels(probs):
    """
    Etiquetas duras (1..K) por argmax de cada fila
    np.argmax devuelve el primer máximo, así que los empates van a la clase menor
    """
    probs = np.atleast_2d(np.asarray(probs, dtype=float))
    return np.argmax(probs, axis=1).astype(np.int64) + 1


def canonical_pair(i, j):
    """Par no ordenado en forma canónica (menor, mayor)"""
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


def derive_seed(root_seed, *keys):
    """
    Semilla derivada, estable, para una corrida identificada por claves enteras
    Args:
        root_seed: Semilla raíz de 64 bits
        keys: Enteros que identifican la corrida (protocolo, N_C, repetición...)
    """
    sequence = np.random.SeedSequence([int(root_seed) % (2 ** 63), *[int(k) for k in keys]])
    return int(sequence.generate_state(1, dtype=np.uint64)[0] % (2 ** 63))


def one_hot(labels, n_classes):
    """Codificación one-hot (N, K) de etiquetas 1..K"""
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, n_classes))
    out[np.arange(labels.size), labels - 1] = 1.0
    return out

"""
Funciones especiales y aritmética estable en espacio logarítmico
"""
import numpy as np
from scipy.special import logsumexp, rel_entr

from .constants import KL_SENTINEL, PROB_TOL
from .exceptions import NumericDomainError

# Coeficientes de la serie asintótica de digamma en potencias de 1/x^2
_ASYMPTOTIC_COEFFS = (1.0 / 12, 1.0 / 120, 1.0 / 252, 1.0 / 240, 1.0 / 132, 691.0 / 32760)
_SHIFT_THRESHOLD = 6.0


def digamma(x):
    """
    Función digamma psi(x) para x > 0
    Args:
        x: Escalar o arreglo de reales positivos
    Returns:
        psi(x) con el mismo tipo que la entrada (float o ndarray)
    """
    values = np.asarray(x, dtype=float)
    if values.size and not np.all(values > 0):
        raise NumericDomainError("digamma requiere argumentos estrictamente positivos")

    shifted = values.copy()
    result = np.zeros_like(shifted)

    # psi(x) = psi(x + 1) - 1/x hasta llevar todo por encima del umbral
    small = shifted < _SHIFT_THRESHOLD
    while np.any(small):
        result[small] -= 1.0 / shifted[small]
        shifted[small] += 1.0
        small = shifted < _SHIFT_THRESHOLD

    inv = 1.0 / shifted
    inv2 = inv * inv
    series = np.zeros_like(shifted)
    for coeff in reversed(_ASYMPTOTIC_COEFFS):
        series = inv2 * (coeff - series)
    result += np.log(shifted) - 0.5 * inv - series

    if np.ndim(x) == 0:
        return float(result)
    return result


def log_sum_exp(v, axis=None):
    """
    ln(sum(exp(v))) invariante a desplazamientos
    Args:
        v: Vector (o matriz si se indica axis)
        axis: Eje de reducción opcional
    """
    values = np.asarray(v, dtype=float)
    if values.size == 0:
        raise NumericDomainError("log_sum_exp de un vector vacío")
    result = logsumexp(values, axis=axis)
    if np.ndim(result) == 0:
        return float(result)
    return result


def normalize_log_rows(log_weights):
    """
    Softmax por filas de una matriz de log-pesos (N, K)
    Returns:
        Matriz fila-estocástica, renormalizada tras exponenciar
    """
    log_weights = np.atleast_2d(np.asarray(log_weights, dtype=float))
    if log_weights.size == 0:
        return log_weights.copy()
    probs = np.exp(log_weights - log_sum_exp(log_weights, axis=1)[:, None])
    probs /= probs.sum(axis=1, keepdims=True)
    return probs


def kl_divergence(p, q):
    """
    Divergencia de Kullback-Leibler KL(p || q)
    Args:
        p, q: Vectores de probabilidad de igual longitud
    Returns:
        Valor no negativo; KL_SENTINEL si q se anula sobre el soporte de p
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise NumericDomainError(f"longitudes distintas en KL: {p.shape} vs {q.shape}")

    terms = rel_entr(p, q)
    if np.any(np.isinf(terms)):
        return KL_SENTINEL
    # rel_entr puede dejar -0.0 o residuos negativos de redondeo
    return max(float(np.sum(terms)), 0.0)


def is_prob_vector(v, tol=PROB_TOL):
    """
    Indica si v es un vector de probabilidad válido
    Con una matriz se exige lo mismo a cada fila (último eje).
    """
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.shape[-1] == 0:
        return False
    return bool(np.all(v >= -tol) and np.all(v <= 1 + tol)
                and np.all(np.abs(v.sum(axis=-1) - 1.0) <= tol))

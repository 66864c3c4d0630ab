"""
Constantes y valores por defecto del proyecto
"""

# Iteraciones y convergencia de los algoritmos de fusión
DEFAULT_MAX_ITERS = 100
DEFAULT_TOL = 1e-6

# Tolerancia absoluta para filas de probabilidad
PROB_TOL = 1e-12

# Valor finito usado cuando KL(p, q) diverge (q_i = 0 sobre el soporte de p)
KL_SENTINEL = 1e300

# Centinela de f_pi / f_gamma cuando el logaritmo no está definido
LOG_SENTINEL = -1e300

# Cota de parámetro con denominador no positivo, o término de nu desbordado
BOUND_SENTINEL = 1e300

# Tipos de exponente U para la cota de etiquetas
EXPONENT_FORMS = ('theorem_form', 'lemma_form')

# Suavizado aditivo de los conteos en el paso M de Dawid-Skene
DS_SMOOTHING = 1e-10

# Rejilla de eta usada en los experimentos
DEFAULT_ETA_GRID = (0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 100.0, 500.0)

INIT_METHODS = ('majority_vote', 'given_posterior', 'uniform')

METHODS = ('mv', 'ds', 'vb', 'vb-lc', 'vb-ilc')

PROTOCOLS = ('random-constraints', 'bvsb-constraints', 'label-derived')

# Nombres de las variables de entorno
THREADS_ENV = 'CROWDFUSE_THREADS'
LOG_LEVEL_ENV = 'CROWDFUSE_LOG_LEVEL'

RESULT_SCHEMA_VERSION = '1.0'

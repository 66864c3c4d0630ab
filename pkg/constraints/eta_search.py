"""
Búsqueda en rejilla del peso eta minimizando las restricciones violadas
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from aggregators.base_aggregator import FitOptions
from aggregators.vb_ilc import vb_ilc_fit
from config import get_worker_count
from utils.constants import DEFAULT_ETA_GRID
from utils.exceptions import PreconditionError

logger = logging.getLogger(__name__)


@dataclass
class EtaSearchResult:
    best_eta: float
    table: list = field(default_factory=list)
    best_fit: object = None

    def table_dicts(self):
        return [{'eta': eta, 'n_v': n_v} for eta, n_v in self.table]


def eta_search(responses, priors, constraints, candidate_etas=DEFAULT_ETA_GRID, options=None, workers=None):
    """
    Ajusta VB-ILC una vez por cada eta candidato y elige el de menor N_V
    Todos los candidatos parten de la misma inicialización; los empates se
    resuelven a favor del eta más pequeño.
    Args:
        candidate_etas: Lista ordenada no vacía de valores de eta
        options: FitOptions base (su eta se ignora)
        workers: Hilos a usar (por defecto CROWDFUSE_THREADS)
    Returns:
        EtaSearchResult con la tabla (eta, N_V) en el orden de los candidatos
    """
    candidates = [float(eta) for eta in candidate_etas]
    if not candidates:
        raise PreconditionError("la lista de eta candidatos está vacía")
    options = options or FitOptions()
    workers = workers or get_worker_count()

    def run(eta):
        return vb_ilc_fit(responses, priors, constraints, options.with_eta(eta))

    if workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            fits = list(executor.map(run, candidates))
    else:
        fits = [run(eta) for eta in candidates]

    table = [(eta, fit.n_v) for eta, fit in zip(candidates, fits)]
    best_index = min(range(len(candidates)), key=lambda i: (fits[i].n_v, candidates[i]))
    best_eta = candidates[best_index]
    logger.info("eta elegido %g con N_V=%d", best_eta, fits[best_index].n_v)
    return EtaSearchResult(best_eta=best_eta, table=table, best_fit=fits[best_index])

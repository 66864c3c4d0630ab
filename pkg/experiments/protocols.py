"""
Protocolos de experimentos: restricciones aleatorias, por incertidumbre y derivadas de etiquetas
Cada corrida (protocolo, N_C, repetición) ajusta VB-LC con N_C etiquetas y VB-ILC con
las restricciones del protocolo; MV, DS y VB se ajustan una sola vez como referencia.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from aggregators import FitOptions, ds_em_fit, majority_vote, vb_lc_fit, vbem_fit
from constraints.constraint_set import ConstraintSet, derive_from_labels
from metrics.scoring import score
from selection.uncertainty import answer_queries, plan_queries, random_label_items, random_pairs
from utils.constants import DEFAULT_ETA_GRID, PROTOCOLS
from utils.exceptions import PreconditionError
from utils.helpers import derive_seed
from .pipeline import run_vb_ilc

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['protocol', 'n_constraints', 'repeat', 'method', 'macro_f1', 'micro_f1',
                  'accuracy', 'n_v', 'eta', 'n_ml', 'n_cl', 'seed']
METHOD_ORDER = ['mv', 'ds', 'vb', 'vb-lc', 'vb-ilc']


def _row(protocol, n_constraints, repeat, method, card, seed, n_v=None, eta=None, constraints=None):
    return {
        'protocol': protocol,
        'n_constraints': n_constraints,
        'repeat': repeat,
        'method': method,
        'macro_f1': card.macro_f1,
        'micro_f1': card.micro_f1,
        'accuracy': card.accuracy,
        'n_v': n_v,
        'eta': eta,
        'n_ml': constraints.n_ml if constraints is not None else None,
        'n_cl': constraints.n_cl if constraints is not None else None,
        'seed': seed,
    }


def protocol_constraints(protocol, n_constraints, truth, selection_posterior, label_map, seed):
    """ConstraintSet cerrado del protocolo para una corrida"""
    if n_constraints == 0:
        return ConstraintSet(closed=True)
    if protocol == 'random-constraints':
        pairs = random_pairs(np.flatnonzero(truth.known_mask), n_constraints, seed)
        return answer_queries(pairs, truth)
    if protocol == 'bvsb-constraints':
        return answer_queries(plan_queries(selection_posterior, n_constraints, seed), truth)
    if protocol == 'label-derived':
        return derive_from_labels(label_map)
    raise PreconditionError(f"protocolo desconocido: {protocol}")


class ExperimentRunner:
    """Ejecuta el barrido de protocolos sobre un conjunto de datos con verdad"""

    def __init__(self, responses, truth, priors, options=None, eta_grid=DEFAULT_ETA_GRID,
                 selection_source='vb', workers=1):
        if truth is None or not truth.n_known:
            raise PreconditionError("los experimentos requieren verdad de terreno")
        self.responses = responses
        self.truth = truth
        self.priors = priors
        self.options = options or FitOptions()
        self.eta_grid = list(eta_grid)
        self.selection_source = selection_source
        self.workers = max(1, int(workers))
        self.baselines = {}

    def fit_baselines(self):
        """MV, DS y VB una sola vez; VB también alimenta la selección por incertidumbre"""
        rm = self.responses
        self.baselines = {
            'mv': majority_vote(rm, self.options.seed),
            'ds': ds_em_fit(rm, self.options),
            'vb': vbem_fit(rm, self.priors, self.options),
        }
        return self.baselines

    def selection_posterior(self):
        source = 'mv' if self.selection_source == 'mv' else 'vb'
        return self.baselines[source].posterior

    def run_one(self, protocol, n_constraints, repeat):
        """Filas de una corrida (protocolo, N_C, repetición)"""
        seed = derive_seed(self.options.seed, PROTOCOLS.index(protocol), n_constraints, repeat)
        vb_fit = self.baselines['vb']
        rows = [
            _row(protocol, n_constraints, repeat, method, self.scorecard(self.baselines[method]), seed)
            for method in ('mv', 'ds', 'vb')
        ]

        label_map = random_label_items(self.truth, n_constraints, seed) if n_constraints else {}
        constraints = protocol_constraints(protocol, n_constraints, self.truth,
                                           self.selection_posterior(), label_map, seed)
        start = self.options.with_posterior(vb_fit.posterior)

        if label_map:
            lc_fit = vb_lc_fit(self.responses, self.priors, label_map, start)
        else:
            lc_fit = vb_fit
        rows.append(_row(protocol, n_constraints, repeat, 'vb-lc', self.scorecard(lc_fit), seed))

        if constraints.is_empty():
            ilc_fit, extras = vb_fit, {'n_v': 0}
        else:
            ilc_fit, extras = run_vb_ilc(self.responses, self.priors, constraints, self.options, vb_fit,
                                         eta_grid=self.eta_grid, workers=1)
        rows.append(_row(protocol, n_constraints, repeat, 'vb-ilc', self.scorecard(ilc_fit), seed,
                         n_v=extras['n_v'], eta=ilc_fit.eta, constraints=constraints))
        logger.info("%s N_C=%d rep=%d: N_V=%s", protocol, n_constraints, repeat, extras['n_v'])
        return rows

    def scorecard(self, fit):
        return score(fit.hard_labels, self.truth, self.responses.n_classes)

    def run(self, protocols, sweep, repeats):
        """
        Barrido completo
        Returns:
            DataFrame ordenado por (protocolo, N_C, repetición, método)
        """
        for protocol in protocols:
            if protocol not in PROTOCOLS:
                raise PreconditionError(f"protocolo desconocido: {protocol}")
        self.fit_baselines()
        jobs = [(p, int(nc), r) for p in protocols for nc in sweep for r in range(repeats)]
        if self.workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                chunks = list(executor.map(lambda job: self.run_one(*job), jobs))
        else:
            chunks = [self.run_one(*job) for job in jobs]

        df = pd.DataFrame([row for chunk in chunks for row in chunk], columns=RESULT_COLUMNS)
        df['method_rank'] = df['method'].map(METHOD_ORDER.index)
        df['protocol_rank'] = df['protocol'].map(PROTOCOLS.index)
        df = df.sort_values(['protocol_rank', 'n_constraints', 'repeat', 'method_rank'], kind='mergesort')
        return df.drop(columns=['method_rank', 'protocol_rank']).reset_index(drop=True)


def summarize(df):
    """Media por (protocolo, N_C, método) de F-scores y N_V"""
    return (df.groupby(['protocol', 'n_constraints', 'method'], sort=True)
              [['macro_f1', 'micro_f1', 'n_v']].mean()
              .reset_index())

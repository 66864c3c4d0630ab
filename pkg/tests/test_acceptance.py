"""
Corridas Monte Carlo sobre multitudes sintéticas
Se seleccionan con `pytest -m slow` y se excluyen con `-m "not slow"`.
"""
import logging

import numpy as np
import pytest

from aggregators import FitOptions, majority_vote, vb_lc_fit, vbem_fit
from bounds import BoundInputs, label_error_bound
from constraints import derive_from_labels
from data.model import PriorConfig, ResponseMatrix
from data.synth import diag_dominant_spec, generate
from experiments.pipeline import run_vb_ilc
from experiments.protocols import protocol_constraints
from metrics import score
from selection import random_label_items
from utils.helpers import one_hot

logger = logging.getLogger(__name__)

pytestmark = pytest.mark.slow

N_SEEDS = 20


def crowd(seed, n_items=500, n_annotators=10, n_classes=3, diag=0.65):
    spec = diag_dominant_spec(n_items, n_annotators, n_classes, diag, seed=seed)
    responses, truth = generate(spec)
    return spec, responses, truth, PriorConfig.diagonal(n_annotators, n_classes)


def test_random_constraints_help():
    scores = {'mv': [], 'vb': [], 'vb-ilc': []}
    for seed in range(N_SEEDS):
        _, responses, truth, priors = crowd(seed)
        options = FitOptions(seed=seed)
        vb_fit = vbem_fit(responses, priors, options)
        constraints = protocol_constraints('random-constraints', 150, truth, None, {}, seed)
        ilc_fit, _ = run_vb_ilc(responses, priors, constraints, options, vb_fit, workers=1)
        for method, fit in (('mv', majority_vote(responses)), ('vb', vb_fit), ('vb-ilc', ilc_fit)):
            scores[method].append(score(fit.hard_labels, truth, 3).macro_f1)

    means = {method: float(np.mean(values)) for method, values in scores.items()}
    logger.info("macro-F1 medio: %s", means)
    # anotadores idénticos: VB pondera igual que MV
    assert means['vb'] >= means['mv'] - 0.005
    assert means['vb-ilc'] >= means['vb'] + 0.01


def test_label_derived_matches_label_constraints():
    for seed in range(3):
        _, responses, truth, priors = crowd(seed)
        options = FitOptions(seed=seed)
        vb_fit = vbem_fit(responses, priors, options)
        labels = random_label_items(truth, 100, seed)
        lc_fit = vb_lc_fit(responses, priors, labels, options.with_posterior(vb_fit.posterior))
        ilc_fit, extras = run_vb_ilc(responses, priors, derive_from_labels(labels), options, vb_fit, workers=1)
        agreement = float(np.mean(lc_fit.hard_labels == ilc_fit.hard_labels))
        assert agreement >= 0.98
        assert extras['n_v'] == 0


def test_bvsb_violates_no_more_than_random():
    violations = {'random-constraints': [], 'bvsb-constraints': []}
    for seed in range(N_SEEDS):
        _, responses, truth, priors = crowd(seed)
        options = FitOptions(seed=seed)
        vb_fit = vbem_fit(responses, priors, options)
        for protocol in violations:
            constraints = protocol_constraints(protocol, 100, truth, vb_fit.posterior, {}, seed)
            _, extras = run_vb_ilc(responses, priors, constraints, options, vb_fit, workers=1)
            violations[protocol].append(extras['n_v'])
    means = {protocol: float(np.mean(values)) for protocol, values in violations.items()}
    logger.info("N_V medio: %s", means)
    assert means['bvsb-constraints'] <= means['random-constraints']


def test_label_bound_holds_when_informative():
    held, informative, vacuous = 0, 0, 0
    for seed in range(50):
        spec, responses, truth, priors = crowd(seed, n_items=300, n_annotators=30, n_classes=4, diag=0.9)
        fit = vbem_fit(responses, priors, FitOptions(seed=seed))
        label_error = float(np.abs(fit.posterior.probs - one_hot(truth.labels, 4)).max())
        inputs = BoundInputs(
            spec, priors,
            eps_pi=float(np.abs(fit.expected_pi() - spec.pi_star).max()),
            eps_gamma=float(np.abs(fit.expected_gamma() - spec.gamma_star).max()),
            beta_bar=fit.params.beta.sum(axis=2),
        )
        bound = label_error_bound(inputs)
        if bound.eps_q_vacuous:
            vacuous += 1
            continue
        informative += 1
        held += label_error <= bound.eps_q
    logger.info("cota de etiquetas: %d informativas, %d vacías, %d cumplidas", informative, vacuous, held)
    if not informative:
        logger.warning("ninguna semilla dio una cota de etiquetas informativa")
    assert informative + vacuous == 50
    if informative:
        assert held / informative >= 0.9


def test_label_bound_holds_on_clean_crowd():
    """30 anotadores que aciertan siempre y priors con media exactamente gamma*"""
    n_items, n_annotators = 300, 30
    truth = np.repeat([1, 2], n_items // 2)
    responses = ResponseMatrix(
        n_items=n_items,
        n_annotators=n_annotators,
        n_classes=2,
        item_idx=np.repeat(np.arange(n_items), n_annotators),
        annotator_idx=np.tile(np.arange(n_annotators), n_items),
        labels=np.repeat(truth, n_annotators),
    )
    spec = diag_dominant_spec(n_items, n_annotators, 2, 0.9)
    # (150 + 885) / (150 + 1000) = 0.9
    priors = PriorConfig.from_template([1.0, 1.0], [[885.0, 115.0], [115.0, 885.0]], n_annotators)
    fit = vbem_fit(responses, priors, FitOptions(seed=0))

    eps_gamma = float(np.abs(fit.expected_gamma() - spec.gamma_star).max())
    assert eps_gamma < spec.rho_gamma
    bound = label_error_bound(BoundInputs(
        spec, priors,
        eps_pi=float(np.abs(fit.expected_pi() - spec.pi_star).max()),
        eps_gamma=eps_gamma,
    ))
    assert not bound.eps_q_vacuous
    assert bound.eps_q < 1e-9
    label_error = float(np.abs(fit.posterior.probs - one_hot(truth, 2)).max())
    assert label_error <= bound.eps_q

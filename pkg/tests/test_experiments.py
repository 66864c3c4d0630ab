import json

import numpy as np
import pandas as pd
import pytest

from aggregators import FitOptions
from constraints import ConstraintSet, derive_from_labels
from data.model import PriorConfig
from experiments import (
    ExperimentRunner,
    RunResult,
    build_result,
    fit_from_result,
    protocol_constraints,
    run_method,
    selected_constraints,
    summarize,
)
from utils.exceptions import PreconditionError

from .conftest import SCHEMA_DIR, assert_matches_schema


class TestRunMethod:

    @pytest.mark.parametrize('method', ['mv', 'ds', 'vb'])
    def test_baselines(self, desk_crowd, desk_priors, method):
        _, responses, _ = desk_crowd
        fit, extras = run_method(method, responses, desk_priors, FitOptions())
        assert fit.hard_labels.shape == (60,)
        assert extras == {}

    def test_vb_ilc_fixed_eta(self, tie_crowd):
        priors = PriorConfig.diagonal(3, 2)
        fit, extras = run_method('vb-ilc', tie_crowd, priors, FitOptions(),
                                 constraints=ConstraintSet(must_link={(0, 3)}), eta=1.0)
        assert fit.eta == 1.0
        assert extras['n_v'] in (0, 1)
        assert extras['violations_on'] == 'closed'
        assert 'eta_table' not in extras

    def test_vb_ilc_grid(self, tie_crowd):
        priors = PriorConfig.diagonal(3, 2)
        _, extras = run_method('vb-ilc', tie_crowd, priors, FitOptions(),
                               constraints=ConstraintSet(must_link={(0, 3)}), eta_grid=[0.01, 1.0])
        assert [row['eta'] for row in extras['eta_table']] == [0.01, 1.0]

    def test_vb_ilc_needs_constraints(self, desk_crowd, desk_priors):
        _, responses, _ = desk_crowd
        with pytest.raises(PreconditionError):
            run_method('vb-ilc', responses, desk_priors, FitOptions())

    def test_unknown_method(self, desk_crowd, desk_priors):
        _, responses, _ = desk_crowd
        with pytest.raises(PreconditionError):
            run_method('gp', responses, desk_priors, FitOptions())

    def test_vb_lc_pins_labels(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        labels = {n: int(truth.labels[n]) for n in range(5)}
        fit, _ = run_method('vb-lc', responses, desk_priors, FitOptions(), label_constraints=labels)
        for n, label in labels.items():
            assert fit.posterior.probs[n, label - 1] == 1.0


class TestSelectedConstraints:

    def test_vb_lc_draws_labels(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        constraints, labels, plan = selected_constraints('vb-lc', responses, truth, desk_priors,
                                                         FitOptions(seed=3), 8)
        assert constraints is None and plan is None
        assert len(labels) == 8

    def test_vb_ilc_answers_plan(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        constraints, labels, plan = selected_constraints('vb-ilc', responses, truth, desk_priors,
                                                         FitOptions(seed=3), 6, source='mv')
        assert labels is None
        assert len(plan) == 6
        assert constraints.closed
        assert len(constraints) >= 6


class TestResult:

    def test_build_result(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        fit, _ = run_method('vb', responses, desk_priors, FitOptions())
        result = build_result(fit, responses, 5, truth)
        assert result.method == 'vb'
        assert result.seed == 5
        assert result.index_maps['items'][0] == 'i0'
        assert set(result.params) == {'alpha', 'beta', 'expected_pi', 'expected_gamma'}
        assert 0.0 <= result.scores['macro_f1'] <= 1.0

    @pytest.mark.parametrize('method', ['vb', 'ds'])
    def test_fit_from_result(self, desk_crowd, desk_priors, method):
        _, responses, _ = desk_crowd
        fit, _ = run_method(method, responses, desk_priors, FitOptions())
        payload = build_result(fit, responses, 0).model_dump()
        again = fit_from_result(payload)
        np.testing.assert_allclose(again.expected_gamma(), fit.expected_gamma())
        np.testing.assert_array_equal(again.hard_labels, fit.hard_labels)

    def test_fit_from_result_without_params(self, toy_responses):
        fit, _ = run_method('mv', toy_responses, None, FitOptions())
        with pytest.raises(PreconditionError):
            fit_from_result(build_result(fit, toy_responses, 0).model_dump())

    def test_schema_matches_model(self):
        schema = json.loads((SCHEMA_DIR / 'run_result.schema.json').read_text(encoding='utf-8'))
        assert set(schema['properties']) == set(RunResult.model_fields)

    @pytest.mark.parametrize('method', ['mv', 'ds', 'vb'])
    def test_result_validates(self, desk_crowd, desk_priors, method):
        _, responses, truth = desk_crowd
        fit, extras = run_method(method, responses, desk_priors, FitOptions())
        payload = json.loads(build_result(fit, responses, 0, truth, extras).model_dump_json())
        assert_matches_schema(payload, 'run_result.schema.json')

    def test_vb_ilc_result_validates(self, tie_crowd):
        fit, extras = run_method('vb-ilc', tie_crowd, PriorConfig.diagonal(3, 2), FitOptions(),
                                 constraints=ConstraintSet(must_link={(0, 3)}), eta_grid=[0.01, 1.0])
        payload = json.loads(build_result(fit, tie_crowd, 7, extras=extras).model_dump_json())
        assert_matches_schema(payload, 'run_result.schema.json')
        assert payload['violations_on'] == 'closed'

    def test_schema_rejects_unknown_method(self, toy_responses):
        fit, _ = run_method('mv', toy_responses, None, FitOptions())
        payload = json.loads(build_result(fit, toy_responses, 0).model_dump_json())
        payload['method'] = 'gp'
        with pytest.raises(AssertionError, match='gp'):
            assert_matches_schema(payload, 'run_result.schema.json')
        del payload['seed']
        payload['method'] = 'mv'
        with pytest.raises(AssertionError, match='seed'):
            assert_matches_schema(payload, 'run_result.schema.json')


class TestProtocols:

    def test_zero_budget_is_empty(self, desk_crowd):
        _, _, truth = desk_crowd
        for protocol in ('random-constraints', 'bvsb-constraints', 'label-derived'):
            assert protocol_constraints(protocol, 0, truth, None, {}, 0).is_empty()

    def test_random_pairs_answered(self, desk_crowd):
        _, _, truth = desk_crowd
        cs = protocol_constraints('random-constraints', 12, truth, None, {}, 4)
        assert len(cs) >= 12
        labels = truth.labels
        assert all(labels[i] == labels[j] for i, j in cs.must_link)
        assert all(labels[i] != labels[j] for i, j in cs.cannot_link)

    def test_label_derived(self, desk_crowd):
        _, _, truth = desk_crowd
        label_map = {n: int(truth.labels[n]) for n in range(7)}
        cs = protocol_constraints('label-derived', 7, truth, None, label_map, 0)
        assert cs.must_link == derive_from_labels(label_map).must_link

    def test_unknown_protocol(self, desk_crowd):
        _, _, truth = desk_crowd
        with pytest.raises(PreconditionError):
            protocol_constraints('active', 3, truth, None, {}, 0)


class TestExperimentRunner:

    def test_requires_truth(self, desk_crowd, desk_priors):
        _, responses, _ = desk_crowd
        with pytest.raises(PreconditionError):
            ExperimentRunner(responses, None, desk_priors)

    def test_rows_and_order(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        runner = ExperimentRunner(responses, truth, desk_priors, eta_grid=[0.1, 10.0])
        df = runner.run(['label-derived', 'random-constraints'], [0, 6], 2)
        assert len(df) == 2 * 2 * 2 * 5
        assert df['protocol'].iloc[0] == 'random-constraints'
        assert list(df['method'].iloc[:5]) == ['mv', 'ds', 'vb', 'vb-lc', 'vb-ilc']

    def test_zero_budget_matches_vb(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        df = ExperimentRunner(responses, truth, desk_priors, eta_grid=[1.0]).run(['bvsb-constraints'], [0], 1)
        by_method = df.set_index('method')['macro_f1']
        assert by_method['vb-lc'] == by_method['vb']
        assert by_method['vb-ilc'] == by_method['vb']
        assert df.set_index('method').loc['vb-ilc', 'n_v'] == 0

    def test_label_derived_has_no_violations(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        df = ExperimentRunner(responses, truth, desk_priors).run(['label-derived'], [10], 1)
        assert df.set_index('method').loc['vb-ilc', 'n_v'] == 0

    def test_worker_count_does_not_change_rows(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        serial = ExperimentRunner(responses, truth, desk_priors, eta_grid=[0.5, 5.0], workers=1)
        threaded = ExperimentRunner(responses, truth, desk_priors, eta_grid=[0.5, 5.0], workers=3)
        args = (['random-constraints', 'bvsb-constraints'], [4, 8], 2)
        pd.testing.assert_frame_equal(serial.run(*args), threaded.run(*args))

    def test_unknown_protocol(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        with pytest.raises(PreconditionError):
            ExperimentRunner(responses, truth, desk_priors).run(['active'], [0], 1)

    def test_summarize(self, desk_crowd, desk_priors):
        _, responses, truth = desk_crowd
        df = ExperimentRunner(responses, truth, desk_priors, eta_grid=[1.0]).run(['label-derived'], [0, 4], 2)
        summary = summarize(df)
        assert list(summary.columns) == ['protocol', 'n_constraints', 'method', 'macro_f1', 'micro_f1', 'n_v']
        assert len(summary) == 2 * 5

import numpy as np
import pandas as pd
import pytest

from charts import ConfusionHeatmapChart, ScoreCurveChart, ViolationBarChart, create_chart


@pytest.fixture
def experiment_frame():
    rows = []
    for protocol in ('random-constraints', 'bvsb-constraints'):
        for n_constraints in (0, 10):
            for repeat in range(2):
                for method in ('mv', 'vb', 'vb-ilc'):
                    rows.append({
                        'protocol': protocol,
                        'n_constraints': n_constraints,
                        'repeat': repeat,
                        'method': method,
                        'macro_f1': 0.8 + 0.01 * repeat,
                        'micro_f1': 0.85,
                        'n_v': 1.0 if method == 'vb-ilc' else np.nan,
                    })
    return pd.DataFrame(rows)


def test_score_curves(experiment_frame, tmp_path):
    chart = ScoreCurveChart(experiment_frame)
    fig = chart.get_figure(metric='micro_f1')
    assert {trace.name for trace in fig.data} == {'mv', 'vb', 'vb-ilc'}
    assert 'Micro F1' in fig.layout.title.text
    path = tmp_path / 'scores.html'
    chart.write_html(path)
    assert path.stat().st_size > 0


def test_score_curves_without_data():
    fig = ScoreCurveChart(pd.DataFrame()).get_figure()
    assert len(fig.data) == 0
    assert fig.layout.annotations[0].text == 'Sin resultados de experimentos'


def test_violation_bars(experiment_frame):
    fig = ViolationBarChart(experiment_frame).get_figure()
    assert len(fig.data) == 2
    assert list(fig.data[0].y) == [1.0, 1.0]


def test_violation_bars_missing_method(experiment_frame):
    fig = ViolationBarChart(experiment_frame).get_figure(method='vb-lc')
    assert fig.layout.annotations[0].text == 'Sin N_V para vb-lc'


def test_confusion_heatmap_caps_panels(tmp_path):
    gamma = np.tile(np.array([[0.9, 0.1], [0.2, 0.8]]), (8, 1, 1))
    chart = ConfusionHeatmapChart(gamma, annotators=[f'w{m}' for m in range(8)])
    fig = chart.get_figure()
    assert len(fig.data) == 6
    assert fig.layout.annotations[0].text == 'w0'
    chart.write_html(tmp_path / 'confusion.html')
    assert (tmp_path / 'confusion.html').exists()


def test_confusion_without_data():
    assert len(ConfusionHeatmapChart().get_figure().data) == 0


def test_create_chart(experiment_frame):
    assert isinstance(create_chart('scores', experiment_frame), ScoreCurveChart)
    with pytest.raises(KeyError):
        create_chart('pie')

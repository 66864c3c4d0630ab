"""
Gráficas de resultados de experimentos y corridas
"""
from .base_chart import BaseChart, empty_figure
from .line_chart import ScoreCurveChart
from .bar_chart import ViolationBarChart
from .heatmap import ConfusionHeatmapChart

__all__ = [
    'BaseChart',
    'ScoreCurveChart',
    'ViolationBarChart',
    'ConfusionHeatmapChart',
    'empty_figure',
    'create_chart',
]

# Diccionario para fácil acceso a las gráficas
CHART_CLASSES = {
    'scores': ScoreCurveChart,
    'violations': ViolationBarChart,
    'confusion': ConfusionHeatmapChart,
}


def create_chart(chart_type, data=None):
    """
    Factory function para crear gráficas
    Args:
        chart_type: 'scores', 'violations' o 'confusion'
        data: DataFrame de experimentos o arreglo (M, K, K)
    """
    if chart_type not in CHART_CLASSES:
        raise KeyError(f"tipo de gráfica desconocido: {chart_type}")
    return CHART_CLASSES[chart_type](data)

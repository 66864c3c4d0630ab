"""
Mapa de calor de matrices de confusión estimadas
"""
import numpy as np
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from .base_chart import BaseChart, empty_figure


class ConfusionHeatmapChart(BaseChart):
    """
    E[Gamma^(m)] (o su estimación puntual) de los anotadores de un resultado
    `data` es el arreglo (M, K, K); los nombres de anotador van en `annotators`.
    """

    def __init__(self, data=None, annotators=None):
        super().__init__(data)
        self.annotators = list(annotators or [])

    def create_figure(self, max_annotators=6, **kwargs):
        if self.data is None:
            return empty_figure('Sin matrices de confusión')
        gamma = np.asarray(self.data, dtype=float)
        if gamma.ndim != 3 or gamma.shape[0] == 0:
            return empty_figure('Sin matrices de confusión')

        shown = min(gamma.shape[0], max_annotators)
        names = self.annotators or [str(m) for m in range(gamma.shape[0])]
        classes = [str(k + 1) for k in range(gamma.shape[1])]
        fig = make_subplots(rows=1, cols=shown, subplot_titles=names[:shown], horizontal_spacing=0.04)
        for m in range(shown):
            fig.add_trace(go.Heatmap(
                z=gamma[m],
                x=classes,
                y=classes,
                zmin=0,
                zmax=1,
                colorscale='Blues',
                showscale=m == shown - 1,
                text=np.round(gamma[m], 2),
                texttemplate='%{text}',
                textfont={"size": 10},
                hovertemplate='<b>verdad %{y} -> respuesta %{x}</b><br>%{z:.3f}<extra></extra>'
            ), row=1, col=m + 1)
            fig.update_yaxes(autorange='reversed', row=1, col=m + 1)

        fig.update_layout(
            title='Matrices de confusión estimadas',
            height=320,
            width=max(320, 260 * shown),
        )
        return fig

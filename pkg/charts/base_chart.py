"""
Clase base de las gráficas de resultados: paletas, diseño común y exportación HTML
"""
import logging
from abc import ABC, abstractmethod

import plotly.graph_objects as go

from utils.constants import METHODS, PROTOCOLS

logger = logging.getLogger(__name__)

METHOD_COLORS = dict(zip(METHODS, ('#9ca3af', '#06b6d4', '#3b82f6', '#f59e0b', '#10b981')))
PROTOCOL_COLORS = dict(zip(PROTOCOLS, ('#6366f1', '#ef4444', '#10b981')))

GRID_COLOR = '#eef0f3'


class BaseChart(ABC):
    """
    Gráfica construida a partir de `data`
    Las subclases solo arman la figura; el diseño y la escritura son comunes.
    """

    method_colors = METHOD_COLORS
    protocol_colors = PROTOCOL_COLORS

    def __init__(self, data=None):
        self.data = data

    def layout(self):
        axis = dict(showgrid=True, gridcolor=GRID_COLOR, zeroline=False)
        return dict(
            template='plotly_white',
            font=dict(family='Inter, sans-serif', size=12, color='#1f2937'),
            margin=dict(l=60, r=30, t=60, b=60),
            xaxis=axis,
            yaxis=axis,
            legend=dict(orientation='h', yanchor='top', y=-0.18, xanchor='center', x=0.5, title=None),
        )

    def has_columns(self, *columns):
        return self.data is not None and all(col in self.data.columns for col in columns)

    @abstractmethod
    def create_figure(self, **kwargs):
        """Arma la figura sin diseño común"""

    def get_figure(self, **kwargs):
        fig = self.create_figure(**kwargs)
        fig.update_layout(**self.layout())
        return fig

    def write_html(self, path, **kwargs):
        """Guarda la figura como HTML autocontenido"""
        fig = self.get_figure(**kwargs)
        fig.write_html(str(path), include_plotlyjs=True, full_html=True)
        logger.info("gráfica escrita en %s", path)
        return fig


def empty_figure(message):
    """Figura vacía con un aviso centrado"""
    fig = go.Figure()
    fig.add_annotation(text=message, showarrow=False, x=0.5, y=0.5, xref='paper', yref='paper')
    fig.update_xaxes(visible=False)
    fig.update_yaxes(visible=False)
    return fig

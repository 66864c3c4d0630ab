"""
F-score frente al número de restricciones
"""
import plotly.express as px

from .base_chart import BaseChart, empty_figure


class ScoreCurveChart(BaseChart):
    """Curvas de F-score medio por método, una faceta por protocolo"""

    def create_figure(self, metric='macro_f1', **kwargs):
        """
        Args:
            metric: 'macro_f1' o 'micro_f1'
        """
        if not self.has_columns('protocol', 'n_constraints', 'method', metric) or self.data.empty:
            return empty_figure('Sin resultados de experimentos')

        summary = (self.data.groupby(['protocol', 'n_constraints', 'method'], sort=True)[metric]
                   .agg(['mean', 'std']).reset_index())
        summary['std'] = summary['std'].fillna(0.0)
        fig = px.line(
            summary,
            x='n_constraints',
            y='mean',
            error_y='std',
            color='method',
            facet_col='protocol',
            markers=True,
            color_discrete_map=self.method_colors,
            category_orders={'method': list(self.method_colors)},
        )
        fig.update_layout(
            title=metric.replace('_', ' ').title() + ' vs N_C',
            xaxis_title='N_C',
            yaxis_title=metric.replace('_', ' ').title(),
        )
        fig.for_each_annotation(lambda a: a.update(text=a.text.split('=')[-1]))
        return fig

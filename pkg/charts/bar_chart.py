"""
Gráficas de barras de restricciones violadas
"""
import plotly.express as px

from .base_chart import BaseChart, empty_figure


class ViolationBarChart(BaseChart):
    """N_V medio de VB-ILC por protocolo y N_C"""

    def create_figure(self, method='vb-ilc', **kwargs):
        if not self.has_columns('protocol', 'n_constraints', 'method', 'n_v'):
            return empty_figure('Sin resultados de experimentos')

        rows = self.data[(self.data['method'] == method) & self.data['n_v'].notna()]
        if rows.empty:
            return empty_figure(f'Sin N_V para {method}')

        chart_data = rows.groupby(['protocol', 'n_constraints'], sort=True)['n_v'].mean().reset_index()
        chart_data['n_constraints'] = chart_data['n_constraints'].astype(str)
        fig = px.bar(
            chart_data,
            x='n_constraints',
            y='n_v',
            color='protocol',
            barmode='group',
            color_discrete_map=self.protocol_colors,
        )
        fig.update_layout(
            title=f'Restricciones violadas ({method})',
            xaxis_title='N_C',
            yaxis_title='N_V medio',
        )
        return fig

"""
Sub-comandos de la línea de comandos
"""
from .aggregate import register_aggregate
from .bounds import register_bounds
from .experiment import register_experiment
from .plot import register_plot
from .synth import register_synth

COMMANDS = {
    'aggregate': register_aggregate,
    'experiment': register_experiment,
    'synth': register_synth,
    'bounds': register_bounds,
    'plot': register_plot,
}


def register_all(subparsers):
    """Registra todos los sub-comandos en el orden de COMMANDS"""
    for register in COMMANDS.values():
        register(subparsers)

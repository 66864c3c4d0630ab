"""
Aplicación principal de crowdfuse - línea de comandos
"""
import argparse
import logging
import sys

from commands import register_all
from config import configure_logging
from utils.exceptions import CrowdFuseError

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='crowdfuse',
        description='Fusión de etiquetas de multitudes con restricciones entre ítems',
    )
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING... (por defecto CROWDFUSE_LOG_LEVEL o WARNING)')
    subparsers = parser.add_subparsers(dest='command', required=True)
    register_all(subparsers)
    return parser


def main(argv=None):
    """
    Punto de entrada
    Returns:
        Código de salida: 0 éxito, 2 entrada o precondición, 3 conflicto, 4 numérico
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except CrowdFuseError as exc:
        logger.error("%s: %s", args.command, exc)
        return exc.exit_code


# ================================================================
# EJECUCIÓN
# ================================================================

if __name__ == "__main__":
    sys.exit(main())

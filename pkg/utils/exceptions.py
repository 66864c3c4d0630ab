"""
Jerarquía de errores; cada clase lleva el código de salida de la CLI
"""


class CrowdFuseError(Exception):
    """Error base de la librería"""

    exit_code = 1


class InputFormatError(CrowdFuseError):
    """Archivo de entrada mal formado"""

    exit_code = 2

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ': '
        super().__init__(f"{location}{message}")


class PreconditionError(CrowdFuseError):
    """Precondición de una operación no satisfecha"""

    exit_code = 2


class ConstraintConflictError(CrowdFuseError):
    """Restricciones contradictorias (must-link y cannot-link sobre el mismo par)"""

    exit_code = 3

    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class NumericDomainError(CrowdFuseError, ValueError):
    """Argumento fuera del dominio de una función numérica"""

    exit_code = 4

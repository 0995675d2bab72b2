"""
Errores del sistema MCTS-GA.

La CLI traduce cada familia a un código de salida:
entrada inválida -> 2, fallo numérico -> 3.
"""

from typing import Optional


class MctsGaError(Exception):
    """Base de todos los errores propios del paquete."""


class DatasetError(MctsGaError, ValueError):
    """Problema con el archivo o el contenido del dataset."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"línea {line}: {message}"
        super().__init__(message)


class ConfigError(MctsGaError, ValueError):
    """Archivo o valor de configuración inválido."""


class StructureError(MctsGaError, ValueError):
    """Genoma o modelo con estructura incompatible."""

    def __init__(self, message: str, label: Optional[str] = None):
        self.label = label
        if label is not None:
            message = f"segmento {label}: {message}"
        super().__init__(message)


class NumericError(MctsGaError, ArithmeticError):
    """Valor no finito durante el entrenamiento."""

    def __init__(self, message: str, epoch: Optional[int] = None):
        self.epoch = epoch
        if epoch is not None:
            message = f"época {epoch}: {message}"
        super().__init__(message)

# MCTS-GA Backend Package
"""
Paquete backend del benchmark MCTS-GA.
Incluye el pipeline de datos, la red neuronal, los operadores genéticos,
la búsqueda MCTS guiada por GA y la CLI de comparación.
"""

__version__ = "1.0.0"
__author__ = "MCTS-GA Team"

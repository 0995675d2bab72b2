# Models module
"""
Módulo de modelos del backend MCTS-GA: tipos de datos y parámetros validados.
"""

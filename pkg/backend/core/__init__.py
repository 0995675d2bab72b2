# Core module
"""
Módulo core del backend MCTS-GA.
Contiene el pipeline de datos, la red neuronal, el genoma, los operadores
genéticos, el motor MCTS y las métricas de clasificación.
"""

# Services module
"""
Servicios de la CLI: carga de configuración, ejecución del benchmark y artefactos.
"""

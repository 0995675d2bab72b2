"""
Utilidades compartidas por los tests: datasets sintéticos y un runner
para ejecutar cada archivo test_*.py directamente con `python`.
"""

import inspect
import os
import sys
import tempfile
import traceback
from pathlib import Path

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from backend.models.dataset import LabeledDataset, ScalerParams  # noqa: E402


def synthetic_labeled(n: int = 40, n_features: int = 8, seed: int = 0, separable: bool = True) -> LabeledDataset:
    """Dataset balanceado en [0, 1]; si `separable`, la clase depende de la primera feature."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, n_features))
    y = np.array([i % 2 for i in range(n)], dtype=np.int64)
    if separable:
        X[:, 0] = np.where(y == 1, rng.uniform(0.6, 1.0, n), rng.uniform(0.0, 0.4, n))
    scaler = ScalerParams(mins=[0.0] * n_features, maxs=[1.0] * n_features)
    return LabeledDataset(features=X, labels=y, scaler=scaler)


def write_pima_like_csv(path, n_pos: int = 30, n_neg: int = 50, seed: int = 0, header: bool = True) -> str:
    """CSV con 8 columnas tipo Pima (valores crudos sin escalar) + Outcome."""
    rng = np.random.default_rng(seed)
    nombres = ["Pregnancies", "Glucose", "BloodPressure", "SkinThickness", "Insulin", "BMI", "DiabetesPedigreeFunction", "Age", "Outcome"]
    filas = []
    for label in [1] * n_pos + [0] * n_neg:
        glucosa = rng.integers(120, 200) if label else rng.integers(60, 140)
        filas.append([
            int(rng.integers(0, 12)), int(glucosa), int(rng.integers(40, 110)), int(rng.integers(0, 50)),
            int(rng.integers(0, 300)), round(float(rng.uniform(18, 45)), 1), round(float(rng.uniform(0.1, 2.0)), 3),
            int(rng.integers(21, 70)), label,
        ])
    with open(path, "w", encoding="utf-8") as f:
        if header:
            f.write(",".join(nombres) + "\n")
        for fila in filas:
            f.write(",".join(str(v) for v in fila) + "\n")
    return str(path)


def ejecutar_pruebas(namespace: dict) -> int:
    """Corre las funciones test_* de un módulo sin pytest (solo soporta el fixture tmp_path)."""
    pruebas = [(n, f) for n, f in namespace.items() if n.startswith("test_") and inspect.isfunction(f)]
    fallidas = 0
    print(f"🧪 Ejecutando {len(pruebas)} pruebas...")
    for nombre, prueba in pruebas:
        with tempfile.TemporaryDirectory() as tmp:
            kwargs = {"tmp_path": Path(tmp)} if "tmp_path" in inspect.signature(prueba).parameters else {}
            try:
                prueba(**kwargs)
                print(f"✅ {nombre}")
            except Exception as e:
                fallidas += 1
                print(f"❌ {nombre}: {e}")
                traceback.print_exc()

    print("\n" + "=" * 60)
    if fallidas:
        print(f"❌ {fallidas} de {len(pruebas)} pruebas fallaron")
        return 1
    print("🎉 Todas las pruebas pasaron")
    return 0

import hashlib
from typing import Union

import numpy as np

SEED_MASK = (1 << 63) - 1


def derive_seed(base_seed: int, *labels: Union[str, int]) -> int:
    """Deriva una semilla estable a partir de la semilla global y etiquetas."""
    clave = ":".join([str(int(base_seed))] + [str(label) for label in labels])
    digest = hashlib.sha256(clave.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & SEED_MASK


def derive_rng(base_seed: int, *labels: Union[str, int]) -> np.random.Generator:
    """Generador independiente para el flujo identificado por las etiquetas."""
    return np.random.default_rng(derive_seed(base_seed, *labels))

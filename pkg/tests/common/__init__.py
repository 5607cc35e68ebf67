import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from xmod.core import StarAlgebra, wedderburn


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    """``e_ij`` in the coordinates of ``matrix_algebra(n)``."""
    e = np.zeros(n * n, dtype=complex)
    e[i * n + j] = 1
    return e


def blocks(A: StarAlgebra) -> list:
    return list(wedderburn(A))


def scenario_text(declare: Dict[str, Any], tasks: list) -> str:
    return json.dumps({"declare": declare, "tasks": tasks}, indent=2)


def read_json(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf8") as f:
        return json.load(f)

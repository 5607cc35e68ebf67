"""
Test fixture construction utilities.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg

from .._algebra import StarAlgebra, wedderburn
from .._crossed_modules import CrossedModule, cyclic_pair, from_normal_subgroup
from .._groupoids import FiniteGroupoid, action_groupoid
from .._groups import FiniteGroup, alternating, cyclic, symmetric

# pylint: disable=invalid-name


def s3_a3() -> CrossedModule:
    """``A3 ⊂ S3`` with conjugation."""
    return from_normal_subgroup(symmetric(3), alternating(3).elements)


def z4_z2() -> CrossedModule:
    """``(Z4, Z2, ∂(1) = 2)`` with trivial action."""
    return cyclic_pair(4, 2, 2)


def z2_swap(fixed: bool = False) -> FiniteGroupoid:
    """``Z2`` swapping ``{1, 2}`` and optionally fixing ``3``."""
    X = [1, 2, 3] if fixed else [1, 2]
    row = {1: 2, 2: 1, 3: 3} if fixed else {1: 2, 2: 1}
    return action_groupoid(cyclic(2), X, {1: row})


def cyclic_action(n: int) -> FiniteGroupoid:
    """``Z_n`` rotating ``{1..n}``."""
    X = list(range(1, n + 1))
    return action_groupoid(cyclic(n), X, {1: {x: x % n + 1 for x in X}})


def random_unitary(n: int, seed: int = 0) -> np.ndarray:
    gen = np.random.default_rng(seed)
    Z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    Q, R = scipy.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def mat_units(A: StarAlgebra, n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit ``e_ij`` of :py:func:`matrix_algebra`."""
    assert A.dim == n * n
    return A.basis(i * n + j)


def assert_blocks(A: StarAlgebra, expect: Sequence[int]) -> None:
    assert wedderburn(A) == tuple(sorted(expect))
    assert sum(d * d for d in expect) == A.dim


def group_by_name(name: str) -> FiniteGroup:
    return {"Z2": cyclic(2), "Z3": cyclic(3), "Z4": cyclic(4), "S3": symmetric(3), "A3": alternating(3)}[name]


__all__ = (
    "s3_a3",
    "z4_z2",
    "z2_swap",
    "cyclic_action",
    "random_unitary",
    "mat_units",
    "assert_blocks",
    "group_by_name",
)

"""
Process wide numerical configuration.
"""

from __future__ import annotations

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from typing import Any, Iterator

import numpy as np
from dask.base import tokenize

log = logging.getLogger(__name__)


@dataclass(eq=True, frozen=True)
class XmodConfig:
    """
    Snapshot of the numerical configuration.
    """

    tol_alg: float = 1e-9
    """Tolerance for structural identities (associativity, homomorphism checks)."""

    tol_eig: float = 1e-8
    """Tolerance for eigenvalue clustering and rank decisions."""

    max_group_order: int = 24
    """Largest accepted group order."""

    max_aut_candidates: int = 10_000
    """Largest number of candidate maps explored when enumerating automorphisms or bisections."""

    max_dim: int = 1024
    """Largest accepted algebra dimension."""

    seed: int = 0
    """Seed for every randomized step."""

    exhaustive_dim: int = 32
    """Algebras up to this dimension are validated on all basis triples, larger ones on random probes."""

    wedderburn_retries: int = 3
    """Number of fresh central elements tried before giving up on a block decomposition."""


class _GlobalConfig:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._cfg = XmodConfig()

    def set(self, **params: Any) -> XmodConfig:
        known = {f.name for f in fields(XmodConfig)}
        unknown = set(params) - known
        if unknown:
            raise ValueError(f"Unknown configuration keys: {sorted(unknown)}")
        params = {k: v for k, v in params.items() if v is not None}
        with self._lock:
            prev = self._cfg
            self._cfg = replace(prev, **params)
        if params:
            log.debug("configuration updated: %s", params)
        return prev

    def restore(self, cfg: XmodConfig) -> None:
        with self._lock:
            self._cfg = cfg

    @property
    def current(self) -> XmodConfig:
        return self._cfg


_CFG = _GlobalConfig()


def configure(**params: Any) -> XmodConfig:
    """
    Change numerical configuration.

    Keys not supplied (or supplied as ``None``) keep their current value.

    :param tol_alg: Tolerance for structural identities
    :param tol_eig: Tolerance for eigenvalue clustering
    :param max_group_order: Largest accepted group order
    :param max_aut_candidates: Enumeration limit for automorphisms/bisections
    :param max_dim: Largest accepted algebra dimension
    :param seed: Seed for randomized steps
    :param exhaustive_dim: Threshold for exhaustive structure validation
    :return: The configuration that was active before the change
    """
    return _CFG.set(**params)


def get_config() -> XmodConfig:
    """Current configuration snapshot."""
    return _CFG.current


@contextmanager
def config_override(**params: Any) -> Iterator[XmodConfig]:
    """
    Temporarily change configuration, restoring previous values on exit.
    """
    prev = _CFG.set(**params)
    try:
        yield _CFG.current
    finally:
        _CFG.restore(prev)


def rng(*salt: Any) -> np.random.Generator:
    """
    Deterministic random generator for a given purpose.

    The stream depends only on the configured seed and on ``salt``.
    """
    key = tokenize(_CFG.current.seed, *salt)
    return np.random.default_rng([_CFG.current.seed, int(key[:8], 16)])

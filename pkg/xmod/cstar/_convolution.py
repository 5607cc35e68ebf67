"""
Convolution algebras ``A⋊G`` of groupoid actions on fibered algebras.

The basis of ``A⋊G`` runs over arrows ``g`` (major) and the basis of the coefficient fiber over ``tgt(g)``.
"""

from __future__ import annotations

import logging
from typing import List

import numpy as np
import scipy.sparse as sp

from xmod.core import (
    GroupBundle,
    Grading,
    algebra_from_structure,
    get_config,
    groupoid_algebra,
    orbits,
    star_hom,
)
from xmod.core._errors import SizeLimit

from .types import CrossedProductResult, GroupoidAlgebraAction

log = logging.getLogger(__name__)


def crossed_product(act: GroupoidAlgebraAction) -> CrossedProductResult:
    """
    Crossed product ``A⋊G`` of a groupoid action.

    ``(a⊗δ_g)(b⊗δ_g') = a·α_g(b) ⊗ δ_{gg'}`` when ``src(g) = tgt(g')`` and ``0`` otherwise,
    ``(a⊗δ_g)* = α_{g⁻¹}(a*) ⊗ δ_{g⁻¹}``. The result is fibered over the orbits of ``G``.

    :raises SizeLimit: when the dimension exceeds ``max_dim``
    """
    K = act.groupoid
    fibers = [act.fiber(x)[0] for x in range(K.n_objects)]
    dims = np.array([fibers[int(K.tgt[g])].dim for g in range(K.n_arrows)], dtype=np.int64)
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(np.int64)
    N = int(offs[-1])
    cfg = get_config()
    if N > cfg.max_dim:
        raise SizeLimit(f"Crossed product of dimension {N} exceeds max_dim={cfg.max_dim}", witness=N)

    dense = [F.mult.toarray().reshape(F.dim, F.dim, F.dim) for F in fibers]
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    vals: List[np.ndarray] = []
    S = np.zeros((N, N), dtype=complex)
    unit = np.zeros(N, dtype=complex)
    for g in range(K.n_arrows):
        s, t = int(K.src[g]), int(K.tgt[g])
        # P[m, n, k]: coefficient of e_k in e_m·α_g(e_n)
        P = np.einsum("mjk,jn->mnk", dense[t], act.alpha[g])
        mm, nn, kk = np.nonzero(np.abs(P) > 1e-14)
        for g2 in K.target_fiber(s):
            gg = int(K.comp[g, g2])
            rows.append((offs[g] + mm) * N + (offs[g2] + nn))
            cols.append(offs[gg] + kk)
            vals.append(P[mm, nn, kk])
        gi = int(K.inv[g])
        S[offs[gi] : offs[gi + 1], offs[g] : offs[g + 1]] = act.alpha[gi] @ fibers[t].star

    for x in range(K.n_objects):
        e = int(K.unit[x])
        unit[offs[e] : offs[e + 1]] = fibers[x].unit

    mult = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N * N, N), dtype=complex
    )
    orb = orbits(K)
    P = np.zeros((len(orb), N), dtype=complex)
    for i, o in enumerate(orb):
        for x in o:
            e = int(K.unit[x])
            P[i, offs[e] : offs[e + 1]] = fibers[int(x)].unit

    arrow = np.repeat(np.arange(K.n_arrows), dims)
    coeff = np.concatenate([np.arange(d) for d in dims]) if N else np.zeros(0, dtype=np.int64)
    A = act.algebra
    B = algebra_from_structure(
        mult,
        S,
        unit,
        P,
        objects=[K.objects[int(o[0])] for o in orb],
        grading=Grading(K, arrow, coeff, tuple(fibers)),
        name=f"{A.name or 'A'}⋊G",
    )

    i_A = np.zeros((N, A.dim), dtype=complex)
    for x in range(K.n_objects):
        _, E = act.fiber(x)
        e = int(K.unit[x])
        i_A[offs[e] : offs[e + 1]] = E.conj().T @ A.left(A.fibering.projections[x])
    i_G = np.zeros((N, K.n_arrows), dtype=complex)
    for g in range(K.n_arrows):
        i_G[offs[g] : offs[g + 1], g] = fibers[int(K.tgt[g])].unit

    log.debug("crossed product dim=%d arrows=%d coefficient dim=%d", N, K.n_arrows, A.dim)
    return CrossedProductResult(
        algebra=B,
        i_A=star_hom(A, B, i_A),
        i_G=star_hom(groupoid_algebra(K), B, i_G),
        source_action=act,
        offsets=offs,
    )


def bundle_crossed_product(H: GroupBundle, act: GroupoidAlgebraAction) -> CrossedProductResult:
    """
    Crossed product by a bundle of groups acting fiberwise, ``(B⋊H)_x = B_x⋊H_x``.

    :param act: Action of ``bundle_groupoid(H)`` on an algebra fibered over the base of ``H``
    """
    K = act.groupoid
    if K.n_arrows != len(H) or K.n_objects != len(H.base) or not np.array_equal(K.src, K.tgt):
        raise ValueError("Action is not an action of the given group bundle")
    return crossed_product(act)

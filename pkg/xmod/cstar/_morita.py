"""
Equivariant Morita equivalence through linking algebras.

Two actions are equivariantly Morita equivalent when they are the complementary full corners ``pDp`` and
``p⊥Dp⊥`` of one action on ``D`` with ``p`` invariant. Finite dimensional C*-algebras are Morita equivalent
exactly when they have the same number of Wedderburn blocks.
"""

from __future__ import annotations

import itertools
import logging
from typing import Optional, Tuple

import numpy as np

from xmod.core import StarAlgebra, corner, ideal_generated, refiber, wedderburn
from xmod.core._errors import NotFull, NotInvariant, NotProjection
from xmod.core._linalg import close, in_span, orth, rank

from ._actions import _induced_action, equivariant_map
from ._crossed_products import cm_crossed_product
from .types import BimoduleWitness, CMAction, CrossedProductResult, EquivariantMap, LinkingData, VerificationReport

log = logging.getLogger(__name__)


def _corner_inclusion(act: CMAction, q: np.ndarray) -> EquivariantMap:
    A = act.algebra
    C, B = corner(A, q)
    Bh = B.conj().T
    C = refiber(C, A.objects, np.array([Bh @ A.mul(q, p) for p in A.fibering.projections]))
    compress = Bh @ A.left(q) @ A.right(q)
    return equivariant_map(_induced_action(act, C, compress, B), act, B)


def linking(D: CMAction, p: np.ndarray) -> LinkingData:
    """
    Check that ``p`` is an invariant projection with ``p`` and ``1 - p`` full, and extract both corners.

    :raises NotProjection: when ``p`` is not self-adjoint or not idempotent
    :raises NotInvariant: when some ``α_g`` moves ``p`` or ``p`` does not commute with some ``u_h``
    :raises NotFull: when ``p`` or ``1 - p`` generates a proper ideal
    """
    A = D.algebra
    G = D.cm.G
    p = np.asarray(p, dtype=complex).reshape(A.dim)
    if not close(A.adjoint(p), p):
        raise NotProjection("p is not self-adjoint", witness="star")
    if not close(A.mul(p, p), p):
        raise NotProjection("p is not idempotent", witness="idempotent")

    for g in range(G.n_arrows):
        t = int(G.tgt[g])
        if not close(D.action.full(g) @ p, A.mul(A.fibering.projections[t], p)):
            raise NotInvariant(f"α_{G.arrows[g]!r} moves p", witness=G.arrows[g])
    for x, fib in enumerate(D.cm.H.fibers):
        for h in range(len(fib)):
            u = D.unitary(x, h)
            if not close(A.mul(u, p), A.mul(p, u)):
                raise NotInvariant(
                    f"p does not commute with u_{fib.label(h)!r}", witness=[G.objects[x], fib.label(h)]
                )

    q = A.unit - p
    for name, e in (("p", p), ("p_perp", q)):
        if ideal_generated(A, e).dim != A.dim:
            raise NotFull(f"{name} is not full", witness=name)

    link = LinkingData(D, p, _corner_inclusion(D, p), _corner_inclusion(D, q))
    log.debug(
        "linking algebra dim=%d corners %d and %d",
        A.dim,
        link.left.source.algebra.dim,
        link.right.source.algebra.dim,
    )
    return link


def corners(link: LinkingData) -> Tuple[CMAction, CMAction]:
    """Actions on ``pDp`` and ``p⊥Dp⊥``."""
    return link.left.source, link.right.source


def corner_of_crossed_product(
    link: LinkingData, product: Optional[CrossedProductResult] = None, side: str = "left"
) -> Tuple[StarAlgebra, np.ndarray]:
    """
    Corner of ``D⋊(G,H)`` at the image of ``p`` (``side="left"``) or ``p⊥`` (``side="right"``).

    :param product: ``cm_crossed_product(link.action)``, computed when missing
    :return: The corner and the image of the projection
    """
    X = cm_crossed_product(link.action)[0] if product is None else product
    P = X.i_A(link.p if side == "left" else link.p_perp)
    C, _ = corner(X.algebra, P)
    return C, P


def verify_morita(link: LinkingData, strict: bool = True) -> VerificationReport:
    """
    The crossed products of both corners are Morita equivalent.

    Block counts of ``(pDp)⋊(G,H)`` and ``(p⊥Dp⊥)⋊(G,H)`` agree, the images of ``p`` and ``p⊥`` in
    ``D⋊(G,H)`` are full, and their corners match the crossed products of the corners.
    """
    rep = VerificationReport("morita")
    left, right = corners(link)
    XL, _ = cm_crossed_product(left)
    XR, _ = cm_crossed_product(right)
    XD, _ = cm_crossed_product(link.action)
    bl, br = wedderburn(XL.algebra), wedderburn(XR.algebra)
    rep.check("block_counts", len(bl) == len(br))

    for name, side, X in (("p", "left", XL), ("p_perp", "right", XR)):
        C, P = corner_of_crossed_product(link, XD, side)
        rep.check(f"{name}_full", ideal_generated(XD.algebra, P).dim == XD.dim)
        rep.check(f"{name}_corner_dim", C.dim == X.dim)
        rep.check(f"{name}_corner_blocks", wedderburn(C) == wedderburn(X.algebra))

    rep.data.update(
        left_dim=XL.dim,
        right_dim=XR.dim,
        total_dim=XD.dim,
        left_blocks=list(bl),
        right_blocks=list(br),
        corner_dims=[left.algebra.dim, right.algebra.dim],
    )
    log.info("morita blocks %s vs %s passed=%s", list(bl), list(br), rep.passed)
    return rep.raise_on_failure() if strict else rep


def bimodule_check(link: LinkingData) -> BimoduleWitness:
    """
    Read the imprimitivity bimodule ``E = pD(1 - p)`` off a linking algebra and check its identities.

    Checked on basis elements: the module actions and inner products land in the right places and are
    compatible, ``G`` acts compatibly on all of them, ``γ_∂(h)(ξ) = u_h·ξ·v_h*``, the unitaries of ``D``
    act through the corners, and both inner products are full.
    """
    D = link.action
    A = D.algebra
    G = D.cm.G
    p, q = link.p, link.p_perp
    E = orth(A.left(p) @ A.right(q))
    BL = link.left.hom.matrix
    BR = link.right.hom.matrix
    xs = [E[:, i] for i in range(E.shape[1])]
    aa = [BL[:, i] for i in range(BL.shape[1])]
    bb = [BR[:, i] for i in range(BR.shape[1])]
    mul, adj = A.mul, A.adjoint

    def inner_left(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return mul(x, adj(y))

    def inner_right(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return mul(adj(x), y)

    full = [D.action.full(g) for g in range(G.n_arrows)]
    gamma = tuple(E.conj().T @ F @ E for F in full)
    w = BimoduleWitness(link, E, gamma)

    w.checks["left_module"] = all(in_span(E, mul(a, x)[:, None]) for a in aa for x in xs) and all(
        close(F @ mul(a, x), mul(F @ a, F @ x)) for F in full for a in aa for x in xs
    )
    w.checks["right_module"] = all(in_span(E, mul(x, b)[:, None]) for b in bb for x in xs) and all(
        close(F @ mul(x, b), mul(F @ x, F @ b)) for F in full for b in bb for x in xs
    )
    w.checks["left_inner_associativity"] = all(
        close(mul(inner_left(x, y), z), mul(x, inner_right(y, z))) for x, y, z in itertools.product(xs, repeat=3)
    )
    w.checks["left_inner_equivariant"] = all(
        in_span(BL, inner_left(x, y)[:, None]) and close(F @ inner_left(x, y), inner_left(F @ x, F @ y))
        for F in full
        for x, y in itertools.product(xs, repeat=2)
    )
    w.checks["right_inner_equivariant"] = all(
        in_span(BR, inner_right(x, y)[:, None]) and close(F @ inner_right(x, y), inner_right(F @ x, F @ y))
        for F in full
        for x, y in itertools.product(xs, repeat=2)
    )

    boundary, determination = True, True
    for x, fib in enumerate(D.cm.H.fibers):
        px = A.fibering.projections[x]
        for h in range(len(fib)):
            wh = D.unitary(x, h)
            uh, vh = mul(p, wh), mul(q, wh)
            F = full[D.cm.boundary(x, h)]
            for xi in xs:
                boundary &= close(F @ xi, mul(mul(uh, mul(px, xi)), adj(vh)))
                determination &= close(mul(wh, xi), mul(uh, xi)) and close(mul(xi, wh), mul(xi, vh))
    w.checks["boundary_action"] = bool(boundary)
    w.checks["determination"] = bool(determination)

    pairs = list(itertools.product(xs, repeat=2))
    left_span = np.column_stack([inner_left(x, y) for x, y in pairs]) if pairs else np.zeros((A.dim, 0))
    right_span = np.column_stack([inner_right(x, y) for x, y in pairs]) if pairs else np.zeros((A.dim, 0))
    w.checks["left_full"] = rank(left_span) == BL.shape[1]
    w.checks["right_full"] = rank(right_span) == BR.shape[1]
    if not w.passed:
        log.warning("bimodule identities failing: %s", w.failures())
    return w


__all__ = (
    "linking",
    "corners",
    "corner_of_crossed_product",
    "verify_morita",
    "bimodule_check",
)

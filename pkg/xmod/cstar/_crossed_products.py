"""
Crossed products by crossed modules.

``A⋊(G,H)`` is the quotient of ``A⋊G`` by the ideal spanned by the range of ``ρ* - σ*`` where

- ``ρ*(a⊗δ_(h,g)) = a⊗δ_{∂(h)g}``
- ``σ*(a⊗δ_(h,g)) = (a·u_h)⊗δ_g``

are the integrated forms of the two covariant pairs of ``H⋊_c G`` on ``A⋊G``.
"""

from __future__ import annotations

import logging
from typing import Any, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from xmod.core import (
    CrossedModule,
    Ideal,
    StarAlgebra,
    StarHom,
    ideal_generated,
    matrix_algebra,
    quotient_algebra,
    quotient_projection,
    star_hom,
    transformation_groupoid,
    wedderburn,
)
from xmod.core._errors import (
    HomomorphismCheckFailed,
    NotCovariant,
    NotEquivariant,
    TwistViolation,
    VerificationFailed,
)
from xmod.core._groupoids import transformation_arrows
from xmod.core._linalg import close, in_span, null_space, orth, rank, worst

from ._actions import _canonical, extension, groupoid_action, left_translation, unit_action
from ._convolution import crossed_product
from .types import (
    CMAction,
    CovariantRep,
    CrossedProductResult,
    EquivariantMap,
    GroupoidAlgebraAction,
    RhoSigmaPair,
    VerificationReport,
)

log = logging.getLogger(__name__)


def rho_sigma(act: CMAction) -> RhoSigmaPair:
    """
    ``ρ*, σ*: A⋊(H⋊_c G) → A⋊G`` where ``H⋊_c G`` acts on ``A`` by ``ᾱ_(h,g) = α_{∂(h)g}``.

    :raises HomomorphismCheckFailed: if either map fails to be a *-homomorphism
    """
    cm = act.cm
    G = cm.G
    A = act.algebra
    arr = transformation_arrows(cm)
    T = transformation_groupoid(cm)
    bar = tuple(act.alpha[G.mul(cm.boundary(int(G.tgt[g]), h), g)] for h, g in arr)
    dom = crossed_product(GroupoidAlgebraAction(T, A, bar))
    tgt = crossed_product(act.action)

    rho = np.zeros((tgt.dim, dom.dim), dtype=complex)
    sigma = np.zeros((tgt.dim, dom.dim), dtype=complex)
    section = np.zeros((dom.dim, tgt.dim), dtype=complex)
    for t, (h, g) in enumerate(arr):
        x = int(G.tgt[g])
        F, _ = act.action.fiber(x)
        d = F.dim
        o = int(dom.offsets[t])
        g2 = G.mul(cm.boundary(x, h), g)
        rho[tgt.offsets[g2] : tgt.offsets[g2] + d, o : o + d] = np.eye(d)
        sigma[tgt.offsets[g] : tgt.offsets[g] + d, o : o + d] = F.right(act.u[x][h])
        if h == cm.fiber(x).identity:
            section[o : o + d, tgt.offsets[g] : tgt.offsets[g] + d] = np.eye(d)

    pair = RhoSigmaPair(
        domain=dom,
        target=tgt,
        rho_star=star_hom(dom.algebra, tgt.algebra, rho),
        sigma_star=star_hom(dom.algebra, tgt.algebra, sigma),
        section=star_hom(tgt.algebra, dom.algebra, section),
    )
    eye = np.eye(tgt.dim)
    for name, M in (("rho", rho), ("sigma", sigma)):
        if not close(M @ section, eye):
            raise HomomorphismCheckFailed(f"{name}* is not a left inverse of the unit section", witness=[name])
    return pair


def coequalizer_ideal(A: StarAlgebra, R: np.ndarray) -> Ideal:
    """
    Ideal spanned by the columns of ``R``, which must be closed under multiplication from both sides.

    :raises VerificationFailed: with the number of closure passes that enlarged the span as witness
    """
    I = ideal_generated(A, R)
    if I.iterations:
        raise VerificationFailed(
            f"Range of ρ*-σ* needed {I.iterations} closure passes to become an ideal",
            witness=I.iterations,
        )
    return I


def cm_crossed_product(act: CMAction) -> Tuple[CrossedProductResult, StarHom]:
    """
    The coequalizer ``A⋊(G,H)`` together with the quotient map from ``A⋊G``.

    :raises VerificationFailed: if the span of the range of ``ρ* - σ*`` is not already a two sided ideal
    """
    pair = rho_sigma(act)
    X = pair.target
    R = orth(pair.difference())
    I = coequalizer_ideal(X.algebra, R)
    Q, q = quotient_algebra(X.algebra, I)
    log.debug("cm crossed product %d -> %d (range %d)", X.dim, Q.dim, R.shape[1])
    res = CrossedProductResult(
        algebra=Q,
        i_A=q.compose(X.i_A),
        i_G=q.compose(X.i_G),
        source_action=act,
        parent=X,
        projection=q,
        ideal=I,
        range_dim=int(R.shape[1]),
        pair=pair,
    )
    return res, q


def cm_cstar(cm: CrossedModule) -> StarAlgebra:
    """
    Crossed module C*-algebra: ``C0(X)⋊(G,H)`` for the unit action.
    """
    return cm_crossed_product(unit_action(cm))[0].algebra


def quotient_group_crossed_product(act: CMAction) -> CrossedProductResult:
    """
    ``A⋊(G/∂(H))`` built directly, for actions with trivial ``u``.
    """
    cm = act.cm
    G = cm.G
    for x, U in enumerate(act.u):
        if not close(U, np.tile(act.action.fiber(x)[0].unit, (U.shape[0], 1))):
            raise ValueError("Quotient crossed products need trivial u")
    image = {G.objects[x]: [G.arrows[cm.boundary(x, h)] for h in range(len(f))] for x, f in enumerate(cm.H.fibers)}
    Q, proj = quotient_projection(G, image)
    lift = [int(np.flatnonzero(proj.arrow_map == q)[0]) for q in range(Q.n_arrows)]
    return crossed_product(groupoid_action(Q, act.algebra, [act.alpha[g] for g in lift]))


# functoriality


def _block_map(f: EquivariantMap, X: CrossedProductResult, Y: CrossedProductResult) -> np.ndarray:
    """``a⊗δ_k ↦ f(a)⊗δ_k`` between two crossed products by the same groupoid."""
    K = X.source_action.groupoid
    M = np.zeros((Y.dim, X.dim), dtype=complex)
    for k in range(K.n_arrows):
        t = int(K.tgt[k])
        _, Ea = f.source.action.fiber(t)
        _, Eb = f.target.action.fiber(t)
        M[Y.offsets[k] : Y.offsets[k + 1], X.offsets[k] : X.offsets[k + 1]] = Eb.conj().T @ f.hom.matrix @ Ea
    return M


def crossed_product_map(
    f: EquivariantMap,
    source: Optional[CrossedProductResult] = None,
    target: Optional[CrossedProductResult] = None,
) -> StarHom:
    """``A⋊G → B⋊G``, ``a⊗δ_g ↦ f(a)⊗δ_g``."""
    X = crossed_product(f.source.action) if source is None else source
    Y = crossed_product(f.target.action) if target is None else target
    return star_hom(X.algebra, Y.algebra, _block_map(f, X, Y))


def cm_crossed_product_map(
    f: EquivariantMap,
    source: Optional[CrossedProductResult] = None,
    target: Optional[CrossedProductResult] = None,
) -> StarHom:
    """
    Descent of :py:func:`crossed_product_map` to the coequalizers.

    Both squares with ``ρ*`` and ``σ*`` are checked.

    :raises NotEquivariant: when a square does not commute or the map does not descend
    """
    X = cm_crossed_product(f.source)[0] if source is None else source
    Y = cm_crossed_product(f.target)[0] if target is None else target
    assert X.parent is not None and Y.parent is not None and X.pair is not None and Y.pair is not None
    F = _block_map(f, X.parent, Y.parent)
    FT = _block_map(f, X.pair.domain, Y.pair.domain)
    for name, src, dst in (
        ("rho", X.pair.rho_star, Y.pair.rho_star),
        ("sigma", X.pair.sigma_star, Y.pair.sigma_star),
    ):
        if not close(F @ src.matrix, dst.matrix @ FT):
            raise NotEquivariant(f"Square with {name}* does not commute", witness=[name])
    assert X.ideal is not None and Y.ideal is not None and Y.projection is not None
    if not in_span(Y.ideal.basis, F @ X.ideal.basis):
        raise NotEquivariant("Map does not preserve the coequalizer ideal", witness=["ideal"])
    M = Y.projection.matrix @ F @ X.ideal.complement()
    return star_hom(X.algebra, Y.algebra, M)


# covariant representations


def _arrow_elements(act: CMAction, V: Union[Mapping[Any, Any], Sequence[Any]], n: int) -> Tuple[np.ndarray, ...]:
    G = act.cm.G
    if isinstance(V, Mapping):
        out = [None] * G.n_arrows
        for k, v in V.items():
            out[G.arrow_index(k)] = np.asarray(v, dtype=complex).reshape(n)
        missing = [G.arrows[g] for g, v in enumerate(out) if v is None]
        if missing:
            raise ValueError(f"V is missing arrows {missing}")
        return tuple(out)  # type: ignore[arg-type]
    vv = tuple(np.asarray(v, dtype=complex).reshape(n) for v in V)
    if len(vv) != G.n_arrows:
        raise ValueError(f"Expect {G.n_arrows} elements, one per arrow, got {len(vv)}")
    return vv


def covariant_rep(
    act: CMAction,
    target: StarAlgebra,
    pi: Union[StarHom, np.ndarray],
    V: Union[Mapping[Any, Any], Sequence[Any]],
) -> CovariantRep:
    """
    Validate a covariant representation ``(π, V)``.

    ``V_g π(a) V_g* = π(α_g(a))``, ``V`` multiplicative with ``V_{g⁻¹} = V_g*`` and ``V_{1_x} = π(1_x)``,
    and ``V_{∂(h)} = π(u_h)``.

    :raises NotCovariant, TwistViolation:
    """
    cm = act.cm
    G = cm.G
    A = act.algebra
    ph = pi if isinstance(pi, StarHom) else star_hom(A, target, pi)
    if not ph.is_unital():
        raise NotCovariant("π is not unital", witness=["unit"])
    VV = _arrow_elements(act, V, target.dim)
    P = ph.matrix
    for x in range(G.n_objects):
        if not close(VV[int(G.unit[x])], ph(A.fibering.projections[x])):
            raise NotCovariant(f"V at the unit of {G.objects[x]!r} is not π(1_x)", witness=["unit", G.objects[x]])
    for g in range(G.n_arrows):
        Vs = target.adjoint(VV[g])
        if not close(VV[int(G.inv[g])], Vs):
            raise NotCovariant(f"V_{G.arrows[g]!r}* != V of the inverse", witness=["star", G.arrows[g]])
        lhs = target.left(VV[g]) @ target.right(Vs) @ P
        rhs = P @ act.action.full(g)
        if not close(lhs, rhs):
            raise NotCovariant(
                f"V_g π(a) V_g* != π(α_g(a)) for g={G.arrows[g]!r}",
                witness=["alpha", G.arrows[g], worst(lhs, rhs)[1]],
            )
    for g1 in range(G.n_arrows):
        for g2 in G.target_fiber(int(G.src[g1])):
            if not close(VV[int(G.comp[g1, g2])], target.mul(VV[g1], VV[int(g2)])):
                raise NotCovariant("V is not multiplicative", witness=["product", G.arrows[g1], G.arrows[int(g2)]])
    for x, fib in enumerate(cm.H.fibers):
        for h in range(len(fib)):
            if not close(VV[cm.boundary(x, h)], ph(act.unitary(x, h))):
                raise TwistViolation(
                    f"V_∂(h) != π(u_h) for h={fib.label(h)!r}", witness=[G.objects[x], fib.label(h)]
                )
    return CovariantRep(act, target, ph, VV)


def integrate(rep: CovariantRep, product: Optional[CrossedProductResult] = None) -> StarHom:
    """
    The *-homomorphism out of ``A⋊(G,H)`` with ``f∘i_A = π`` and ``f(i_G(δ_g)) = V_g``.

    :param product: Result of :py:func:`cm_crossed_product` for ``rep.action``, computed when missing
    """
    res = cm_crossed_product(rep.action)[0] if product is None else product
    X = res.parent
    assert X is not None and X.offsets is not None and res.ideal is not None
    G = rep.action.cm.G
    B = rep.target
    F = np.zeros((B.dim, X.dim), dtype=complex)
    for g in range(G.n_arrows):
        _, E = rep.action.action.fiber(int(G.tgt[g]))
        F[:, X.offsets[g] : X.offsets[g + 1]] = B.right(rep.V[g]) @ rep.pi.matrix @ E
    if not close(F @ res.ideal.basis, np.zeros((B.dim, res.ideal.dim))):
        raise NotCovariant("Integrated form does not vanish on the coequalizer ideal", witness=["ideal"])

    # i_A(a)·i_G(δ_g) span the crossed product, which makes the integrated form unique
    Y = res.algebra
    gens = [Y.mul(res.i_A(a), res.i_G(Y_g)) for a in np.eye(res.i_A.source.dim) for Y_g in np.eye(G.n_arrows)]
    if rank(np.column_stack(gens)) != Y.dim:
        raise NotCovariant("i_A and i_G do not generate the crossed product", witness=["generators"])
    return star_hom(Y, B, F @ res.ideal.complement())


def disintegrate(res: CrossedProductResult, f: StarHom) -> CovariantRep:
    """
    The covariant pair ``(f∘i_A, f∘i_G)`` of a unital *-homomorphism out of ``A⋊(G,H)``.
    """
    act = res.source_action
    assert isinstance(act, CMAction)
    G = act.cm.G
    V = [f(res.i_G(e)) for e in np.eye(G.n_arrows)]
    return covariant_rep(act, f.target, f.compose(res.i_A), V)


def standard_representation(cm: CrossedModule) -> CovariantRep:
    """
    Covariant representation of ``C0(G)⋊H`` on ``ℓ²(G)``: multiplication operators and left translation.
    """
    if not cm.is_group_case():
        raise ValueError("The standard representation is defined for one-object crossed modules")
    G = cm.group_G()
    n = len(G)
    act, C = _canonical(cm, left_translation(G))
    M = matrix_algebra(n)
    V = []
    for g in range(n):
        v = np.zeros(n * n, dtype=complex)
        v[G.table[g] * n + np.arange(n)] = 1
        V.append(v)
    H = cm.group_H()
    pi = np.zeros((n * n, C.dim), dtype=complex)
    for h in range(len(H)):
        di = int(G.inverse[cm.boundary(0, h)])
        # δ_k ⊗ δ_h ↦ e_kk·λ_∂(h) = e_{k, ∂(h)⁻¹k}
        pi[np.arange(n) * n + G.table[di], h * n + np.arange(n)] = 1
    return covariant_rep(act, M, pi, V)


# verification suites


def _iterated(cm: CrossedModule, beta: GroupoidAlgebraAction) -> CrossedProductResult:
    G = cm.G
    arr = transformation_arrows(cm)
    T = transformation_groupoid(cm)
    bar = tuple(beta.alpha[G.mul(cm.boundary(int(G.tgt[g]), h), g)] for h, g in arr)
    return crossed_product(GroupoidAlgebraAction(T, beta.algebra, bar))


def verify_thm51(cm: CrossedModule, beta: GroupoidAlgebraAction, strict: bool = True) -> VerificationReport:
    """
    ``(B⋊H)⋊(G,H) ≅ B⋊G`` for an action ``β`` of ``G`` on ``B``.

    ``(B⋊H)⋊G`` is identified with ``B⋊(H⋊_c G)`` and mapped onto ``B⋊G`` by
    ``χ*((b⊗δ_h)⊗δ_g) = b⊗δ_{∂(h)g}``; its kernel must be the coequalizer ideal.

    :param strict: raise :py:class:`VerificationFailed` on the first failing sub-check
    """
    G = cm.G
    rep = VerificationReport("thm51")
    act, _ = _canonical(cm, beta)
    lhs, _ = cm_crossed_product(act)
    X = lhs.parent
    assert X is not None and X.offsets is not None and lhs.ideal is not None
    rhs = crossed_product(beta)
    assert rhs.offsets is not None

    BT = _iterated(cm, beta)
    same = BT.dim == X.dim and abs(BT.algebra.mult - X.algebra.mult).max() <= 1e-9
    rep.check("iterated_identification", same and close(BT.algebra.star, X.algebra.star))

    chi = np.zeros((rhs.dim, X.dim), dtype=complex)
    for g in range(G.n_arrows):
        x = int(G.tgt[g])
        b = beta.fiber(x)[0].dim
        for h in range(len(cm.H.fibers[x])):
            g2 = G.mul(cm.boundary(x, h), g)
            o = int(X.offsets[g]) + h * b
            chi[rhs.offsets[g2] : rhs.offsets[g2] + b, o : o + b] = np.eye(b)
    try:
        star_hom(X.algebra, rhs.algebra, chi)
        rep.check("chi_homomorphism", True)
    except HomomorphismCheckFailed:
        rep.check("chi_homomorphism", False)

    I = lhs.ideal
    K = null_space(chi)
    rep.check("chi_surjective", rank(chi) == rhs.dim)
    rep.check("ideal_in_kernel", close(chi @ I.basis, np.zeros((rhs.dim, I.dim))))
    rep.check("kernel_in_ideal", in_span(I.basis, K))
    rep.check("kernel_dim", K.shape[1] == I.dim)
    rep.check("closure_fixpoint", I.iterations == 0)
    rep.check("dims", lhs.dim == rhs.dim)
    lb, rb = wedderburn(lhs.algebra), wedderburn(rhs.algebra)
    rep.check("blocks", lb == rb)
    rep.data.update(
        lhs_dim=lhs.dim,
        rhs_dim=rhs.dim,
        parent_dim=X.dim,
        ideal_dim=I.dim,
        range_dim=lhs.range_dim,
        kernel_dim=int(K.shape[1]),
        lhs_blocks=list(lb),
        rhs_blocks=list(rb),
    )
    log.info("thm51 lhs=%d rhs=%d blocks=%s passed=%s", lhs.dim, rhs.dim, list(lb), rep.passed)
    return rep.raise_on_failure() if strict else rep


def verify_exactness(act: CMAction, I: Any, strict: bool = True) -> VerificationReport:
    """
    ``0 → I⋊(G,H) → A⋊(G,H) → (A/I)⋊(G,H) → 0`` is exact for an invariant ideal ``I``.
    """
    rep = VerificationReport("exactness")
    incl, quot = extension(act, I)
    XA, _ = cm_crossed_product(act)
    XQ, _ = cm_crossed_product(quot.target)
    mq = cm_crossed_product_map(quot, XA, XQ).matrix
    if incl is None:
        dim_i = 0
        img = np.zeros((XA.dim, 0), dtype=complex)
        rep.check("injective", True)
    else:
        XI, _ = cm_crossed_product(incl.source)
        mi = cm_crossed_product_map(incl, XI, XA).matrix
        dim_i = XI.dim
        rep.check("injective", rank(mi) == XI.dim)
        img = orth(mi)
    ker = null_space(mq)
    rep.check("surjective", rank(mq) == XQ.dim)
    rep.check("image_in_kernel", close(mq @ img, np.zeros((XQ.dim, img.shape[1]))))
    rep.check("kernel_in_image", in_span(img, ker))
    rep.check("kernel_dim", ker.shape[1] == img.shape[1])
    rep.check("dims_add", dim_i + XQ.dim == XA.dim)
    rep.data.update(ideal_dim=dim_i, middle_dim=XA.dim, quotient_dim=XQ.dim)
    log.info("exactness %d + %d = %d passed=%s", dim_i, XQ.dim, XA.dim, rep.passed)
    return rep.raise_on_failure() if strict else rep


__all__ = (
    "crossed_product",
    "rho_sigma",
    "coequalizer_ideal",
    "cm_crossed_product",
    "cm_cstar",
    "quotient_group_crossed_product",
    "crossed_product_map",
    "cm_crossed_product_map",
    "covariant_rep",
    "integrate",
    "disintegrate",
    "standard_representation",
    "verify_thm51",
    "verify_exactness",
)

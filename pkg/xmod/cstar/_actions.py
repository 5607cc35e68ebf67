"""
Crossed module actions on fibered C*-algebras.

An action of ``(G, H, ∂, c)`` on ``A`` is a groupoid action ``α`` of ``G`` by *-isomorphisms between fibers
together with unitaries ``u_h`` in the fiber over ``x`` for ``h ∈ H_x`` such that ``α_{∂(h)} = Ad(u_h)`` and
``α_g(u_h) = u_{c_g(h)}``. Everything is stored in fiber coordinates, see :py:func:`xmod.core.fiber_embedding`.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from xmod.core import (
    CrossedModule,
    CrossedModuleMorphism,
    FiniteGroup,
    FiniteGroupoid,
    Ideal,
    StarAlgebra,
    StarHom,
    b_group,
    bundle_groupoid,
    corner,
    diagonal_tensor,
    direct_sum,
    fiber_embedding,
    from_normal_subgroup,
    functions_on,
    group_algebra,
    group_groupoid,
    quotient_algebra,
    refiber,
    star_hom,
    wedderburn_decomposition,
)
from xmod.core._errors import (
    Covariance1Violation,
    Covariance2Violation,
    FiberMismatch,
    HomomorphismCheckFailed,
    NotAbelian,
    NotCentral,
    NotEquivariant,
    NotFunctorial,
    NotHomomorphism,
    NotInvariant,
    NotStarIso,
    NotUnitary,
    UnknownObject,
)
from xmod.core._groupoids import action_table
from xmod.core._linalg import close, in_span, rank, worst

from ._convolution import bundle_crossed_product
from .types import (
    CharacterGroup,
    CMAction,
    CrossedProductResult,
    EquivariantMap,
    GroupoidAlgebraAction,
    VerificationReport,
)

log = logging.getLogger(__name__)

AlphaSpec = Union[None, Mapping[Any, Any], Sequence[Any]]
USpec = Union[None, Mapping[Any, Any], Sequence[Any]]


def _check_objects(K: FiniteGroupoid, A: StarAlgebra) -> None:
    if K.n_objects == 1 and len(A.objects) == 1:
        return
    if tuple(map(str, K.objects)) != tuple(map(str, A.objects)):
        raise FiberMismatch(
            f"Algebra is fibered over {list(A.objects)}, groupoid has objects {list(K.objects)}",
            witness=[list(map(str, A.objects)), list(map(str, K.objects))],
        )


def _fibers(K: FiniteGroupoid, A: StarAlgebra) -> List[StarAlgebra]:
    return [fiber_embedding(A, A.objects[x])[0] for x in range(K.n_objects)]


def _resolve_alpha(K: FiniteGroupoid, fibers: List[StarAlgebra], alpha: AlphaSpec) -> List[np.ndarray]:
    n = K.n_arrows

    def _dims(g: int) -> Tuple[int, int]:
        return fibers[int(K.tgt[g])].dim, fibers[int(K.src[g])].dim

    if alpha is None:
        return [np.eye(*_dims(g), dtype=complex) for g in range(n)]
    if not isinstance(alpha, Mapping):
        mats = [np.asarray(a, dtype=complex) for a in alpha]
        if len(mats) != n:
            raise ValueError(f"Expect {n} matrices, one per arrow, got {len(mats)}")
        return mats

    known: Dict[int, np.ndarray] = {K.arrow_index(k): np.asarray(v, dtype=complex) for k, v in alpha.items()}
    for x in range(K.n_objects):
        known.setdefault(int(K.unit[x]), np.eye(fibers[x].dim, dtype=complex))
    # arrows not listed follow from inverses and composites
    changed = True
    while len(known) < n and changed:
        changed = False
        for a in list(known):
            ai = int(K.inv[a])
            if ai not in known and known[a].shape[0] == known[a].shape[1]:
                try:
                    known[ai] = scipy.linalg.inv(known[a])
                except (np.linalg.LinAlgError, ValueError):
                    raise NotStarIso(f"α_{K.arrows[a]!r} is not invertible", witness=K.arrows[a]) from None
                changed = True
            for b in list(known):
                ab = int(K.comp[a, b])
                if ab >= 0 and ab not in known:
                    known[ab] = known[a] @ known[b]
                    changed = True
    missing = [K.arrows[g] for g in range(n) if g not in known]
    if missing:
        raise ValueError(f"α is not determined on arrows {missing}")
    return [known[g] for g in range(n)]


def _find(G: FiniteGroup, label: Any) -> Optional[int]:
    try:
        return G.index(label)
    except UnknownObject:
        return None


def _u_key(cm: CrossedModule, key: Any) -> Tuple[int, int]:
    if cm.G.n_objects == 1:
        h = _find(cm.H.fibers[0], key)
        if h is not None:
            return 0, h
    if isinstance(key, (tuple, list)) and len(key) == 2:
        x = cm.G.object_index(key[0])
        return x, cm.H.fibers[x].index(key[1])
    raise UnknownObject(f"Cannot resolve {key!r} to an element of H", witness=key)


def _resolve_u(cm: CrossedModule, fibers: List[StarAlgebra], u: USpec) -> List[np.ndarray]:
    H = cm.H
    if u is not None and not isinstance(u, Mapping):
        uu = [np.asarray(a, dtype=complex) for a in u]
        if len(uu) != len(H.fibers):
            raise ValueError(f"Expect one array per object, got {len(uu)}")
        return [a.reshape(len(f), F.dim) for a, f, F in zip(uu, H.fibers, fibers)]

    per: List[Dict[int, np.ndarray]] = [{} for _ in H.fibers]
    for key, v in (u or {}).items():
        x, h = _u_key(cm, key)
        per[x][h] = np.asarray(v, dtype=complex).reshape(fibers[x].dim)

    out = []
    for x, (fib, F) in enumerate(zip(H.fibers, fibers)):
        if u is None:
            out.append(np.tile(F.unit, (len(fib), 1)))
            continue
        known = per[x]
        known.setdefault(fib.identity, F.unit.copy())
        changed = True
        while len(known) < len(fib) and changed:
            changed = False
            for a in list(known):
                for b in list(known):
                    ab = int(fib.table[a, b])
                    if ab not in known:
                        known[ab] = F.mul(known[a], known[b])
                        changed = True
        if len(known) < len(fib):
            missing = [fib.label(h) for h in range(len(fib)) if h not in known]
            raise ValueError(f"u is not determined on {missing} over {cm.objects[x]!r}")
        out.append(np.stack([known[h] for h in range(len(fib))]))
    return out


def _check_groupoid_action(K: FiniteGroupoid, fibers: List[StarAlgebra], alpha: List[np.ndarray]) -> None:
    for g in range(K.n_arrows):
        Fs, Ft = fibers[int(K.src[g])], fibers[int(K.tgt[g])]
        M = alpha[g]
        if M.shape != (Ft.dim, Fs.dim) or rank(M) != Fs.dim:
            raise NotStarIso(f"α_{K.arrows[g]!r} is not a linear isomorphism of fibers", witness=K.arrows[g])
        try:
            hom = star_hom(Fs, Ft, M)
        except HomomorphismCheckFailed as e:
            raise NotStarIso(f"α_{K.arrows[g]!r}: {e.message}", witness=[K.arrows[g], e.witness]) from None
        if not hom.is_unital():
            raise NotStarIso(f"α_{K.arrows[g]!r} is not unital", witness=K.arrows[g])

    for x in range(K.n_objects):
        e = int(K.unit[x])
        if not close(alpha[e], np.eye(fibers[x].dim)):
            raise NotFunctorial(f"α at the unit of {K.objects[x]!r} is not the identity", witness=K.arrows[e])
    for g1 in range(K.n_arrows):
        for g2 in K.target_fiber(int(K.src[g1])):
            g12 = int(K.comp[g1, g2])
            if not close(alpha[g12], alpha[g1] @ alpha[g2]):
                raise NotFunctorial(
                    f"α_({K.arrows[g1]!r}·{K.arrows[g2]!r}) != α_{K.arrows[g1]!r}∘α_{K.arrows[g2]!r}",
                    witness=(K.arrows[g1], K.arrows[int(g2)]),
                )


def groupoid_action(K: Union[FiniteGroup, FiniteGroupoid], A: StarAlgebra, alpha: AlphaSpec) -> GroupoidAlgebraAction:
    """
    Validate an action of a finite groupoid on a fibered algebra.

    :param alpha: Matrices in fiber coordinates, as a sequence over all arrows or a mapping from arrow labels;
                  a mapping may list generators only
    :raises NotStarIso, NotFunctorial, FiberMismatch:
    """
    KK = group_groupoid(K) if isinstance(K, FiniteGroup) else K
    _check_objects(KK, A)
    fibers = _fibers(KK, A)
    mats = _resolve_alpha(KK, fibers, alpha)
    _check_groupoid_action(KK, fibers, mats)
    return GroupoidAlgebraAction(KK, A, tuple(mats))


def _check_cm_action(cm: CrossedModule, act: GroupoidAlgebraAction, u: List[np.ndarray]) -> None:
    G, H = cm.G, cm.H
    for x, fib in enumerate(H.fibers):
        F, _ = act.fiber(x)
        U = u[x]
        if U.shape != (len(fib), F.dim):
            raise ValueError(f"u over {G.objects[x]!r} has shape {U.shape}, expect {(len(fib), F.dim)}")
        for h in range(len(fib)):
            uh, us = U[h], F.adjoint(U[h])
            if not (close(F.mul(uh, us), F.unit) and close(F.mul(us, uh), F.unit)):
                raise NotUnitary(f"u_{fib.label(h)!r} is not unitary", witness=[G.objects[x], fib.label(h)])
        for a in range(len(fib)):
            for b in range(len(fib)):
                if not close(U[int(fib.table[a, b])], F.mul(U[a], U[b])):
                    raise NotHomomorphism(
                        f"u_({fib.label(a)!r}·{fib.label(b)!r}) != u_{fib.label(a)!r}·u_{fib.label(b)!r}",
                        witness=[G.objects[x], fib.label(a), fib.label(b)],
                    )
        # α_{∂(h)} = Ad(u_h)
        for h in range(len(fib)):
            lhs = act.alpha[cm.boundary(x, h)]
            rhs = F.left(U[h]) @ F.right(F.adjoint(U[h]))
            if not close(lhs, rhs):
                j = worst(lhs, rhs)[1]
                raise Covariance1Violation(
                    f"α_∂({fib.label(h)!r}) != Ad(u_{fib.label(h)!r}) on basis element {j}",
                    witness=[G.objects[x], fib.label(h), j],
                )
    # α_g(u_h) = u_{c_g(h)}
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        for h in range(len(H.fibers[s])):
            if not close(act.alpha[g] @ u[s][h], u[t][cm.act(g, h)]):
                raise Covariance2Violation(
                    f"α_{G.arrows[g]!r}(u_{H.fibers[s].label(h)!r}) != u_c(h)",
                    witness=[G.arrows[g], H.fibers[s].label(h)],
                )


def cm_action(cm: CrossedModule, A: StarAlgebra, alpha: AlphaSpec = None, u: USpec = None) -> CMAction:
    """
    Validate an action ``(α, u)`` of a crossed module on a fibered algebra.

    A one-object ``G`` accepts any algebra with a single fiber; otherwise fiber labels must match the objects
    of ``G`` in order.

    :param alpha: ``None`` for identities between fibers, else as for :py:func:`groupoid_action`
    :param u: ``None`` for trivial unitaries, a mapping from ``h`` (one object) or ``(x, h)`` labels to fiber
              coordinates (generators suffice), or one ``(|H_x|, dim A_x)`` array per object
    :raises NotStarIso, NotFunctorial, NotUnitary, NotHomomorphism, Covariance1Violation, Covariance2Violation:
    """
    act = groupoid_action(cm.G, A, alpha)
    uu = _resolve_u(cm, _fibers(cm.G, A), u)
    _check_cm_action(cm, act, uu)
    log.debug("validated cm action on algebra dim=%d", A.dim)
    return CMAction(cm, act, tuple(uu))


def trivial_action(cm: CrossedModule, A: StarAlgebra) -> CMAction:
    """Identity maps between fibers and trivial unitaries."""
    return cm_action(cm, A, None, None)


def unit_action(cm: CrossedModule) -> CMAction:
    """
    ``C0(X)`` with ``G`` moving points along arrows and ``u ≡ 1``.

    Unit object of the diagonal tensor product and coefficient action of the crossed module C*-algebra.
    """
    return cm_action(cm, functions_on(list(cm.objects)))


def green_action(
    G: FiniteGroup,
    N: Union[FiniteGroup, Sequence[Any]],
    A: StarAlgebra,
    alpha: AlphaSpec,
    u: USpec,
) -> CMAction:
    """Twisted covariant system of a normal subgroup ``N ⊆ G``."""
    return cm_action(from_normal_subgroup(G, N), A, alpha, u)


def _ad(A: StarAlgebra, v: np.ndarray) -> np.ndarray:
    return A.left(v) @ A.right(A.adjoint(v))


def inner_action(
    cm: CrossedModule,
    A: StarAlgebra,
    unitaries_G: Mapping[Any, Any],
    unitaries_H: USpec = None,
) -> CMAction:
    """
    ``α_g = Ad(V_g)`` for a one-object ``G``.

    :param unitaries_G: ``g -> V_g``, generators suffice
    """
    if not cm.G.is_group():
        raise ValueError("Inner actions need a one-object G")
    alpha = {g: _ad(A, np.asarray(v, dtype=complex)) for g, v in unitaries_G.items()}
    return cm_action(cm, A, alpha, unitaries_H)


def function_algebra_action(
    cm: CrossedModule,
    X: Sequence[Any],
    action: Union[Mapping[Any, Mapping[Any, Any]], np.ndarray],
    u: USpec = None,
) -> CMAction:
    """
    A one-object ``G`` permuting the points of ``X``, on ``C0(X)`` viewed as a single fiber.
    """
    if not cm.G.is_group():
        raise ValueError("Permutation actions need a one-object G")
    G = cm.G.as_group()
    tbl = action_table(G, X, action)
    A0 = functions_on(list(X))
    A = refiber(A0, cm.objects, A0.unit.reshape(1, -1))
    n = A.dim
    alpha = []
    for g in range(len(G)):
        P = np.zeros((n, n), dtype=complex)
        P[tbl[g], np.arange(n)] = 1
        alpha.append(P)
    return cm_action(cm, A, alpha, u)


def left_translation(G: Union[FiniteGroup, FiniteGroupoid]) -> GroupoidAlgebraAction:
    """
    ``G`` acting on ``C0(arrows)`` fibered by target, ``δ_k ↦ δ_{gk}``.
    """
    K = group_groupoid(G) if isinstance(G, FiniteGroup) else G
    A0 = functions_on(list(K.arrows))
    P = np.zeros((K.n_objects, K.n_arrows))
    P[K.tgt, np.arange(K.n_arrows)] = 1
    A = refiber(A0, K.objects, P)
    pos = [{int(k): i for i, k in enumerate(K.target_fiber(x))} for x in range(K.n_objects)]
    alpha = []
    for g in range(K.n_arrows):
        s, t = int(K.src[g]), int(K.tgt[g])
        M = np.zeros((len(pos[t]), len(pos[s])), dtype=complex)
        for k, i in pos[s].items():
            M[pos[t][int(K.comp[g, k])], i] = 1
        alpha.append(M)
    return groupoid_action(K, A, alpha)


def _canonical(cm: CrossedModule, beta: GroupoidAlgebraAction) -> Tuple[CMAction, CrossedProductResult]:
    G, H = cm.G, cm.H
    if beta.groupoid.n_arrows != G.n_arrows or beta.groupoid.n_objects != G.n_objects:
        raise ValueError("β is not an action of the crossed module's groupoid")
    B = beta.algebra
    gamma = [beta.alpha[cm.boundary(x, h)] for x, fib in enumerate(H.fibers) for h in range(len(fib))]
    C = bundle_crossed_product(H, groupoid_action(bundle_groupoid(H), B, gamma))
    bdim = [beta.fiber(x)[0].dim for x in range(G.n_objects)]

    alpha = []
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        bs, bt = bdim[s], bdim[t]
        M = np.zeros((len(H.fibers[t]) * bt, len(H.fibers[s]) * bs), dtype=complex)
        for h in range(len(H.fibers[s])):
            h2 = cm.act(g, h)
            M[h2 * bt : (h2 + 1) * bt, h * bs : (h + 1) * bs] = beta.alpha[g]
        alpha.append(M)

    u = []
    for x, fib in enumerate(H.fibers):
        one = beta.fiber(x)[0].unit
        U = np.zeros((len(fib), len(fib) * bdim[x]), dtype=complex)
        for h in range(len(fib)):
            U[h, h * bdim[x] : (h + 1) * bdim[x]] = one
        u.append(U)
    return cm_action(cm, C.algebra, alpha, u), C


def canonical_action_on_BH(cm: CrossedModule, beta: GroupoidAlgebraAction) -> CMAction:
    """
    Action of ``(G, H)`` on ``B⋊H`` induced by an action ``β`` of ``G`` on ``B``.

    ``α_g(b⊗δ_h) = β_g(b)⊗δ_{c_g(h)}`` and ``u_h = 1⊗δ_h``; ``H`` acts on ``B`` through ``β∘∂``.
    """
    return _canonical(cm, beta)[0]


def diagonal_action(act1: CMAction, act2: CMAction) -> CMAction:
    """
    ``(α⊗β, u⊗v)`` on ``A⊗_X B``.

    :raises FiberMismatch: when the algebras live over different objects
    """
    cm = act1.cm
    if act2.cm is not cm:
        raise ValueError("Diagonal actions need the same crossed module on both sides")
    D = diagonal_tensor(act1.algebra, act2.algebra)
    alpha = [np.kron(a, b) for a, b in zip(act1.alpha, act2.alpha)]
    u = [np.stack([np.kron(p, q) for p, q in zip(U, V)]) for U, V in zip(act1.u, act2.u)]
    return cm_action(cm, D, alpha, u)


def pullback_action(morphism: CrossedModuleMorphism, act: CMAction) -> CMAction:
    """
    Action of ``morphism.source`` on ``⊕_x A_{φ(x)}`` through a morphism into the acting crossed module.
    """
    if morphism.target is not act.cm:
        raise ValueError("Morphism does not end at the acting crossed module")
    src = morphism.source
    phi = morphism.phi_G
    om = [int(y) for y in phi.object_map]
    A = direct_sum(*(act.action.fiber(y)[0] for y in om), objects=src.objects)
    alpha = [act.alpha[phi(g)] for g in range(src.G.n_arrows)]
    u = [act.u[om[x]][morphism.phi_H[x]] for x in range(src.G.n_objects)]
    return cm_action(src, A, alpha, u)


def equivariant_map(src: CMAction, dst: CMAction, hom: Union[StarHom, np.ndarray]) -> EquivariantMap:
    """
    Check ``π(α_g(a)) = β_g(π(a))`` and ``π(u_h·a) = v_h·π(a)`` on all basis elements.

    :raises NotEquivariant: with the failing arrow or unitary and basis element
    """
    if src.cm is not dst.cm:
        raise ValueError("Equivariant maps need the same crossed module on both sides")
    h = hom if isinstance(hom, StarHom) else star_hom(src.algebra, dst.algebra, hom)
    M = h.matrix
    cm = src.cm
    G = cm.G
    for g in range(G.n_arrows):
        lhs = M @ src.action.full(g)
        rhs = dst.action.full(g) @ M
        if not close(lhs, rhs):
            raise NotEquivariant(
                f"π∘α_{G.arrows[g]!r} != β_{G.arrows[g]!r}∘π", witness=["alpha", G.arrows[g], worst(lhs, rhs)[1]]
            )
    for x, fib in enumerate(cm.H.fibers):
        for k in range(len(fib)):
            lhs = M @ src.algebra.left(src.unitary(x, k))
            rhs = dst.algebra.left(dst.unitary(x, k)) @ M
            if not close(lhs, rhs):
                raise NotEquivariant(
                    f"π(u_h·a) != v_h·π(a) for h={fib.label(k)!r}",
                    witness=["u", G.objects[x], fib.label(k), worst(lhs, rhs)[1]],
                )
    return EquivariantMap(src, dst, h)


def _induced_action(act: CMAction, T: StarAlgebra, push: np.ndarray, lift: np.ndarray) -> CMAction:
    """
    Transport an action along a surjective *-homomorphism ``push`` whose kernel is invariant.

    ``lift`` is any linear section of ``push``.
    """
    cm = act.cm
    G = cm.G
    emb = [fiber_embedding(T, T.objects[x])[1] for x in range(G.n_objects)]
    alpha = []
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        alpha.append(emb[t].conj().T @ push @ act.action.full(g) @ lift @ emb[s])
    u = [
        np.stack([emb[x].conj().T @ push @ act.unitary(x, h) for h in range(len(fib))])
        for x, fib in enumerate(cm.H.fibers)
    ]
    return cm_action(cm, T, alpha, u)


def ideal_unit(A: StarAlgebra, I: Ideal) -> np.ndarray:
    """
    Central projection ``z`` with ``I = zA``: the sum of the minimal central projections inside ``I``.
    """
    z = np.zeros(A.dim, dtype=complex)
    for _, p in wedderburn_decomposition(A):
        if I.contains(p):
            z = z + p
    return z


def extension(act: CMAction, I: Ideal) -> Tuple[Optional[EquivariantMap], EquivariantMap]:
    """
    The extension ``I ↪ A ↠ A/I`` as equivariant maps: inclusion of the ideal and quotient map.

    The ideal is a unital direct summand ``zA``; the inclusion is ``None`` for the zero ideal.

    :raises NotInvariant: when some ``α_g`` moves ``I``
    """
    A = act.algebra
    G = act.cm.G
    for g in range(G.n_arrows):
        if not in_span(I.basis, act.action.full(g) @ I.basis):
            raise NotInvariant(f"α_{G.arrows[g]!r} does not preserve the ideal", witness=G.arrows[g])

    incl = None
    if I.dim:
        z = ideal_unit(A, I)
        C, B = corner(A, z)
        Bh = B.conj().T
        P = np.array([Bh @ A.mul(z, p) for p in A.fibering.projections])
        C = refiber(C, A.objects, P)
        incl = equivariant_map(_induced_action(act, C, Bh @ A.left(z), B), act, B)
    Q, q = quotient_algebra(A, I)
    quot = equivariant_map(act, _induced_action(act, Q, q.matrix, I.complement()), q)
    return incl, quot


def restrict_and_quotient(act: CMAction, I: Ideal) -> Tuple[Optional[CMAction], CMAction]:
    """
    Actions on an invariant ideal and on the quotient; the ideal part is ``None`` for the zero ideal.
    """
    incl, quot = extension(act, I)
    return (None if incl is None else incl.source), quot.target


# Pontryagin duality


def characters(H: FiniteGroup) -> CharacterGroup:
    """
    Characters of a finite abelian group, trivial character first.

    Read off the minimal projections ``p_ξ = |H|⁻¹ Σ conj(ξ(h)) δ_h`` of ``ℂ[H]`` and rounded to exact roots
    of unity.

    :raises NotAbelian:
    """
    bad = H.commute_witness()
    if bad is not None:
        raise NotAbelian("Characters need an abelian group", witness=H.labels(bad))
    e = int(np.lcm.reduce([H.element_order(i) for i in range(len(H))]))
    rows = []
    for _, p in wedderburn_decomposition(group_algebra(H)):
        xi = np.conj(p) / p[H.identity].real
        rows.append(np.round(np.angle(xi) * e / (2 * np.pi)).astype(np.int64) % e)
    powers = np.array(sorted(map(tuple, rows)), dtype=np.int64).reshape(len(rows), len(H))
    lhs = powers[:, H.table]
    rhs = (powers[:, :, None] + powers[:, None, :]) % e
    if len(rows) != len(H) or not np.array_equal(lhs, rhs):
        raise NotHomomorphism("Recovered characters are not multiplicative", witness=len(rows))
    return CharacterGroup(H, powers, e)


def _abelian_group_case(act: CMAction) -> FiniteGroup:
    if not act.cm.is_group_case():
        raise ValueError("Pontryagin duality is implemented for one-object crossed modules")
    return act.cm.group_H()


def spectral_projections(act: CMAction) -> Tuple[CharacterGroup, np.ndarray]:
    """
    ``p_ξ = |H|⁻¹ Σ_h conj(ξ(h)) u_h`` for every character, as rows.

    :raises NotCentral: when some ``u_h`` is not central
    """
    H = _abelian_group_case(act)
    A = act.algebra
    for h in range(len(H)):
        uh = act.unitary(0, h)
        L, R = A.left(uh), A.right(uh)
        if not close(L, R):
            raise NotCentral(f"u_{H.label(h)!r} is not central", witness=[H.label(h), worst(L, R)[1]])
    chars = characters(H)
    U = np.stack([act.unitary(0, h) for h in range(len(H))])
    P = chars.values.conj() @ U / len(H)
    return chars, P


def pontryagin_decompose(act: CMAction) -> Tuple[StarAlgebra, CharacterGroup]:
    """
    Re-fiber the algebra over the characters of ``H`` by the spectral projections of ``u``.

    Fibers may be zero.
    """
    chars, P = spectral_projections(act)
    return refiber(act.algebra, chars.labels, P), chars


def pontryagin_compose(A: StarAlgebra, chars: CharacterGroup, cm: Optional[CrossedModule] = None) -> CMAction:
    """
    Inverse of :py:func:`pontryagin_decompose`: ``u_h = Σ_ξ ξ(h) p_ξ`` with trivial ``α``.

    :param cm: Defaults to ``b_group(chars.group)``
    """
    cm = b_group(chars.group) if cm is None else cm
    if tuple(map(str, A.objects)) != chars.labels:
        raise FiberMismatch("Algebra is not fibered over the characters", witness=list(map(str, A.objects)))
    P = A.fibering.projections
    U = chars.values.T @ P
    A1 = refiber(A, cm.objects, A.unit.reshape(1, -1))
    return cm_action(cm, A1, None, [U])


def fiber_dimensions(A: StarAlgebra) -> List[int]:
    """Dimension of every fiber, zero fibers included."""
    return [int(round(A.trace(p).real)) for p in A.fibering.projections]


def verify_dual_equivariance(act: CMAction) -> VerificationReport:
    """
    For trivial ``∂`` and abelian ``H``: ``α_g(p_ξ) = p_{g·ξ}`` with ``(g·ξ)(h) = ξ(c_{g⁻¹}(h))``.
    """
    cm = act.cm
    G = cm.G
    H = _abelian_group_case(act)
    rep = VerificationReport("dual_equivariance")
    rep.check("trivial_boundary", all(cm.boundary(0, h) == int(G.unit[0]) for h in range(len(H))))
    chars, P = spectral_projections(act)
    table = np.zeros((G.n_arrows, len(chars)), dtype=np.int64)
    ok = True
    for g in range(G.n_arrows):
        cgi = cm.c[int(G.inv[g])]
        for xi in range(len(chars)):
            gx = chars.index(chars.powers[xi][cgi])
            table[g, xi] = gx
            ok = ok and close(act.action.full(g) @ P[xi], P[gx])
    rep.check("projections_permuted", ok)
    rep.data["dual_action"] = {str(G.arrows[g]): [chars.labels[i] for i in table[g]] for g in range(G.n_arrows)}
    rep.data["fiber_dims"] = [int(round(act.algebra.trace(p).real)) for p in P]
    return rep


def tensor_fiber_dimensions(act1: CMAction, act2: CMAction) -> Dict[str, Tuple[int, int]]:
    """
    Fiber dimensions of the diagonal action over every character against ``Σ_η dim A_η · dim B_{η⁻¹ξ}``.
    """
    D = diagonal_action(act1, act2)
    dims = [fiber_dimensions(pontryagin_decompose(a)[0]) for a in (act1, act2, D)]
    chars = characters(_abelian_group_case(D))
    out = {}
    for xi, label in enumerate(chars.labels):
        expect = sum(dims[0][eta] * dims[1][chars.product(chars.inverse(eta), xi)] for eta in range(len(chars)))
        out[label] = (dims[2][xi], expect)
    return out


__all__ = (
    "groupoid_action",
    "cm_action",
    "trivial_action",
    "unit_action",
    "green_action",
    "inner_action",
    "function_algebra_action",
    "left_translation",
    "canonical_action_on_BH",
    "diagonal_action",
    "pullback_action",
    "equivariant_map",
    "ideal_unit",
    "extension",
    "restrict_and_quotient",
    "characters",
    "spectral_projections",
    "pontryagin_decompose",
    "pontryagin_compose",
    "fiber_dimensions",
    "verify_dual_equivariance",
    "tensor_fiber_dimensions",
)

"""
Symmetries of finite groupoids.

Automorphisms and global bisections of a groupoid ``K`` form the crossed module ``Aut₂(K)``. A crossed
module acts on ``K`` when ``G`` acts by automorphisms of the anchor fibers and ``H`` by bisections, and
such an action induces an action on the groupoid algebra ``C*(K)``.
"""

from __future__ import annotations

import itertools
import logging
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from xmod.core import (
    GROUP_OBJECT,
    CrossedModule,
    FiniteGroup,
    FiniteGroupoid,
    GroupBundle,
    get_config,
    group_from_table,
    group_groupoid,
    groupoid_algebra,
    translation_groupoid_HdG,
    validate_crossed_module,
)
from xmod.core._errors import (
    AnchorNotInvariant,
    BisectionAxiomViolation,
    ConjugationAxiomViolation,
    NotBisection,
    NotFunctorial,
    NotHomomorphism,
    SizeLimit,
)
from xmod.core._groupoids import translation_arrows

from ._actions import _canonical, cm_action, equivariant_map, left_translation
from .types import Bisection, CMAction, CMGroupoidAction, EquivariantMap, GroupoidAut

log = logging.getLogger(__name__)


# bisections


def _bisection_product(K: FiniteGroupoid, S: np.ndarray, T: np.ndarray, objects: Sequence[int]) -> np.ndarray:
    """``(S·T)(x) = S(tgt T(x))·T(x)`` on the given objects, ``-1`` elsewhere."""
    out = np.full(K.n_objects, -1, dtype=np.int64)
    for x in objects:
        t = int(T[x])
        out[x] = K.comp[S[K.tgt[t]], t]
    return out


def _bisection_inverse(K: FiniteGroupoid, S: np.ndarray, objects: Sequence[int]) -> np.ndarray:
    """``S⁻¹(x) = S(y)⁻¹`` where ``tgt S(y) = x``."""
    out = np.full(K.n_objects, -1, dtype=np.int64)
    for y in objects:
        s = int(S[y])
        out[K.tgt[s]] = K.inv[s]
    return out


def _is_bisection(K: FiniteGroupoid, S: np.ndarray, objects: Sequence[int]) -> bool:
    oo = np.asarray(objects, dtype=np.int64)
    if len(oo) == 0:
        return True
    arrows = S[oo]
    if (arrows < 0).any() or not np.array_equal(K.src[arrows], oo):
        return False
    return sorted(K.tgt[arrows].tolist()) == sorted(oo.tolist())


def _sections(K: FiniteGroupoid) -> Iterator[np.ndarray]:
    cfg = get_config()
    n_candidates = int(np.prod([len(K.source_fiber(x)) for x in range(K.n_objects)], dtype=float))
    if n_candidates > cfg.max_aut_candidates:
        raise SizeLimit(
            f"{n_candidates} candidate sections exceed max_aut_candidates={cfg.max_aut_candidates}",
            witness=n_candidates,
        )
    everything = range(K.n_objects)
    for choice in itertools.product(*(K.source_fiber(x) for x in everything)):
        S = np.array(choice, dtype=np.int64)
        if _is_bisection(K, S, everything):
            yield S


def _bisection_label(K: FiniteGroupoid, S: np.ndarray) -> Any:
    if K.n_objects == 1:
        return K.arrows[int(S[0])]
    return tuple(K.arrows[int(a)] for a in S)


def bisection_group(K: FiniteGroupoid) -> Tuple[FiniteGroup, Tuple[Bisection, ...]]:
    """
    Group of global bisections of ``K`` with product ``(S·T)(x) = S(tgt T(x))·T(x)``.

    Elements are labelled by their arrows, a single arrow label for one-object groupoids so that the
    bisections of a group are the group itself.

    :return: The group and the bisections in element order
    :raises SizeLimit: when there are too many candidate sections to enumerate
    """
    sections = list(_sections(K))
    index = {tuple(S.tolist()): i for i, S in enumerate(sections)}
    everything = range(K.n_objects)
    n = len(sections)
    table = np.empty((n, n), dtype=np.int64)
    for i, S in enumerate(sections):
        for j, T in enumerate(sections):
            table[i, j] = index[tuple(_bisection_product(K, S, T, everything).tolist())]
    labels = [_bisection_label(K, S) for S in sections]
    grp = group_from_table(labels, table, table_is_index=True)
    log.debug("bisection group of %r has order %d", K, n)
    return grp, tuple(Bisection(K, S) for S in sections)


def bisection_to_aut(S: Bisection) -> GroupoidAut:
    """
    Inner automorphism ``k ↦ S(tgt k)·k·S(src k)⁻¹`` of a bisection.

    :raises NotBisection: when ``S`` is not a global bisection
    """
    K = S.groupoid
    if not _is_bisection(K, S.section, range(K.n_objects)):
        raise NotBisection("Section is not a global bisection", witness=[K.arrows[int(a)] for a in S.section])
    arrow_map = np.array(
        [K.mul(int(S.section[K.tgt[k]]), k, int(K.inv[S.section[K.src[k]]])) for k in range(K.n_arrows)],
        dtype=np.int64,
    )
    return GroupoidAut(K, S.object_map().astype(np.int64), arrow_map)


def bisection_inverse(S: Bisection) -> Bisection:
    """``S⁻¹(x) = S(y)⁻¹`` for the object ``y`` with ``tgt S(y) = x``."""
    K = S.groupoid
    return Bisection(K, _bisection_inverse(K, S.section, range(K.n_objects)))


# automorphisms


def _automorphisms(K: FiniteGroupoid) -> List[GroupoidAut]:
    """All automorphisms, identity first; arrows are assigned one at a time with composition pruning."""
    cfg = get_config()
    budget = [cfg.max_aut_candidates]
    out: List[GroupoidAut] = []
    n = K.n_arrows
    composable = list(zip(*np.nonzero(K.comp >= 0)))

    def consistent(amap: np.ndarray) -> bool:
        for a, b in composable:
            ab = int(K.comp[a, b])
            if amap[a] < 0 or amap[b] < 0 or amap[ab] < 0:
                continue
            if K.comp[amap[a], amap[b]] != amap[ab]:
                return False
        return True

    def extend(amap: np.ndarray, used: np.ndarray, om: np.ndarray, k: int) -> None:
        while k < n and amap[k] >= 0:
            k += 1
        if k == n:
            out.append(GroupoidAut(K, om.copy(), amap.copy()))
            return
        s, t = om[K.src[k]], om[K.tgt[k]]
        for c in np.flatnonzero((K.src == s) & (K.tgt == t) & ~used):
            budget[0] -= 1
            if budget[0] < 0:
                raise SizeLimit(
                    f"Automorphism search exceeds max_aut_candidates={cfg.max_aut_candidates}",
                    witness=cfg.max_aut_candidates,
                )
            ki, ci = int(K.inv[k]), int(K.inv[c])
            if ki != k and (amap[ki] >= 0 or used[ci]):
                continue
            if (ki == k) != (ci == c):
                continue
            amap[k], used[c] = c, True
            amap[ki], used[ci] = ci, True
            if consistent(amap):
                extend(amap, used, om, k + 1)
            amap[k] = amap[ki] = -1
            used[c] = used[ci] = False

    for perm in itertools.permutations(range(K.n_objects)):
        om = np.array(perm, dtype=np.int64)
        amap = np.full(n, -1, dtype=np.int64)
        used = np.zeros(n, dtype=bool)
        amap[K.unit] = K.unit[om]
        used[K.unit[om]] = True
        if consistent(amap):
            extend(amap, used, om, 0)
    return out


def aut2(K: FiniteGroupoid) -> CrossedModule:
    """
    The crossed module ``Aut₂(K)``: automorphisms acting on global bisections.

    ``∂`` sends a bisection to its inner automorphism and ``φ`` acts by ``S ↦ φ∘S∘φ⁻¹`` on objects.
    Automorphisms are labelled ``a0, a1, ...`` with ``a0`` the identity.
    """
    auts = _automorphisms(K)
    H, bis = bisection_group(K)
    aindex = {tuple(a.arrow_map.tolist()): i for i, a in enumerate(auts)}
    m = len(auts)
    table = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(auts):
        for j, b in enumerate(auts):
            table[i, j] = aindex[tuple(a.arrow_map[b.arrow_map].tolist())]
    A = group_from_table([f"a{i}" for i in range(m)], table, table_is_index=True)

    sindex = {tuple(S.section.tolist()): i for i, S in enumerate(bis)}
    d = np.array([aindex[tuple(bisection_to_aut(S).arrow_map.tolist())] for S in bis], dtype=np.int64)
    c = []
    for a in auts:
        inv_obj = np.argsort(a.object_map)
        c.append(
            np.array([sindex[tuple(a.arrow_map[S.section[inv_obj]].tolist())] for S in bis], dtype=np.int64)
        )
    log.info("Aut2 of %r: |Aut|=%d |S|=%d", K, m, len(H))
    return validate_crossed_module(group_groupoid(A), GroupBundle((GROUP_OBJECT,), (H,)), [d], c)


# crossed module actions on groupoids


def _resolve_rho(cm: CrossedModule, K: FiniteGroupoid, rho: Any) -> np.ndarray:
    if isinstance(rho, Mapping):
        out = np.full(K.n_objects, -1, dtype=np.int64)
        for y, x in rho.items():
            out[K.object_index(y)] = cm.G.object_index(x)
        if (out < 0).any():
            raise ValueError(f"Anchor misses object {K.objects[int(np.flatnonzero(out < 0)[0])]!r}")
        return out
    return np.asarray(rho, dtype=np.int64).reshape(K.n_objects)


def _resolve_alpha(cm: CrossedModule, K: FiniteGroupoid, alpha: Any) -> List[np.ndarray]:
    G = cm.G
    if isinstance(alpha, Mapping):
        out = [np.full(K.n_arrows, -1, dtype=np.int64) for _ in range(G.n_arrows)]
        for g, mapping in alpha.items():
            gi = G.arrow_index(g)
            for k, k2 in mapping.items():
                out[gi][K.arrow_index(k)] = K.arrow_index(k2)
        return out
    return [np.asarray(a, dtype=np.int64).reshape(K.n_arrows) for a in alpha]


def _resolve_kappa(cm: CrossedModule, K: FiniteGroupoid, kappa: Any) -> List[np.ndarray]:
    H = cm.H
    if isinstance(kappa, Mapping):
        out = [np.full((len(f), K.n_objects), -1, dtype=np.int64) for f in H.fibers]
        for key, mapping in kappa.items():
            if isinstance(key, (tuple, list)) and len(key) == 2 and cm.G.n_objects > 1:
                x = cm.G.object_index(key[0])
                h = H.fibers[x].index(key[1])
            else:
                x, h = 0, H.fibers[0].index(key)
            for y, k in mapping.items():
                out[x][h, K.object_index(y)] = K.arrow_index(k)
        return out
    return [np.asarray(k, dtype=np.int64).reshape(len(f), K.n_objects) for k, f in zip(kappa, H.fibers)]


def _check_alpha(cm: CrossedModule, K: FiniteGroupoid, rho: np.ndarray, alpha: List[np.ndarray]) -> None:
    G = cm.G
    over = [np.flatnonzero(rho[K.tgt] == x) for x in range(G.n_objects)]
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        a = alpha[g]
        dom = over[s]
        img = a[dom]
        if (img < 0).any() or sorted(img.tolist()) != over[t].tolist():
            raise NotFunctorial(
                f"α_{G.arrows[g]!r} is not a bijection between the fibers over its endpoints", witness=[G.arrows[g]]
            )
        for k1 in dom:
            for k2 in dom:
                k12 = int(K.comp[k1, k2])
                if k12 >= 0 and K.comp[a[k1], a[k2]] != a[k12]:
                    raise NotFunctorial(
                        f"α_{G.arrows[g]!r} does not preserve composition",
                        witness=[G.arrows[g], K.arrows[k1], K.arrows[k2]],
                    )
    for x in range(G.n_objects):
        e = int(G.unit[x])
        if not np.array_equal(alpha[e][over[x]], over[x]):
            raise NotFunctorial(f"α at the unit of {G.objects[x]!r} is not the identity", witness=[G.arrows[e]])
    for g1 in range(G.n_arrows):
        for g2 in G.target_fiber(int(G.src[g1])):
            g12 = int(G.comp[g1, g2])
            dom = over[int(G.src[g2])]
            if not np.array_equal(alpha[g1][alpha[int(g2)][dom]], alpha[g12][dom]):
                raise NotFunctorial("α is not multiplicative", witness=[G.arrows[g1], G.arrows[int(g2)]])


def cm_groupoid_action(
    cm: CrossedModule,
    K: FiniteGroupoid,
    rho: Union[Mapping[Any, Any], Sequence[int], np.ndarray],
    alpha: Union[Mapping[Any, Mapping[Any, Any]], Sequence[Any]],
    kappa: Union[Mapping[Any, Mapping[Any, Any]], Sequence[Any]],
) -> CMGroupoidAction:
    """
    Validate an action of a crossed module on a groupoid.

    :param rho: Anchor, object of ``K`` to object of ``G``; labels in a mapping, positions in a sequence
    :param alpha: Per arrow ``g`` of ``G`` the arrow map over ``src(g)``: ``{g: {k: k'}}`` or position arrays
                  of length ``|K|`` holding ``-1`` outside the fiber
    :param kappa: Per ``h ∈ H_x`` a bisection of the fiber over ``x``: ``{h: {y: k}}`` (``{(x, h): ...}`` for
                  groupoids) or arrays of shape ``(|H_x|, objects of K)``
    :raises AnchorNotInvariant, NotFunctorial, NotBisection, NotHomomorphism, BisectionAxiomViolation,
            ConjugationAxiomViolation:
    """
    G, H = cm.G, cm.H
    rr = _resolve_rho(cm, K, rho)
    for k in range(K.n_arrows):
        if rr[K.src[k]] != rr[K.tgt[k]]:
            raise AnchorNotInvariant(
                f"Arrow {K.arrows[k]!r} joins objects over different anchors", witness=K.arrows[k]
            )
    aa = _resolve_alpha(cm, K, alpha)
    if len(aa) != G.n_arrows:
        raise ValueError(f"Expect one arrow map per arrow of G, got {len(aa)}")
    _check_alpha(cm, K, rr, aa)
    kk = _resolve_kappa(cm, K, kappa)

    for x, fib in enumerate(H.fibers):
        objs = np.flatnonzero(rr == x)
        for h in range(len(fib)):
            if not _is_bisection(K, kk[x][h], objs):
                raise NotBisection(
                    f"κ_{fib.label(h)!r} is not a bisection over {G.objects[x]!r}",
                    witness=[G.objects[x], fib.label(h)],
                )
        for h1, h2 in itertools.product(range(len(fib)), repeat=2):
            prod = _bisection_product(K, kk[x][h1], kk[x][h2], objs)
            if not np.array_equal(prod[objs], kk[x][int(fib.table[h1, h2])][objs]):
                raise NotHomomorphism("κ is not multiplicative", witness=[G.objects[x], fib.label(h1), fib.label(h2)])
        for h in range(len(fib)):
            dh = cm.boundary(x, h)
            kh = kk[x][h]
            for k in np.flatnonzero(rr[K.tgt] == x):
                inner = K.mul(int(kh[K.tgt[k]]), int(k), int(K.inv[kh[K.src[k]]]))
                if aa[dh][k] != inner:
                    raise BisectionAxiomViolation(
                        f"α_∂({fib.label(h)!r}) is not conjugation by κ_{fib.label(h)!r}",
                        witness=[G.objects[x], fib.label(h), K.arrows[int(k)]],
                    )

    act = CMGroupoidAction(cm, K, rr, tuple(aa), tuple(kk))
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        back = act.object_map(int(G.inv[g]))
        for h in range(len(H.fibers[s])):
            h2 = cm.act(g, h)
            for y in np.flatnonzero(rr == t):
                lhs = int(kk[t][h2][y])
                rhs = int(aa[g][kk[s][h][back[y]]])
                if lhs != rhs:
                    raise ConjugationAxiomViolation(
                        f"κ_c_g(h) != α_g∘κ_h∘α_g⁻¹ for g={G.arrows[g]!r}",
                        witness=[G.arrows[g], H.fibers[s].label(h), K.objects[int(y)]],
                    )
    log.debug("crossed module action on %r verified", K)
    return act


def translation_action(cm: CrossedModule) -> CMGroupoidAction:
    """
    ``(G, H)`` acting on ``H⋉_∂G`` by ``g·(h, g') = (c_g(h), gg')`` with ``κ_h(g') = (h, g')``.
    """
    G, H = cm.G, cm.H
    K = translation_groupoid_HdG(cm)
    arr = translation_arrows(cm)
    pos = {hg: i for i, hg in enumerate(arr)}
    rho = G.tgt.copy()
    alpha = []
    for g in range(G.n_arrows):
        a = np.full(K.n_arrows, -1, dtype=np.int64)
        for i, (h, g1) in enumerate(arr):
            if G.tgt[g1] == G.src[g]:
                a[i] = pos[(cm.act(g, h), int(G.comp[g, g1]))]
        alpha.append(a)
    kappa = []
    for x, fib in enumerate(H.fibers):
        k = np.full((len(fib), K.n_objects), -1, dtype=np.int64)
        for g1 in G.target_fiber(x):
            for h in range(len(fib)):
                k[h, g1] = pos[(h, int(g1))]
        kappa.append(k)
    return cm_groupoid_action(cm, K, rho, alpha, kappa)


def induced_algebra_action(act: CMGroupoidAction) -> CMAction:
    """
    The action on ``C*(K)`` fibered over the anchor: ``α_g(δ_k) = δ_{α_g(k)}``, ``u_h = Σ_y δ_{κ_h(y)}``.
    """
    cm, K = act.cm, act.groupoid
    G = cm.G
    A = groupoid_algebra(K, anchor=act.rho, objects=cm.objects)
    over = [act.fiber_arrows(x) for x in range(G.n_objects)]
    pos: List[Dict[int, int]] = [{int(k): i for i, k in enumerate(o)} for o in over]
    alpha = []
    for g in range(G.n_arrows):
        s, t = int(G.src[g]), int(G.tgt[g])
        M = np.zeros((len(over[t]), len(over[s])), dtype=complex)
        for k, i in pos[s].items():
            M[pos[t][int(act.alpha[g][k])], i] = 1
        alpha.append(M)
    u = []
    for x, fib in enumerate(cm.H.fibers):
        U = np.zeros((len(fib), len(over[x])), dtype=complex)
        for h in range(len(fib)):
            for y in act.fiber_objects(x):
                U[h, pos[x][int(act.kappa[x][h, y])]] = 1
        u.append(U)
    return cm_action(cm, A, alpha, u)


def translation_bridge(cm: CrossedModule, source: Optional[CMAction] = None) -> EquivariantMap:
    """
    Equivariant isomorphism ``C*(H⋉_∂G) → C0(G)⋊H``, ``δ_(h,g) ↦ δ_{∂(h)g}⊗δ_h``.

    The source carries :py:func:`induced_algebra_action` of :py:func:`translation_action`, the target the
    canonical action induced by left translation of ``G`` on ``C0(G)``.
    """
    G, H = cm.G, cm.H
    src = induced_algebra_action(translation_action(cm)) if source is None else source
    dst, C = _canonical(cm, left_translation(G))
    assert C.offsets is not None
    offs = H.offsets()
    fpos = [{int(k): i for i, k in enumerate(G.target_fiber(x))} for x in range(G.n_objects)]
    M = np.zeros((C.dim, src.algebra.dim), dtype=complex)
    for i, (h, g) in enumerate(translation_arrows(cm)):
        x = int(G.tgt[g])
        k = G.mul(cm.boundary(x, h), g)
        M[C.offsets[offs[x] + h] + fpos[x][k], i] = 1
    return equivariant_map(src, dst, M)


__all__ = (
    "bisection_group",
    "bisection_to_aut",
    "bisection_inverse",
    "aut2",
    "cm_groupoid_action",
    "translation_action",
    "induced_algebra_action",
    "translation_bridge",
)

"""
Crossed modules of finite groups and groupoids.

A group flavoured crossed module is stored as a groupoid flavoured one over the single object ``"*"``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ._errors import (
    ActionNotDescending,
    Axiom1Violation,
    Axiom2Violation,
    NotAbelian,
    NotCentral,
    NotFunctorial,
    NotHomomorphism,
)
from ._groupoids import (
    GROUP_OBJECT,
    FiniteGroupoid,
    GroupBundle,
    GroupoidHom,
    _restrict_group,
    group_groupoid,
    isotropy_arrows,
)
from ._groups import (
    FiniteGroup,
    GroupHom,
    _frozen,
    cyclic,
    make_hom,
    quotient_group,
    subgroup,
    trivial_group,
)

log = logging.getLogger(__name__)

GroupLike = Union[FiniteGroup, FiniteGroupoid]
BundleLike = Union[FiniteGroup, GroupBundle]


@dataclass(eq=False, frozen=True)
class CrossedModule:
    """
    Verified crossed module ``(G, H, ∂, c)``.
    """

    G: FiniteGroupoid
    """Groupoid acting; a group is the one-object case."""

    H: GroupBundle
    """Bundle of groups over the objects of ``G``."""

    d: Tuple[np.ndarray, ...]
    """``d[x][h]`` is the arrow position of ``∂(h)`` for ``h`` in the fiber over object ``x``."""

    c: Tuple[np.ndarray, ...]
    """``c[g][h]`` is the position in ``H_{tgt g}`` of ``c_g(h)`` for ``h`` in ``H_{src g}``."""

    def __repr__(self) -> str:
        return (
            f"CrossedModule(objects={self.G.n_objects}, arrows={self.G.n_arrows}, "
            f"fibers={[len(f) for f in self.H.fibers]})"
        )

    def is_group_case(self) -> bool:
        return self.G.is_group()

    @property
    def objects(self) -> Tuple[Any, ...]:
        return self.G.objects

    def fiber(self, x: int) -> FiniteGroup:
        return self.H.fibers[x]

    def boundary(self, x: int, h: int) -> int:
        return int(self.d[x][h])

    def act(self, g: int, h: int) -> int:
        """Position of ``c_g(h)`` in ``H_{tgt g}``."""
        return int(self.c[g][h])

    def group_G(self) -> FiniteGroup:
        return self.G.as_group()

    def group_H(self) -> FiniteGroup:
        return self.H.fibers[0]

    def describe(self) -> Dict[str, Any]:
        return {
            "objects": len(self.G.objects),
            "arrows": self.G.n_arrows,
            "fiber_orders": [len(f) for f in self.H.fibers],
        }


def _as_groupoid(G: GroupLike) -> FiniteGroupoid:
    return group_groupoid(G) if isinstance(G, FiniteGroup) else G


def _as_bundle(H: BundleLike, G: FiniteGroupoid) -> GroupBundle:
    if isinstance(H, FiniteGroup):
        if not G.is_group():
            raise ValueError("A single group H needs a one-object G")
        return GroupBundle((GROUP_OBJECT,), (H,))
    if tuple(map(str, H.base)) != tuple(map(str, G.objects)):
        raise ValueError(f"Bundle base {H.base} does not match objects {G.objects}")
    return H


def _resolve_d(G: FiniteGroupoid, H: GroupBundle, d: Any) -> List[np.ndarray]:
    if isinstance(d, GroupHom):
        return [np.asarray(d.map, dtype=np.int64)]
    if d is None:
        return [np.full(len(f), G.unit[x], dtype=np.int64) for x, f in enumerate(H.fibers)]
    if isinstance(d, Mapping) and G.is_group() and not _keyed_by_objects(d, G):
        Gg = G.as_group()
        return [np.asarray(make_hom(H.fibers[0], Gg, d).map, dtype=np.int64)]

    out: List[np.ndarray] = []
    for x, fib in enumerate(H.fibers):
        dx = _lookup_object(d, G, x)
        if isinstance(dx, Mapping):
            mm = np.full(len(fib), -1, dtype=np.int64)
            mm[fib.identity] = G.unit[x]
            for h, a in dx.items():
                mm[fib.index(h)] = G.arrow_index(a)
            mm = _close_boundary(G, fib, mm, x)
        else:
            mm = np.asarray([G.arrow_index(a) for a in dx], dtype=np.int64)
        out.append(mm)
    return out


def _keyed_by_objects(d: Mapping[Any, Any], G: FiniteGroupoid) -> bool:
    return all(str(k) in {str(o) for o in G.objects} for k in d) and all(
        isinstance(v, (Mapping, list, tuple)) for v in d.values()
    )


def _lookup_object(data: Any, G: FiniteGroupoid, x: int) -> Any:
    if isinstance(data, Mapping):
        for k, v in data.items():
            if str(k) == str(G.objects[x]):
                return v
        return {}
    return data[x]


def _close_boundary(G: FiniteGroupoid, fib: FiniteGroup, mm: np.ndarray, x: int) -> np.ndarray:
    # extend generator images multiplicatively
    changed = True
    while changed:
        changed = False
        known = np.flatnonzero(mm >= 0)
        for a in known:
            for b in known:
                ab = int(fib.table[a, b])
                if G.src[mm[a]] != x or G.src[mm[b]] != x:
                    raise NotHomomorphism(
                        f"∂ must land in loops at {G.objects[x]!r}", witness=(fib.label(a), fib.label(b))
                    )
                val = G.mul(int(mm[a]), int(mm[b]))
                if mm[ab] < 0:
                    mm[ab] = val
                    changed = True
    if (mm < 0).any():
        raise ValueError(f"∂ is not determined on the fiber over {G.objects[x]!r}")
    return mm


def _resolve_c(G: FiniteGroupoid, H: GroupBundle, c: Any) -> List[np.ndarray]:
    out: List[Optional[np.ndarray]] = [None] * G.n_arrows
    for x in range(G.n_objects):
        out[int(G.unit[x])] = np.arange(len(H.fibers[x]), dtype=np.int64)

    if c is None:
        for g in range(G.n_arrows):
            s, t = int(G.src[g]), int(G.tgt[g])
            if len(H.fibers[s]) != len(H.fibers[t]):
                raise NotFunctorial("Trivial c needs isomorphic fibers", witness=G.arrows[g])
            out[g] = np.arange(len(H.fibers[s]), dtype=np.int64)
    else:
        items = c.items() if isinstance(c, Mapping) else enumerate(c)
        for g_key, cg in items:
            g = g_key if isinstance(c, Sequence) else G.arrow_index(g_key)
            hs, ht = H.fibers[int(G.src[g])], H.fibers[int(G.tgt[g])]
            if isinstance(cg, GroupHom):
                mm = np.asarray(cg.map, dtype=np.int64)
            elif isinstance(cg, Mapping):
                mm = np.asarray(make_hom(hs, ht, cg).map, dtype=np.int64)
            else:
                mm = np.asarray(cg, dtype=np.int64)
            out[g] = mm
        _close_c(G, H, out)

    missing = [G.arrows[g] for g, v in enumerate(out) if v is None]
    if missing:
        raise NotFunctorial(f"c is not determined on arrows {missing}", witness=missing)
    return [v for v in out if v is not None]


def _close_c(G: FiniteGroupoid, H: GroupBundle, out: List[Optional[np.ndarray]]) -> None:
    changed = True
    while changed:
        changed = False
        for g in range(G.n_arrows):
            cg = out[g]
            if cg is None:
                continue
            gi = int(G.inv[g])
            if out[gi] is None and sorted(cg) == list(range(len(cg))):
                inv = np.empty_like(cg)
                inv[cg] = np.arange(len(cg))
                out[gi] = inv
                changed = True
            for f in np.flatnonzero(G.src[g] == G.tgt):
                cf = out[f]
                gf = int(G.comp[g, f])
                if cf is not None and out[gf] is None:
                    out[gf] = cg[cf]
                    changed = True


def crossed_module(
    G: GroupLike,
    H: BundleLike,
    d: Any = None,
    c: Any = None,
) -> CrossedModule:
    """
    Build and exhaustively validate a crossed module.

    :param G: Group or groupoid
    :param H: Group (one-object ``G``) or bundle of groups over the objects of ``G``
    :param d: Boundary map: a :py:class:`GroupHom`, a label mapping ``h → g`` (group case, generators
              suffice), or per-object mappings ``{x: {h: arrow}}``; ``None`` for the trivial map
    :param c: Action: mapping from arrow labels to a :py:class:`GroupHom` or label mapping
              ``{h: h'}``; arrows not listed are derived by functoriality; ``None`` for the trivial action
    """
    GG = _as_groupoid(G)
    HH = _as_bundle(H, GG)
    dd = _resolve_d(GG, HH, d)
    cc = _resolve_c(GG, HH, c)
    return validate_crossed_module(GG, HH, dd, cc)


def validate_crossed_module(
    G: FiniteGroupoid,
    H: GroupBundle,
    d: Sequence[np.ndarray],
    c: Sequence[np.ndarray],
) -> CrossedModule:
    """
    Validate crossed module data given by positions.
    """
    if len(d) != G.n_objects or len(c) != G.n_arrows:
        raise ValueError("Crossed module data does not match the groupoid")

    for x, fib in enumerate(H.fibers):
        dx = d[x]
        if dx.shape != (len(fib),):
            raise ValueError(f"∂ on the fiber over {G.objects[x]!r} has the wrong size")
        loops = (G.src[dx] == x) & (G.tgt[dx] == x)
        if not loops.all():
            h = int(np.flatnonzero(~loops)[0])
            raise NotHomomorphism(f"∂({fib.label(h)!r}) is not a loop at {G.objects[x]!r}", witness=fib.label(h))
        lhs = dx[fib.table]
        rhs = G.comp[dx[:, None], dx[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad) > 0:
            a, b = (int(i) for i in bad[0])
            raise NotHomomorphism(
                f"∂ is not multiplicative on ({fib.label(a)!r}, {fib.label(b)!r})",
                witness=(fib.label(a), fib.label(b)),
            )

    for g in range(G.n_arrows):
        hs, ht = H.fibers[int(G.src[g])], H.fibers[int(G.tgt[g])]
        cg = c[g]
        if cg.shape != (len(hs),) or len(hs) != len(ht) or sorted(cg.tolist()) != list(range(len(ht))):
            raise NotFunctorial(f"c_{G.arrows[g]!r} is not a bijection of fibers", witness=G.arrows[g])
        bad = np.argwhere(cg[hs.table] != ht.table[cg[:, None], cg[None, :]])
        if len(bad) > 0:
            a, b = (int(i) for i in bad[0])
            raise NotFunctorial(
                f"c_{G.arrows[g]!r} is not a homomorphism", witness=(G.arrows[g], hs.label(a), hs.label(b))
            )

    for x in range(G.n_objects):
        e = int(G.unit[x])
        if not np.array_equal(c[e], np.arange(len(H.fibers[x]))):
            raise NotFunctorial(f"c at the unit of {G.objects[x]!r} is not the identity", witness=G.arrows[e])
    for g1 in range(G.n_arrows):
        for g2 in np.flatnonzero(G.tgt == G.src[g1]):
            g12 = int(G.comp[g1, g2])
            if not np.array_equal(c[g12], c[g1][c[g2]]):
                raise NotFunctorial(
                    f"c_({G.arrows[g1]!r}·{G.arrows[g2]!r}) != c_{G.arrows[g1]!r}∘c_{G.arrows[g2]!r}",
                    witness=(G.arrows[g1], G.arrows[int(g2)]),
                )

    # ∂(c_g(h)) = g ∂(h) g⁻¹
    for g in range(G.n_arrows):
        x, y = int(G.src[g]), int(G.tgt[g])
        for h in range(len(H.fibers[x])):
            lhs = int(d[y][c[g][h]])
            rhs = G.mul(g, int(d[x][h]), int(G.inv[g]))
            if lhs != rhs:
                raise Axiom1Violation(
                    f"∂(c_g(h)) != g∂(h)g⁻¹ for g={G.arrows[g]!r}, h={H.fibers[x].label(h)!r}",
                    witness=(G.arrows[g], H.fibers[x].label(h)),
                )

    # c_{∂(h)}(k) = h k h⁻¹
    for x, fib in enumerate(H.fibers):
        for h in range(len(fib)):
            ch = c[int(d[x][h])]
            for k in range(len(fib)):
                if int(ch[k]) != fib.conj(h, k):
                    raise Axiom2Violation(
                        f"c_∂(h)(k) != hkh⁻¹ for h={fib.label(h)!r}, k={fib.label(k)!r}",
                        witness=(fib.label(h), fib.label(k)),
                    )

    cm = CrossedModule(
        G, H, tuple(_frozen(v) for v in d), tuple(_frozen(v) for v in c)
    )
    assert kernel_is_central(cm) is None
    assert image_is_normal(cm) is None
    log.debug("validated crossed module %r", cm)
    return cm


def kernel_is_central(cm: CrossedModule) -> Optional[Tuple[Any, Any]]:
    """
    Witness ``(k, h)`` of a kernel element of ``∂`` not commuting with ``h``, or ``None``.
    """
    for x, fib in enumerate(cm.H.fibers):
        for k in np.flatnonzero(cm.d[x] == cm.G.unit[x]):
            for h in range(len(fib)):
                if fib.table[k, h] != fib.table[h, k]:
                    return fib.label(int(k)), fib.label(h)
    return None


def image_is_normal(cm: CrossedModule) -> Optional[Tuple[Any, Any]]:
    """
    Witness ``(g, ∂h)`` of an isotropy arrow conjugating the image of ``∂`` out of itself, or ``None``.
    """
    G = cm.G
    for x in range(G.n_objects):
        img = set(int(a) for a in cm.d[x])
        for g in G.isotropy(x):
            for a in img:
                if G.mul(int(g), a, int(G.inv[g])) not in img:
                    return G.arrows[g], G.arrows[a]
    return None


def _conjugation_c(G: FiniteGroup, H: FiniteGroup, incl: np.ndarray, lift: Sequence[int]) -> List[np.ndarray]:
    # c_q(h) = lift(q)·h·lift(q)⁻¹ inside the ambient group
    pos = {int(a): i for i, a in enumerate(incl)}
    return [np.array([pos[G.conj(int(e), int(h))] for h in incl], dtype=np.int64) for e in lift]


def from_normal_subgroup(G: FiniteGroup, N: Union[FiniteGroup, Iterable[Any]]) -> CrossedModule:
    """
    Crossed module of a normal subgroup: ``∂`` the inclusion and ``c`` conjugation.
    """
    labels = N.elements if isinstance(N, FiniteGroup) else list(N)
    quotient_group(G, labels)  # raises NotNormal
    Hs, incl = subgroup(G, labels)
    c = _conjugation_c(G, Hs, incl.map, range(len(G)))
    GG = group_groupoid(G)
    return validate_crossed_module(GG, GroupBundle((GROUP_OBJECT,), (Hs,)), [np.asarray(incl.map)], c)


def b_group(H: FiniteGroup) -> CrossedModule:
    """
    Crossed module ``({1}, H)`` of an abelian group.
    """
    bad = H.commute_witness()
    if bad is not None:
        a, b = bad
        raise NotAbelian(f"{H.label(a)!r} and {H.label(b)!r} do not commute", witness=(H.label(a), H.label(b)))
    G = group_groupoid(trivial_group())
    return validate_crossed_module(
        G, GroupBundle((GROUP_OBJECT,), (H,)), [np.zeros(len(H), dtype=np.int64)], [np.arange(len(H))]
    )


def from_abelian_extension(E: FiniteGroup, H: Union[FiniteGroup, Iterable[Any]]) -> CrossedModule:
    """
    Crossed module ``(E/H, H, 1, c)`` of an extension with abelian kernel.

    ``c`` is conjugation in ``E`` descended to the quotient.
    """
    labels = H.elements if isinstance(H, FiniteGroup) else list(H)
    Q, proj = quotient_group(E, labels)
    Hs, incl = subgroup(E, labels)
    bad = Hs.commute_witness()
    if bad is not None:
        a, b = bad
        raise NotAbelian(f"{Hs.label(a)!r} and {Hs.label(b)!r} do not commute", witness=(Hs.label(a), Hs.label(b)))

    lift = [int(np.flatnonzero(proj.map == q)[0]) for q in range(len(Q))]
    c = _conjugation_c(E, Hs, incl.map, lift)
    every = _conjugation_c(E, Hs, incl.map, range(len(E)))
    for e in range(len(E)):
        if not np.array_equal(every[e], c[proj(e)]):
            raise ActionNotDescending("Conjugation does not descend to the quotient", witness=E.label(e))

    G = group_groupoid(Q)
    d = [np.full(len(Hs), G.unit[0], dtype=np.int64)]
    return validate_crossed_module(G, GroupBundle((GROUP_OBJECT,), (Hs,)), d, c)


def from_central_extension(E: FiniteGroup, Z: Union[FiniteGroup, Iterable[Any]]) -> CrossedModule:
    """
    Crossed module ``(E/Z, E, π, c)`` of a central extension, ``c_q`` conjugation by any lift of ``q``.
    """
    labels = Z.elements if isinstance(Z, FiniteGroup) else list(Z)
    zz = E.indices(labels)
    for z in zz:
        for e in range(len(E)):
            if E.table[z, e] != E.table[e, z]:
                raise NotCentral(f"{E.label(z)!r} is not central", witness=(E.label(z), E.label(e)))
    Q, proj = quotient_group(E, labels)
    lift = [int(np.flatnonzero(proj.map == q)[0]) for q in range(len(Q))]
    c = _conjugation_c(E, E, np.arange(len(E)), lift)
    return validate_crossed_module(
        group_groupoid(Q), GroupBundle((GROUP_OBJECT,), (E,)), [np.asarray(proj.map)], c
    )


def from_isotropy(K: FiniteGroupoid) -> CrossedModule:
    """
    Isotropy crossed module of a groupoid: ``∂`` the inclusion, ``c`` conjugation by arrows.
    """
    iso = isotropy_arrows(K)
    fibers = tuple(_restrict_group(K, a) for a in iso)
    pos = [{int(a): i for i, a in enumerate(arr)} for arr in iso]
    c = []
    for g in range(K.n_arrows):
        x, y = int(K.src[g]), int(K.tgt[g])
        c.append(np.array([pos[y][K.mul(g, int(h), int(K.inv[g]))] for h in iso[x]], dtype=np.int64))
    return validate_crossed_module(K, GroupBundle(K.objects, fibers), [np.asarray(a) for a in iso], c)


def cyclic_pair(n: int, m: int, k: int) -> CrossedModule:
    """
    Crossed module ``(Z_n, Z_m, ∂(1) = k)`` with trivial action.
    """
    G, H = cyclic(n), cyclic(m)
    d = make_hom(H, G, {1: k % n} if m > 1 else {})
    return crossed_module(G, H, d, None)


@dataclass(eq=False, frozen=True)
class CrossedModuleMorphism:
    """
    Morphism of crossed modules: a functor on ``G`` and fiberwise homomorphisms on ``H``.
    """

    source: CrossedModule
    target: CrossedModule
    phi_G: GroupoidHom
    phi_H: Tuple[np.ndarray, ...]
    """``phi_H[x][h]`` is the position in ``H'_{φ(x)}``."""


def cm_morphism(
    src: CrossedModule,
    dst: CrossedModule,
    phi_G: GroupoidHom,
    phi_H: Sequence[Union[GroupHom, Sequence[int]]],
) -> CrossedModuleMorphism:
    """
    Validate a morphism of crossed modules.

    Checks ``∂'∘φ_H = φ_G∘∂`` and ``φ_H(c_g(h)) = c'_{φ_G(g)}(φ_H(h))``.
    """
    if phi_G.source is not src.G or phi_G.target is not dst.G:
        raise ValueError("Groupoid functor does not connect the two crossed modules")
    ph = [np.asarray(p.map if isinstance(p, GroupHom) else p, dtype=np.int64) for p in phi_H]
    G = src.G
    for x, fib in enumerate(src.H.fibers):
        y = int(phi_G.object_map[x])
        tf = dst.H.fibers[y]
        mm = ph[x]
        bad = np.argwhere(mm[fib.table] != tf.table[mm[:, None], mm[None, :]])
        if len(bad) > 0:
            a, b = (int(i) for i in bad[0])
            raise NotHomomorphism("φ_H is not multiplicative", witness=(fib.label(a), fib.label(b)))
        for h in range(len(fib)):
            if phi_G(int(src.d[x][h])) != int(dst.d[y][mm[h]]):
                raise NotHomomorphism("φ_G∘∂ != ∂'∘φ_H", witness=fib.label(h))
    for g in range(G.n_arrows):
        x, y = int(G.src[g]), int(G.tgt[g])
        g2 = phi_G(g)
        for h in range(len(src.H.fibers[x])):
            if ph[y][src.c[g][h]] != dst.c[g2][ph[x][h]]:
                raise NotHomomorphism(
                    "φ_H does not intertwine c", witness=(G.arrows[g], src.H.fibers[x].label(h))
                )
    return CrossedModuleMorphism(src, dst, phi_G, tuple(_frozen(p) for p in ph))


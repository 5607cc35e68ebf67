"""
Finite groupoids and bundles of groups.

Composition follows the convention ``a·b`` defined iff ``src(a) = tgt(b)``; the dense ``comp`` table holds
``-1`` on pairs that are not composable. Haar systems are counting measures throughout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np
import toolz

from ._errors import NoInverses, NotAction, NotCategory, NotHomomorphism, NotInvariant, NotSubgroup, NoUnits
from ._groups import FiniteGroup, IndexArray, Label, LabelIndex, _frozen, _normalize_label

if TYPE_CHECKING:
    from ._crossed_modules import CrossedModule

log = logging.getLogger(__name__)

GROUP_OBJECT = "*"
"""Object label of a group viewed as a one-object groupoid."""


@dataclass(eq=False, frozen=True)
class FiniteGroupoid:
    """
    Finite groupoid with dense composition table.
    """

    objects: Tuple[Label, ...]
    arrows: Tuple[Label, ...]
    src: np.ndarray
    """Source object position of every arrow."""

    tgt: np.ndarray
    """Target object position of every arrow."""

    comp: np.ndarray
    """``comp[a, b]`` is the position of ``a·b`` or ``-1``."""

    unit: np.ndarray
    """Unit arrow position for every object."""

    inv: np.ndarray
    """Inverse arrow position for every arrow."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "_obj_index", LabelIndex(self.objects, "object"))
        object.__setattr__(self, "_arrow_index", LabelIndex(self.arrows, "arrow"))

    def __repr__(self) -> str:
        return f"FiniteGroupoid(objects={len(self.objects)}, arrows={len(self.arrows)})"

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def haar_weight(self) -> np.ndarray:
        """Counting Haar system."""
        return np.ones(self.n_arrows)

    def object_index(self, label: Any) -> int:
        return self._obj_index[label]  # type: ignore[attr-defined]

    def arrow_index(self, label: Any) -> int:
        return self._arrow_index[label]  # type: ignore[attr-defined]

    def arrow_indices(self, labels: Iterable[Any]) -> IndexArray:
        return np.array([self.arrow_index(x) for x in labels], dtype=np.int64)

    def has_arrow(self, label: Any) -> bool:
        return label in self._arrow_index  # type: ignore[attr-defined]

    def is_group(self) -> bool:
        return self.n_objects == 1

    def is_unit(self, a: int) -> bool:
        return int(self.unit[self.src[a]]) == a

    def composable(self, a: int, b: int) -> bool:
        return int(self.src[a]) == int(self.tgt[b])

    def mul(self, *arrows: int) -> int:
        """Composite of a chain of composable arrows (positions), left to right."""
        r = int(arrows[0])
        for b in arrows[1:]:
            nxt = int(self.comp[r, b])
            if nxt < 0:
                raise NotCategory(
                    f"Arrows {self.arrows[r]!r} and {self.arrows[b]!r} are not composable",
                    witness=(self.arrows[r], self.arrows[b]),
                )
            r = nxt
        return r

    def source_fiber(self, x: int) -> IndexArray:
        """Arrows starting at object ``x``."""
        return np.flatnonzero(self.src == x)

    def target_fiber(self, x: int) -> IndexArray:
        """Arrows ending at object ``x``."""
        return np.flatnonzero(self.tgt == x)

    def isotropy(self, x: int) -> IndexArray:
        return np.flatnonzero((self.src == x) & (self.tgt == x))

    def as_group(self) -> FiniteGroup:
        """The arrows of a one-object groupoid as a group."""
        if not self.is_group():
            raise ValueError(f"Groupoid has {self.n_objects} objects, expect one")
        return FiniteGroup(self.arrows, self.comp, int(self.unit[0]), self.inv)


@dataclass(eq=False, frozen=True)
class GroupBundle:
    """
    Family of finite groups indexed by a finite object set.
    """

    base: Tuple[Label, ...]
    fibers: Tuple[FiniteGroup, ...]

    def __post_init__(self) -> None:
        if len(self.base) != len(self.fibers):
            raise ValueError("Need exactly one fiber per base object")
        object.__setattr__(self, "_obj_index", LabelIndex(self.base, "object"))

    def __len__(self) -> int:
        return sum(len(f) for f in self.fibers)

    def object_index(self, label: Any) -> int:
        return self._obj_index[label]  # type: ignore[attr-defined]

    def fiber(self, x: Union[int, Any]) -> FiniteGroup:
        """Fiber at an object position (``int``) or label."""
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return self.fibers[int(x)]
        return self.fibers[self.object_index(x)]

    def offsets(self) -> np.ndarray:
        """Start of every fiber in the concatenated element list."""
        return np.cumsum([0] + [len(f) for f in self.fibers])

    def is_trivial(self) -> bool:
        return all(len(f) == 1 for f in self.fibers)


@dataclass(eq=False, frozen=True)
class GroupoidHom:
    """
    Verified functor between finite groupoids.
    """

    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: np.ndarray
    arrow_map: np.ndarray

    def __call__(self, a: int) -> int:
        return int(self.arrow_map[a])


def _as_index(values: Any, n: int, lookup: LabelIndex, keys: Optional[LabelIndex] = None) -> np.ndarray:
    if isinstance(values, Mapping):
        assert keys is not None
        out = np.full(n, -1, dtype=np.int64)
        for k, v in values.items():
            out[keys[k]] = lookup[v]
        return out
    vv = list(values)
    if len(vv) != n:
        raise ValueError(f"Expect {n} values, got {len(vv)}")
    return np.array([lookup[v] for v in vv], dtype=np.int64)


def groupoid_from_data(
    objects: Sequence[Label],
    arrows: Sequence[Label],
    src: Union[Sequence[Any], Mapping[Any, Any]],
    tgt: Union[Sequence[Any], Mapping[Any, Any]],
    comp: Union[Mapping[Tuple[Any, Any], Any], Iterable[Sequence[Any]], np.ndarray],
    *,
    index_data: bool = False,
) -> FiniteGroupoid:
    """
    Build and validate a finite groupoid.

    Units and inverses are inferred from the composition.

    :param objects: Object labels
    :param arrows: Arrow labels
    :param src: Source object of every arrow (sequence in arrow order, or mapping arrow → object)
    :param tgt: Target object of every arrow
    :param comp: Composition, either a mapping ``(a, b) → a·b``, an iterable of ``(a, b, ab)`` triples,
                 or (with ``index_data=True``) a dense position table with ``-1`` where undefined
    :param index_data: ``src``, ``tgt`` and ``comp`` hold positions rather than labels
    """
    objects = tuple(_normalize_label(x) for x in objects)
    arrows = tuple(_normalize_label(x) for x in arrows)
    m = len(arrows)
    obj_ix = LabelIndex(objects, "object")
    arr_ix = LabelIndex(arrows, "arrow")

    if index_data:
        s = np.asarray(src, dtype=np.int64)
        t = np.asarray(tgt, dtype=np.int64)
        tbl = np.asarray(comp, dtype=np.int64)
    else:
        s = _as_index(src, m, obj_ix, arr_ix)
        t = _as_index(tgt, m, obj_ix, arr_ix)
        tbl = np.full((m, m), -1, dtype=np.int64)
        items = comp.items() if isinstance(comp, Mapping) else ((tuple(x[:2]), x[2]) for x in comp)
        for (a, b), ab in items:
            tbl[arr_ix[a], arr_ix[b]] = arr_ix[ab]

    if s.shape != (m,) or t.shape != (m,) or tbl.shape != (m, m):
        raise ValueError("Inconsistent groupoid data shapes")
    if m and (s.min() < 0 or t.min() < 0):
        bad = int(np.flatnonzero((s < 0) | (t < 0))[0])
        raise NotCategory(f"Arrow {arrows[bad]!r} has no source/target", witness=arrows[bad])

    return _validated_groupoid(objects, arrows, s, t, tbl)


def _validated_groupoid(
    objects: Tuple[Label, ...],
    arrows: Tuple[Label, ...],
    s: np.ndarray,
    t: np.ndarray,
    tbl: np.ndarray,
) -> FiniteGroupoid:
    n, m = len(objects), len(arrows)
    composable = s[:, None] == t[None, :]
    defined = tbl >= 0

    bad = np.argwhere(composable & ~defined)
    if len(bad) > 0:
        a, b = (int(i) for i in bad[0])
        raise NotCategory(
            f"Missing composite {arrows[a]!r}·{arrows[b]!r}", witness=(arrows[a], arrows[b])
        )
    bad = np.argwhere(~composable & defined)
    if len(bad) > 0:
        a, b = (int(i) for i in bad[0])
        raise NotCategory(
            f"Composite {arrows[a]!r}·{arrows[b]!r} given for non-composable pair",
            witness=(arrows[a], arrows[b]),
        )
    ab = np.where(defined, tbl, 0)
    bad = np.argwhere(defined & ((s[ab] != s[None, :]) | (t[ab] != t[:, None])))
    if len(bad) > 0:
        a, b = (int(i) for i in bad[0])
        raise NotCategory(
            f"Composite {arrows[a]!r}·{arrows[b]!r} has wrong source or target",
            witness=(arrows[a], arrows[b]),
        )

    unit = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        into_x = np.flatnonzero(t == x)
        from_x = np.flatnonzero(s == x)
        for e in np.flatnonzero((s == x) & (t == x)):
            if (tbl[e, into_x] == into_x).all() and (tbl[from_x, e] == from_x).all():
                unit[x] = e
                break
        if unit[x] < 0:
            raise NoUnits(f"Object {objects[x]!r} has no unit arrow", witness=objects[x])

    if m > 0:
        both = defined[:, :, None] & defined[None, :, :]
        bc = np.where(defined, tbl, 0)
        cc = np.arange(m)[None, None, :]
        left = np.where(both, tbl[ab[:, :, None], cc], -1)
        right = np.where(both, tbl[np.arange(m)[:, None, None], bc[None, :, :]], -1)
        bad = np.argwhere(left != right)
        if len(bad) > 0:
            a, b, c = (int(i) for i in bad[0])
            raise NotCategory(
                f"(ab)c != a(bc) for {arrows[a]!r}, {arrows[b]!r}, {arrows[c]!r}",
                witness=(arrows[a], arrows[b], arrows[c]),
            )

    inv = np.full(m, -1, dtype=np.int64)
    for a in range(m):
        cand = np.flatnonzero((tbl[a, :] == unit[t[a]]) & (tbl[:, a] == unit[s[a]]))
        if len(cand) == 0:
            raise NoInverses(f"Arrow {arrows[a]!r} has no inverse", witness=arrows[a])
        inv[a] = cand[0]

    log.debug("validated groupoid: %d objects, %d arrows", n, m)
    return FiniteGroupoid(
        objects, arrows, _frozen(s), _frozen(t), _frozen(tbl), _frozen(unit), _frozen(inv)
    )


def group_groupoid(G: FiniteGroup) -> FiniteGroupoid:
    """A group as a groupoid with the single object ``"*"``."""
    m = len(G)
    zero = np.zeros(m, dtype=np.int64)
    return FiniteGroupoid(
        (GROUP_OBJECT,),
        G.elements,
        _frozen(zero),
        _frozen(zero),
        G.table,
        _frozen([G.identity]),
        G.inverse,
    )


def pair_groupoid(objects: Union[int, Sequence[Label]]) -> FiniteGroupoid:
    """
    Pair groupoid: one arrow ``(i, j)`` from ``j`` to ``i`` for every pair of objects.
    """
    if isinstance(objects, int):
        objects = list(range(1, objects + 1))
    objects = tuple(_normalize_label(x) for x in objects)
    n = len(objects)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    t, s = ii.ravel(), jj.ravel()
    # (i,j)·(j,k) = (i,k)
    comp = np.where(s[:, None] == t[None, :], t[:, None] * n + s[None, :], -1)
    arrows = tuple((objects[i], objects[j]) for i, j in zip(t, s))
    return _validated_groupoid(objects, arrows, s, t, comp)


def space(objects: Union[int, Sequence[Label]]) -> FiniteGroupoid:
    """Groupoid with units only."""
    if isinstance(objects, int):
        objects = list(range(1, objects + 1))
    objects = tuple(_normalize_label(x) for x in objects)
    n = len(objects)
    ii = np.arange(n)
    comp = np.where(ii[:, None] == ii[None, :], ii[:, None], -1)
    return _validated_groupoid(objects, objects, ii, ii, comp)


def action_table(
    G: FiniteGroup,
    X: Sequence[Label],
    action: Union[Mapping[Any, Mapping[Any, Any]], np.ndarray],
) -> np.ndarray:
    """
    Validate a group action on a finite set and return it as a ``(|G|, |X|)`` position table.

    A mapping may list generators only; the remaining rows follow from ``(gh)·x = g·(h·x)``.
    """
    X = tuple(_normalize_label(x) for x in X)
    x_ix = LabelIndex(X, "object")
    nx = len(X)
    if isinstance(action, Mapping):
        known: Dict[int, np.ndarray] = {G.identity: np.arange(nx)}
        for g, row in action.items():
            known[G.index(g)] = np.array([x_ix[row[x]] if x in row else x_ix[row[str(x)]] for x in X])
        changed = True
        while changed:
            changed = False
            for a, b in [(a, b) for a in list(known) for b in list(known)]:
                ab = int(G.table[a, b])
                val = known[a][known[b]]
                if ab not in known:
                    known[ab] = val
                    changed = True
                elif not np.array_equal(known[ab], val):
                    raise NotAction(
                        f"({G.label(a)!r}·{G.label(b)!r})·x != {G.label(a)!r}·({G.label(b)!r}·x)",
                        witness=(G.label(a), G.label(b)),
                    )
        if len(known) != len(G):
            raise ValueError("Action map does not determine all group elements")
        tbl = np.stack([known[g] for g in range(len(G))])
    else:
        tbl = np.asarray(action, dtype=np.int64)

    if tbl.shape != (len(G), nx):
        raise ValueError(f"Action table must have shape {(len(G), nx)}")
    for g in range(len(G)):
        if sorted(tbl[g]) != list(range(nx)):
            raise NotAction(f"{G.label(g)!r} does not act bijectively", witness=G.label(g))
    if not np.array_equal(tbl[G.identity], np.arange(nx)):
        raise NotAction("Identity acts non-trivially", witness=G.label(G.identity))
    lhs = tbl[G.table]  # (gh)·x
    rhs = tbl[np.arange(len(G))[:, None, None], tbl[None, :, :]]  # g·(h·x)
    bad = np.argwhere(lhs != rhs)
    if len(bad) > 0:
        a, b, x = (int(i) for i in bad[0])
        raise NotAction("Action is not compatible with products", witness=(G.label(a), G.label(b), X[x]))
    return tbl


def action_groupoid(
    G: FiniteGroup,
    X: Sequence[Label],
    action: Union[Mapping[Any, Mapping[Any, Any]], np.ndarray],
) -> FiniteGroupoid:
    """
    Transformation groupoid ``X ⋊ G``.

    Arrows are pairs ``(x, g)`` in ``x``-major order, from ``x`` to ``g·x``.
    """
    X = tuple(_normalize_label(x) for x in X)
    tbl = action_table(G, X, action)
    ng, nx = len(G), len(X)
    xs = np.repeat(np.arange(nx), ng)
    gs = np.tile(np.arange(ng), nx)
    s = xs
    t = tbl[gs, xs]
    # (g·x, h)·(x, g) = (x, hg)
    comp = np.full((nx * ng, nx * ng), -1, dtype=np.int64)
    for a in range(nx * ng):
        for b in np.flatnonzero(t == s[a]):
            comp[a, b] = xs[b] * ng + G.table[gs[a], gs[b]]
    arrows = tuple((X[x], G.label(g)) for x, g in zip(xs, gs))
    return _validated_groupoid(X, arrows, s, t, comp)


def bundle_groupoid(H: GroupBundle) -> FiniteGroupoid:
    """A bundle of groups as a groupoid with arrows ``(x, h)`` looping at ``x``."""
    offs = H.offsets()
    m = int(offs[-1])
    s = np.concatenate([np.full(len(f), x) for x, f in enumerate(H.fibers)]).astype(np.int64)
    comp = np.full((m, m), -1, dtype=np.int64)
    for x, f in enumerate(H.fibers):
        o = offs[x]
        comp[o : o + len(f), o : o + len(f)] = f.table + o
    arrows = tuple((H.base[x], h) for x, f in enumerate(H.fibers) for h in f.elements)
    return _validated_groupoid(H.base, arrows, s, s.copy(), comp)


def isotropy_arrows(K: FiniteGroupoid) -> List[IndexArray]:
    """Isotropy arrows at every object."""
    return [K.isotropy(x) for x in range(K.n_objects)]


def _restrict_group(K: FiniteGroupoid, arrows: IndexArray) -> FiniteGroup:
    pos = {int(a): i for i, a in enumerate(arrows)}
    tbl = np.array([[pos[int(K.comp[a, b])] for b in arrows] for a in arrows], dtype=np.int64)
    unit = pos[int(K.unit[K.src[arrows[0]]])]
    return FiniteGroup(
        tuple(K.arrows[a] for a in arrows),
        _frozen(tbl),
        unit,
        _frozen([pos[int(K.inv[a])] for a in arrows]),
    )


def isotropy_bundle(K: FiniteGroupoid) -> GroupBundle:
    """
    Isotropy bundle: the fiber at ``x`` consists of all loops at ``x``.

    Element labels are the arrow labels of ``K``. For finite discrete groupoids the interior isotropy
    coincides with the full isotropy.
    """
    return GroupBundle(K.objects, tuple(_restrict_group(K, iso) for iso in isotropy_arrows(K)))


def sub_bundle_arrows(
    K: FiniteGroupoid, H: Union[GroupBundle, Mapping[Any, Iterable[Any]]]
) -> List[IndexArray]:
    """
    Arrow positions of a sub-bundle of the isotropy, validated as subgroups.
    """
    if isinstance(H, GroupBundle):
        groups = {H.base[x]: f.elements for x, f in enumerate(H.fibers)}
    else:
        groups = {k: list(v) for k, v in H.items()}
    out: List[IndexArray] = []
    for x in range(K.n_objects):
        labels = groups.get(K.objects[x], None)
        if labels is None:
            labels = next((v for k, v in groups.items() if str(k) == str(K.objects[x])), [])
        idx = np.unique(K.arrow_indices(labels)) if len(labels) else np.array([K.unit[x]])
        if not np.isin(idx, K.isotropy(x)).all():
            raise NotSubgroup(f"Sub-bundle at {K.objects[x]!r} leaves the isotropy", witness=K.objects[x])
        iso = _restrict_group(K, K.isotropy(x))
        problem = iso.closure_witness(np.array([iso.index(K.arrows[a]) for a in idx]))
        if problem is not None:
            raise NotSubgroup(f"Sub-bundle at {K.objects[x]!r} is not a subgroup", witness=problem[1])
        out.append(idx)
    return out


def quotient_projection(
    K: FiniteGroupoid, H: Union[GroupBundle, Mapping[Any, Iterable[Any]]]
) -> Tuple[FiniteGroupoid, GroupoidHom]:
    """
    Quotient of ``K`` by a conjugation invariant wide sub-bundle of its isotropy, with the projection.

    Arrows of the quotient are the orbits ``H_{tgt g}·g``, labelled by their first arrow.
    """
    sub = sub_bundle_arrows(K, H)
    members = [set(int(a) for a in s) for s in sub]
    for g in range(K.n_arrows):
        x, y = int(K.src[g]), int(K.tgt[g])
        for h in sub[x]:
            ghg = K.mul(g, int(h), int(K.inv[g]))
            if ghg not in members[y]:
                raise NotInvariant(
                    f"{K.arrows[g]!r} conjugates {K.arrows[h]!r} out of the sub-bundle",
                    witness=(K.arrows[g], K.arrows[h]),
                )

    cls = np.full(K.n_arrows, -1, dtype=np.int64)
    reps: List[int] = []
    for g in range(K.n_arrows):
        if cls[g] >= 0:
            continue
        orbit = [int(K.comp[h, g]) for h in sub[int(K.tgt[g])]]
        cls[orbit] = len(reps)
        reps.append(g)

    rr = np.array(reps, dtype=np.int64)
    comp = np.full((len(reps), len(reps)), -1, dtype=np.int64)
    for i, a in enumerate(rr):
        for j, b in enumerate(rr):
            ab = int(K.comp[a, b])
            if ab >= 0:
                comp[i, j] = cls[ab]
    Q = _validated_groupoid(K.objects, tuple(K.arrows[a] for a in rr), K.src[rr], K.tgt[rr], comp)
    proj = groupoid_hom_from_index(K, Q, np.arange(K.n_objects), cls)
    return Q, proj


def quotient_groupoid(K: FiniteGroupoid, H: Union[GroupBundle, Mapping[Any, Iterable[Any]]]) -> FiniteGroupoid:
    """Quotient of ``K`` by a conjugation invariant wide sub-bundle of its isotropy."""
    return quotient_projection(K, H)[0]


def groupoid_hom_from_index(
    src: FiniteGroupoid, dst: FiniteGroupoid, object_map: Sequence[int], arrow_map: Sequence[int]
) -> GroupoidHom:
    """
    Validate a functor given by positions.
    """
    om = np.asarray(object_map, dtype=np.int64)
    am = np.asarray(arrow_map, dtype=np.int64)
    if om.shape != (src.n_objects,) or am.shape != (src.n_arrows,):
        raise ValueError("Functor data does not match source groupoid")
    bad = np.flatnonzero((dst.src[am] != om[src.src]) | (dst.tgt[am] != om[src.tgt]))
    if len(bad) > 0:
        a = int(bad[0])
        raise NotHomomorphism(f"Arrow {src.arrows[a]!r} lands on the wrong objects", witness=src.arrows[a])
    bad = np.flatnonzero(dst.unit[om] != am[src.unit])
    if len(bad) > 0:
        x = int(bad[0])
        raise NotHomomorphism(f"Unit at {src.objects[x]!r} is not preserved", witness=src.objects[x])
    defined = src.comp >= 0
    lhs = np.where(defined, am[np.where(defined, src.comp, 0)], -1)
    rhs = np.where(defined, dst.comp[am[:, None], am[None, :]], -1)
    bad = np.argwhere(lhs != rhs)
    if len(bad) > 0:
        a, b = (int(i) for i in bad[0])
        raise NotHomomorphism(
            f"Composite {src.arrows[a]!r}·{src.arrows[b]!r} is not preserved",
            witness=(src.arrows[a], src.arrows[b]),
        )
    return GroupoidHom(src, dst, _frozen(om), _frozen(am))


def groupoid_hom(
    src: FiniteGroupoid,
    dst: FiniteGroupoid,
    object_map: Mapping[Any, Any],
    arrow_map: Mapping[Any, Any],
) -> GroupoidHom:
    """Validate a functor given by label mappings."""
    om = [dst.object_index(object_map[x]) for x in src.objects]
    am = [dst.arrow_index(arrow_map[a]) for a in src.arrows]
    return groupoid_hom_from_index(src, dst, om, am)


def orbits(K: FiniteGroupoid) -> List[IndexArray]:
    """
    Connected components of the object set in order of their first object.
    """
    parent = list(range(K.n_objects))

    def _find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in zip(K.src, K.tgt):
        a, b = _find(int(s)), _find(int(t))
        if a != b:
            parent[max(a, b)] = min(a, b)

    groups = toolz.groupby(_find, range(K.n_objects))
    return [np.array(v, dtype=np.int64) for _, v in sorted(groups.items(), key=lambda kv: min(kv[1]))]


def restrict_groupoid(K: FiniteGroupoid, objects: Sequence[int]) -> Tuple[FiniteGroupoid, IndexArray]:
    """
    Full subgroupoid on a set of object positions.

    :return: Subgroupoid and the positions of its arrows in ``K``
    """
    obj = np.asarray(objects, dtype=np.int64)
    keep = np.flatnonzero(np.isin(K.src, obj) & np.isin(K.tgt, obj))
    opos = {int(x): i for i, x in enumerate(obj)}
    apos = np.full(K.n_arrows, -1, dtype=np.int64)
    apos[keep] = np.arange(len(keep))
    sub = K.comp[np.ix_(keep, keep)]
    comp = np.where(sub >= 0, apos[np.where(sub >= 0, sub, 0)], -1)
    s = np.array([opos[int(x)] for x in K.src[keep]], dtype=np.int64)
    t = np.array([opos[int(x)] for x in K.tgt[keep]], dtype=np.int64)
    R = _validated_groupoid(
        tuple(K.objects[x] for x in obj), tuple(K.arrows[a] for a in keep), s, t, comp
    )
    return R, keep


def transformation_arrows(cm: "CrossedModule") -> List[Tuple[int, int]]:
    """
    Arrows ``(h, g)`` of ``H ⋊_c G`` as position pairs, ``g`` major, ``h`` in the fiber over ``tgt(g)``.
    """
    G, H = cm.G, cm.H
    return [(h, g) for g in range(G.n_arrows) for h in range(len(H.fibers[int(G.tgt[g])]))]


def transformation_groupoid(cm: "CrossedModule") -> FiniteGroupoid:
    """
    The groupoid ``H ⋊_c G``.

    Product ``(h1, g1)·(h2, g2) = (h1·c_{g1}(h2), g1 g2)``; sources and targets are those of ``g``.
    """
    G, H = cm.G, cm.H
    arr = transformation_arrows(cm)
    pos = {hg: i for i, hg in enumerate(arr)}
    m = len(arr)
    comp = np.full((m, m), -1, dtype=np.int64)
    for i, (h1, g1) in enumerate(arr):
        y = int(G.tgt[g1])
        for j, (h2, g2) in enumerate(arr):
            if G.src[g1] != G.tgt[g2]:
                continue
            h = int(H.fibers[y].table[h1, cm.c[g1][h2]])
            comp[i, j] = pos[(h, int(G.comp[g1, g2]))]
    s = np.array([G.src[g] for _, g in arr], dtype=np.int64)
    t = np.array([G.tgt[g] for _, g in arr], dtype=np.int64)
    labels = tuple((H.fibers[int(G.tgt[g])].label(h), G.arrows[g]) for h, g in arr)
    return _validated_groupoid(G.objects, labels, s, t, comp)


def transformation_projection(cm: "CrossedModule") -> GroupoidHom:
    """The functor ``(h, g) ↦ ∂(h)·g`` from ``H ⋊_c G`` to ``G``."""
    G = cm.G
    T = transformation_groupoid(cm)
    am = [G.mul(int(cm.d[int(G.tgt[g])][h]), g) for h, g in transformation_arrows(cm)]
    return groupoid_hom_from_index(T, G, np.arange(G.n_objects), am)


def translation_arrows(cm: "CrossedModule") -> List[Tuple[int, int]]:
    """
    Arrows ``(h, g)`` of ``H ⋉_∂ G`` as position pairs, ``g`` major, ``h`` in the fiber over ``tgt(g)``.
    """
    return transformation_arrows(cm)


def translation_groupoid_HdG(cm: "CrossedModule") -> FiniteGroupoid:
    """
    Action groupoid of ``H`` on the arrows of ``G`` by ``h·g = ∂(h)g``.

    Objects are the arrows of ``G``; the arrow ``(h, g)`` goes from ``g`` to ``∂(h)g`` and
    ``(h2, ∂(h1)g)·(h1, g) = (h2 h1, g)``.
    """
    G, H = cm.G, cm.H
    arr = translation_arrows(cm)
    pos = {hg: i for i, hg in enumerate(arr)}
    m = len(arr)
    s = np.array([g for _, g in arr], dtype=np.int64)
    t = np.array([G.mul(int(cm.d[int(G.tgt[g])][h]), g) for h, g in arr], dtype=np.int64)
    comp = np.full((m, m), -1, dtype=np.int64)
    for i, (h2, g2) in enumerate(arr):
        for j, (h1, g1) in enumerate(arr):
            if s[i] != t[j]:
                continue
            fib = H.fibers[int(G.tgt[g1])]
            comp[i, j] = pos[(int(fib.table[h2, h1]), g1)]
    labels = tuple((H.fibers[int(G.tgt[g])].label(h), G.arrows[g]) for h, g in arr)
    return _validated_groupoid(G.arrows, labels, s, t, comp)

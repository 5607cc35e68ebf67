"""
Finite groups as dense multiplication tables.

Elements are opaque hashable labels kept in a fixed order; every map is stored as an integer array indexed
by that order. Public functions take and return labels, ``*_idx`` helpers work with positions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import SymmetricGroup

from ._config import get_config
from ._errors import (
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotHomomorphism,
    NotNormal,
    NotSubgroup,
    SizeLimit,
    UnknownObject,
)

log = logging.getLogger(__name__)

Label = Hashable
"""Element, object or arrow identifier."""

IndexArray = np.ndarray
"""One dimensional integer array of positions."""


def _frozen(x: Any, dtype: Any = np.int64) -> np.ndarray:
    xx = np.array(x, dtype=dtype)
    xx.setflags(write=False)
    return xx


def _normalize_label(label: Any) -> Any:
    if isinstance(label, list):
        return tuple(_normalize_label(x) for x in label)
    return label


class LabelIndex:
    """
    Label to position lookup.

    Accepts lists in place of tuples and falls back to string comparison, so that labels read from JSON
    (where tuples become lists and integers may become strings) still resolve.
    """

    def __init__(self, labels: Sequence[Label], what: str = "element") -> None:
        self._labels = tuple(labels)
        self._what = what
        self._idx: Dict[Any, int] = {}
        self._str_idx: Dict[str, int] = {}
        for i, label in enumerate(self._labels):
            if label in self._idx:
                raise ValueError(f"Duplicate {what} label: {label!r}")
            self._idx[label] = i
            self._str_idx.setdefault(_str_label(label), i)

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: Any) -> bool:
        return self.find(label) is not None

    def find(self, label: Any) -> Optional[int]:
        label = _normalize_label(label)
        try:
            i = self._idx.get(label, None)
        except TypeError:
            i = None
        if i is None:
            i = self._str_idx.get(_str_label(label), None)
        return i

    def __getitem__(self, label: Any) -> int:
        i = self.find(label)
        if i is None:
            raise UnknownObject(f"Unknown {self._what}: {label!r}", witness=label)
        return i


def _str_label(label: Any) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(_str_label(x) for x in label) + ")"
    return str(label)


@dataclass(eq=False, frozen=True)
class FiniteGroup:
    """
    Finite group given by its multiplication table.
    """

    elements: Tuple[Label, ...]
    """Element labels, position 0.. order-1."""

    table: np.ndarray
    """``table[a, b]`` is the position of ``a·b``."""

    identity: int
    """Position of the neutral element."""

    inverse: np.ndarray
    """``inverse[a]`` is the position of ``a⁻¹``."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", LabelIndex(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={len(self)}, elements={list(self.elements)!r})"

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, label: Any) -> int:
        """Position of an element label."""
        return self._index[label]  # type: ignore[attr-defined]

    def indices(self, labels: Iterable[Any]) -> IndexArray:
        return np.array([self.index(x) for x in labels], dtype=np.int64)

    def label(self, idx: int) -> Label:
        return self.elements[int(idx)]

    def labels(self, idx: Iterable[int]) -> Tuple[Label, ...]:
        return tuple(self.elements[int(i)] for i in idx)

    def mul(self, *idx: int) -> int:
        """Product of elements given by position, left to right."""
        r = self.identity
        for i in idx:
            r = int(self.table[r, i])
        return r

    def conj(self, g: int, h: int) -> int:
        """Position of ``g h g⁻¹``."""
        return int(self.table[self.table[g, h], self.inverse[g]])

    def commute_witness(self) -> Optional[Tuple[int, int]]:
        bad = np.argwhere(self.table != self.table.T)
        if len(bad) == 0:
            return None
        a, b = bad[0]
        return int(a), int(b)

    def is_abelian(self) -> bool:
        return self.commute_witness() is None

    def center_idx(self) -> IndexArray:
        return np.flatnonzero((self.table == self.table.T).all(axis=1))

    def element_order(self, idx: int) -> int:
        k, x = 1, idx
        while x != self.identity:
            x = int(self.table[x, idx])
            k += 1
        return k

    def closure_witness(self, subset: IndexArray) -> Optional[Tuple[str, Any]]:
        """First reason ``subset`` is not a subgroup, or ``None``."""
        ss = set(int(i) for i in subset)
        if self.identity not in ss:
            return ("identity", self.label(self.identity))
        for a in sorted(ss):
            if int(self.inverse[a]) not in ss:
                return ("inverse", self.label(a))
            for b in sorted(ss):
                if int(self.table[a, b]) not in ss:
                    return ("product", (self.label(a), self.label(b)))
        return None


@dataclass(eq=False, frozen=True)
class GroupHom:
    """
    Verified homomorphism of finite groups.
    """

    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray
    """``map[i]`` is the target position of source element ``i``."""

    def __call__(self, idx: int) -> int:
        return int(self.map[idx])

    def apply(self, label: Any) -> Label:
        """Image of an element label."""
        return self.target.label(self.map[self.source.index(label)])

    def kernel_idx(self) -> IndexArray:
        return np.flatnonzero(self.map == self.target.identity)

    def image_idx(self) -> IndexArray:
        return np.unique(self.map)

    def is_injective(self) -> bool:
        return len(self.image_idx()) == len(self.map)


def _check_order(n: int) -> None:
    limit = get_config().max_group_order
    if n > limit:
        raise SizeLimit(f"Group order {n} exceeds configured limit {limit}", witness=n)


def group_from_table(
    elements: Sequence[Label],
    table: Union[Sequence[Sequence[Any]], Mapping[Tuple[Any, Any], Any], np.ndarray],
    *,
    table_is_index: bool = False,
) -> FiniteGroup:
    """
    Build and exhaustively validate a finite group.

    :param elements: Element labels in their canonical order
    :param table: Either a square table (row ``a``, column ``b`` holds ``a·b``) or a mapping from label
                  pairs to labels
    :param table_is_index: Table holds positions instead of labels
    :return: Verified :py:class:`FiniteGroup`
    """
    elements = tuple(_normalize_label(x) for x in elements)
    n = len(elements)
    if n == 0:
        raise NoIdentity("Empty group has no identity")
    _check_order(n)
    lookup = LabelIndex(elements)

    if isinstance(table, Mapping):
        tbl = np.full((n, n), -1, dtype=np.int64)
        for (a, b), c in table.items():
            tbl[lookup[a], lookup[b]] = lookup[c]
        missing = np.argwhere(tbl < 0)
        if len(missing) > 0:
            a, b = missing[0]
            raise UnknownObject(
                f"Product {elements[a]!r}·{elements[b]!r} is not defined",
                witness=(elements[a], elements[b]),
            )
    elif table_is_index:
        tbl = np.array(table, dtype=np.int64)
    else:
        tbl = np.array([[lookup[c] for c in row] for row in table], dtype=np.int64)

    if tbl.shape != (n, n):
        raise ValueError(f"Multiplication table must be {n}x{n}, got {tbl.shape}")
    if tbl.min() < 0 or tbl.max() >= n:
        raise UnknownObject("Multiplication table refers to unknown elements")

    return _validated_group(elements, tbl)


def _validated_group(elements: Tuple[Label, ...], tbl: np.ndarray) -> FiniteGroup:
    n = len(elements)
    ii = np.arange(n)

    neutral = np.flatnonzero((tbl == ii[None, :]).all(axis=1) & (tbl == ii[:, None]).all(axis=0))
    if len(neutral) == 0:
        witness = []
        for e in range(n):
            bad = np.flatnonzero((tbl[e, :] != ii) | (tbl[:, e] != ii))
            witness.append([elements[e], elements[int(bad[0])]])
        raise NoIdentity("No element is a two-sided identity", witness=witness)
    e = int(neutral[0])

    inverse = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        cand = np.flatnonzero((tbl[x, :] == e) & (tbl[:, x] == e))
        if len(cand) == 0:
            raise NoInverse(f"Element {elements[x]!r} has no inverse", witness=elements[x])
        inverse[x] = cand[0]

    left = tbl[tbl[:, :, None], ii[None, None, :]]
    right = tbl[ii[:, None, None], tbl[None, :, :]]
    bad = np.argwhere(left != right)
    if len(bad) > 0:
        a, b, c = (int(i) for i in bad[0])
        raise NonAssociative(
            f"(ab)c != a(bc) for a={elements[a]!r}, b={elements[b]!r}, c={elements[c]!r}",
            witness=(elements[a], elements[b], elements[c]),
        )

    log.debug("validated group of order %d", n)
    return FiniteGroup(elements, _frozen(tbl), e, _frozen(inverse))


def _extend_assignment(src: FiniteGroup, dst: FiniteGroup, known: Dict[int, int]) -> np.ndarray:
    # close a partial assignment under products, reporting the first conflict
    known = {src.identity: dst.identity, **known}
    if known[src.identity] != dst.identity:
        raise NotHomomorphism(
            "Identity must map to identity", witness=(src.label(src.identity), src.label(src.identity))
        )
    frontier = list(known)
    while frontier:
        nxt: List[int] = []
        for a in list(known):
            for b in frontier:
                for x, y in ((a, b), (b, a)):
                    ab = int(src.table[x, y])
                    val = int(dst.table[known[x], known[y]])
                    prev = known.get(ab, None)
                    if prev is None:
                        known[ab] = val
                        nxt.append(ab)
                    elif prev != val:
                        raise NotHomomorphism(
                            f"f({src.label(x)!r}·{src.label(y)!r}) != f({src.label(x)!r})·f({src.label(y)!r})",
                            witness=(src.label(x), src.label(y)),
                        )
        frontier = nxt
    if len(known) != len(src):
        missing = [src.label(i) for i in range(len(src)) if i not in known]
        raise ValueError(f"Assignment does not determine the image of {missing}")
    return np.array([known[i] for i in range(len(src))], dtype=np.int64)


def hom_from_index(src: FiniteGroup, dst: FiniteGroup, mapping: Sequence[int]) -> GroupHom:
    """
    Validate a total assignment given by positions.
    """
    mm = np.asarray(mapping, dtype=np.int64)
    if mm.shape != (len(src),):
        raise ValueError(f"Expect {len(src)} images, got {mm.shape}")
    lhs = mm[src.table]
    rhs = dst.table[mm[:, None], mm[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad) > 0:
        a, b = (int(i) for i in bad[0])
        raise NotHomomorphism(
            f"f({src.label(a)!r}·{src.label(b)!r}) != f({src.label(a)!r})·f({src.label(b)!r})",
            witness=(src.label(a), src.label(b)),
        )
    return GroupHom(src, dst, _frozen(mm))


def make_hom(
    src: FiniteGroup,
    dst: FiniteGroup,
    assignment: Union[Mapping[Any, Any], Sequence[Any]],
) -> GroupHom:
    """
    Build a verified group homomorphism.

    :param assignment: Either images of all source elements in order, or a mapping from source labels to
                       target labels. A mapping may list generators only: the remaining values are
                       derived by multiplicativity and conflicts are reported as
                       :py:class:`NotHomomorphism`.
    """
    if isinstance(assignment, Mapping):
        known = {src.index(a): dst.index(b) for a, b in assignment.items()}
        mm = _extend_assignment(src, dst, known)
    else:
        if len(assignment) != len(src):
            raise ValueError(f"Expect {len(src)} images, got {len(assignment)}")
        mm = dst.indices(assignment)
    return hom_from_index(src, dst, mm)


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, _frozen(np.arange(len(G))))


def trivial_hom(src: FiniteGroup, dst: FiniteGroup) -> GroupHom:
    return GroupHom(src, dst, _frozen(np.full(len(src), dst.identity)))


def subgroup_image(hom: GroupHom) -> Tuple[Label, ...]:
    """
    Image of a homomorphism as target labels, in target order.
    """
    img = hom.image_idx()
    problem = hom.target.closure_witness(img)
    # images of homomorphisms are always subgroups
    assert problem is None, problem
    return hom.target.labels(img)


def kernel(hom: GroupHom) -> Tuple[Label, ...]:
    """Kernel of a homomorphism as source labels."""
    return hom.source.labels(hom.kernel_idx())


def _subset_idx(G: FiniteGroup, subset: Iterable[Any]) -> IndexArray:
    idx = np.unique(G.indices(subset))
    problem = G.closure_witness(idx)
    if problem is not None:
        what, witness = problem
        raise NotSubgroup(f"Subset is not closed ({what}): {witness!r}", witness=witness)
    return idx


def subgroup(G: FiniteGroup, subset: Iterable[Any]) -> Tuple[FiniteGroup, GroupHom]:
    """
    Subgroup on a subset of labels together with its inclusion.
    """
    idx = _subset_idx(G, subset)
    pos = {int(g): i for i, g in enumerate(idx)}
    tbl = np.array([[pos[int(G.table[a, b])] for b in idx] for a in idx], dtype=np.int64)
    H = FiniteGroup(
        G.labels(idx),
        _frozen(tbl),
        pos[G.identity],
        _frozen([pos[int(G.inverse[a])] for a in idx]),
    )
    return H, GroupHom(H, G, _frozen(idx))


def normal_witness(G: FiniteGroup, subset: IndexArray) -> Optional[Tuple[int, int]]:
    ss = set(int(i) for i in subset)
    for g in range(len(G)):
        for n in sorted(ss):
            if G.conj(g, n) not in ss:
                return g, n
    return None


def quotient_group(G: FiniteGroup, N: Iterable[Any]) -> Tuple[FiniteGroup, GroupHom]:
    """
    Quotient by a normal subgroup.

    Cosets are ordered by their first element in ``G`` order and labelled by that representative.

    :return: Quotient group and the projection homomorphism
    """
    idx = _subset_idx(G, N)
    bad = normal_witness(G, idx)
    if bad is not None:
        g, n = bad
        raise NotNormal(
            f"{G.label(g)!r}·{G.label(n)!r}·{G.label(g)!r}⁻¹ leaves the subgroup",
            witness=(G.label(g), G.label(n)),
        )

    coset_of = np.full(len(G), -1, dtype=np.int64)
    reps: List[int] = []
    for g in range(len(G)):
        if coset_of[g] >= 0:
            continue
        coset_of[G.table[g, idx]] = len(reps)
        reps.append(g)

    tbl = np.array([[coset_of[G.table[a, b]] for b in reps] for a in reps], dtype=np.int64)
    Q = _validated_group(G.labels(reps), tbl)
    return Q, hom_from_index(G, Q, coset_of)


def cyclic(n: int) -> FiniteGroup:
    """Cyclic group ``Z_n`` with labels ``0..n-1``."""
    if n < 1:
        raise ValueError(f"Cyclic group order must be positive, got {n}")
    _check_order(n)
    ii = np.arange(n)
    tbl = (ii[:, None] + ii[None, :]) % n
    inv = (-ii) % n
    return FiniteGroup(tuple(range(n)), _frozen(tbl), 0, _frozen(inv))


def _perm_label(p: Sequence[int]) -> str:
    return "".join(str(i) for i in p)


def symmetric(n: int) -> FiniteGroup:
    """
    Symmetric group on ``n ≤ 4`` letters.

    Elements are labelled by their one-line notation, identity first (``"012"`` for ``S3``); the product is
    composition of maps, ``(στ)(i) = σ(τ(i))``.
    """
    if not 1 <= n <= 4:
        raise SizeLimit(f"Symmetric groups are supported up to 4 letters, got {n}", witness=n)
    perms = sorted(tuple(p.array_form) for p in SymmetricGroup(n).generate())
    labels = tuple(_perm_label(p) for p in perms)
    lookup = {p: i for i, p in enumerate(perms)}

    # sympy multiplies left to right: (p*q)(i) = q(p(i))
    tbl = [[lookup[tuple((Permutation(list(b)) * Permutation(list(a))).array_form)] for b in perms] for a in perms]
    return _validated_group(labels, np.array(tbl, dtype=np.int64))


def alternating(n: int) -> FiniteGroup:
    """Even permutations inside :py:func:`symmetric`."""
    S = symmetric(n)
    even = [x for x in S.elements if Permutation([int(c) for c in str(x)]).is_even]
    A, _ = subgroup(S, even)
    return A


def klein4() -> FiniteGroup:
    """Klein four group with labels ``e, a, b, c``."""
    ii = np.arange(4)
    return _validated_group(("e", "a", "b", "c"), ii[:, None] ^ ii[None, :])


def trivial_group() -> FiniteGroup:
    return FiniteGroup(("e",), _frozen([[0]]), 0, _frozen([0]))


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Direct product with pair labels ``(g, h)``, ``g`` major."""
    _check_order(len(G) * len(H))
    nh = len(H)
    labels = tuple((g, h) for g in G.elements for h in H.elements)
    tg = G.table[:, None, :, None] * nh
    th = H.table[None, :, None, :]
    tbl = (tg + th).reshape(len(labels), len(labels))
    return _validated_group(labels, tbl)


def builtin_group(name: str, *args: Any) -> FiniteGroup:
    """
    Named group constructor used by scenario files.
    """
    makers = {
        "cyclic": cyclic,
        "symmetric": symmetric,
        "alternating": alternating,
        "klein4": klein4,
        "trivial": trivial_group,
    }
    try:
        maker = makers[name]
    except KeyError:
        raise UnknownObject(f"Unknown built-in group: {name}", witness=name) from None
    return maker(*args)

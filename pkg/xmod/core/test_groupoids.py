# pylint: disable=missing-function-docstring,missing-module-docstring
import numpy as np
import pytest

from ._crossed_modules import crossed_module
from ._errors import NotAction, NotCategory, NotInvariant
from ._groupoids import (
    action_groupoid,
    bundle_groupoid,
    groupoid_from_data,
    isotropy_bundle,
    orbits,
    pair_groupoid,
    quotient_groupoid,
    quotient_projection,
    restrict_groupoid,
    space,
    transformation_groupoid,
    transformation_projection,
    translation_groupoid_HdG,
)
from ._groups import cyclic, make_hom, symmetric
from .testing.fixtures import cyclic_action, s3_a3, z2_swap, z4_z2


def _assert_valid(K):
    n = K.n_arrows
    for a in range(n):
        assert K.comp[K.unit[K.tgt[a]], a] == a
        assert K.comp[a, K.unit[K.src[a]]] == a
        assert K.comp[a, K.inv[a]] == K.unit[K.tgt[a]]
        for b in np.flatnonzero(K.tgt == K.src[a]):
            ab = K.comp[a, b]
            for c in np.flatnonzero(K.tgt == K.src[b]):
                assert K.comp[ab, c] == K.comp[a, K.comp[b, c]]


def test_group_as_groupoid():
    Z3 = cyclic(3)
    K = groupoid_from_data(
        ["*"],
        Z3.elements,
        ["*"] * 3,
        ["*"] * 3,
        {(a, b): (a + b) % 3 for a in range(3) for b in range(3)},
    )
    assert K.n_objects == 1
    assert K.n_arrows == 3
    assert K.is_group()


def test_pair_groupoid():
    K = pair_groupoid([1, 2, 3])
    assert K.n_arrows == 9
    assert all(K.is_unit(int(u)) for u in K.unit)
    assert K.arrows[K.mul(K.arrow_index((1, 2)), K.arrow_index((2, 3)))] == (1, 3)
    _assert_valid(K)


def test_missing_composite():
    K = pair_groupoid([1, 2, 3])
    comp = {
        (K.arrows[a], K.arrows[b]): K.arrows[K.comp[a, b]]
        for a in range(9)
        for b in range(9)
        if K.comp[a, b] >= 0 and (K.arrows[a], K.arrows[b]) != ((1, 3), (3, 1))
    }
    with pytest.raises(NotCategory) as e:
        groupoid_from_data(K.objects, K.arrows, [K.objects[s] for s in K.src], [K.objects[t] for t in K.tgt], comp)
    assert e.value.witness is not None


def test_action_groupoids():
    K = z2_swap()
    assert K.n_arrows == 4
    assert len(orbits(K)) == 1
    assert all(len(K.isotropy(x)) == 1 for x in range(K.n_objects))

    triv = action_groupoid(cyclic(2), [1], {1: {1: 1}})
    assert triv.n_arrows == 2
    assert triv.is_group()

    K3 = cyclic_action(3)
    assert K3.n_arrows == 9
    assert len(orbits(K3)) == 1
    assert all(len(K3.isotropy(x)) == 1 for x in range(3))
    _assert_valid(K3)


def test_not_action():
    with pytest.raises(NotAction):
        action_groupoid(cyclic(3), [1, 2], {1: {1: 2, 2: 1}})


def test_isotropy_bundle():
    assert [len(f) for f in isotropy_bundle(pair_groupoid(3)).fibers] == [1, 1, 1]
    K = z2_swap(fixed=True)
    assert [len(f) for f in isotropy_bundle(K).fibers] == [1, 1, 2]
    Z4 = action_groupoid(cyclic(4), ["*"], {1: {"*": "*"}})
    assert [len(f) for f in isotropy_bundle(Z4).fibers] == [4]


def test_quotient_groupoid():
    K = z2_swap(fixed=True)
    Q, proj = quotient_projection(K, isotropy_bundle(K))
    assert Q.n_arrows == 5  # pair groupoid on {1, 2} plus a unit at 3
    assert len(orbits(Q)) == 2
    assert proj.arrow_map.shape == (K.n_arrows,)

    G = action_groupoid(cyclic(3), ["*"], {1: {"*": "*"}})
    assert quotient_groupoid(G, isotropy_bundle(G)).n_arrows == 1

    # Z2 acting trivially on two points
    B = action_groupoid(cyclic(2), [1, 2], {1: {1: 1, 2: 2}})
    assert quotient_groupoid(B, isotropy_bundle(B)).n_arrows == 2


def test_quotient_not_invariant():
    # isotropy of S3 acting on {1,2,3}; a single stabilizer subgroup is not conjugation invariant
    # once the other fibers are trivial
    S = symmetric(3)
    X = [0, 1, 2]
    table = np.array([[int(S.label(g)[x]) for x in X] for g in range(6)])
    K = action_groupoid(S, X, table)
    iso0 = [K.arrows[a] for a in K.isotropy(0)]
    with pytest.raises(NotInvariant):
        quotient_groupoid(K, {0: iso0})


def test_transformation_groupoid():
    cm = crossed_module(cyclic(2), cyclic(1))
    assert transformation_groupoid(cm).n_arrows == 2

    Z2 = cyclic(2)
    cm = crossed_module(Z2, Z2, make_hom(Z2, Z2, {1: 1}))
    T = transformation_groupoid(cm)
    assert T.n_arrows == 4
    TG = T.as_group()
    assert TG.is_abelian()
    assert all(TG.element_order(i) <= 2 for i in range(4))

    T = transformation_groupoid(s3_a3())
    assert T.n_arrows == 18
    _assert_valid(T)
    proj = transformation_projection(s3_a3())
    assert proj.arrow_map.shape == (18,)


def test_translation_groupoid():
    G = cyclic(3)
    cm = crossed_module(G, cyclic(1))
    K = translation_groupoid_HdG(cm)
    assert K.n_objects == 3
    assert K.n_arrows == 3

    Z2 = cyclic(2)
    K = translation_groupoid_HdG(crossed_module(Z2, Z2, make_hom(Z2, Z2, {1: 1})))
    assert K.n_arrows == 4
    assert len(orbits(K)) == 1
    assert all(len(K.isotropy(x)) == 1 for x in range(2))

    K = translation_groupoid_HdG(z4_z2())
    assert [len(o) for o in orbits(K)] == [2, 2]


def test_space_and_restrict():
    X = space(["a", "b"])
    assert X.n_arrows == 2
    K = pair_groupoid(3)
    R, keep = restrict_groupoid(K, [0, 2])
    assert R.n_arrows == 4
    assert len(keep) == 4
    H = isotropy_bundle(z2_swap(fixed=True))
    B = bundle_groupoid(H)
    assert B.n_arrows == 4
    assert len(orbits(B)) == 3

# pylint: disable=missing-function-docstring,missing-module-docstring
import numpy as np
import pytest

from ._crossed_modules import (
    b_group,
    cm_morphism,
    crossed_module,
    cyclic_pair,
    from_abelian_extension,
    from_central_extension,
    from_isotropy,
    from_normal_subgroup,
    image_is_normal,
    kernel_is_central,
)
from ._errors import Axiom1Violation, Axiom2Violation, NotAbelian, NotFunctorial, NotHomomorphism, NotNormal
from ._groupoids import groupoid_hom_from_index, pair_groupoid
from ._groups import alternating, cyclic, make_hom, symmetric
from .testing.fixtures import s3_a3, z2_swap, z4_z2


def test_identity_on_z2():
    Z2 = cyclic(2)
    cm = crossed_module(Z2, Z2, make_hom(Z2, Z2, {1: 1}))
    assert cm.is_group_case()
    assert list(cm.d[0]) == [0, 1]
    assert kernel_is_central(cm) is None
    assert image_is_normal(cm) is None


def test_cyclic_pair():
    cm = z4_z2()
    assert list(cm.d[0]) == [0, 2]
    assert cm.describe() == {"objects": 1, "arrows": 4, "fiber_orders": [2]}
    with pytest.raises(NotHomomorphism):
        cyclic_pair(4, 2, 1)


def test_axiom1_violation():
    with pytest.raises(Axiom1Violation) as e:
        crossed_module(symmetric(3), cyclic(2), {1: "102"}, None)
    g, h = e.value.witness
    assert g != "012"
    assert h == 1


def test_axiom2_violation():
    # S3 with trivial ∂ and trivial c: c_∂(h) must be conjugation by h
    S = symmetric(3)
    with pytest.raises(Axiom2Violation):
        crossed_module(cyclic(1), S, None, None)


def test_not_functorial():
    Z3 = cyclic(3)
    Z2 = cyclic(2)
    # c_1 = inversion is not an action of Z3
    with pytest.raises(NotFunctorial):
        crossed_module(Z3, Z3, None, {1: {1: 2}})
    with pytest.raises(NotFunctorial):
        crossed_module(Z2, Z3, None, [[0, 1, 2], [0, 1, 1]])


@pytest.mark.parametrize("normal", [["012", "120", "201"], ["012"], None])
def test_from_normal_subgroup(normal):
    S = symmetric(3)
    cm = from_normal_subgroup(S, normal if normal is not None else S.elements)
    assert len(cm.fiber(0)) == len(normal or S.elements)
    assert kernel_is_central(cm) is None
    assert image_is_normal(cm) is None


def test_from_normal_subgroup_rejects():
    with pytest.raises(NotNormal):
        from_normal_subgroup(symmetric(3), ["012", "102"])


def test_b_group():
    assert b_group(cyclic(2)).G.n_arrows == 1
    assert len(b_group(cyclic(6)).fiber(0)) == 6
    with pytest.raises(NotAbelian):
        b_group(symmetric(3))


def test_abelian_extension():
    cm = from_abelian_extension(cyclic(4), [0, 2])
    assert cm.G.n_arrows == 2
    assert all(np.array_equal(c, np.arange(2)) for c in cm.c)

    cm = from_abelian_extension(symmetric(3), alternating(3).elements)
    H = cm.fiber(0)
    g = int(np.flatnonzero(~np.isin(np.arange(2), cm.G.unit))[0])
    for h in range(3):
        assert cm.act(g, h) == int(H.inverse[h])
    assert (cm.d[0] == cm.G.unit[0]).all()

    cm = from_abelian_extension(cyclic(3), cyclic(3).elements)
    assert cm.G.n_arrows == 1


def test_central_extension():
    cm = from_central_extension(cyclic(4), [0, 2])
    assert cm.G.n_arrows == 2
    assert len(cm.fiber(0)) == 4


def test_from_isotropy():
    assert [len(f) for f in from_isotropy(pair_groupoid(3)).H.fibers] == [1, 1, 1]
    cm = from_isotropy(z2_swap(fixed=True))
    assert [len(f) for f in cm.H.fibers] == [1, 1, 2]
    assert not cm.is_group_case()


def test_identity_morphism():
    cm = s3_a3()
    G = cm.G
    phi = groupoid_hom_from_index(G, G, np.arange(G.n_objects), np.arange(G.n_arrows))
    m = cm_morphism(cm, cm, phi, [np.arange(3)])
    assert m.source is cm
    with pytest.raises(NotHomomorphism):
        cm_morphism(cm, cm, phi, [np.array([0, 2, 1])])

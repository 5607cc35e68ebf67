# pylint: disable=missing-function-docstring,missing-module-docstring,redefined-outer-name
import numpy as np
import pytest

from xmod.core import cyclic, from_isotropy, group_groupoid, pair_groupoid, space, symmetric, wedderburn
from xmod.core._errors import AnchorNotInvariant, NotBisection
from xmod.cstar import (
    Bisection,
    aut2,
    bisection_group,
    bisection_inverse,
    bisection_to_aut,
    cm_crossed_product,
    cm_groupoid_action,
    induced_algebra_action,
    translation_action,
    translation_bridge,
)


def _orders(cm):
    return cm.G.n_arrows, len(cm.H.fibers[0])


def test_bisections_of_group():
    G = cyclic(3)
    grp, bis = bisection_group(group_groupoid(G))
    assert len(grp) == 3
    assert list(grp.elements) == list(G.elements)
    assert len(bis) == 3


@pytest.mark.parametrize(
    "K, order",
    [
        (space(3), 1),
        (pair_groupoid(2), 2),
        (pair_groupoid(3), 6),
    ],
)
def test_bisection_group_order(K, order):
    grp, _ = bisection_group(K)
    assert len(grp) == order


def test_bisection_inverse_and_aut():
    K = pair_groupoid(3)
    _, bis = bisection_group(K)
    for S in bis:
        T = bisection_inverse(S)
        a, b = bisection_to_aut(S), bisection_to_aut(T)
        np.testing.assert_array_equal(a.arrow_map[b.arrow_map], np.arange(K.n_arrows))


def test_inner_automorphisms_of_abelian_group():
    K = group_groupoid(cyclic(4))
    _, bis = bisection_group(K)
    for S in bis:
        np.testing.assert_array_equal(bisection_to_aut(S).arrow_map, np.arange(K.n_arrows))


def test_not_bisection():
    K = pair_groupoid(2)
    into_first = [k for k in range(K.n_arrows) if K.tgt[k] == 0]
    section = np.array(sorted(into_first, key=lambda k: K.src[k]), dtype=np.int64)
    with pytest.raises(NotBisection):
        bisection_to_aut(Bisection(K, section))


@pytest.mark.parametrize(
    "K, orders",
    [
        (group_groupoid(cyclic(2)), (1, 2)),
        (group_groupoid(cyclic(3)), (2, 3)),
        (space(2), (2, 1)),
        (pair_groupoid(2), (2, 2)),
    ],
)
def test_aut2(K, orders):
    assert _orders(aut2(K)) == orders


def test_aut2_of_s3_is_inner():
    cm = aut2(group_groupoid(symmetric(3)))
    # every automorphism of S3 is inner and the center is trivial
    assert _orders(cm) == (6, 6)
    assert len(set(cm.boundary(0, h) for h in range(6))) == 6


def test_translation_action(z4z2):
    act = translation_action(z4z2)
    assert act.groupoid.n_objects == z4z2.G.n_arrows
    alg = induced_algebra_action(act)
    assert alg.algebra.dim == 8
    res, _ = cm_crossed_product(alg)
    assert res.dim > 0


@pytest.mark.parametrize("name", ["z4z2", "s3a3", "z2_identity", "z3_identity"])
def test_translation_bridge_is_iso(name, request):
    cm = request.getfixturevalue(name)
    f = translation_bridge(cm).hom
    assert f.is_injective() and f.is_surjective()
    assert wedderburn(f.source) == wedderburn(f.target)
    order = cm.G.n_arrows
    assert f.source.dim == order * len(cm.H.fibers[0])
    # the crossed product of the induced action is one block of size |G|
    res, _ = cm_crossed_product(induced_algebra_action(translation_action(cm)))
    assert wedderburn(res.algebra) == (order,)


def test_anchor_must_be_invariant(swap_groupoid):
    cm = from_isotropy(swap_groupoid)
    with pytest.raises(AnchorNotInvariant):
        cm_groupoid_action(cm, pair_groupoid(2), {1: 1, 2: 3}, [], [])

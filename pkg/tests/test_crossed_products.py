# pylint: disable=missing-function-docstring,missing-module-docstring,redefined-outer-name
import numpy as np
import pytest

from common import matrix_unit
from xmod.core import (
    complex_line,
    cyclic,
    cyclic_pair,
    from_isotropy,
    from_normal_subgroup,
    groupoid_algebra,
    ideal_generated,
    isotropy_bundle,
    matrix_algebra,
    quotient_groupoid,
    symmetric,
    wedderburn,
)
from xmod.core._errors import NotCovariant, TwistViolation, VerificationFailed
from xmod.core.testing.fixtures import s3_a3, z4_z2
from xmod.cstar import (
    cm_crossed_product,
    cm_crossed_product_map,
    coequalizer_ideal,
    cm_cstar,
    covariant_rep,
    crossed_product,
    crossed_product_map,
    disintegrate,
    equivariant_map,
    extension,
    function_algebra_action,
    groupoid_action,
    integrate,
    left_translation,
    quotient_group_crossed_product,
    rho_sigma,
    standard_representation,
    unit_action,
    verify_exactness,
    verify_thm51,
)


def test_group_crossed_products():
    assert wedderburn(crossed_product(left_translation(cyclic(3))).algebra) == (3,)
    trivial = groupoid_action(symmetric(3), complex_line(), None)
    assert wedderburn(crossed_product(trivial).algebra) == (1, 1, 2)


@pytest.mark.parametrize(
    "cm, dim, blocks",
    [
        (from_normal_subgroup(symmetric(3), ["012", "120", "201"]), 2, (1, 1)),
        (cyclic_pair(4, 2, 2), 2, (1, 1)),
        (from_normal_subgroup(cyclic(3), [0, 1, 2]), 1, (1,)),
        (from_normal_subgroup(cyclic(4), [0]), 4, (1, 1, 1, 1)),
    ],
)
def test_cm_cstar(cm, dim, blocks):
    A = cm_cstar(cm)
    assert A.dim == dim
    assert wedderburn(A) == blocks


def test_coequalizer_data(z4z2):
    res, q = cm_crossed_product(unit_action(z4z2))
    assert res.parent is not None and res.ideal is not None
    assert res.parent.dim == 4
    assert res.range_dim == 2
    assert res.ideal.dim == 2
    assert res.ideal.iterations == 0
    assert q.is_surjective()
    assert q.kernel().shape[1] == 2


def test_coequalizer_ideal_must_be_closed():
    A = matrix_algebra(2)
    # e11 generates all of M2 only after closing under multiplication
    with pytest.raises(VerificationFailed) as e:
        coequalizer_ideal(A, matrix_unit(2, 0, 0)[:, None])
    assert e.value.witness >= 1
    assert e.value.to_dict()["error"] == "VerificationFailed"
    assert coequalizer_ideal(A, np.eye(4)).dim == 4
    assert coequalizer_ideal(A, np.zeros((4, 0))).dim == 0


def test_rho_sigma_section(z4z2):
    pair = rho_sigma(unit_action(z4z2))
    eye = np.eye(pair.target.dim)
    np.testing.assert_allclose(pair.rho_star.matrix @ pair.section.matrix, eye, atol=1e-12)
    np.testing.assert_allclose(pair.sigma_star.matrix @ pair.section.matrix, eye, atol=1e-12)
    assert pair.rho_star.is_unital()
    assert pair.difference().shape == (pair.target.dim, pair.domain.dim)


def test_quotient_group_agrees(s3a3):
    direct = quotient_group_crossed_product(unit_action(s3a3))
    assert wedderburn(direct.algebra) == wedderburn(cm_cstar(s3a3))


def test_isotropy_quotient(swap_groupoid):
    K = swap_groupoid
    lhs = cm_cstar(from_isotropy(K))
    rhs = groupoid_algebra(quotient_groupoid(K, isotropy_bundle(K)))
    assert wedderburn(lhs) == wedderburn(rhs) == (1, 2)


def test_quotient_group_needs_trivial_u(twisted_m2):
    with pytest.raises(ValueError):
        quotient_group_crossed_product(twisted_m2)


def test_identity_boundary_is_trivial(twisted_m2, twisted_sum):
    # A⋊(G, G) ≅ A
    assert cm_crossed_product(twisted_m2)[0].dim == 4
    assert cm_crossed_product(twisted_sum)[0].dim == 3


@pytest.mark.parametrize(
    "beta, blocks",
    [
        (groupoid_action(cyclic(4), complex_line(), None), [1, 1, 1, 1]),
        (left_translation(cyclic(4)), [4]),
    ],
)
def test_thm51_z4z2(z4z2, beta, blocks):
    rep = verify_thm51(z4z2, beta)
    assert rep.passed
    assert rep.data["lhs_blocks"] == blocks
    assert rep.data["lhs_dim"] == rep.data["rhs_dim"]
    assert rep.data["kernel_dim"] == rep.data["ideal_dim"]


def test_thm51_s3a3(s3a3):
    rep = verify_thm51(s3a3, groupoid_action(symmetric(3), complex_line(), None))
    assert rep.data["lhs_blocks"] == [1, 1, 2]
    assert rep.to_dict()["passed"] is True


@pytest.mark.parametrize(
    "cm, order",
    [
        (from_normal_subgroup(cyclic(2), [0, 1]), 2),
        (from_normal_subgroup(cyclic(3), [0, 1, 2]), 3),
        (z4_z2(), 4),
        (s3_a3(), 6),
    ],
)
def test_translation_stages_are_one_block(cm, order):
    # (C0(G)⋊H)⋊(G,H) ≅ C0(G)⋊G ≅ M_|G|
    rep = verify_thm51(cm, left_translation(cm.G))
    assert rep.passed
    assert rep.data["lhs_blocks"] == rep.data["rhs_blocks"] == [order]
    assert rep.data["lhs_dim"] == order * order


def test_thm51_identity_on_line(z2_identity):
    rep = verify_thm51(z2_identity, groupoid_action(cyclic(2), complex_line(), None))
    assert rep.data["lhs_blocks"] == [1, 1]
    assert rep.data["parent_dim"] == 4
    assert rep.data["ideal_dim"] == 2


def test_exactness_swap(swap_c3):
    I = ideal_generated(swap_c3.algebra, [[1, 0, 0], [0, 1, 0]])
    rep = verify_exactness(swap_c3, I)
    assert (rep.data["ideal_dim"], rep.data["quotient_dim"], rep.data["middle_dim"]) == (4, 2, 6)


def test_exactness_twisted(twisted_sum):
    I = ideal_generated(twisted_sum.algebra, [[1, 0, 0], [0, 1, 0]])
    rep = verify_exactness(twisted_sum, I)
    assert (rep.data["ideal_dim"], rep.data["quotient_dim"], rep.data["middle_dim"]) == (2, 1, 3)


def test_exactness_rotation():
    # Z3 rotating {1, 2, 3} and fixing 4; the orbit spans an invariant ideal
    cm = from_normal_subgroup(cyclic(3), [0])
    act = function_algebra_action(cm, [1, 2, 3, 4], {1: {1: 2, 2: 3, 3: 1, 4: 4}})
    I = ideal_generated(act.algebra, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert I.dim == 3
    rep = verify_exactness(act, I)
    assert (rep.data["ideal_dim"], rep.data["quotient_dim"], rep.data["middle_dim"]) == (9, 3, 12)


def test_functorial_maps(swap_c3):
    I = ideal_generated(swap_c3.algebra, [[1, 0, 0], [0, 1, 0]])
    _, quot = extension(swap_c3, I)
    f = crossed_product_map(quot)
    assert f.is_surjective()
    g = cm_crossed_product_map(quot)
    assert g.is_surjective()
    ident = equivariant_map(swap_c3, swap_c3, np.eye(3))
    assert crossed_product_map(ident).is_injective()


def test_characters_integrate(z4z2):
    act = unit_action(z4z2)
    C = complex_line()
    # χ(1) = -1 is trivial on ∂(Z2) = {0, 2}
    rep = covariant_rep(act, C, np.eye(1), [1, -1, 1, -1])
    f = integrate(rep)
    assert f.is_unital()
    back = disintegrate(cm_crossed_product(act)[0], f)
    np.testing.assert_allclose(np.array(back.V).ravel(), [1, -1, 1, -1], atol=1e-9)


def test_covariance_errors(z4z2):
    act = unit_action(z4z2)
    C = complex_line()
    with pytest.raises(TwistViolation):
        covariant_rep(act, C, np.eye(1), [1, 1j, -1, -1j])
    with pytest.raises(NotCovariant) as e:
        covariant_rep(act, C, np.eye(1), [1, 1, -1, 1])
    assert e.value.witness[0] == "product"


def test_standard_representation(z4z2):
    rep = standard_representation(z4z2)
    f = integrate(rep)
    assert f.target.dim == 16
    assert f.is_injective() and f.is_surjective()

# pylint: disable=missing-function-docstring,missing-module-docstring,redefined-outer-name
import numpy as np
import pytest

from xmod.core import (
    GROUP_OBJECT,
    alternating,
    b_group,
    complex_line,
    cm_morphism,
    crossed_module,
    cyclic,
    fiber_embedding,
    from_isotropy,
    functions_on,
    ideal_generated,
    matrix_algebra,
    star_hom,
    symmetric,
)
from xmod.core._errors import (
    Covariance1Violation,
    Covariance2Violation,
    NotAbelian,
    NotCentral,
    NotEquivariant,
    NotFunctorial,
    NotHomomorphism,
    NotInvariant,
    NotStarIso,
    NotUnitary,
)
from xmod.core._groupoids import groupoid_hom_from_index
from xmod.cstar import (
    canonical_action_on_BH,
    characters,
    cm_action,
    cm_crossed_product,
    diagonal_action,
    equivariant_map,
    extension,
    fiber_dimensions,
    function_algebra_action,
    green_action,
    groupoid_action,
    inner_action,
    left_translation,
    pontryagin_compose,
    pontryagin_decompose,
    pullback_action,
    restrict_and_quotient,
    spectral_projections,
    tensor_fiber_dimensions,
    trivial_action,
    unit_action,
    verify_dual_equivariance,
)

# Ad(diag(1, -1)) on the matrix units e11, e12, e21, e22
AD_DIAG = np.diag([1, -1, -1, 1]).astype(complex)
TRANSPOSE = np.eye(4)[[0, 2, 1, 3]]


def test_unit_action(s3a3, swap_groupoid):
    act = unit_action(s3a3)
    assert act.algebra.dim == 1
    assert fiber_dimensions(act.algebra) == [1]

    cm = from_isotropy(swap_groupoid)
    act = unit_action(cm)
    assert act.algebra.dim == 3
    assert fiber_dimensions(act.algebra) == [1, 1, 1]


def test_groupoid_action_generators():
    act = groupoid_action(cyclic(2), matrix_algebra(2), {1: AD_DIAG})
    assert len(act.alpha) == 2
    np.testing.assert_allclose(act.alpha[0], np.eye(4))
    np.testing.assert_allclose(act.full(1), AD_DIAG)


def test_groupoid_action_rejects():
    M2 = matrix_algebra(2)
    with pytest.raises(NotStarIso):
        groupoid_action(cyclic(2), M2, {1: TRANSPOSE})
    with pytest.raises(NotFunctorial):
        groupoid_action(cyclic(2), M2, [AD_DIAG, AD_DIAG])


def test_left_translation():
    beta = left_translation(cyclic(3))
    assert beta.algebra.dim == 3
    # δ_k ↦ δ_{1+k}
    np.testing.assert_allclose(beta.full(1) @ np.array([1, 0, 0]), [0, 1, 0])


def test_covariance1_witness():
    cm = b_group(cyclic(2))
    with pytest.raises(Covariance1Violation) as e:
        cm_action(cm, matrix_algebra(2), None, {1: [1, 0, 0, -1]})
    x, h, j = e.value.witness
    assert x == GROUP_OBJECT
    assert h == 1
    assert j == 1


def test_covariance2_violation():
    cm = crossed_module(cyclic(2), cyclic(2), None, None)
    with pytest.raises(Covariance2Violation):
        function_algebra_action(cm, [1, 2], {1: {1: 2, 2: 1}}, {1: [1, -1]})


def test_unitaries_rejected():
    cm = b_group(cyclic(2))
    M2 = matrix_algebra(2)
    with pytest.raises(NotUnitary):
        cm_action(cm, M2, None, {1: [2, 0, 0, 1]})
    with pytest.raises(NotHomomorphism):
        cm_action(cm, M2, None, [np.array([[1, 0, 0, 1], [1j, 0, 0, 1j]])])


def test_inner_and_trivial(diag_m2, z2_trivial_h, swap_groupoid):
    np.testing.assert_allclose(diag_m2.action.full(1), AD_DIAG)
    act = trivial_action(z2_trivial_h, matrix_algebra(3))
    assert act.algebra.dim == 9
    with pytest.raises(ValueError):
        inner_action(from_isotropy(swap_groupoid), complex_line(), {})


def test_green_action():
    act = green_action(symmetric(3), alternating(3).elements, complex_line(), None, None)
    assert act.cm.G.n_arrows == 6
    assert len(act.u[0]) == 3


def test_canonical_action(z4z2, line_beta):
    act = canonical_action_on_BH(z4z2, line_beta)
    # ℂ⋊Z2 with u_h = 1⊗δ_h
    assert act.algebra.dim == 2
    np.testing.assert_allclose(act.unitary(0, 1), [0, 1])


def test_equivariant_map(diag_m2, z2_trivial_h):
    M2 = diag_m2.algebra
    f = equivariant_map(diag_m2, diag_m2, np.eye(4))
    assert f.hom.is_unital()
    plain = trivial_action(z2_trivial_h, M2)
    with pytest.raises(NotEquivariant) as e:
        equivariant_map(diag_m2, plain, np.eye(4))
    assert e.value.witness[0] == "alpha"


def test_diagonal_action(sign_c2, diag_m2):
    D = diagonal_action(sign_c2, sign_c2)
    assert D.algebra.dim == 4
    with pytest.raises(ValueError):
        diagonal_action(sign_c2, diag_m2)


def test_extension(swap_c3):
    A = swap_c3.algebra
    I = ideal_generated(A, [[1, 0, 0], [0, 1, 0]])
    incl, quot = extension(swap_c3, I)
    assert incl is not None
    assert incl.source.algebra.dim == 2
    assert quot.target.algebra.dim == 1
    sub, q = restrict_and_quotient(swap_c3, I)
    assert sub is not None and sub.algebra.dim == 2
    assert q.algebra.dim == 1


def test_extension_not_invariant(swap_c3):
    I = ideal_generated(swap_c3.algebra, [[1, 0, 0]])
    with pytest.raises(NotInvariant):
        extension(swap_c3, I)


def test_extension_zero_ideal(swap_c3):
    I = ideal_generated(swap_c3.algebra, np.zeros((3, 0)))
    incl, quot = extension(swap_c3, I)
    assert incl is None
    assert quot.target.algebra.dim == 3


def test_characters():
    chars = characters(cyclic(4))
    assert len(chars) == 4
    assert (chars.powers[0] == 0).all()
    np.testing.assert_allclose(np.abs(chars.values), 1)
    with pytest.raises(NotAbelian):
        characters(symmetric(3))


def test_pontryagin_round_trip(sign_c2):
    A, chars = pontryagin_decompose(sign_c2)
    assert fiber_dimensions(A) == [1, 1]
    back = pontryagin_compose(A, chars)
    np.testing.assert_allclose(back.u[0], sign_c2.u[0], atol=1e-9)
    rep = verify_dual_equivariance(sign_c2)
    assert rep.passed
    assert rep.data["fiber_dims"] == [1, 1]


def _characters_twice(n):
    # u_1 = ω^k on the points k + 1 and n + k + 1
    w = np.exp(2j * np.pi / n)
    return function_algebra_action(b_group(cyclic(n)), list(range(1, 2 * n + 1)), {}, {1: w ** (np.arange(2 * n) % n)})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pontryagin_round_trip_cyclic(n):
    act = _characters_twice(n)
    A, chars = pontryagin_decompose(act)
    assert len(chars) == n
    assert fiber_dimensions(A) == [2] * n
    back = pontryagin_compose(A, chars)
    np.testing.assert_allclose(back.u[0], act.u[0], atol=1e-9)
    assert verify_dual_equivariance(act).passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_b_group_product_is_trivial_fiber(n):
    act = _characters_twice(n)
    A, chars = pontryagin_decompose(act)
    F, E = fiber_embedding(A, chars.labels[0])
    res, _ = cm_crossed_product(act)
    assert res.dim == F.dim == 2
    f = star_hom(F, res.algebra, res.i_A.matrix @ E)
    assert f.is_injective() and f.is_surjective()
    for a in np.eye(F.dim):
        for b in np.eye(F.dim):
            np.testing.assert_allclose(f.matrix @ F.mul(a, b), res.algebra.mul(f.matrix @ a, f.matrix @ b), atol=1e-9)


def test_spectral_projections_need_central(twisted_m2):
    with pytest.raises(NotCentral):
        spectral_projections(twisted_m2)


def test_tensor_fiber_dimensions(sign_c2):
    dims = tensor_fiber_dimensions(sign_c2, sign_c2)
    assert len(dims) == 2
    for got, expect in dims.values():
        assert got == expect == 2


def test_pullback_along_identity(s3a3):
    G = s3a3.G
    phi = groupoid_hom_from_index(G, G, np.arange(G.n_objects), np.arange(G.n_arrows))
    m = cm_morphism(s3a3, s3a3, phi, [np.arange(3)])
    act = pullback_action(m, unit_action(s3a3))
    assert act.algebra.dim == 1
    assert act.cm is s3a3


def test_function_algebra_fibers(swap_c3):
    assert swap_c3.algebra.dim == 3
    assert fiber_dimensions(swap_c3.algebra) == [3]
    assert functions_on(3).dim == 3

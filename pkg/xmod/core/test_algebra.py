# pylint: disable=missing-function-docstring,missing-module-docstring
import numpy as np
import pytest
import scipy.linalg

from ._algebra import (
    Ideal,
    algebra_from_structure,
    center,
    change_basis,
    complex_line,
    diagonal_tensor,
    direct_sum,
    fiber,
    fiber_embedding,
    functions_on,
    group_algebra,
    groupoid_algebra,
    i_norm,
    ideal_generated,
    identity_star_hom,
    is_isomorphic,
    make_ideal,
    matrix_algebra,
    norms,
    operator_norm,
    quotient_algebra,
    refiber,
    star_hom,
    tensor,
    wedderburn,
)
from ._config import config_override
from ._errors import (
    BadFibering,
    BadInvolution,
    BadUnit,
    FiberMismatch,
    HomomorphismCheckFailed,
    NotAssociative,
    NotConvolutionAlgebra,
    NotCStar,
    NotIdeal,
    SizeLimit,
    UnknownObject,
)
from ._groupoids import pair_groupoid
from ._groups import cyclic, symmetric
from ._linalg import null_space, orth
from .testing.fixtures import assert_blocks, random_unitary


def _c2_structure():
    T = np.zeros((2, 2, 2))
    T[0, 0, 0] = 1
    T[1, 1, 1] = 1
    return T


def test_complex_line():
    C = complex_line()
    assert C.dim == 1
    assert wedderburn(C) == (1,)
    assert operator_norm(C, C.unit) == pytest.approx(1)


def test_matrix_algebra():
    M2 = matrix_algebra(2)
    assert M2.dim == 4
    assert_blocks(M2, [2])
    e12, e21 = M2.basis(1), M2.basis(2)
    assert np.allclose(M2.mul(e12, e21), M2.basis(0))
    assert np.allclose(M2.adjoint(e12), e21)


def test_bad_involution():
    M2 = matrix_algebra(2)
    with pytest.raises(BadInvolution) as e:
        algebra_from_structure(M2.mult, np.eye(4), M2.unit)
    assert len(e.value.witness) == 2


def test_bad_unit():
    with pytest.raises(BadUnit):
        algebra_from_structure(_c2_structure(), np.eye(2), [1, 0])


def test_not_associative():
    T = np.zeros((3, 3, 3))
    for i in range(3):
        T[0, i, i] = T[i, 0, i] = 1
    T[1, 1, 2] = 1  # e1 e1 = e2
    T[2, 1, 1] = 1  # e2 e1 = e1, while e1 e2 = 0
    with pytest.raises(NotAssociative) as e:
        algebra_from_structure(T, np.eye(3), [1, 0, 0])
    assert len(e.value.witness) == 3


def test_not_cstar():
    swap = np.array([[0, 1], [1, 0]])
    with pytest.raises(NotCStar) as e:
        algebra_from_structure(_c2_structure(), swap, [1, 1])
    assert e.value.witness["min_eigenvalue"] < 0


def test_bad_fibering():
    with pytest.raises(BadFibering):
        algebra_from_structure(_c2_structure(), np.eye(2), [1, 1], {"a": [1, 0]})
    M2 = matrix_algebra(2)
    with pytest.raises(BadFibering) as e:
        refiber(M2, ["a", "b"], [M2.basis(0), M2.basis(3)])
    assert e.value.witness == "a"


def test_size_limit():
    with config_override(max_dim=3):
        with pytest.raises(SizeLimit):
            matrix_algebra(2)


def test_constructors():
    assert_blocks(functions_on([1, 2, 3]), [1, 1, 1])
    S = direct_sum(matrix_algebra(2), complex_line())
    assert S.dim == 5
    assert_blocks(S, [2, 1])
    assert S.objects == (0, 1)
    assert_blocks(tensor(matrix_algebra(2), matrix_algebra(2)), [4])


@pytest.mark.parametrize(
    "alg,blocks,center_dim",
    [
        (lambda: group_algebra(cyclic(2)), [1, 1], 2),
        (lambda: groupoid_algebra(pair_groupoid(3)), [3], 1),
        (lambda: group_algebra(symmetric(3)), [1, 1, 2], 3),
        (lambda: matrix_algebra(3), [3], 1),
    ],
)
def test_blocks_and_center(alg, blocks, center_dim):
    A = alg()
    assert_blocks(A, blocks)
    assert center(A).shape[1] == center_dim


def test_groupoid_algebra_fibering():
    A = groupoid_algebra(pair_groupoid(3))
    assert len(A.objects) == 1  # one orbit
    B = groupoid_algebra(pair_groupoid(2), anchor=[0, 0], objects=["x"])
    assert B.objects == ("x",)
    with pytest.raises(BadFibering):
        groupoid_algebra(pair_groupoid(2), anchor=[0, 1])


def test_ideal_generated():
    M2 = matrix_algebra(2)
    assert ideal_generated(M2, [M2.basis(0)]).dim == 4
    C3 = functions_on(3)
    I = ideal_generated(C3, [[1, 0, 0]])
    assert I.dim == 1
    assert I.iterations == 0
    assert ideal_generated(C3, []).dim == 0


def test_make_ideal():
    M2 = matrix_algebra(2)
    with pytest.raises(NotIdeal):
        make_ideal(M2, [M2.basis(0)])
    assert make_ideal(M2, np.eye(4)).dim == 4


def test_quotients():
    C3 = functions_on(3)
    Q, proj = quotient_algebra(C3, ideal_generated(C3, []))
    assert Q.dim == 3
    assert proj.is_injective()

    Q, proj = quotient_algebra(C3, ideal_generated(C3, [[1, 0, 0]]))
    assert_blocks(Q, [1, 1])
    assert proj.kernel().shape[1] == 1
    assert proj.is_surjective()

    Z4 = group_algebra(cyclic(4))
    I = ideal_generated(Z4, [Z4.basis(2) - Z4.basis(0)])
    assert I.dim == 2
    Q, _ = quotient_algebra(Z4, I)
    assert_blocks(Q, [1, 1])
    assert is_isomorphic(Q, group_algebra(cyclic(2)))


def test_quotient_is_star_hom():
    A = group_algebra(symmetric(3))
    I = ideal_generated(A, [A.unit - A.basis(1)])
    Q, proj = quotient_algebra(A, I)
    assert Q.dim == A.dim - I.dim
    star_hom(A, Q, proj.matrix)


def test_quotient_rejects_non_ideal():
    M2 = matrix_algebra(2)
    with pytest.raises(NotIdeal):
        quotient_algebra(M2, Ideal(M2, M2.basis(0).reshape(4, 1)))


def test_fibers():
    C = functions_on([1, 2])
    assert fiber(C, 1).dim == 1
    A = direct_sum(matrix_algebra(2), complex_line(), objects=["a", "b"])
    Fa, E = fiber_embedding(A, "a")
    assert Fa.dim == 4
    assert_blocks(Fa, [2])
    assert np.allclose(E, np.eye(5)[:, :4])
    with pytest.raises(UnknownObject):
        fiber(A, "c")


def test_diagonal_tensor():
    X = ["x1", "x2"]
    A = direct_sum(matrix_algebra(2), complex_line(), objects=X)
    AX = diagonal_tensor(A, functions_on(X))
    assert AX.dim == 5
    assert AX.objects == ("x1", "x2")
    assert_blocks(AX, [2, 1])
    assert diagonal_tensor(functions_on(X), functions_on(X)).dim == 2
    with pytest.raises(FiberMismatch):
        diagonal_tensor(A, functions_on(3))


def test_norms():
    A = group_algebra(cyclic(2))
    assert operator_norm(A, A.unit) == pytest.approx(1)
    op, inorm = norms(A, [1, 1])
    assert op == pytest.approx(2)
    assert inorm == pytest.approx(2)
    op, inorm = norms(A, [1, -1])
    assert op == pytest.approx(2)
    assert op <= inorm + 1e-9

    M2 = matrix_algebra(2)
    assert norms(M2, M2.basis(1)) == (pytest.approx(1), None)
    with pytest.raises(NotConvolutionAlgebra):
        i_norm(M2, M2.unit)


def test_change_basis_keeps_blocks():
    A = group_algebra(symmetric(3))
    B = change_basis(A, random_unitary(6, seed=3))
    assert wedderburn(B) == (1, 1, 2)


def test_star_hom():
    A = matrix_algebra(2)
    ident = identity_star_hom(A)
    assert ident.is_unital()
    assert ident.compose(ident).is_injective()
    transpose = np.eye(4)[[0, 2, 1, 3]]
    with pytest.raises(HomomorphismCheckFailed) as e:
        star_hom(A, A, transpose)
    assert e.value.witness[0] == "product"


def test_elements():
    A = group_algebra(cyclic(3))
    g = A.element(A.basis(1))
    g3 = g * g * g
    assert g3.isclose(A.unit)
    assert (g * g.star()).isclose(A.unit)
    assert (2 * g).norm() == pytest.approx(2)


def test_rank_cut_ignores_round_off():
    gen = np.random.default_rng(0)
    noise = 1e-14 * gen.standard_normal((6, 3))
    assert orth(noise, 1e-10).shape[1] == 0
    assert null_space(noise.T, 1e-10).shape[1] == 6
    # a purely relative cut keeps every direction of the noise
    assert scipy.linalg.orth(noise, rcond=1e-10).shape[1] == 3


def test_closed_ideal_needs_no_extra_pass():
    A = matrix_algebra(2)
    I = ideal_generated(A, np.eye(4))
    assert (I.dim, I.iterations) == (4, 0)
    J = ideal_generated(direct_sum(A, complex_line()), [[0, 0, 0, 0, 1]])
    assert (J.dim, J.iterations) == (1, 0)

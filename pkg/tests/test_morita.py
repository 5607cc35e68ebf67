# pylint: disable=missing-function-docstring,missing-module-docstring,redefined-outer-name
import numpy as np
import pytest

from common import blocks, matrix_unit
from xmod.core import matrix_algebra, wedderburn
from xmod.core._errors import NotFull, NotInvariant, NotProjection
from xmod.cstar import (
    bimodule_check,
    cm_crossed_product,
    corner_of_crossed_product,
    corners,
    function_algebra_action,
    inner_action,
    linking,
    trivial_action,
    verify_morita,
)


@pytest.fixture
def rect_m3(z2_trivial_h):
    return trivial_action(z2_trivial_h, matrix_algebra(3))


def test_linking_corners(diag_m2):
    link = linking(diag_m2, matrix_unit(2, 0, 0))
    left, right = corners(link)
    assert left.algebra.dim == right.algebra.dim == 1
    np.testing.assert_allclose(link.p + link.p_perp, diag_m2.algebra.unit)
    assert link.left.hom.is_injective()


def test_linking_rejects_non_projection(diag_m2):
    with pytest.raises(NotProjection) as e:
        linking(diag_m2, 2 * matrix_unit(2, 0, 0))
    assert e.value.witness == "idempotent"
    with pytest.raises(NotProjection) as e:
        linking(diag_m2, matrix_unit(2, 0, 1))
    assert e.value.witness == "star"


def test_linking_rejects_moved_projection(z2_trivial_h):
    swap = inner_action(z2_trivial_h, matrix_algebra(2), {1: [0, 1, 1, 0]})
    with pytest.raises(NotInvariant):
        linking(swap, matrix_unit(2, 0, 0))


def test_linking_rejects_twisted_projection(twisted_m2):
    # Ad diag(1, -1) moves the projection onto (1, 1)/√2
    p = np.array([1, 1, 1, 1]) / 2
    with pytest.raises(NotInvariant):
        linking(twisted_m2, p)


def test_linking_needs_full(z2_trivial_h):
    act = function_algebra_action(z2_trivial_h, [1, 2], {})
    with pytest.raises(NotFull) as e:
        linking(act, [1, 0])
    assert e.value.witness == "p"


@pytest.mark.parametrize("name", ["diag_m2", "twisted_m2"])
def test_verify_morita_m2(name, request):
    link = linking(request.getfixturevalue(name), matrix_unit(2, 0, 0))
    rep = verify_morita(link)
    assert rep.passed
    assert len(rep.data["left_blocks"]) == len(rep.data["right_blocks"])
    w = bimodule_check(link)
    assert w.passed, w.failures()
    assert len(w.gamma) == 2


def test_verify_morita_rectangular(rect_m3):
    link = linking(rect_m3, matrix_unit(3, 0, 0))
    rep = verify_morita(link)
    assert rep.data["left_blocks"] == [1, 1]
    assert rep.data["right_blocks"] == [2, 2]
    assert rep.data["corner_dims"] == [1, 4]
    w = bimodule_check(link)
    assert w.passed
    # E = e11·M3·(e22 + e33)
    assert w.E.shape[1] == 2


def test_corner_of_crossed_product(rect_m3):
    link = linking(rect_m3, matrix_unit(3, 0, 0))
    X = cm_crossed_product(rect_m3)[0]
    C, P = corner_of_crossed_product(link, X, side="right")
    left, right = corners(link)
    assert C.dim == cm_crossed_product(right)[0].dim
    assert wedderburn(C) == wedderburn(cm_crossed_product(right)[0].algebra)
    CL, _ = corner_of_crossed_product(link)
    assert blocks(CL) == blocks(cm_crossed_product(left)[0].algebra)
    assert P.shape == (X.dim,)

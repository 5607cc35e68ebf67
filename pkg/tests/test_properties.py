# pylint: disable=missing-function-docstring,missing-module-docstring
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xmod.core import (
    bundle_groupoid,
    change_basis,
    cyclic,
    cyclic_pair,
    direct_sum,
    from_normal_subgroup,
    group_groupoid,
    i_norm,
    ideal_generated,
    isotropy_bundle,
    matrix_algebra,
    operator_norm,
    pair_groupoid,
    wedderburn,
)
from xmod.core._linalg import orth
from xmod.core.testing.fixtures import cyclic_action, random_unitary, s3_a3, z2_swap, z4_z2
from xmod.cstar import (
    bundle_crossed_product,
    canonical_action_on_BH,
    crossed_product,
    inner_action,
    left_translation,
    rho_sigma,
    unit_action,
)

block_sizes = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)

CONVOLUTION_ALGEBRAS = {
    "group_c2": lambda: crossed_product(left_translation(cyclic(2))).algebra,
    "group_c5": lambda: crossed_product(left_translation(cyclic(5))).algebra,
    "groupoid_pair3": lambda: crossed_product(left_translation(pair_groupoid(3))).algebra,
    "groupoid_swap": lambda: crossed_product(left_translation(z2_swap(fixed=True))).algebra,
    "groupoid_rotation": lambda: crossed_product(left_translation(cyclic_action(3))).algebra,
    "bundle_swap": lambda: _bundle(isotropy_bundle(z2_swap(fixed=True))),
    "bundle_c3": lambda: _bundle(isotropy_bundle(group_groupoid(cyclic(3)))),
    "cm_s3a3": lambda: _cm(unit_action(s3_a3())),
    "cm_z4z2_translation": lambda: _cm(canonical_action_on_BH(z4_z2(), left_translation(cyclic(4)))),
}


def _bundle(H):
    return bundle_crossed_product(H, left_translation(bundle_groupoid(H))).algebra


def _cm(act):
    # A⋊(H⋊_c G), the domain of ρ* and σ*
    return rho_sigma(act).domain.algebra


@lru_cache(maxsize=None)
def _convolution_algebra(name):
    return CONVOLUTION_ALGEBRAS[name]()


def _algebra(sizes):
    return direct_sum(*[matrix_algebra(d) for d in sizes], objects=list(range(len(sizes))))


def _inner_cm_action(kind, d, seed):
    # α_g = Ad(V^g) with u_h = V^(∂h); V is diagonal in a random unitary frame
    W = random_unitary(d, seed)
    gen = np.random.default_rng(seed)
    if kind == "z2_identity":
        cm = from_normal_subgroup(cyclic(2), [0, 1])
        V = W @ np.diag(gen.choice([1, -1], size=d)) @ W.conj().T
        return inner_action(cm, matrix_algebra(d), {1: V.ravel()}, {1: V.ravel()})
    cm = cyclic_pair(4, 2, 2)
    V = W @ np.diag(1j ** gen.integers(4, size=d)) @ W.conj().T
    return inner_action(cm, matrix_algebra(d), {1: V.ravel()}, {1: (V @ V).ravel()})


inner_actions = st.tuples(st.sampled_from(["z2_identity", "z4z2"]), st.integers(min_value=1, max_value=2), seeds)


@settings(max_examples=200, deadline=None)
@given(block_sizes, seeds)
def test_blocks_survive_change_of_basis(sizes, seed):
    A = _algebra(sizes)
    B = change_basis(A, random_unitary(A.dim, seed))
    assert wedderburn(B) == tuple(sorted(sizes))


@settings(max_examples=200, deadline=None)
@given(block_sizes, seeds)
def test_ideal_closure_is_a_fixpoint(sizes, seed):
    A = _algebra(sizes)
    gen = np.random.default_rng(seed)
    v = gen.standard_normal(A.dim) * (gen.random(A.dim) < 0.3)
    I = ideal_generated(A, v[:, None])
    assert ideal_generated(A, I.basis).dim == I.dim
    # ideals are sums of whole blocks
    assert I.dim in {sum(d * d for d, keep in zip(sizes, mask) if keep) for mask in np.ndindex(*[2] * len(sizes))}


@settings(max_examples=200, deadline=None)
@given(inner_actions)
def test_coequalizer_range_is_already_an_ideal(spec):
    pair = rho_sigma(_inner_cm_action(*spec))
    R = orth(pair.difference())
    I = ideal_generated(pair.target.algebra, R)
    assert I.iterations == 0
    assert I.dim == R.shape[1]


@settings(max_examples=200, deadline=None)
@given(inner_actions, seeds)
def test_rho_sigma_are_star_homomorphisms(spec, seed):
    pair = rho_sigma(_inner_cm_action(*spec))
    D, T = pair.domain.algebra, pair.target.algebra
    i, j = np.random.default_rng(seed).integers(D.dim, size=2)
    a, b = np.eye(D.dim)[i], np.eye(D.dim)[j]
    for f in (pair.rho_star.matrix, pair.sigma_star.matrix):
        np.testing.assert_allclose(f @ D.mul(a, b), T.mul(f @ a, f @ b), atol=1e-9)
        np.testing.assert_allclose(f @ D.adjoint(a), T.adjoint(f @ a), atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(CONVOLUTION_ALGEBRAS)), seeds)
def test_operator_norm_below_i_norm(name, seed):
    X = _convolution_algebra(name)
    gen = np.random.default_rng(seed)
    f = gen.standard_normal(X.dim) + 1j * gen.standard_normal(X.dim)
    assert operator_norm(X, f) <= i_norm(X, f) * (1 + 1e-9) + 1e-12


@pytest.mark.parametrize("name", sorted(CONVOLUTION_ALGEBRAS))
def test_norms_agree_on_unit(name):
    X = _convolution_algebra(name)
    assert operator_norm(X, X.unit) == pytest.approx(1)
    assert i_norm(X, X.unit) == pytest.approx(1)

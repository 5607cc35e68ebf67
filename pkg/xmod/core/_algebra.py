"""
Finite dimensional C*-algebras given by structure constants.

Coordinates are complex vectors over a fixed basis ``e_0 .. e_{n-1}``. Structure constants are kept as a
sparse matrix ``mult`` of shape ``(n*n, n)`` with ``e_i·e_j = Σ_k mult[i*n + j, k] e_k``. The involution
is the conjugate linear map ``a ↦ star @ conj(a)``.

Every finite dimensional C*-algebra is unital, so multipliers, unitary multipliers and central multipliers
are elements, unitary elements and central elements of the algebra itself.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import toolz

from ._config import get_config, rng
from ._errors import (
    BadFibering,
    BadInvolution,
    BadUnit,
    DecompositionUnstable,
    FiberMismatch,
    HomomorphismCheckFailed,
    NotAssociative,
    NotConvolutionAlgebra,
    NotCStar,
    NotIdeal,
    SizeLimit,
)
from ._groupoids import GROUP_OBJECT, FiniteGroupoid, group_groupoid, orbits
from ._groups import FiniteGroup, Label, LabelIndex, _normalize_label
from ._linalg import close, complement, in_span, null_space, orth, worst

log = logging.getLogger(__name__)

_PROBES = 6


@dataclass(eq=False, frozen=True)
class Fibering:
    """
    Central orthogonal projections ``p_x`` summing to the unit, one per object label.
    """

    objects: Tuple[Label, ...]
    projections: np.ndarray
    """Shape ``(len(objects), dim)``."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", LabelIndex(self.objects, "object"))

    def index(self, label: Any) -> int:
        return self._index[label]  # type: ignore[attr-defined]

    def projection(self, label: Any) -> np.ndarray:
        return self.projections[self.index(label)]


@dataclass(eq=False, frozen=True)
class Grading:
    """
    Convolution structure of a crossed product by a groupoid.

    Basis element ``i`` is ``e ⊗ δ_g`` with ``g = arrow[i]`` and ``e`` the basis element
    ``coeff_index[i]`` of the coefficient fiber over ``tgt(g)``.
    """

    groupoid: FiniteGroupoid
    arrow: np.ndarray
    coeff_index: np.ndarray
    coefficients: Tuple["StarAlgebra", ...]
    """Coefficient fiber algebra for every object of ``groupoid``."""


@dataclass(eq=False, frozen=True)
class StarAlgebra:
    """
    Validated finite dimensional C*-algebra fibered over a finite set of objects.

    Construct through :py:func:`algebra_from_structure` or one of the constructors, never directly.
    """

    mult: sp.csr_matrix
    """Structure constants, shape ``(dim*dim, dim)``."""

    star: np.ndarray
    """Matrix ``S`` with ``a* = S conj(a)``."""

    unit: np.ndarray
    fibering: Fibering
    grading: Optional[Grading] = None
    name: str = ""
    _cache: Dict[Any, Any] = field(default_factory=dict, repr=False, compare=False)

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"StarAlgebra({nm}dim={self.dim}, objects={len(self.fibering.objects)})"

    @property
    def dim(self) -> int:
        return int(self.unit.shape[0])

    @property
    def objects(self) -> Tuple[Label, ...]:
        return self.fibering.objects

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[i] = 1
        return e

    def element(self, coords: Any) -> "AlgebraElement":
        return AlgebraElement(self, np.asarray(coords, dtype=complex).reshape(self.dim))

    @cached_property
    def _left_table(self) -> sp.csr_matrix:
        """Rows ``(i, k)``, columns ``j``: entry ``T[i, j, k]``."""
        n = self.dim
        m = self.mult.tocoo()
        i, j = np.divmod(m.row, n) if n else (m.row, m.row)
        return sp.csr_matrix((m.data, (i * n + m.col, j)), shape=(n * n, n))

    @cached_property
    def _right_table(self) -> sp.csr_matrix:
        """Rows ``(j, k)``, columns ``i``: entry ``T[i, j, k]``."""
        n = self.dim
        m = self.mult.tocoo()
        i, j = np.divmod(m.row, n) if n else (m.row, m.row)
        return sp.csr_matrix((m.data, (j * n + m.col, i)), shape=(n * n, n))

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.mult.T @ np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))

    def left(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``b ↦ a·b``."""
        n = self.dim
        v = self._left_table.T @ np.asarray(a, dtype=complex)
        return v.reshape(n, n).T if n else np.zeros((0, 0), dtype=complex)

    def right(self, b: np.ndarray) -> np.ndarray:
        """Matrix of ``a ↦ a·b``."""
        n = self.dim
        v = self._right_table.T @ np.asarray(b, dtype=complex)
        return v.reshape(n, n).T if n else np.zeros((0, 0), dtype=complex)

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        return self.star @ np.conj(np.asarray(a, dtype=complex))

    def adjoint_all(self, V: np.ndarray) -> np.ndarray:
        """Involution applied column by column."""
        return self.star @ np.conj(V)

    def left_all(self, V: np.ndarray) -> np.ndarray:
        """``e_i·v`` for every basis element and column of ``V``, as columns ``(i, col)``."""
        n = self.dim
        r = V.shape[1]
        Y = (self._left_table @ V).reshape(n, n, r)
        return Y.transpose(1, 0, 2).reshape(n, n * r)

    def right_all(self, V: np.ndarray) -> np.ndarray:
        """``v·e_i`` for every basis element and column of ``V``, as columns ``(i, col)``."""
        n = self.dim
        r = V.shape[1]
        Y = (self._right_table @ V).reshape(n, n, r)
        return Y.transpose(1, 0, 2).reshape(n, n * r)

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """``τ[l] = tr(L_{e_l})``; the regular trace is ``a ↦ τ·a``."""
        n = self.dim
        m = self.mult.tocoo()
        i, j = np.divmod(m.row, n) if n else (m.row, m.row)
        on_diag = j == m.col
        tau = np.zeros(n, dtype=complex)
        np.add.at(tau, i[on_diag], m.data[on_diag])
        return tau

    def trace(self, a: np.ndarray) -> complex:
        return complex(self.trace_vector @ a)

    @cached_property
    def gram(self) -> np.ndarray:
        """``G[i, j] = tr(L_{e_i* e_j})`` so that ``⟨a, b⟩ = conj(a)ᵀ G b``."""
        n = self.dim
        W = (self.mult @ self.trace_vector).reshape(n, n)
        G = self.star.T @ W
        return (G + G.conj().T) / 2

    @cached_property
    def _gns(self) -> Tuple[np.ndarray, np.ndarray]:
        U = scipy.linalg.cholesky(self.gram, lower=False)
        return U, scipy.linalg.inv(U)

    def operator_norm(self, a: np.ndarray) -> float:
        if self.dim == 0:
            return 0.0
        U, Ui = self._gns
        return float(scipy.linalg.svdvals(U @ self.left(a) @ Ui)[0])

    def is_commutative(self) -> bool:
        return center(self).shape[1] == self.dim


@dataclass(eq=False, frozen=True)
class AlgebraElement:
    """
    Element of a :py:class:`StarAlgebra`.
    """

    parent: StarAlgebra
    coords: np.ndarray

    def _wrap(self, v: np.ndarray) -> "AlgebraElement":
        return AlgebraElement(self.parent, v)

    def _coords_of(self, other: Any) -> np.ndarray:
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent:
                raise ValueError("Elements belong to different algebras")
            return other.coords
        return np.asarray(other, dtype=complex)

    def __add__(self, other: Any) -> "AlgebraElement":
        return self._wrap(self.coords + self._coords_of(other))

    def __sub__(self, other: Any) -> "AlgebraElement":
        return self._wrap(self.coords - self._coords_of(other))

    def __mul__(self, other: Any) -> "AlgebraElement":
        if np.isscalar(other):
            return self._wrap(self.coords * other)
        return self._wrap(self.parent.mul(self.coords, self._coords_of(other)))

    def __rmul__(self, other: Any) -> "AlgebraElement":
        if np.isscalar(other):
            return self._wrap(self.coords * other)
        return NotImplemented

    def star(self) -> "AlgebraElement":
        return self._wrap(self.parent.adjoint(self.coords))

    def norm(self) -> float:
        return self.parent.operator_norm(self.coords)

    def isclose(self, other: Any) -> bool:
        return close(self.coords, self._coords_of(other))


@dataclass(eq=False, frozen=True)
class Ideal:
    """
    Two sided *-ideal given by an orthonormal basis of coordinate vectors.
    """

    parent: StarAlgebra
    basis: np.ndarray
    """Shape ``(parent.dim, dim)``, orthonormal columns."""

    iterations: int = 0
    """Closure passes that enlarged the span while generating the ideal."""

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def contains(self, vectors: Any) -> bool:
        return in_span(self.basis, _as_columns(vectors, self.parent.dim))

    def complement(self) -> np.ndarray:
        return complement(self.basis)


@dataclass(eq=False, frozen=True)
class StarHom:
    """
    *-homomorphism between algebras, as a matrix on coordinates. Need not be unital.
    """

    source: StarAlgebra
    target: StarAlgebra
    matrix: np.ndarray

    def __call__(self, a: Any) -> np.ndarray:
        return self.matrix @ np.asarray(a, dtype=complex)

    def kernel(self) -> np.ndarray:
        return null_space(self.matrix)

    def image(self) -> np.ndarray:
        return orth(self.matrix)

    def is_injective(self) -> bool:
        return self.kernel().shape[1] == 0

    def is_surjective(self) -> bool:
        return self.image().shape[1] == self.target.dim

    def is_unital(self) -> bool:
        return close(self(self.source.unit), self.target.unit)

    def compose(self, other: "StarHom") -> "StarHom":
        """``self ∘ other``."""
        return StarHom(other.source, self.target, self.matrix @ other.matrix)


def _as_columns(vectors: Any, n: int) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return vectors.astype(complex)
    vv = [np.asarray(v, dtype=complex).reshape(n) for v in vectors]
    if not vv:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(vv)


def _as_structure(mult: Any, n: int) -> sp.csr_matrix:
    if sp.issparse(mult):
        M = sp.csr_matrix(mult, dtype=complex)
    else:
        M = sp.csr_matrix(np.asarray(mult, dtype=complex).reshape(n * n, n))
    if M.shape != (n * n, n):
        raise ValueError(f"Structure constants have shape {M.shape}, expect {(n * n, n)}")
    return _prune(M)


def _prune(M: sp.csr_matrix) -> sp.csr_matrix:
    M = M.tocsr()
    M.sum_duplicates()
    if M.nnz:
        small = np.abs(M.data) < 1e-14 * max(1.0, float(np.abs(M.data).max()))
        if small.any():
            M.data[small] = 0
            M.eliminate_zeros()
    return M


def _structure_from_coo(n: int, i: Any, j: Any, k: Any, v: Any) -> sp.csr_matrix:
    i, j, k = (np.asarray(x, dtype=np.int64) for x in (i, j, k))
    return _prune(sp.csr_matrix((np.asarray(v, dtype=complex), (i * n + j, k)), shape=(n * n, n)))


def _dense_structure(T: np.ndarray) -> sp.csr_matrix:
    """``T[a, b, k]`` as structure constants."""
    n = T.shape[0]
    return _as_structure(T.reshape(n * n, n), n)


def _as_fibering(fibering: Any, unit: np.ndarray, objects: Optional[Sequence[Label]] = None) -> Fibering:
    n = unit.shape[0]
    if isinstance(fibering, Fibering):
        return fibering
    if fibering is None:
        return Fibering((GROUP_OBJECT,), unit.reshape(1, n).copy())
    if isinstance(fibering, Mapping):
        labels = tuple(_normalize_label(x) for x in fibering)
        P = np.array([np.asarray(p, dtype=complex).reshape(n) for p in fibering.values()]).reshape(len(labels), n)
        return Fibering(labels, P)
    P = np.asarray(fibering, dtype=complex)
    P = P.reshape(1, n) if P.ndim == 1 else P.reshape(P.shape[0], n)
    if objects is None:
        objects = tuple(range(P.shape[0]))
    return Fibering(tuple(_normalize_label(x) for x in objects), P)


def algebra_from_structure(
    mult: Any,
    star: Any,
    unit: Any,
    fibering: Any = None,
    *,
    objects: Optional[Sequence[Label]] = None,
    grading: Optional[Grading] = None,
    name: str = "",
) -> StarAlgebra:
    """
    Validate structure constants and build a :py:class:`StarAlgebra`.

    :param mult: Dense ``(n, n, n)``/``(n*n, n)`` array or sparse matrix with ``e_i e_j = Σ_k mult[i, j, k] e_k``
    :param star: Matrix ``S`` of the involution ``a* = S conj(a)``
    :param unit: Coordinates of the unit
    :param fibering: ``None`` (single object), a mapping ``label -> projection`` or an array of projections
    :param objects: Object labels when ``fibering`` is an array
    :raises NotAssociative, BadUnit, BadInvolution, BadFibering, NotCStar: with a witness
    """
    u = np.asarray(unit, dtype=complex).reshape(-1)
    n = u.shape[0]
    cfg = get_config()
    if n > cfg.max_dim:
        raise SizeLimit(f"Algebra dimension {n} exceeds max_dim={cfg.max_dim}", witness=n)
    S = np.asarray(star, dtype=complex).reshape(n, n)
    A = StarAlgebra(
        mult=_as_structure(mult, n),
        star=S,
        unit=u,
        fibering=_as_fibering(fibering, u, objects),
        grading=grading,
        name=name,
    )
    _validate(A)
    return A


def _validate(A: StarAlgebra) -> None:
    n = A.dim
    cfg = get_config()
    if n == 0:
        _check_fibering(A)
        return
    if n <= cfg.exhaustive_dim:
        _check_exhaustive(A)
    else:
        log.warning(
            "Algebra of dimension %d is above exhaustive_dim=%d, validating on %d random probes",
            n,
            cfg.exhaustive_dim,
            _PROBES,
        )
        _check_probes(A)
    _check_fibering(A)
    _check_positive(A)
    log.debug("validated algebra dim=%d objects=%d", n, len(A.objects))


def _check_exhaustive(A: StarAlgebra) -> None:
    n = A.dim
    T = A.mult.toarray().reshape(n, n, n)
    lhs = np.einsum("ijp,pkq->ijkq", T, T)
    rhs = np.einsum("jkp,ipq->ijkq", T, T)
    if not close(lhs, rhs):
        i, j, k, _ = worst(lhs, rhs)
        raise NotAssociative(f"(e{i}·e{j})·e{k} != e{i}·(e{j}·e{k})", witness=[i, j, k])

    eye = np.eye(n)
    L_u = np.einsum("i,ijk->kj", A.unit, T)
    R_u = np.einsum("j,ijk->ki", A.unit, T)
    for side, M in (("left", L_u), ("right", R_u)):
        if not close(M, eye):
            _, j = worst(M, eye)
            raise BadUnit(f"Unit is not {side} neutral on basis element {j}", witness=[side, j])

    S = A.star
    SS = S @ S.conj()
    if not close(SS, eye):
        _, j = worst(SS, eye)
        raise BadInvolution(f"Involution is not involutive on basis element {j}", witness=["involution", j])
    lhs = np.einsum("rk,ijk->ijr", S, T.conj())
    rhs = np.einsum("pj,qi,pqr->ijr", S, S, T)
    if not close(lhs, rhs):
        i, j, _ = worst(lhs, rhs)
        raise BadInvolution(f"(e{i}·e{j})* != e{j}*·e{i}*", witness=[i, j])


def _check_probes(A: StarAlgebra) -> None:
    n = A.dim
    gen = rng("validate", n)
    for p in range(_PROBES):
        a, b, c = (gen.standard_normal(n) + 1j * gen.standard_normal(n) for _ in range(3))
        if not close(A.mul(A.mul(a, b), c), A.mul(a, A.mul(b, c))):
            raise NotAssociative("Associativity fails on a random probe", witness=["probe", p])
        if not (close(A.mul(A.unit, a), a) and close(A.mul(a, A.unit), a)):
            raise BadUnit("Unit is not neutral on a random probe", witness=["probe", p])
        if not close(A.adjoint(A.adjoint(a)), a):
            raise BadInvolution("Involution is not involutive on a random probe", witness=["involution", p])
        if not close(A.adjoint(A.mul(a, b)), A.mul(A.adjoint(b), A.adjoint(a))):
            raise BadInvolution("Involution is not anti-multiplicative on a random probe", witness=["probe", p])


def _check_fibering(A: StarAlgebra) -> None:
    P = A.fibering.projections
    objs = A.fibering.objects
    if P.shape != (len(objs), A.dim):
        raise BadFibering(f"Expect {len(objs)} projections of length {A.dim}", witness=list(P.shape))
    if len(set(map(str, objs))) != len(objs):
        raise BadFibering("Object labels must be distinct", witness=list(map(str, objs)))
    for x, p in zip(objs, P):
        if not close(A.adjoint(p), p):
            raise BadFibering(f"Projection for {x!r} is not self-adjoint", witness=x)
        if not close(A.mul(p, p), p):
            raise BadFibering(f"Projection for {x!r} is not idempotent", witness=x)
        if not close(A.left(p), A.right(p)):
            raise BadFibering(f"Projection for {x!r} is not central", witness=x)
    for a in range(len(objs)):
        for b in range(a + 1, len(objs)):
            if not close(A.mul(P[a], P[b]), 0 * P[a]):
                raise BadFibering(
                    f"Projections for {objs[a]!r} and {objs[b]!r} are not orthogonal", witness=[objs[a], objs[b]]
                )
    if not close(P.sum(axis=0), A.unit):
        raise BadFibering("Projections do not sum to the unit", witness=None)


def _check_positive(A: StarAlgebra) -> None:
    G = A.star.T @ (A.mult @ A.trace_vector).reshape(A.dim, A.dim)
    if not close(G, G.conj().T):
        raise NotCStar("Trace form is not Hermitian", witness=list(worst(G, G.conj().T)))
    ev = scipy.linalg.eigvalsh((G + G.conj().T) / 2)
    if ev[0] <= get_config().tol_eig * max(1.0, float(ev[-1])):
        raise NotCStar(
            "Trace form is not positive definite, no C*-norm exists",
            witness={"min_eigenvalue": float(ev[0])},
        )


# constructors


def _object_labels(X: Union[int, Sequence[Label]]) -> Tuple[Label, ...]:
    if isinstance(X, int):
        return tuple(range(1, X + 1))
    return tuple(_normalize_label(x) for x in X)


def complex_line(label: Label = GROUP_OBJECT) -> StarAlgebra:
    """The one dimensional algebra ``ℂ``."""
    return functions_on([label])


def matrix_algebra(n: int, label: Label = GROUP_OBJECT) -> StarAlgebra:
    """
    ``M_n`` on matrix units ``e_ij`` (basis position ``i*n + j``).
    """
    if n < 1:
        raise ValueError(f"Matrix size must be positive, got {n}")
    d = n * n
    ii, jj, kk = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    # e_ij e_jk = e_ik
    mult = _structure_from_coo(d, (ii * n + jj).ravel(), (jj * n + kk).ravel(), (ii * n + kk).ravel(), np.ones(n**3))
    S = np.zeros((d, d))
    i, j = np.divmod(np.arange(d), n)
    S[j * n + i, np.arange(d)] = 1
    unit = np.zeros(d)
    unit[np.arange(n) * (n + 1)] = 1
    return algebra_from_structure(mult, S, unit, {label: unit}, name=f"M{n}")


def functions_on(X: Union[int, Sequence[Label]]) -> StarAlgebra:
    """
    ``C0(X)`` on the point masses, fibered over ``X``.
    """
    labels = _object_labels(X)
    n = len(labels)
    if n == 0:
        raise ValueError("Need at least one point")
    r = np.arange(n)
    mult = _structure_from_coo(n, r, r, r, np.ones(n))
    return algebra_from_structure(mult, np.eye(n), np.ones(n), np.eye(n), objects=labels, name=f"C0({n})")


def direct_sum(*algebras: StarAlgebra, objects: Optional[Sequence[Label]] = None) -> StarAlgebra:
    """
    Block sum; each summand becomes the fiber over one object label.

    Summands sharing an object label merge into a single fiber.

    :param objects: Label per summand, defaults to ``0, 1, ...``
    """
    labels = tuple(range(len(algebras))) if objects is None else tuple(_normalize_label(x) for x in objects)
    if len(labels) != len(algebras):
        raise ValueError(f"Got {len(labels)} labels for {len(algebras)} summands")
    dims = [A.dim for A in algebras]
    N = sum(dims)
    offsets = np.cumsum([0] + dims)
    rows, cols, vals = [], [], []
    S = np.zeros((N, N), dtype=complex)
    unit = np.zeros(N, dtype=complex)
    for A, o in zip(algebras, offsets):
        n = A.dim
        m = A.mult.tocoo()
        i, j = np.divmod(m.row, n) if n else (m.row, m.row)
        rows.append((i + o) * N + (j + o))
        cols.append(m.col + o)
        vals.append(m.data)
        S[o : o + n, o : o + n] = A.star
        unit[o : o + n] = A.unit
    mult = sp.csr_matrix(
        (
            np.concatenate(vals) if vals else [],
            (np.concatenate(rows) if rows else [], np.concatenate(cols) if cols else []),
        ),
        shape=(N * N, N),
        dtype=complex,
    )
    distinct = list(toolz.unique(labels, key=str))
    P = np.zeros((len(distinct), N), dtype=complex)
    pos = {str(x): i for i, x in enumerate(distinct)}
    for x, A, o in zip(labels, algebras, offsets):
        P[pos[str(x)], o : o + A.dim] += A.unit
    return algebra_from_structure(mult, S, unit, P, objects=distinct, name="⊕".join(A.name or "?" for A in algebras))


def tensor(A: StarAlgebra, B: StarAlgebra) -> StarAlgebra:
    """
    ``A ⊗ B`` on the basis ``e_i ⊗ f_a`` (position ``i*dim(B) + a``), fibered over pairs of objects.
    """
    na, nb = A.dim, B.dim
    N = na * nb
    ma, mb = A.mult.tocoo(), B.mult.tocoo()
    ia, ja = np.divmod(ma.row, na) if na else (ma.row, ma.row)
    ib, jb = np.divmod(mb.row, nb) if nb else (mb.row, mb.row)
    # every nonzero of A against every nonzero of B
    I = np.repeat(ia, len(ib)) * nb + np.tile(ib, len(ia))
    J = np.repeat(ja, len(jb)) * nb + np.tile(jb, len(ja))
    K = np.repeat(ma.col, len(mb.col)) * nb + np.tile(mb.col, len(ma.col))
    V = np.repeat(ma.data, len(mb.data)) * np.tile(mb.data, len(ma.data))
    mult = _structure_from_coo(N, I, J, K, V)
    objs = [(x, y) for x in A.objects for y in B.objects]
    P = np.array([np.kron(p, q) for p in A.fibering.projections for q in B.fibering.projections]).reshape(-1, N)
    return algebra_from_structure(
        mult, np.kron(A.star, B.star), np.kron(A.unit, B.unit), P, objects=objs, name=f"{A.name}⊗{B.name}"
    )


def _same_objects(A: StarAlgebra, B: StarAlgebra) -> None:
    if tuple(map(str, A.objects)) != tuple(map(str, B.objects)):
        raise FiberMismatch(
            f"Algebras are fibered over different objects: {A.objects} vs {B.objects}",
            witness=[list(map(str, A.objects)), list(map(str, B.objects))],
        )


def diagonal_tensor(A: StarAlgebra, B: StarAlgebra) -> StarAlgebra:
    """
    ``A ⊗_X B = ⊕_x A_x ⊗ B_x`` for two algebras fibered over the same objects.
    """
    _same_objects(A, B)
    return direct_sum(*(tensor(fiber(A, x), fiber(B, x)) for x in A.objects), objects=A.objects)


def refiber(A: StarAlgebra, objects: Sequence[Label], projections: Any) -> StarAlgebra:
    """
    Same algebra with a different fibering.

    :raises BadFibering: when the projections are not central orthogonal and complete
    """
    fib = _as_fibering(np.asarray(projections, dtype=complex), A.unit, objects)
    B = StarAlgebra(A.mult, A.star, A.unit, fib, None, A.name)
    _check_fibering(B)
    return B


def change_basis(A: StarAlgebra, U: np.ndarray) -> StarAlgebra:
    """
    Transport ``A`` to the basis given by the columns of an invertible matrix ``U``.

    New coordinates ``y`` stand for the old element ``U y``.
    """
    U = np.asarray(U, dtype=complex)
    n = A.dim
    Ui = scipy.linalg.inv(U)
    T = np.empty((n, n, n), dtype=complex)
    for a in range(n):
        T[a] = (Ui @ A.left(U[:, a]) @ U).T
    return algebra_from_structure(
        _dense_structure(T),
        Ui @ A.star @ U.conj(),
        Ui @ A.unit,
        (Ui @ A.fibering.projections.T).T,
        objects=A.objects,
        name=A.name,
    )


def groupoid_algebra(
    K: FiniteGroupoid,
    anchor: Optional[Sequence[int]] = None,
    objects: Optional[Sequence[Label]] = None,
) -> StarAlgebra:
    """
    Convolution algebra ``C*(K)`` on the arrows of ``K``.

    ``δ_a·δ_b = δ_{ab}`` when composable, ``δ_a* = δ_{a⁻¹}``, unit ``Σ_x δ_{1_x}``.

    Without ``anchor`` the algebra is fibered over the orbits of ``K`` (labelled by their first object).
    With ``anchor`` (object position of ``K`` to position in ``objects``) the fiber over ``x`` collects
    the units of all objects anchored at ``x``; this must be central.
    """
    n = K.n_arrows
    a, b = np.nonzero(K.comp >= 0)
    mult = _structure_from_coo(n, a, b, K.comp[a, b], np.ones(len(a)))
    S = np.zeros((n, n))
    S[K.inv, np.arange(n)] = 1
    unit = np.zeros(n)
    unit[K.unit] = 1
    if anchor is None:
        orb = orbits(K)
        labels: Sequence[Label] = [K.objects[int(o[0])] for o in orb]
        P = np.zeros((len(orb), n))
        for i, o in enumerate(orb):
            P[i, K.unit[o]] = 1
    else:
        anchor = np.asarray(anchor, dtype=np.int64)
        labels = K.objects if objects is None else objects
        P = np.zeros((len(labels), n))
        for y, x in enumerate(anchor):
            P[x, K.unit[y]] = 1
    line = complex_line()
    grading = Grading(K, np.arange(n), np.zeros(n, dtype=np.int64), tuple(line for _ in K.objects))
    return algebra_from_structure(mult, S, unit, P, objects=labels, grading=grading, name=f"C*({n})")


def group_algebra(G: FiniteGroup) -> StarAlgebra:
    """``ℂ[G]`` on the group elements."""
    return groupoid_algebra(group_groupoid(G))


# fibers


def _fiber_basis(A: StarAlgebra, p: np.ndarray) -> np.ndarray:
    Lp = A.left(p)
    d = np.diag(Lp)
    if close(Lp, np.diag(d)) and close(d, np.round(d.real)) and np.all(np.isin(np.round(d.real), (0, 1))):
        return np.eye(A.dim, dtype=complex)[:, np.flatnonzero(np.round(d.real) == 1)]
    return orth(Lp)


def corner(A: StarAlgebra, p: np.ndarray, label: Label = GROUP_OBJECT) -> Tuple[StarAlgebra, np.ndarray]:
    """
    Corner ``pAp`` of a projection as a unital algebra together with its embedding matrix.

    The embedding has orthonormal columns spanning ``pAp``; coordinate columns are used when ``p`` acts
    diagonally on the basis.
    """
    p = np.asarray(p, dtype=complex)
    B = _fiber_basis(A, p) if close(A.left(p), A.right(p)) else orth(A.left(p) @ A.right(p))
    d = B.shape[1]
    Bh = B.conj().T
    T = np.empty((d, d, d), dtype=complex)
    for a in range(d):
        T[a] = (Bh @ A.left(B[:, a]) @ B).T
    u = Bh @ p
    C = algebra_from_structure(
        _dense_structure(T) if d else sp.csr_matrix((0, 0), dtype=complex),
        Bh @ A.star @ B.conj(),
        u,
        {label: u},
        name=f"{A.name}[{label}]",
    )
    return C, B


def fiber(A: StarAlgebra, x: Label) -> StarAlgebra:
    """
    Fiber ``A_x = p_x A p_x``.

    :raises UnknownObject: when ``x`` is not an object of ``A``
    """
    return fiber_embedding(A, x)[0]


def fiber_embedding(A: StarAlgebra, x: Label) -> Tuple[StarAlgebra, np.ndarray]:
    """
    Fiber over ``x`` and the matrix embedding its coordinates into ``A``.
    """
    idx = A.fibering.index(x)
    key = ("fiber", idx)
    if key not in A._cache:
        A._cache[key] = corner(A, A.fibering.projections[idx], A.objects[idx])
    return A._cache[key]


# structure


def center(A: StarAlgebra) -> np.ndarray:
    """
    Orthonormal basis of the center, as columns.
    """
    if "center" not in A._cache:
        n = A.dim
        if n == 0:
            A._cache["center"] = np.zeros((0, 0), dtype=complex)
        else:
            C = A._left_table - A._right_table
            CC = (C.conj().T @ C).toarray()
            ev, vec = scipy.linalg.eigh(CC)
            sv = np.sqrt(np.clip(ev, 0, None))
            cut = get_config().tol_eig * max(1.0, float(sv[-1]))
            A._cache["center"] = vec[:, sv <= cut]
    return A._cache["center"]


def _cluster(values: np.ndarray, tol: float) -> List[List[int]]:
    order = np.argsort(values)
    groups: List[List[int]] = [[int(order[0])]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > tol:
            groups.append([])
        groups[-1].append(int(b))
    return groups


def _central_projections(A: StarAlgebra, attempt: int) -> List[np.ndarray]:
    cfg = get_config()
    Z = center(A)
    r = Z.shape[1]
    gen = rng("wedderburn", A.dim, attempt)
    w = gen.standard_normal(r) + 1j * gen.standard_normal(r)
    z = Z @ w
    z = z + A.adjoint(z)
    Mz = Z.conj().T @ A.left(z) @ Z
    vals, vecs = scipy.linalg.eig(Mz)
    scale = max(1.0, float(np.abs(vals).max()))
    groups = _cluster(vals.real, cfg.tol_eig * scale * 10)
    if len(groups) != r:
        raise DecompositionUnstable(
            f"Central element has {len(groups)} distinct eigenvalues on a center of dimension {r}",
            witness={"attempt": attempt, "clusters": len(groups), "center": r},
        )
    out = []
    for g in groups:
        q = Z @ vecs[:, g[0]]
        q2 = A.mul(q, q)
        c = np.vdot(q, q2) / np.vdot(q, q)
        p = q / c
        if not close(A.mul(p, p), p, cfg.tol_eig):
            raise DecompositionUnstable("Extracted central element is not idempotent", witness={"attempt": attempt})
        out.append(p)
    return out


def wedderburn_decomposition(A: StarAlgebra) -> List[Tuple[int, np.ndarray]]:
    """
    Minimal central projections with their block sizes, sorted by block size.

    :raises DecompositionUnstable: when no attempt yields integer block sizes
    """
    if "wedderburn" in A._cache:
        return A._cache["wedderburn"]
    if A.dim == 0:
        return []
    cfg = get_config()
    err: Optional[DecompositionUnstable] = None
    for attempt in range(cfg.wedderburn_retries + 1):
        if attempt:
            log.warning("Wedderburn attempt %d failed (%s), retrying with a new central element", attempt, err)
        try:
            blocks = _blocks(A, _central_projections(A, attempt))
        except DecompositionUnstable as e:
            err = e
            continue
        log.debug("wedderburn dim=%d blocks=%s attempts=%d", A.dim, [d for d, _ in blocks], attempt + 1)
        A._cache["wedderburn"] = blocks
        return blocks
    assert err is not None
    raise err


def _blocks(A: StarAlgebra, projections: List[np.ndarray]) -> List[Tuple[int, np.ndarray]]:
    tol = get_config().tol_eig * max(1, A.dim)
    out = []
    for p in projections:
        t = A.trace(p).real
        m = int(round(t))
        d = math.isqrt(max(m, 0))
        if abs(t - m) > tol or d * d != m or m == 0:
            raise DecompositionUnstable(f"Block dimension {t:.6g} is not a perfect square", witness={"dim": t})
        out.append((d, p))
    if sum(d * d for d, _ in out) != A.dim:
        raise DecompositionUnstable("Block dimensions do not add up", witness=[d for d, _ in out])
    return sorted(out, key=lambda dp: dp[0])


def wedderburn(A: StarAlgebra) -> Tuple[int, ...]:
    """
    Block sizes ``d_i`` with ``A ≅ ⊕ M_{d_i}``, ascending.
    """
    return tuple(d for d, _ in wedderburn_decomposition(A))


def is_isomorphic(A: StarAlgebra, B: StarAlgebra) -> bool:
    """Finite dimensional C*-algebras are isomorphic iff their block multisets agree."""
    return A.dim == B.dim and wedderburn(A) == wedderburn(B)


# ideals and quotients


def _escape(A: StarAlgebra, V: np.ndarray) -> np.ndarray:
    """Products and adjoints of the columns of ``V`` projected off ``span V``."""
    W = np.hstack([A.left_all(V), A.right_all(V), A.adjoint_all(V)])
    return W - V @ (V.conj().T @ W)


def ideal_generated(A: StarAlgebra, vectors: Any) -> Ideal:
    """
    Smallest two sided *-ideal containing ``vectors``.

    :param vectors: Sequence of coordinate vectors, or a 2-D array with one vector per column
    """
    V = orth(_as_columns(vectors, A.dim))
    iterations = 0
    while V.shape[1]:
        extra = orth(_escape(A, V), get_config().tol_eig)
        if extra.shape[1] == 0:
            break
        V = orth(np.hstack([V, extra]))
        iterations += 1
    log.debug("ideal closure dim=%d iterations=%d", V.shape[1], iterations)
    return Ideal(A, V, iterations)


def make_ideal(A: StarAlgebra, vectors: Any) -> Ideal:
    """
    Wrap a subspace that must already be a *-ideal.

    :raises NotIdeal: when the span is not closed
    """
    V = orth(_as_columns(vectors, A.dim))
    _check_ideal(A, V)
    return Ideal(A, V, 0)


def _check_ideal(A: StarAlgebra, V: np.ndarray) -> None:
    if V.shape[1] == 0:
        return
    r = V.shape[1]
    for what, W in (("left", A.left_all(V)), ("right", A.right_all(V)), ("star", A.adjoint_all(V))):
        R = W - V @ (V.conj().T @ W)
        if not close(R, 0 * R):
            col = worst(R, 0 * R)[1]
            witness = [what, col % r] if what == "star" else [what, col // r, col % r]
            raise NotIdeal(f"Subspace is not closed under {what} multiplication", witness=witness)


def quotient_algebra(A: StarAlgebra, I: Ideal) -> Tuple[StarAlgebra, StarHom]:
    """
    ``A/I`` realised on the orthogonal complement of ``I``, with the quotient map.

    :raises NotIdeal: when ``I`` is not a *-ideal of ``A``
    """
    _check_ideal(A, I.basis)
    Q = I.complement()
    q = Q.shape[1]
    Qh = Q.conj().T
    T = np.empty((q, q, q), dtype=complex)
    for a in range(q):
        T[a] = (Qh @ A.left(Q[:, a]) @ Q).T
    P = (Qh @ A.fibering.projections.T).T
    B = algebra_from_structure(
        _dense_structure(T) if q else sp.csr_matrix((0, 0), dtype=complex),
        Qh @ A.star @ Q.conj(),
        Qh @ A.unit,
        P,
        objects=A.objects,
        name=f"{A.name}/I",
    )
    return B, StarHom(A, B, Qh)


# homomorphisms


def star_hom(source: StarAlgebra, target: StarAlgebra, matrix: Any) -> StarHom:
    """
    Check a linear map on coordinates is a *-homomorphism.

    Products are checked on all basis pairs for small sources, on random probes otherwise.

    :raises HomomorphismCheckFailed: with the failing basis pair or probe
    """
    M = np.asarray(matrix, dtype=complex).reshape(target.dim, source.dim)
    if not close(M @ source.star, target.star @ M.conj()):
        raise HomomorphismCheckFailed("Map does not commute with the involution", witness=["star"])
    n = source.dim
    if n <= get_config().exhaustive_dim:
        for i in range(n):
            lhs = M @ source.left(source.basis(i))
            rhs = target.left(M[:, i]) @ M
            if not close(lhs, rhs):
                j = worst(lhs, rhs)[1]
                raise HomomorphismCheckFailed(f"Map fails on the product e{i}·e{j}", witness=["product", i, j])
    else:
        gen = rng("star_hom", n, target.dim)
        for p in range(_PROBES):
            a, b = (gen.standard_normal(n) + 1j * gen.standard_normal(n) for _ in range(2))
            if not close(M @ source.mul(a, b), target.mul(M @ a, M @ b)):
                raise HomomorphismCheckFailed("Map fails on a random product probe", witness=["probe", p])
    return StarHom(source, target, M)


def identity_star_hom(A: StarAlgebra) -> StarHom:
    return StarHom(A, A, np.eye(A.dim, dtype=complex))


# norms


def operator_norm(A: StarAlgebra, a: Any) -> float:
    """
    Norm of ``a`` acting on ``A`` by left multiplication, in the Hilbert space of the regular trace.
    """
    return A.operator_norm(np.asarray(a, dtype=complex))


def i_norm(A: StarAlgebra, a: Any) -> float:
    """
    ``max(sup_x Σ_{tgt g = x} ‖f(g)‖, sup_x Σ_{tgt g = x} ‖f*(g)‖)`` for the counting Haar system.

    :raises NotConvolutionAlgebra: when ``A`` carries no convolution structure
    """
    gr = A.grading
    if gr is None:
        raise NotConvolutionAlgebra(f"{A!r} is not a crossed product", witness=A.name or None)
    f = np.asarray(a, dtype=complex)
    K = gr.groupoid

    def _sup(v: np.ndarray) -> float:
        per_x = np.zeros(K.n_objects)
        for g in range(K.n_arrows):
            sel = np.flatnonzero(gr.arrow == g)
            if sel.size == 0:
                continue
            x = int(K.tgt[g])
            coeff = gr.coefficients[x]
            fg = np.zeros(coeff.dim, dtype=complex)
            fg[gr.coeff_index[sel]] = v[sel]
            per_x[x] += coeff.operator_norm(fg)
        return float(per_x.max()) if per_x.size else 0.0

    return max(_sup(f), _sup(A.adjoint(f)))


def norms(A: StarAlgebra, a: Any) -> Tuple[float, Optional[float]]:
    """
    Operator norm and, for convolution algebras, the I-norm.
    """
    op = operator_norm(A, a)
    return op, (i_norm(A, a) if A.grading is not None else None)


"""Actions, crossed products and verification report model classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from xmod.core import CrossedModule, FiniteGroup, FiniteGroupoid, Ideal, StarAlgebra, StarHom, fiber_embedding
from xmod.core._errors import VerificationFailed, _jsonable


@dataclass(eq=False, frozen=True)
class GroupoidAlgebraAction:
    """
    Action of a finite groupoid on a fibered algebra by *-isomorphisms between fibers.

    Object ``x`` of the groupoid and object ``x`` of the algebra share a position.
    """

    groupoid: FiniteGroupoid
    algebra: StarAlgebra
    alpha: Tuple[np.ndarray, ...]
    """``alpha[g]`` maps fiber coordinates over ``src(g)`` to fiber coordinates over ``tgt(g)``."""

    _cache: Dict[Any, Any] = field(default_factory=dict, repr=False, compare=False)

    def fiber(self, x: int) -> Tuple[StarAlgebra, np.ndarray]:
        """Fiber algebra over object position ``x`` and its embedding matrix."""
        return fiber_embedding(self.algebra, self.algebra.objects[x])

    def full(self, g: int) -> np.ndarray:
        """
        ``α_g`` as a matrix on the whole algebra, ``a ↦ α_g(p_{src g}·a)``.
        """
        key = ("full", g)
        if key not in self._cache:
            A = self.algebra
            s, t = int(self.groupoid.src[g]), int(self.groupoid.tgt[g])
            _, Es = self.fiber(s)
            _, Et = self.fiber(t)
            Ps = A.left(A.fibering.projections[s])
            self._cache[key] = Et @ self.alpha[g] @ Es.conj().T @ Ps
        return self._cache[key]


@dataclass(eq=False, frozen=True)
class CMAction:
    """
    Verified action ``(α, u)`` of a crossed module on a fibered algebra.

    Construct through :py:func:`xmod.cstar.cm_action` or one of the constructors.
    """

    cm: CrossedModule
    action: GroupoidAlgebraAction
    u: Tuple[np.ndarray, ...]
    """``u[x][h]`` holds the fiber coordinates over ``x`` of the unitary ``u_h``, ``h ∈ H_x``."""

    @property
    def algebra(self) -> StarAlgebra:
        return self.action.algebra

    @property
    def alpha(self) -> Tuple[np.ndarray, ...]:
        return self.action.alpha

    def unitary(self, x: int, h: int) -> np.ndarray:
        """``u_h`` as an element of the whole algebra."""
        _, E = self.action.fiber(x)
        return E @ self.u[x][h]

    def describe(self) -> Dict[str, Any]:
        return {
            "algebra_dim": self.algebra.dim,
            "fiber_dims": [self.action.fiber(x)[0].dim for x in range(len(self.algebra.objects))],
            **self.cm.describe(),
        }


@dataclass(eq=False, frozen=True)
class EquivariantMap:
    """
    *-homomorphism intertwining two crossed module actions.
    """

    source: CMAction
    target: CMAction
    hom: StarHom


@dataclass(eq=False, frozen=True)
class CharacterGroup:
    """
    Characters of a finite abelian group.

    Values are roots of unity of order dividing ``exponent`` and are stored exactly as integer
    exponents: ``ξ(h) = exp(2πi·powers[ξ, h]/exponent)``.
    """

    group: FiniteGroup
    powers: np.ndarray
    exponent: int

    def __len__(self) -> int:
        return int(self.powers.shape[0])

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(f"xi{i}" for i in range(len(self)))

    @property
    def values(self) -> np.ndarray:
        """``values[ξ, h] = ξ(h)``."""
        return np.exp(2j * np.pi * self.powers / self.exponent)

    def index(self, powers: np.ndarray) -> int:
        """Position of the character with the given exponent vector."""
        pp = np.asarray(powers) % self.exponent
        hit = np.flatnonzero((self.powers == pp[None, :]).all(axis=1))
        if len(hit) != 1:
            raise ValueError("Not a character of this group")
        return int(hit[0])

    def product(self, a: int, b: int) -> int:
        return self.index(self.powers[a] + self.powers[b])

    def inverse(self, a: int) -> int:
        return self.index(-self.powers[a])


@dataclass(eq=False, frozen=True)
class CrossedProductResult:
    """
    Crossed product algebra with its canonical maps.
    """

    algebra: StarAlgebra
    i_A: StarHom
    """Embedding of the coefficient algebra."""

    i_G: StarHom
    """Map out of the groupoid algebra of the acting groupoid."""

    source_action: Union[GroupoidAlgebraAction, CMAction]

    offsets: Optional[np.ndarray] = None
    """Start of the block of every arrow in the convolution basis (``A⋊G`` only)."""

    parent: Optional["CrossedProductResult"] = None
    """``A⋊G`` for a coequalizer crossed product ``A⋊(G,H)``."""

    projection: Optional[StarHom] = None
    """Quotient map from ``parent``."""

    ideal: Optional[Ideal] = None
    """Kernel of ``projection``."""

    range_dim: Optional[int] = None
    """Dimension of the span of the range of ``ρ* - σ*``."""

    pair: Optional["RhoSigmaPair"] = None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def index(self, g: int, m: int) -> int:
        """Basis position of ``e_m ⊗ δ_g``."""
        if self.offsets is None:
            raise ValueError("Coequalizer crossed products carry no convolution basis")
        return int(self.offsets[g]) + m

    def element(self, g: int, a: np.ndarray) -> np.ndarray:
        """Coordinates of ``a ⊗ δ_g`` for ``a`` in fiber coordinates over ``tgt(g)``."""
        if self.offsets is None:
            raise ValueError("Coequalizer crossed products carry no convolution basis")
        v = np.zeros(self.dim, dtype=complex)
        o0, o1 = int(self.offsets[g]), int(self.offsets[g + 1])
        v[o0:o1] = a
        return v


@dataclass(eq=False, frozen=True)
class RhoSigmaPair:
    """
    The two *-homomorphisms ``ρ*, σ*: A⋊(H⋊_c G) → A⋊G`` whose coequalizer is ``A⋊(G,H)``.
    """

    domain: CrossedProductResult
    target: CrossedProductResult
    rho_star: StarHom
    sigma_star: StarHom
    section: StarHom
    """``a⊗δ_g ↦ a⊗δ_{(1, g)}``, a right inverse of both maps."""

    def difference(self) -> np.ndarray:
        return self.rho_star.matrix - self.sigma_star.matrix


@dataclass(eq=False, frozen=True)
class CovariantRep:
    """
    Covariant representation ``(π, V)`` of a crossed module action.
    """

    action: CMAction
    target: StarAlgebra
    pi: StarHom
    V: Tuple[np.ndarray, ...]
    """``V[g]`` is the element of ``target`` representing arrow ``g``."""


@dataclass
class VerificationReport:
    """
    Named pass/fail sub-checks plus computed data, serialisable to JSON.
    """

    name: str
    checks: Dict[str, bool] = field(default_factory=dict)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def check(self, name: str, ok: Any) -> bool:
        self.checks[name] = bool(ok)
        return bool(ok)

    def failures(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": dict(self.checks),
            **{k: _jsonable(v) for k, v in self.data.items()},
        }

    def raise_on_failure(self) -> "VerificationReport":
        bad = self.failures()
        if bad:
            raise VerificationFailed(f"{self.name}: sub-check {bad[0]!r} failed", witness=bad, report=self)
        return self


@dataclass(eq=False, frozen=True)
class Bisection:
    """
    Global bisection of a finite groupoid: one arrow out of every object, with ``tgt∘section`` a bijection.
    """

    groupoid: FiniteGroupoid
    section: np.ndarray
    """``section[x]`` is the arrow position chosen at object ``x``."""

    def object_map(self) -> np.ndarray:
        return self.groupoid.tgt[self.section]


@dataclass(eq=False, frozen=True)
class GroupoidAut:
    """
    Automorphism of a finite groupoid as a pair of bijections on objects and arrows.
    """

    groupoid: FiniteGroupoid
    object_map: np.ndarray
    arrow_map: np.ndarray

    def __call__(self, k: int) -> int:
        return int(self.arrow_map[k])


@dataclass(eq=False, frozen=True)
class CMGroupoidAction:
    """
    Verified action of a crossed module on a finite groupoid ``K`` anchored over the objects of ``G``.

    ``G`` acts by groupoid isomorphisms between anchor fibers and ``H`` by global bisections of the fibers.
    """

    cm: CrossedModule
    groupoid: FiniteGroupoid
    rho: np.ndarray
    """Anchor: object position of ``G`` for every object of ``K``."""

    alpha: Tuple[np.ndarray, ...]
    """``alpha[g][k]`` is the image of arrow ``k`` over ``src(g)``, ``-1`` for arrows over other objects."""

    kappa: Tuple[np.ndarray, ...]
    """``kappa[x][h, y]`` is the arrow chosen at object ``y`` over ``x`` by ``h ∈ H_x``, ``-1`` elsewhere."""

    def fiber_arrows(self, x: int) -> np.ndarray:
        """Arrows of ``K`` over object position ``x``, in ascending order."""
        K = self.groupoid
        return np.flatnonzero(self.rho[K.tgt] == x)

    def fiber_objects(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.rho == x)

    def object_map(self, g: int) -> np.ndarray:
        """Action of ``g`` on the objects over ``src(g)``, ``-1`` elsewhere."""
        K = self.groupoid
        out = np.full(K.n_objects, -1, dtype=np.int64)
        for y in self.fiber_objects(int(self.cm.G.src[g])):
            out[y] = K.tgt[self.alpha[g][K.unit[y]]]
        return out


@dataclass(eq=False, frozen=True)
class LinkingData:
    """
    Invariant full projection ``p`` in an algebra with a crossed module action, and its two corners.

    ``left`` acts on ``pDp`` and ``right`` on ``p⊥Dp⊥`` with ``p⊥ = 1 - p``; both carry the compressed
    action and the unitaries ``p·u_h`` and ``p⊥·u_h``.
    """

    action: CMAction
    p: np.ndarray
    left: EquivariantMap
    """Inclusion of ``pDp`` into ``D``."""

    right: EquivariantMap
    """Inclusion of ``p⊥Dp⊥`` into ``D``."""

    @property
    def p_perp(self) -> np.ndarray:
        return self.action.algebra.unit - self.p


@dataclass
class BimoduleWitness:
    """
    The imprimitivity bimodule ``E = pD(1 - p)`` read off a linking algebra, with pass/fail per identity.
    """

    link: LinkingData
    E: np.ndarray
    """Orthonormal basis of ``E`` in the coordinates of ``D``."""

    gamma: Tuple[np.ndarray, ...]
    """``gamma[g]`` is the action of ``g`` on ``E`` in the coordinates of ``E``."""

    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "bimodule_dim": int(self.E.shape[1]),
            "left_dim": self.link.left.source.algebra.dim,
            "right_dim": self.link.right.source.algebra.dim,
        }

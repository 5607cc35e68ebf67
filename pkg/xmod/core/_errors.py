"""
Error hierarchy.

All errors derive from :py:class:`ValueError` so that callers catching bad input the usual way keep
working. Each error carries a ``witness``: a JSON friendly value naming the offending element, tuple or
label.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class XmodError(ValueError):
    """
    Base class for all validation errors.
    """

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.message = message
        self.witness = witness

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "witness": _jsonable(self.witness)}


# finite groups
class NonAssociative(XmodError):
    """Multiplication table fails associativity on a triple."""


class NoIdentity(XmodError):
    """No two-sided neutral element."""


class NoInverse(XmodError):
    """Some element has no two-sided inverse."""


class NotHomomorphism(XmodError):
    """Map fails to preserve products."""


class NotSubgroup(XmodError):
    """Subset not closed under products or inverses."""


class NotNormal(XmodError):
    """Subgroup not invariant under conjugation."""


class NotAbelian(XmodError):
    """Group required to be abelian is not."""


class NotCentral(XmodError):
    """Element or subgroup required to be central is not."""


class SizeLimit(XmodError):
    """Input exceeds a configured size limit."""


# groupoids
class NotCategory(XmodError):
    """Composition is not a well defined associative partial product."""


class NoUnits(XmodError):
    """Some object has no unit arrow."""


class NoInverses(XmodError):
    """Some arrow has no inverse."""


class NotAction(XmodError):
    """Map is not a group action."""


class NotInvariant(XmodError):
    """Sub-structure not invariant under the relevant action."""


class UnknownObject(XmodError):
    """Label does not name an object, element or declaration."""


# crossed modules
class Axiom1Violation(XmodError):
    """Equivariance of the boundary map fails."""


class Axiom2Violation(XmodError):
    """Peiffer identity fails."""


class NotFunctorial(XmodError):
    """Assignment on arrows does not respect composition or units."""


class ActionNotDescending(XmodError):
    """Conjugation action does not descend to the quotient."""


# *-algebras
class NotAssociative(XmodError):
    """Structure constants are not associative."""


class BadInvolution(XmodError):
    """Star operation is not an anti-multiplicative involution."""


class BadUnit(XmodError):
    """Declared unit is not neutral."""


class BadFibering(XmodError):
    """Projections are not a central partition of unity."""


class NotCStar(XmodError):
    """No positive faithful trace: the algebra is not a C*-algebra."""


class DecompositionUnstable(XmodError):
    """Block sizes could not be recovered within tolerance."""


class NotIdeal(XmodError):
    """Subspace is not a two-sided *-ideal."""


class FiberMismatch(XmodError):
    """Algebras are fibered over different object sets."""


class NotConvolutionAlgebra(XmodError):
    """Operation needs a crossed product or groupoid algebra."""


class NotProjection(XmodError):
    """Element is not a self-adjoint idempotent."""


class NotFull(XmodError):
    """Projection does not generate the whole algebra as an ideal."""


# actions
class NotStarIso(XmodError):
    """Map between fibers is not a *-isomorphism."""


class Covariance1Violation(XmodError):
    """alpha on a boundary differs from conjugation by the unitary."""


class Covariance2Violation(XmodError):
    """alpha does not carry u_h to u_{c_g(h)}."""


class NotUnitary(XmodError):
    """u is not a unitary group homomorphism."""


class NotEquivariant(XmodError):
    """Map does not intertwine the actions."""


class AnchorNotInvariant(XmodError):
    """Arrows leave the fiber of the anchor map."""


class NotBisection(XmodError):
    """Section does not define a global bisection."""


class BisectionAxiomViolation(XmodError):
    """alpha on a boundary differs from conjugation by the bisection."""


class ConjugationAxiomViolation(XmodError):
    """Bisections are not transported along alpha."""


# crossed products
class HomomorphismCheckFailed(XmodError):
    """Internally constructed map is not a *-homomorphism."""


class NotCovariant(XmodError):
    """Pair (pi, V) is not a covariant representation."""


class TwistViolation(XmodError):
    """V on a boundary differs from pi(u_h)."""


class VerificationFailed(XmodError):
    """A verification suite found a failing sub-check."""

    def __init__(self, message: str, witness: Any = None, report: Optional[Any] = None) -> None:
        super().__init__(message, witness)
        self.report = report

    def to_dict(self) -> Dict[str, Any]:
        dd = super().to_dict()
        if self.report is not None and hasattr(self.report, "to_dict"):
            dd["report"] = self.report.to_dict()
        return dd


# scenario files
class ParseError(XmodError):
    """Scenario document is malformed or does not resolve."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        declaration: Optional[str] = None,
        witness: Any = None,
    ) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, witness)
        self.line = line
        self.declaration = declaration

    def to_dict(self) -> Dict[str, Any]:
        return {**super().to_dict(), "line": self.line, "declaration": self.declaration}


def _jsonable(x: Any) -> Any:
    # numpy scalars and tuples show up in witnesses
    if x is None or isinstance(x, (str, bool, int, float)):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    return str(x)

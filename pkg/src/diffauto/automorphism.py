"""Endomorphisms of A = Q{x, y} and the structured automorphism families.

An endomorphism ``(f1, f2)`` sends x to f1 and y to f2.  Composition follows
the usual convention for maps of A: ``compose(theta, phi)`` is theta o phi,
whose components are phi's components evaluated at theta's, so that
``apply(compose(theta, phi), p) == apply(theta, apply(phi, p))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import UNIT, DiffPolynomial, DiffVar, substitute
from .errors import DomainError, ParameterError

__all__ = [
    "AffineAuto",
    "CElement",
    "Classification",
    "ElementaryAuto",
    "Endomorphism",
    "Kind",
    "TriangularAuto",
    "apply",
    "auto_degree",
    "classify",
    "compose",
    "compose_all",
    "invert_affine",
    "invert_elementary",
    "invert_triangular",
    "to_endo",
    "verify_inverse_pair",
]

X, Y = 0, 1


def _x(m: int) -> DiffPolynomial:
    return DiffPolynomial.gen(2, m, X)


def _y(m: int) -> DiffPolynomial:
    return DiffPolynomial.gen(2, m, Y)


def _frac(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise ParameterError(f"expected a rational number, got {v!r}")
    return Fraction(v)


def _only_variable(p: DiffPolynomial, var: int) -> bool:
    return all(g.var == var for g in p.generators())


@dataclass(frozen=True)
class Endomorphism:
    f1: DiffPolynomial
    f2: DiffPolynomial

    def __post_init__(self):
        if self.f1.n != 2 or self.f2.n != 2:
            raise ParameterError("endomorphism components must live in Q{x, y}")
        if self.f1.m != self.f2.m:
            raise ParameterError("endomorphism components disagree on m")

    @property
    def m(self) -> int:
        return self.f1.m

    @classmethod
    def identity(cls, m: int) -> "Endomorphism":
        return cls(_x(m), _y(m))

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.m)

    def __call__(self, p: DiffPolynomial) -> DiffPolynomial:
        return apply(self, p)

    def to_str(self) -> str:
        return f"fx={self.f1} fy={self.f2}"

    def __str__(self) -> str:
        return self.to_str()


def apply(phi: Endomorphism, p: DiffPolynomial) -> DiffPolynomial:
    if p.n != 2 or p.m != phi.m:
        raise ParameterError(f"cannot apply an endomorphism with m={phi.m} to a polynomial in (n={p.n}, m={p.m})")
    return substitute(p, [phi.f1, phi.f2])


def compose(theta: Endomorphism, phi: Endomorphism) -> Endomorphism:
    """theta o phi = (g1(f1, f2), g2(f1, f2)) for theta = (f1, f2), phi = (g1, g2)."""
    if theta.m != phi.m:
        raise ParameterError(f"ambient mismatch: m={theta.m} vs m={phi.m}")
    targets = [theta.f1, theta.f2]
    return Endomorphism(substitute(phi.f1, targets), substitute(phi.f2, targets))


def compose_all(maps, m: int) -> Endomorphism:
    """Left-to-right composition of a sequence of endomorphisms (identity if empty)."""
    result = Endomorphism.identity(m)
    for phi in maps:
        result = compose(result, phi)
    return result


# ---------------------------------------------------------------------------
# structured forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryAuto:
    """sigma(1, a, f) = (a x + f(y), y) or sigma(2, a, g) = (x, a y + g(x)).

    ``shift`` is an element of Q{x, y} involving only y (axis 1) or only x
    (axis 2).
    """

    axis: int
    a: Fraction
    shift: DiffPolynomial

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        if self.axis not in (1, 2):
            raise ParameterError(f"axis must be 1 or 2, got {self.axis}")
        if self.a == 0:
            raise ParameterError("elementary automorphism needs a nonzero scalar")
        if self.shift.n != 2:
            raise ParameterError("shift must be an element of Q{x, y}")
        if not _only_variable(self.shift, Y if self.axis == 1 else X):
            which = "y" if self.axis == 1 else "x"
            raise ParameterError(f"axis-{self.axis} shift must involve only {which}")

    @property
    def m(self) -> int:
        return self.shift.m

    def to_endo(self, m: int | None = None) -> Endomorphism:
        m = self.m
        if self.axis == 1:
            return Endomorphism(_x(m) * self.a + self.shift, _y(m))
        return Endomorphism(_x(m), _y(m) * self.a + self.shift)

    def is_identity(self) -> bool:
        return self.a == 1 and self.shift.is_zero()


@dataclass(frozen=True)
class AffineAuto:
    """(a1 x + b1 y + c1, a2 x + b2 y + c2) with a1 b2 != a2 b1."""

    a1: Fraction
    b1: Fraction
    c1: Fraction
    a2: Fraction
    b2: Fraction
    c2: Fraction

    def __post_init__(self):
        for name in ("a1", "b1", "c1", "a2", "b2", "c2"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.det == 0:
            raise ParameterError("affine map has a singular linear part (a1*b2 == a2*b1)")

    @property
    def det(self) -> Fraction:
        return self.a1 * self.b2 - self.a2 * self.b1

    @classmethod
    def identity(cls) -> "AffineAuto":
        return cls(1, 0, 0, 0, 1, 0)

    def is_identity(self) -> bool:
        return self == AffineAuto.identity()

    def to_endo(self, m: int) -> Endomorphism:
        x, y = _x(m), _y(m)
        return Endomorphism(x * self.a1 + y * self.b1 + self.c1, x * self.a2 + y * self.b2 + self.c2)

    def then(self, other: "AffineAuto") -> "AffineAuto":
        """self o other, computed on coefficients."""
        # other's components evaluated at (self.f1, self.f2)
        return AffineAuto(
            other.a1 * self.a1 + other.b1 * self.a2,
            other.a1 * self.b1 + other.b1 * self.b2,
            other.a1 * self.c1 + other.b1 * self.c2 + other.c1,
            other.a2 * self.a1 + other.b2 * self.a2,
            other.a2 * self.b1 + other.b2 * self.b2,
            other.a2 * self.c1 + other.b2 * self.c2 + other.c2,
        )


@dataclass(frozen=True)
class TriangularAuto:
    """(a x + h(y), b y + c) with a, b nonzero and h in Q{y}."""

    a: Fraction
    h: DiffPolynomial
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.a == 0 or self.b == 0:
            raise ParameterError("triangular automorphism needs a != 0 and b != 0")
        if self.h.n != 2 or not _only_variable(self.h, Y):
            raise ParameterError("triangular shift h must be an element of Q{y}")

    @property
    def m(self) -> int:
        return self.h.m

    def to_endo(self, m: int | None = None) -> Endomorphism:
        m = self.m
        return Endomorphism(_x(m) * self.a + self.h, _y(m) * self.b + self.c)


@dataclass(frozen=True)
class CElement:
    """(a x + b y + c, b1 y + c1): the intersection of the affine and triangular groups."""

    a: Fraction
    b: Fraction
    c: Fraction
    b1: Fraction
    c1: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "b1", "c1"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.a == 0 or self.b1 == 0:
            raise ParameterError("C-element needs a != 0 and b1 != 0")

    @classmethod
    def identity(cls) -> "CElement":
        return cls(1, 0, 0, 1, 0)

    def is_identity(self) -> bool:
        return self == CElement.identity()

    def to_affine(self) -> AffineAuto:
        return AffineAuto(self.a, self.b, self.c, 0, self.b1, self.c1)

    @classmethod
    def from_affine(cls, l: AffineAuto) -> "CElement":
        if l.a2 != 0:
            raise ParameterError("affine map is not triangular (a2 != 0)")
        return cls(l.a1, l.b1, l.c1, l.b2, l.c2)

    def to_endo(self, m: int) -> Endomorphism:
        return self.to_affine().to_endo(m)


Structured = Union[ElementaryAuto, AffineAuto, TriangularAuto, CElement]


def to_endo(s: Structured, m: int | None = None) -> Endomorphism:
    """Literal pair form.  ``m`` is required for affine and C-elements."""
    if isinstance(s, (AffineAuto, CElement)):
        if m is None:
            raise ParameterError(f"{type(s).__name__} carries no polynomial; pass m")
        return s.to_endo(m)
    if m is not None and m != s.m:
        raise ParameterError(f"m={m} does not match the structured form (m={s.m})")
    return s.to_endo()


# ---------------------------------------------------------------------------
# inverses
# ---------------------------------------------------------------------------


def invert_affine(l: AffineAuto) -> AffineAuto:
    d = l.det
    if d == 0:
        raise ParameterError("singular affine map")
    # the inverse sends (x, y) to M^{-1} ((x, y) - c)
    ia1, ib1 = l.b2 / d, -l.b1 / d
    ia2, ib2 = -l.a2 / d, l.a1 / d
    return AffineAuto(
        ia1, ib1, -(ia1 * l.c1 + ib1 * l.c2),
        ia2, ib2, -(ia2 * l.c1 + ib2 * l.c2),
    )


def invert_triangular(t: TriangularAuto) -> TriangularAuto:
    """(a^{-1}(x - h(b^{-1}(y - c))), b^{-1}(y - c))."""
    m = t.m
    inner = (_y(m) - t.c) * (1 / t.b)
    h_inner = substitute(t.h, [_x(m), inner])
    return TriangularAuto(1 / t.a, -h_inner * (1 / t.a), 1 / t.b, -t.c / t.b)


def invert_elementary(s: ElementaryAuto) -> ElementaryAuto:
    return ElementaryAuto(s.axis, 1 / s.a, -s.shift * (1 / s.a))


def verify_inverse_pair(phi: Endomorphism, psi: Endomorphism) -> bool:
    if phi.m != psi.m:
        raise ParameterError("ambient mismatch")
    return compose(phi, psi).is_identity() and compose(psi, phi).is_identity()


# ---------------------------------------------------------------------------
# degree and recognition
# ---------------------------------------------------------------------------


def auto_degree(phi: Endomorphism) -> int:
    if phi.f1.is_zero() or phi.f2.is_zero():
        raise DomainError("automorphism degree is undefined with a zero component")
    return phi.f1.deg() + phi.f2.deg()


class Kind(enum.Enum):
    AFFINE = "affine"
    TRIANGULAR = "triangular"
    IN_C = "in_C"
    GENERAL = "general"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    affine: AffineAuto | None = None
    triangular: TriangularAuto | None = None

    @property
    def is_affine(self) -> bool:
        return self.affine is not None

    @property
    def is_triangular(self) -> bool:
        return self.triangular is not None


def _linear_coefficients(p: DiffPolynomial) -> tuple[Fraction, Fraction, Fraction] | None:
    """(coef of x, coef of y, constant) if p is in span{x, y, 1}."""
    zero_op = (0,) * p.m
    mono_x = ((DiffVar(X, zero_op), 1),)
    mono_y = ((DiffVar(Y, zero_op), 1),)
    allowed = {UNIT, mono_x, mono_y}
    if any(k not in allowed for k in p.terms):
        return None
    return p.coefficient(mono_x), p.coefficient(mono_y), p.constant_coefficient()


def _recognize_affine(phi: Endomorphism) -> AffineAuto | None:
    l1 = _linear_coefficients(phi.f1)
    l2 = _linear_coefficients(phi.f2)
    if l1 is None or l2 is None:
        return None
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    if a1 * b2 == a2 * b1:
        return None
    return AffineAuto(a1, b1, c1, a2, b2, c2)


def _recognize_triangular(phi: Endomorphism) -> TriangularAuto | None:
    l2 = _linear_coefficients(phi.f2)
    if l2 is None or l2[0] != 0 or l2[1] == 0:
        return None
    mono_x = ((DiffVar(X, (0,) * phi.m), 1),)
    a = phi.f1.coefficient(mono_x)
    if a == 0:
        return None
    h = phi.f1 - _x(phi.m) * a
    if not _only_variable(h, Y):
        return None
    return TriangularAuto(a, h, l2[1], l2[2])


def classify(phi: Endomorphism) -> Classification:
    aff = _recognize_affine(phi)
    tri = _recognize_triangular(phi)
    if aff is not None and tri is not None:
        kind = Kind.IN_C
    elif aff is not None:
        kind = Kind.AFFINE
    elif tri is not None:
        kind = Kind.TRIANGULAR
    else:
        kind = Kind.GENERAL
    return Classification(kind, aff, tri)

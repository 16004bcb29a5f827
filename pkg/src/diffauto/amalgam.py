"""Normal forms in the amalgamated product of the affine and triangular groups.

Every tame automorphism has a unique expression

    gamma_1 o beta_1 o gamma_2 o beta_2 o ... o gamma_k o beta_k o gamma_{k+1} o lambda

with gamma_i from the affine coset representatives A0 = {id, (y, x + a y)},
beta_i from the triangular representatives B0 = {(x + q(y), y) : every
homogeneous component of q has degree >= 2}, lambda in
C = Af_2 n Tr_2, and gamma_2..gamma_k, beta_1..beta_k not the identity.
:func:`normalize` computes it from a word of elementary automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .algebra import BOTTOM, DiffPolynomial, monomial_degree, substitute
from .automorphism import (
    AffineAuto,
    CElement,
    ElementaryAuto,
    Endomorphism,
    TriangularAuto,
    compose,
    compose_all,
)
from .errors import ParameterError
from .expr import format_poly, format_rational

__all__ = [
    "A0Element",
    "B0Element",
    "NormalForm",
    "affine_coset_split",
    "assert_unique",
    "conjugate_B0_through_C",
    "degree_formula",
    "degree_recursion",
    "elementary_to_word",
    "evaluate",
    "format_normal_form",
    "normalize",
    "split_low_degree",
    "triangular_coset_split",
    "y_multiplicity",
]

X, Y = 0, 1


def _x(m: int) -> DiffPolynomial:
    return DiffPolynomial.gen(2, m, X)


def _y(m: int) -> DiffPolynomial:
    return DiffPolynomial.gen(2, m, Y)


def split_low_degree(q: DiffPolynomial) -> tuple[DiffPolynomial, DiffPolynomial]:
    """Split q into (components of degree >= 2, components of degree <= 1)."""
    high = {k: v for k, v in q.terms.items() if monomial_degree(k) >= 2}
    low = {k: v for k, v in q.terms.items() if monomial_degree(k) < 2}
    return DiffPolynomial._raw(q.n, q.m, high), DiffPolynomial._raw(q.n, q.m, low)


@dataclass(frozen=True)
class A0Element:
    """The identity (``a is None``) or gamma = (y, x + a y)."""

    a: Fraction | None = None

    def __post_init__(self):
        if self.a is not None:
            object.__setattr__(self, "a", Fraction(self.a))

    @classmethod
    def identity(cls) -> "A0Element":
        return cls(None)

    def is_identity(self) -> bool:
        return self.a is None

    def to_affine(self) -> AffineAuto:
        if self.a is None:
            return AffineAuto.identity()
        return AffineAuto(0, 1, 0, 1, self.a, 0)

    def to_endo(self, m: int) -> Endomorphism:
        return self.to_affine().to_endo(m)


@dataclass(frozen=True)
class B0Element:
    """beta = (x + q(y), y); the identity exactly when q == 0."""

    q: DiffPolynomial

    def __post_init__(self):
        q = self.q
        if q.n != 2 or any(g.var != Y for g in q.generators()):
            raise ParameterError("B0 element must have q in Q{y}")
        if q.min_deg() is not BOTTOM and q.min_deg() < 2:
            raise ParameterError("B0 element q may not have components of degree 0 or 1")

    @property
    def m(self) -> int:
        return self.q.m

    @classmethod
    def identity(cls, m: int) -> "B0Element":
        return cls(DiffPolynomial.zero(2, m))

    def is_identity(self) -> bool:
        return self.q.is_zero()

    def to_endo(self, m: int | None = None) -> Endomorphism:
        m = self.m
        return Endomorphism(_x(m) + self.q, _y(m))


@dataclass(frozen=True)
class NormalForm:
    """gamma_first o beta_1 o gamma_2 o ... o beta_k o gamma_last o lam.

    ``body`` alternates (beta_1, gamma_2, beta_2, ..., gamma_k, beta_k).  With
    k = 0 the element is affine and is stored as gamma_first o lam with
    ``gamma_last`` the identity.
    """

    m: int
    gamma_first: A0Element
    body: tuple = ()
    gamma_last: A0Element = field(default_factory=A0Element.identity)
    lam: CElement = field(default_factory=CElement.identity)

    def __post_init__(self):
        body = tuple(self.body)
        object.__setattr__(self, "body", body)
        if len(body) % 2 == 0 and body:
            raise ParameterError("normal form body must start and end with a B0 element")
        for i, f in enumerate(body):
            want = B0Element if i % 2 == 0 else A0Element
            if not isinstance(f, want):
                raise ParameterError(f"body position {i} must be a {want.__name__}")
            if f.is_identity():
                raise ParameterError(f"interior identity at body position {i}")
            if isinstance(f, B0Element) and f.m != self.m:
                raise ParameterError("B0 element disagrees with the normal form's m")
        if not body and not self.gamma_last.is_identity():
            raise ParameterError("with k = 0 the trailing A0 factor must be the identity")

    @property
    def k(self) -> int:
        return (len(self.body) + 1) // 2

    @property
    def betas(self) -> tuple[B0Element, ...]:
        return self.body[0::2]

    @property
    def gammas(self) -> tuple[A0Element, ...]:
        """gamma_2 .. gamma_k."""
        return self.body[1::2]

    @classmethod
    def identity(cls, m: int) -> "NormalForm":
        return cls(m, A0Element.identity())

    def is_all_identity(self) -> bool:
        return self.k == 0 and self.gamma_first.is_identity() and self.lam.is_identity()

    def factors(self) -> list:
        """All factors in composition order, identities included."""
        return [self.gamma_first, *self.body, self.gamma_last, self.lam]


# ---------------------------------------------------------------------------
# coset splits and conjugation
# ---------------------------------------------------------------------------


def affine_coset_split(l: AffineAuto) -> tuple[A0Element, CElement]:
    """l = gamma o eta with gamma in A0 and eta in C."""
    if l.a2 == 0:
        return A0Element.identity(), CElement.from_affine(l)
    r = l.b2 / l.a2
    gamma = A0Element(r)
    eta = CElement(l.b1 - l.a1 * r, l.a1, l.c1, l.a2, l.c2)
    return gamma, eta


def triangular_coset_split(psi: TriangularAuto) -> tuple[B0Element, CElement]:
    """psi = beta o mu with beta in B0 and mu in C."""
    q, low = split_low_degree(psi.h)
    beta = B0Element(q * (1 / psi.a))
    y_coef = low.coefficient(((_y(psi.m).leader(), 1),))
    mu = CElement(psi.a, y_coef, low.constant_coefficient(), psi.b, psi.c)
    return beta, mu


def conjugate_B0_through_C(lam: CElement, beta: B0Element) -> tuple[B0Element, CElement]:
    """Rewrite lam o beta as beta' o lam' with beta' in B0 and lam' in C."""
    if beta.is_identity():
        return beta, lam
    m = beta.m
    shifted = substitute(beta.q, [_x(m), _y(m) * lam.b1 + lam.c1])
    high, low = split_low_degree(shifted)
    y_coef = low.coefficient(((_y(m).leader(), 1),))
    beta2 = B0Element(high * (1 / lam.a))
    lam2 = CElement(lam.a, lam.b + y_coef, lam.c + low.constant_coefficient(), lam.b1, lam.c1)
    return beta2, lam2


def elementary_to_word(sigma: ElementaryAuto) -> list[Union[AffineAuto, TriangularAuto]]:
    """Factor an elementary automorphism into affine and triangular pieces.

    (a x + h(y), y) = (x + q(y)/a, y) o (a x + h_1(y) + h_0, y) and
    (x, b y + h(x)) = (y, x) o (x + q(y)/b, y) o (y, b x + h_1(y) + h_0),
    where q collects the components of h of degree >= 2.
    """
    m = sigma.m
    if sigma.axis == 1:
        h = sigma.shift
    else:
        # rename x -> y so h is a polynomial in y
        h = substitute(sigma.shift, [_y(m), _x(m)])
    q, low = split_low_degree(h)
    y_coef = low.coefficient(((_y(m).leader(), 1),))
    c0 = low.constant_coefficient()
    a = sigma.a
    word: list[Union[AffineAuto, TriangularAuto]] = []
    if sigma.axis == 2:
        word.append(AffineAuto(0, 1, 0, 1, 0, 0))
    if not q.is_zero():
        word.append(TriangularAuto(1, q * (1 / a), 1, 0))
    if sigma.axis == 1:
        tail = AffineAuto(a, y_coef, c0, 0, 1, 0)
    else:
        tail = AffineAuto(0, 1, 0, a, y_coef, c0)
    if not tail.is_identity() or not word:
        word.append(tail)
    return word


# ---------------------------------------------------------------------------
# normalisation
# ---------------------------------------------------------------------------


class _Builder:
    """Partial normal form: prefix [gamma_1, beta_1, ..., gamma_k, beta_k] o tail."""

    def __init__(self, m: int):
        self.m = m
        self.prefix: list = []
        self.tail = AffineAuto.identity()

    def push_affine(self, l: AffineAuto) -> None:
        self.tail = self.tail.then(l)

    def push_beta(self, beta: B0Element) -> None:
        if beta.is_identity():
            return
        gamma, eta = affine_coset_split(self.tail)
        beta2, lam2 = conjugate_B0_through_C(eta, beta)
        if beta2.is_identity():
            self.tail = gamma.to_affine().then(lam2.to_affine())
            return
        if self.prefix and gamma.is_identity():
            merged = self.prefix[-1].q + beta2.q
            if merged.is_zero():
                self.prefix.pop()
                gamma_k = self.prefix.pop()
                self.tail = gamma_k.to_affine().then(lam2.to_affine())
            else:
                self.prefix[-1] = B0Element(merged)
                self.tail = lam2.to_affine()
            return
        self.prefix.extend([gamma, beta2])
        self.tail = lam2.to_affine()

    def push_triangular(self, t: TriangularAuto) -> None:
        beta, mu = triangular_coset_split(t)
        self.push_beta(beta)
        self.push_affine(mu.to_affine())

    def result(self) -> NormalForm:
        gamma, lam = affine_coset_split(self.tail)
        if not self.prefix:
            return NormalForm(self.m, gamma, (), A0Element.identity(), lam)
        return NormalForm(self.m, self.prefix[0], tuple(self.prefix[1:]), gamma, lam)


def normalize(
    word: Iterable[ElementaryAuto],
    m: int,
    trace: Callable[[int, NormalForm], None] | None = None,
) -> NormalForm:
    """Normal form of the composition sigma_1 o sigma_2 o ... of ``word``.

    ``trace`` (if given) receives the index and the partial normal form after
    each elementary factor is absorbed.
    """
    builder = _Builder(m)
    for i, sigma in enumerate(word):
        if sigma.m != m:
            raise ParameterError(f"elementary factor {i} has m={sigma.m}, expected {m}")
        for piece in elementary_to_word(sigma):
            if isinstance(piece, AffineAuto):
                builder.push_affine(piece)
            else:
                builder.push_triangular(piece)
        if trace is not None:
            trace(i, builder.result())
    return builder.result()


def evaluate(nf: NormalForm) -> Endomorphism:
    m = nf.m
    return compose_all((f.to_endo(m) for f in nf.factors()), m)


def assert_unique(nf: NormalForm) -> bool:
    """True iff nf is trivial or does not evaluate to the identity."""
    return nf.is_all_identity() or not evaluate(nf).is_identity()


# ---------------------------------------------------------------------------
# degree oracle
# ---------------------------------------------------------------------------


def y_multiplicity(q: DiffPolynomial) -> int:
    """Largest number of y-generator factors (derived or not) in a monomial of q."""
    return max((sum(e for g, e in mono if g.var == Y) for mono in q.terms), default=0)


def _check_b0_chain_shape(nf: NormalForm) -> None:
    if nf.k < 1 or not nf.gamma_first.is_identity() or not nf.gamma_last.is_identity() or not nf.lam.is_identity():
        raise ParameterError("degree formula needs the shape beta_1 o gamma_2 o ... o beta_k with k >= 1")


def degree_formula(nf: NormalForm) -> tuple[int, int]:
    """Closed-form degrees (deg f1, deg f2) from n_i = deg q_i and s_i = y-multiplicity.

    deg f1 = n_k + (n_{k-1} - 1) s_k + ... + (n_1 - 1) s_k ... s_2, and deg f2
    is the same expression one level down (1 when k = 1).  This agrees with
    :func:`degree_recursion` whenever some top-degree monomial of each q_i
    also has maximal y-multiplicity; otherwise it can overshoot.
    """
    _check_b0_chain_shape(nf)
    ns = [b.q.deg() for b in nf.betas]
    ss = [y_multiplicity(b.q) for b in nf.betas]

    def level(j: int) -> int:
        # n_j + (n_{j-1} - 1) s_j + (n_{j-2} - 1) s_j s_{j-1} + ...
        total, prod = ns[j], 1
        for i in range(j - 1, -1, -1):
            prod *= ss[i + 1]
            total += (ns[i] - 1) * prod
        return total

    k = len(ns)
    d1 = level(k - 1)
    d2 = level(k - 2) if k > 1 else 1
    return d1, d2


def degree_recursion(nf: NormalForm) -> tuple[int, int]:
    """Exact degrees for the same shape via deg(q_k(u)) = deg_w(q_k), w = (t, 1, ..., 1).

    Here t = deg u is the degree of the second component before beta_k; this
    is the identity the closed form is derived from, applied without
    collapsing deg_w(q_k) to n_k + (t - 1) s_k.
    """
    _check_b0_chain_shape(nf)
    m = nf.m
    d1, d2 = BOTTOM, 1
    for j, beta in enumerate(nf.betas):
        if j == 0:
            d1 = beta.q.deg()
            continue
        u1, u2 = d2, max(d1, d2)
        t = u2
        dq = beta.q.deg_w((1, t) + (1,) * m)
        d1, d2 = max(u1, dq), u2
    return d1, d2


# ---------------------------------------------------------------------------
# text dump
# ---------------------------------------------------------------------------


def _format_a0(g: A0Element) -> str:
    return "G id" if g.is_identity() else f"G a={format_rational(g.a)}"


def format_normal_form(nf: NormalForm) -> str:
    lines = [_format_a0(nf.gamma_first)]
    for f in nf.body:
        lines.append(f"B q={format_poly(f.q)}" if isinstance(f, B0Element) else _format_a0(f))
    lines.append(_format_a0(nf.gamma_last))
    lam = nf.lam
    lines.append(
        "C "
        + " ".join(
            f"{name}={format_rational(getattr(lam, name))}" for name in ("a", "b", "c", "b1", "c1")
        )
    )
    return "\n".join(lines)

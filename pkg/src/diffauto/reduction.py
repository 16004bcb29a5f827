"""Elementary reduction, homogeneous subalgebra membership and wildness certificates.

A pair (f1, f2) is *elementarily reducible* when one component can be
replaced by ``f_i - G(f_j)`` with a strictly smaller total degree.  For a
non-affine tame automorphism this is always possible, and it happens exactly
when the leading part of f_i lies in the subalgebra generated by the leading
part of f_j.  :func:`hom_membership` decides that membership by matching
coefficients against every weighted-homogeneous candidate G, and
:func:`decide_tame` iterates reductions down to an affine map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import (
    DiffPolynomial,
    DiffVar,
    Monomial,
    _Substituter,
    get_limits,
    monomial_key,
    substitute,
)
from .automorphism import (
    AffineAuto,
    ElementaryAuto,
    Endomorphism,
    Kind,
    auto_degree,
    classify,
    compose,
    compose_all,
    verify_inverse_pair,
)
from .errors import CertificationError, DomainError, ParameterError, ResourceError
from .expr import format_poly, format_rational
from .linsolve import LinearSystem, solve_linear

__all__ = [
    "AnickCertificate",
    "MembershipQuery",
    "MembershipSolution",
    "ReductionStep",
    "TamenessVerdict",
    "Verdict",
    "affine_to_elementary",
    "anick_analog",
    "certify_wild_anick",
    "decide_tame",
    "enumerate_candidate_monomials",
    "format_verdict",
    "hom_membership",
    "linear_dependence",
    "try_elementary_reduce",
]

X, Y = 0, 1


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def linear_dependence(u: DiffPolynomial, v: DiffPolynomial) -> Fraction | None:
    """gamma with u == gamma * v, if one exists (u, v homogeneous of equal degree)."""
    if u.is_zero() or v.is_zero():
        raise ParameterError("linear_dependence needs nonzero inputs")
    if not u.is_homogeneous() or not v.is_homogeneous():
        raise ParameterError("linear_dependence needs homogeneous inputs")
    if u.deg() != v.deg() or len(u) != len(v) or set(u.terms) != set(v.terms):
        return None
    mono, c = next(iter(v.terms.items()))
    gamma = u.terms[mono] / c
    return gamma if u == v * gamma else None


def _operators_up_to(order: int, m: int) -> list[tuple[int, ...]]:
    """All m-tuples of non-negative ints with sum <= order, by increasing sum."""
    ops = [op for op in product(range(order + 1), repeat=m) if sum(op) <= order]
    return sorted(ops, key=lambda op: (sum(op), op))


def enumerate_candidate_monomials(d: int, D: int, m: int) -> list[Monomial]:
    """Monomials prod z^{theta_i} in Q{z} with sum(d + |theta_i|) == D.

    These span the weight-D part of Q{z} under w = (d, 1, ..., 1), i.e. the
    G for which G(h) is homogeneous of degree D when h is homogeneous of
    degree d.  Returned greatest first in the canonical monomial order.
    """
    if d <= 0:
        raise ParameterError(f"generator weight d must be positive, got {d}")
    if D < 0:
        raise ParameterError(f"target degree must be non-negative, got {D}")
    if m < 0:
        raise ParameterError(f"m must be non-negative, got {m}")
    if D == 0:
        return [()]
    ops = _operators_up_to(D - d, m) if D >= d else []
    weights = [d + sum(op) for op in ops]
    cap = get_limits().max_candidates
    found: list[Monomial] = []

    def rec(start: int, remaining: int, chosen: list[int]) -> None:
        if remaining == 0:
            counts: dict[DiffVar, int] = {}
            for idx in chosen:
                g = DiffVar(0, ops[idx])
                counts[g] = counts.get(g, 0) + 1
            found.append(tuple(sorted(counts.items())))
            if len(found) > cap:
                raise ResourceError(f"more than max_candidates={cap} candidate monomials for d={d}, D={D}, m={m}")
            return
        for idx in range(start, len(ops)):
            if weights[idx] > remaining:
                break
            chosen.append(idx)
            rec(idx, remaining - weights[idx], chosen)
            chosen.pop()

    rec(0, D, [])
    found.sort(key=lambda mono: monomial_key(mono, 1, m), reverse=True)
    return found


@dataclass(frozen=True)
class MembershipSolution:
    """G in Q{z} with G(h) == u, or ``G is None`` when u is not in Q{h}."""

    G: DiffPolynomial | None
    candidates: int = 0
    equations: int = 0

    @property
    def present(self) -> bool:
        return self.G is not None

    def __str__(self) -> str:
        return "ABSENT" if self.G is None else format_poly(self.G)


def hom_membership(u: DiffPolynomial, h: DiffPolynomial) -> MembershipSolution:
    """Decide whether homogeneous u lies in the subalgebra Q{h} of homogeneous h."""
    if u.is_zero():
        raise ParameterError("membership query needs a nonzero u")
    if h.is_zero() or h.is_constant():
        raise ParameterError("membership generator h must be nonconstant")
    if (u.n, u.m) != (h.n, h.m):
        raise ParameterError("u and h must share an ambient")
    if not u.is_homogeneous():
        raise ParameterError(f"u is not homogeneous: {u}")
    if not h.is_homogeneous():
        raise ParameterError(f"h is not homogeneous: {h}")
    d, D, m = h.deg(), u.deg(), h.m
    candidates = enumerate_candidate_monomials(d, D, m)
    if not candidates:
        return MembershipSolution(None, 0, 0)

    sub = _Substituter([h])
    images = [sub.monomial(mono, Fraction(1)) for mono in candidates]
    row_monos = set(u.terms)
    for img in images:
        row_monos.update(img.terms)
    ordered = sorted(row_monos, key=lambda k: monomial_key(k, u.n, m), reverse=True)
    row_of = {k: i for i, k in enumerate(ordered)}
    entries = sum(len(img) for img in images)
    cap = get_limits().max_system_entries
    if entries > cap:
        raise ResourceError(f"membership system has {entries} nonzeros, above max_system_entries={cap}")

    rows: list[dict[int, Fraction]] = [{} for _ in ordered]
    for j, img in enumerate(images):
        for k, v in img.terms.items():
            rows[row_of[k]][j] = v
    rhs = [u.terms.get(k, Fraction(0)) for k in ordered]
    solution = solve_linear(LinearSystem(rows, rhs, candidates, len(candidates)))
    if solution is None:
        return MembershipSolution(None, len(candidates), len(ordered))
    G = DiffPolynomial(1, m, {mono: c for mono, c in zip(candidates, solution) if c})
    if substitute(G, [h]) != u:
        raise CertificationError(f"unsound membership solution G={G} for u={u}, h={h}")
    return MembershipSolution(G, len(candidates), len(ordered))


# ---------------------------------------------------------------------------
# elementary reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    """f_axis was replaced by f_axis - G(f_other)."""

    axis: int
    G: DiffPolynomial
    degree_before: int
    degree_after: int

    def __post_init__(self):
        if not self.degree_after < self.degree_before:
            raise ParameterError("a reduction step must strictly decrease the degree")

    def undo(self) -> ElementaryAuto:
        """Elementary automorphism restoring the pre-step pair: sigma(axis, 1, +G(other))."""
        m = self.G.m
        other = DiffPolynomial.gen(2, m, Y if self.axis == 1 else X)
        return ElementaryAuto(self.axis, 1, substitute(self.G, [other]))


@dataclass(frozen=True)
class MembershipQuery:
    """Is the leading part of f_axis in Q{leading part of the other component}?"""

    axis: int
    u: DiffPolynomial
    h: DiffPolynomial
    solution: MembershipSolution | None
    note: str = ""


def _attempt(phi: Endomorphism) -> tuple[tuple[Endomorphism, ReductionStep] | None, list[MembershipQuery]]:
    if phi.f1.is_zero() or phi.f2.is_zero():
        raise DomainError("reduction needs nonzero components")
    comps = [phi.f1, phi.f2]
    before = auto_degree(phi)
    # higher degree first; axis 1 first on ties
    order = sorted((1, 2), key=lambda ax: (-comps[ax - 1].deg(), ax))
    queries: list[MembershipQuery] = []
    for axis in order:
        fi, fj = comps[axis - 1], comps[2 - axis]
        u = fi.leading_part()
        h = fj.leading_part()
        if h.is_constant():
            queries.append(MembershipQuery(axis, u, h, None, "other component is constant"))
            continue
        sol = hom_membership(u, h)
        queries.append(MembershipQuery(axis, u, h, sol))
        if not sol.present:
            continue
        new_fi = fi - substitute(sol.G, [fj])
        if new_fi.is_zero():
            queries[-1] = MembershipQuery(axis, u, h, sol, "subtraction leaves a zero component")
            continue
        new = Endomorphism(new_fi, fj) if axis == 1 else Endomorphism(fj, new_fi)
        after = auto_degree(new)
        if after < before:
            return (new, ReductionStep(axis, sol.G, before, after)), queries
    return None, queries


def try_elementary_reduce(phi: Endomorphism) -> tuple[Endomorphism, ReductionStep] | None:
    """One strictly degree-decreasing elementary transformation, if any exists."""
    found, _ = _attempt(phi)
    return found


def affine_to_elementary(l: AffineAuto, m: int) -> list[ElementaryAuto]:
    """Factor an affine automorphism into elementary ones (composition order)."""
    x, y = DiffPolynomial.gen(2, m, X), DiffPolynomial.gen(2, m, Y)
    if l.a1 == 0:
        # l = (y, x) o (b1 x + a1 y + c1, b2 x + a2 y + c2)
        swap = [
            ElementaryAuto(1, 1, y),
            ElementaryAuto(2, -1, x),
            ElementaryAuto(1, -1, y),
            ElementaryAuto(1, -1, DiffPolynomial.zero(2, m)),
        ]
        return swap + affine_to_elementary(AffineAuto(l.b1, l.a1, l.c1, l.b2, l.a2, l.c2), m)
    r = l.a2 / l.a1
    first = ElementaryAuto(1, l.a1, y * l.b1 + l.c1)
    second = ElementaryAuto(2, l.det / l.a1, x * r + (l.c2 - r * l.c1))
    return [s for s in (first, second) if not s.is_identity()]


class Verdict(enum.Enum):
    AFFINE = "AFFINE"
    TAME = "TAME"
    IRREDUCIBLE = "IRREDUCIBLE"


@dataclass(frozen=True)
class TamenessVerdict:
    kind: Verdict
    input: Endomorphism
    steps: tuple[ReductionStep, ...] = ()
    word: tuple[ElementaryAuto, ...] = ()
    stuck: Endomorphism | None = None
    failed_queries: tuple[MembershipQuery, ...] = ()
    automorphism_status: str = "unverified"


def decide_tame(phi: Endomorphism, inverse: Endomorphism | None = None) -> TamenessVerdict:
    """Reduce ``phi`` to an affine map or get stuck.

    TAME comes with an elementary word whose composition is checked to equal
    ``phi``.  IRREDUCIBLE only means "wild" when phi is known to be an
    automorphism; pass ``inverse`` to have that verified.
    """
    status = "unverified"
    if inverse is not None and verify_inverse_pair(phi, inverse):
        status = "verified"
    m = phi.m
    start = classify(phi)
    if start.is_affine:
        word = tuple(affine_to_elementary(start.affine, m))
        return TamenessVerdict(Verdict.AFFINE, phi, (), word, automorphism_status="verified")

    current = phi
    steps: list[ReductionStep] = []
    while True:
        found, queries = _attempt(current)
        if found is None:
            return TamenessVerdict(
                Verdict.IRREDUCIBLE, phi, tuple(steps), (), current, tuple(queries), status
            )
        current, step = found
        steps.append(step)
        cls = classify(current)
        if cls.is_affine:
            break

    # current = phi o E_0 o ... o E_{N-1}, E_t = sigma(axis, 1, -G_t(other));
    # hence phi = current o E_{N-1}^{-1} o ... o E_0^{-1}
    word = affine_to_elementary(cls.affine, m) + [s.undo() for s in reversed(steps)]
    if compose_all((s.to_endo() for s in word), m) != phi:
        raise CertificationError("reconstructed elementary word does not recompose to the input")
    return TamenessVerdict(Verdict.TAME, phi, tuple(steps), tuple(word), automorphism_status="verified")


# ---------------------------------------------------------------------------
# the Anick-type automorphism
# ---------------------------------------------------------------------------


def anick_analog(m: int) -> tuple[Endomorphism, Endomorphism]:
    """(x + w^{d2}, y + w^{d1}) with w = x^{d1} - y^{d2}, and its inverse.

    Since w = f1^{d1} - f2^{d2} for the images f1, f2, the inverse is
    (x - v^{d2}, y - v^{d1}) with v = x^{d1} - y^{d2}.
    """
    if m < 2:
        raise ParameterError(
            f"the construction needs at least two derivations (m={m}); "
            "tameness for a single derivation is an open problem"
        )
    x, y = DiffPolynomial.gen(2, m, X), DiffPolynomial.gen(2, m, Y)
    w = x.derive(0) - y.derive(1)
    phi = Endomorphism(x + w.derive(1), y + w.derive(0))
    phi_inv = Endomorphism(x - w.derive(1), y - w.derive(0))
    return phi, phi_inv


@dataclass(frozen=True)
class AnickCertificate:
    m: int
    phi: Endomorphism
    phi_inv: Endomorphism
    leading_parts: tuple[DiffPolynomial, DiffPolynomial]
    membership_1_in_2: MembershipSolution
    membership_2_in_1: MembershipSolution
    inverse_verified: bool
    classification: Kind
    verdict: TamenessVerdict

    @property
    def wild(self) -> bool:
        return (
            self.inverse_verified
            and not self.membership_1_in_2.present
            and not self.membership_2_in_1.present
            and self.classification is Kind.GENERAL
            and self.verdict.kind is Verdict.IRREDUCIBLE
        )

    def to_text(self) -> str:
        lb1, lb2 = self.leading_parts
        lines = [
            f"m: {self.m}",
            f"phi: {self.phi}",
            f"phi_inv: {self.phi_inv}",
            f"inverse_pair: {'verified' if self.inverse_verified else 'FAILED'}",
            f"lead_f1: {lb1}",
            f"lead_f2: {lb2}",
            f"deg_lead_f1: {lb1.deg()}",
            f"deg_lead_f2: {lb2.deg()}",
            f"membership lead_f1 in Q{{lead_f2}}: {self.membership_1_in_2}",
            f"membership lead_f2 in Q{{lead_f1}}: {self.membership_2_in_1}",
            f"classification: {self.classification.value}",
            f"reduction: {self.verdict.kind.value}",
            f"verdict: {'WILD (certified)' if self.wild else 'NOT CERTIFIED'}",
        ]
        return "\n".join(lines)


def certify_wild_anick(m: int) -> AnickCertificate:
    """Run every check behind the wildness claim; raise if any of them fails."""
    phi, phi_inv = anick_analog(m)
    lb1, lb2 = phi.f1.leading_part(), phi.f2.leading_part()
    s12 = hom_membership(lb1, lb2)
    s21 = hom_membership(lb2, lb1)
    inverse_ok = verify_inverse_pair(phi, phi_inv)
    kind = classify(phi).kind
    verdict = decide_tame(phi, inverse=phi_inv)
    cert = AnickCertificate(m, phi, phi_inv, (lb1, lb2), s12, s21, inverse_ok, kind, verdict)
    if not cert.wild:
        raise CertificationError("wildness certificate failed:\n" + cert.to_text())
    return cert


# ---------------------------------------------------------------------------
# text output
# ---------------------------------------------------------------------------


def _format_elementary(s: ElementaryAuto) -> str:
    key = "f" if s.axis == 1 else "g"
    return f"E{s.axis} a={format_rational(s.a)} {key}={format_poly(s.shift)}"


def format_verdict(v: TamenessVerdict, verbose: bool = False) -> str:
    lines = [f"verdict: {v.kind.value}", f"automorphism_status: {v.automorphism_status}"]
    for i, s in enumerate(v.steps, 1):
        other = "y" if s.axis == 1 else "x"
        lines.append(
            f"step {i}: axis={s.axis} G={format_poly(s.G)} (subtract G({other})) "
            f"degree {s.degree_before} -> {s.degree_after}"
        )
    if v.kind is Verdict.TAME or (verbose and v.word):
        lines.append("word:")
        lines.extend(f"  {_format_elementary(s)}" for s in v.word)
    if v.kind is Verdict.IRREDUCIBLE:
        lines.append(f"stuck: {v.stuck}")
        for q in v.failed_queries:
            result = "ABSENT" if q.solution is None or not q.solution.present else str(q.solution)
            note = f" ({q.note})" if q.note else ""
            lines.append(f"membership axis={q.axis}: u={q.u} h={q.h} -> {result}{note}")
    return "\n".join(lines)

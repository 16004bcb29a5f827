"""Exact arithmetic in the differential polynomial algebra Q{x_1, ..., x_n}.

The algebra has ``n`` differential indeterminates and ``m`` commuting
derivations d_1, ..., d_m.  Its monomials are products of *generators*
x_i^theta, where theta = d_1^{i_1} ... d_m^{i_m} is recorded as the tuple
``(i_1, ..., i_m)``.  Coefficients are :class:`fractions.Fraction` and every
derivation acts as zero on them.

Representation
--------------
* a generator is a :class:`DiffVar` ``(var, op)`` with a 0-based ``var``;
* a monomial is a tuple of ``(DiffVar, exponent)`` pairs sorted by the
  natural tuple order of the DiffVar (the empty tuple is the unit);
* a :class:`DiffPolynomial` is an immutable sparse map monomial -> Fraction
  with zero coefficients never stored.

Indices of variables and derivations are 0-based throughout the Python API;
the textual grammar writes an operator as its exponent tuple, so
``x_(1,1)`` is x^{d_1 d_2}.

Grading
-------
The multidegree of x_i^theta is (e_i, theta) in Z^{n+m}; the degree is the
sum of its entries, so ``deg(x_(1,1)) == 3``.  Monomials are ordered by
degree, then lexicographically by multidegree (leftmost entry most
significant), then by their descending lists of generators.  Printing lists
terms from the greatest monomial down.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass, replace
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from .errors import DomainError, ParameterError, ResourceError

__all__ = [
    "BOTTOM",
    "DiffPolynomial",
    "DiffVar",
    "Limits",
    "Monomial",
    "add",
    "compare_monomials",
    "deg",
    "deg_w",
    "derive",
    "derive_op",
    "get_limits",
    "leader",
    "leading_part",
    "limits",
    "monomial_degree",
    "mul",
    "multidegree",
    "substitute",
]


# ---------------------------------------------------------------------------
# resource limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Limits:
    """Size guards.  Exceeding one raises :class:`ResourceError`."""

    max_degree: int = 64
    max_candidates: int = 100_000
    max_system_entries: int = 20_000_000


_LIMITS: contextvars.ContextVar[Limits] = contextvars.ContextVar("diffauto_limits", default=Limits())


def get_limits() -> Limits:
    return _LIMITS.get()


@contextmanager
def limits(**overrides) -> Iterator[Limits]:
    """Temporarily override guards for the current context (thread/task local)."""
    new = replace(_LIMITS.get(), **overrides)
    for name, value in overrides.items():
        if value <= 0:
            raise ParameterError(f"limit {name} must be positive, got {value}")
    token = _LIMITS.set(new)
    try:
        yield new
    finally:
        _LIMITS.reset(token)


# ---------------------------------------------------------------------------
# degrees
# ---------------------------------------------------------------------------


class _Bottom:
    """Degree of the zero polynomial: below every integer, absorbing under +."""

    __slots__ = ()
    _instance: "_Bottom | None" = None

    def __new__(cls) -> "_Bottom":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())

    def __lt__(self, other) -> bool:
        return other is not self

    def __le__(self, other) -> bool:
        return True

    def __gt__(self, other) -> bool:
        return False

    def __ge__(self, other) -> bool:
        return other is self

    def __add__(self, other) -> "_Bottom":
        return self

    __radd__ = __add__

    def __hash__(self) -> int:
        return hash("diffauto.BOTTOM")


BOTTOM = _Bottom()
Degree = Union[int, _Bottom]


# ---------------------------------------------------------------------------
# generators and monomials
# ---------------------------------------------------------------------------


class DiffVar(NamedTuple):
    """The generator x_var^op."""

    var: int
    op: tuple[int, ...]


Monomial = tuple  # tuple[tuple[DiffVar, int], ...]
UNIT: Monomial = ()
Scalar = Union[int, Fraction]


def generator_degree(g: DiffVar) -> int:
    return 1 + sum(g.op)


def generator_key(g: DiffVar) -> tuple:
    # (deg, multidegree) compared lexicographically; e_i > e_j for i < j,
    # hence the negated variable index.
    return (1 + sum(g.op), -g.var, g.op)


def monomial_degree(mono: Monomial) -> int:
    return sum(e * (1 + sum(g.op)) for g, e in mono)


def multidegree(mono: Monomial, n: int, m: int) -> tuple[int, ...]:
    """Multidegree vector (var counts, then derivation totals) of a monomial."""
    out = [0] * (n + m)
    for g, e in mono:
        out[g.var] += e
        for j, k in enumerate(g.op):
            out[n + j] += e * k
    return tuple(out)


def monomial_key(mono: Monomial, n: int, m: int) -> tuple:
    """Sort key realising the total monomial order (ascending)."""
    factors = sorted((generator_key(g) for g, e in mono for _ in range(e)), reverse=True)
    return (monomial_degree(mono), multidegree(mono, n, m), tuple(factors))


def compare_monomials(u: Monomial, v: Monomial, n: int, m: int) -> int:
    """Return -1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    ku, kv = monomial_key(u, n, m), monomial_key(v, n, m)
    return (ku > kv) - (ku < kv)


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga == gb:
            out.append((ga, ea + eb))
            i += 1
            j += 1
        elif ga < gb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def make_monomial(factors: Iterable[tuple[DiffVar, int]]) -> Monomial:
    """Build a canonical monomial from (generator, exponent) pairs, merging repeats."""
    acc: dict[DiffVar, int] = {}
    for g, e in factors:
        g = DiffVar(int(g[0]), tuple(int(k) for k in g[1]))
        if e < 0:
            raise ParameterError("negative exponent in monomial")
        if e:
            acc[g] = acc.get(g, 0) + e
    return tuple(sorted(acc.items()))


def _shift(g: DiffVar, i: int) -> DiffVar:
    op = list(g.op)
    op[i] += 1
    return DiffVar(g.var, tuple(op))


def _monomial_derivative(mono: Monomial, i: int) -> Iterator[tuple[Monomial, int]]:
    """Leibniz expansion of d_i applied to a monomial."""
    for idx, (g, e) in enumerate(mono):
        g2 = _shift(g, i)
        rest = mono[:idx] + (((g, e - 1),) if e > 1 else ()) + mono[idx + 1:]
        yield monomial_mul(rest, ((g2, 1),)), e


def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class DiffPolynomial:
    """Immutable element of Q{x_1..x_n} with ``m`` derivations.

    Supports ``+ - * **`` with other polynomials of the same ambient and with
    ``int``/``Fraction`` scalars.  Equality is exact; ``p == 0`` tests for
    zero.
    """

    __slots__ = ("n", "m", "_terms", "_hash", "_deg")

    def __init__(self, n: int, m: int, terms: Mapping | Iterable | None = None):
        if n < 0 or m < 0:
            raise ParameterError(f"invalid ambient (n={n}, m={m})")
        self.n = n
        self.m = m
        acc: dict[Monomial, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, c in items:
                mono = make_monomial(mono)
                for g, _ in mono:
                    if not 0 <= g.var < n or len(g.op) != m or min(g.op, default=0) < 0:
                        raise ParameterError(f"generator {g} outside ambient (n={n}, m={m})")
                acc[mono] = acc.get(mono, Fraction(0)) + _coerce_scalar(c)
        self._terms = {k: v for k, v in acc.items() if v}
        self._hash = None
        self._deg = None

    @classmethod
    def _raw(cls, n: int, m: int, terms: dict) -> "DiffPolynomial":
        # caller guarantees canonical monomials and no zero coefficients
        obj = cls.__new__(cls)
        obj.n, obj.m, obj._terms = n, m, terms
        obj._hash = None
        obj._deg = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, m: int) -> "DiffPolynomial":
        return cls._raw(n, m, {})

    @classmethod
    def const(cls, n: int, m: int, c: Scalar) -> "DiffPolynomial":
        c = _coerce_scalar(c)
        return cls._raw(n, m, {UNIT: c} if c else {})

    @classmethod
    def one(cls, n: int, m: int) -> "DiffPolynomial":
        return cls.const(n, m, 1)

    @classmethod
    def gen(cls, n: int, m: int, var: int, op: Sequence[int] | None = None) -> "DiffPolynomial":
        """The generator x_var^op (``op`` defaults to the identity operator)."""
        op = tuple(op) if op is not None else (0,) * m
        if not 0 <= var < n:
            raise ParameterError(f"variable index {var} out of range for n={n}")
        if len(op) != m or min(op, default=0) < 0:
            raise ParameterError(f"operator {op} does not have {m} non-negative entries")
        return cls._raw(n, m, {((DiffVar(var, op), 1),): Fraction(1)})

    @classmethod
    def from_monomial(cls, n: int, m: int, mono: Monomial, c: Scalar = 1) -> "DiffPolynomial":
        return cls(n, m, {mono: c})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.n, self.m)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def sorted_terms(self, descending: bool = True) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order (greatest monomial first by default)."""
        n, m = self.n, self.m
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0], n, m), reverse=descending)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(mono == UNIT for mono in self._terms)

    def constant_coefficient(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(make_monomial(mono), Fraction(0))

    def generators(self) -> set[DiffVar]:
        return {g for mono in self._terms for g, _ in mono}

    def variables(self) -> set[int]:
        return {g.var for g in self.generators()}

    def deg(self) -> Degree:
        if self._deg is None:
            self._deg = max((monomial_degree(mono) for mono in self._terms), default=BOTTOM)
        return self._deg

    def min_deg(self) -> Degree:
        return min((monomial_degree(mono) for mono in self._terms), default=BOTTOM)

    def _weight(self, w: Sequence[int]):
        n, m = self.n, self.m
        if len(w) != n + m:
            raise ParameterError(f"weight vector has length {len(w)}, expected {n + m}")
        wv, wd = tuple(w[:n]), tuple(w[n:])

        def weight(mono: Monomial) -> int:
            return sum(e * (wv[g.var] + sum(a * b for a, b in zip(wd, g.op))) for g, e in mono)

        return weight

    def deg_w(self, w: Sequence[int]) -> Degree:
        weight = self._weight(w)
        return max((weight(mono) for mono in self._terms), default=BOTTOM)

    def leading_part(self, w: Sequence[int] | None = None) -> "DiffPolynomial":
        """Sum of the terms of maximal w-degree (w defaults to all ones)."""
        if not self._terms:
            raise DomainError("leading part of the zero polynomial is undefined")
        weight = self._weight(w) if w is not None else monomial_degree
        top = max(weight(mono) for mono in self._terms)
        return DiffPolynomial._raw(self.n, self.m, {k: v for k, v in self._terms.items() if weight(k) == top})

    def homogeneous_part(self, d: int) -> "DiffPolynomial":
        """Terms of (ordinary) degree exactly ``d``."""
        return DiffPolynomial._raw(self.n, self.m, {k: v for k, v in self._terms.items() if monomial_degree(k) == d})

    def is_homogeneous(self, w: Sequence[int] | None = None) -> bool:
        if not self._terms:
            return True
        weight = self._weight(w) if w is not None else monomial_degree
        return len({weight(mono) for mono in self._terms}) == 1

    def leader(self) -> DiffVar:
        gens = self.generators()
        if not gens:
            raise DomainError("a constant has no leader")
        return max(gens, key=generator_key)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "DiffPolynomial":
        if isinstance(other, DiffPolynomial):
            if other.n != self.n or other.m != self.m:
                raise ParameterError(f"ambient mismatch: (n={self.n}, m={self.m}) vs (n={other.n}, m={other.m})")
            return other
        return DiffPolynomial.const(self.n, self.m, _coerce_scalar(other))

    def __add__(self, other) -> "DiffPolynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            small, big = self._terms, other._terms
        else:
            small, big = other._terms, self._terms
        out = dict(big)
        for k, v in small.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return DiffPolynomial._raw(self.n, self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPolynomial":
        return DiffPolynomial._raw(self.n, self.m, {k: -v for k, v in self._terms.items()})

    def __pos__(self) -> "DiffPolynomial":
        return self

    def __sub__(self, other) -> "DiffPolynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "DiffPolynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "DiffPolynomial":
        c = _coerce_scalar(c)
        if not c:
            return DiffPolynomial.zero(self.n, self.m)
        return DiffPolynomial._raw(self.n, self.m, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "DiffPolynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, DiffPolynomial):
            return NotImplemented
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return DiffPolynomial.zero(self.n, self.m)
        bound = get_limits().max_degree
        if self.deg() + other.deg() > bound:
            raise ResourceError(f"product degree {self.deg() + other.deg()} exceeds max_degree={bound}")
        out: dict[Monomial, Fraction] = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                k = monomial_mul(ka, kb)
                out[k] = out.get(k, 0) + va * vb
        return DiffPolynomial._raw(self.n, self.m, {k: v for k, v in out.items() if v})

    def __rmul__(self, other) -> "DiffPolynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "DiffPolynomial":
        if not isinstance(e, int) or e < 0:
            raise ParameterError(f"exponent must be a non-negative integer, got {e!r}")
        result = DiffPolynomial.one(self.n, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPolynomial):
            return self.n == other.n and self.m == other.m and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return not self._terms
            return self._terms == {UNIT: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.m, frozenset(self._terms.items())))
        return self._hash

    # -- differential structure --------------------------------------------

    def derive(self, i: int) -> "DiffPolynomial":
        """Apply the derivation d_i (0-based)."""
        if not 0 <= i < self.m:
            raise ParameterError(f"derivation index {i} out of range for m={self.m}")
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            for k, e in _monomial_derivative(mono, i):
                out[k] = out.get(k, 0) + c * e
        return DiffPolynomial._raw(self.n, self.m, {k: v for k, v in out.items() if v})

    def derive_op(self, op: Sequence[int]) -> "DiffPolynomial":
        """Apply the operator d_1^{op[0]} ... d_m^{op[m-1]}."""
        if len(op) != self.m or min(op, default=0) < 0:
            raise ParameterError(f"operator {tuple(op)} does not have {self.m} non-negative entries")
        p = self
        for i, k in enumerate(op):
            for _ in range(k):
                p = p.derive(i)
        return p

    # -- printing ---------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        from .expr import format_poly

        return format_poly(self, names)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"DiffPolynomial(n={self.n}, m={self.m}, '{self.to_str()}')"


# ---------------------------------------------------------------------------
# functional interface
# ---------------------------------------------------------------------------


def add(p: DiffPolynomial, q: DiffPolynomial) -> DiffPolynomial:
    return p + q


def mul(p: DiffPolynomial, q: DiffPolynomial) -> DiffPolynomial:
    return p * q


def derive(p: DiffPolynomial, i: int) -> DiffPolynomial:
    return p.derive(i)


def derive_op(p: DiffPolynomial, op: Sequence[int]) -> DiffPolynomial:
    return p.derive_op(op)


def deg(p: DiffPolynomial) -> Degree:
    return p.deg()


def deg_w(p: DiffPolynomial, w: Sequence[int]) -> Degree:
    return p.deg_w(w)


def leading_part(p: DiffPolynomial, w: Sequence[int] | None = None) -> DiffPolynomial:
    return p.leading_part(w)


def leader(p: DiffPolynomial) -> DiffVar:
    return p.leader()


class _Substituter:
    """Caches f_j^theta and its powers while evaluating g(f_1, ..., f_s)."""

    def __init__(self, targets: Sequence[DiffPolynomial]):
        self.targets = targets
        self._gens: dict[DiffVar, DiffPolynomial] = {}
        self._pows: dict[tuple[DiffVar, int], DiffPolynomial] = {}

    def generator(self, g: DiffVar) -> DiffPolynomial:
        p = self._gens.get(g)
        if p is None:
            op = g.op
            if any(op):
                # derive from the nearest cached lower operator
                i = next(j for j, k in enumerate(op) if k)
                lower = list(op)
                lower[i] -= 1
                p = self.generator(DiffVar(g.var, tuple(lower))).derive(i)
            else:
                p = self.targets[g.var]
            self._gens[g] = p
        return p

    def power(self, g: DiffVar, e: int) -> DiffPolynomial:
        key = (g, e)
        p = self._pows.get(key)
        if p is None:
            base = self.generator(g)
            p = base if e == 1 else self.power(g, e - 1) * base
            self._pows[key] = p
        return p

    def monomial(self, mono: Monomial, c: Fraction) -> DiffPolynomial:
        t0 = self.targets[0]
        term = DiffPolynomial.const(t0.n, t0.m, c)
        for g, e in mono:
            term = term * self.power(g, e)
        return term


def substitute(g: DiffPolynomial, targets: Sequence[DiffPolynomial]) -> DiffPolynomial:
    """Evaluate g(f_1, ..., f_s): each z_j^theta becomes theta(f_j).

    ``g`` lives in an algebra with ``s = len(targets)`` indeterminates and the
    same number of derivations as the targets.  The map is the unique
    Q-algebra homomorphism commuting with the derivations.
    """
    targets = list(targets)
    if len(targets) != g.n:
        raise ParameterError(f"substitute expects {g.n} targets, got {len(targets)}")
    if not targets:
        raise ParameterError("substitute needs at least one target")
    n, m = targets[0].n, targets[0].m
    for t in targets:
        if (t.n, t.m) != (n, m):
            raise ParameterError("substitution targets must share an ambient")
    if g.m != m:
        raise ParameterError(f"derivation count mismatch: g has m={g.m}, targets m={m}")
    sub = _Substituter(targets)
    out: dict[Monomial, Fraction] = {}
    for mono, c in g._terms.items():
        for k, v in sub.monomial(mono, c)._terms.items():
            out[k] = out.get(k, 0) + v
    return DiffPolynomial._raw(n, m, {k: v for k, v in out.items() if v})

"""Sparse multivariate polynomials with cyclotomic coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycMatrix, CyclotomicNumber

Exponent = tuple[int, ...]


def grlex_key(e: Exponent) -> tuple:
    """Sort key putting graded-lex larger monomials first (x1 > x2 > ...)."""
    return (-sum(e), tuple(-x for x in e))


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree, graded-lex descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out: list[Exponent] = []

    def rec(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    rec([], degree, nvars)
    return out


class Polynomial:
    __slots__ = ("nvars", "order", "terms")

    def __init__(self, nvars: int, order: int, terms: Mapping[Exponent, CyclotomicNumber] | None = None):
        self.nvars = nvars
        self.order = order
        self.terms: dict[Exponent, CyclotomicNumber] = {}
        for e, c in (terms or {}).items():
            if not isinstance(c, CyclotomicNumber):
                c = CyclotomicNumber.rational(order, c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def variable(cls, i: int, nvars: int, order: int = 1) -> "Polynomial":
        e = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, order, {e: CyclotomicNumber.rational(order, 1)})

    @classmethod
    def constant(cls, value, nvars: int, order: int = 1) -> "Polynomial":
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def _from_dict(cls, nvars: int, order: int, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars, p.order, p.terms = nvars, order, terms
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._from_dict(self.nvars, self.order, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._from_dict(self.nvars, self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c: CyclotomicNumber | int | Fraction) -> "Polynomial":
        is_zero = c.is_zero() if isinstance(c, CyclotomicNumber) else c == 0
        if is_zero:
            return Polynomial(self.nvars, self.order)
        return Polynomial._from_dict(self.nvars, self.order, {e: x * c for e, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        out: dict[Exponent, CyclotomicNumber] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                out[e] = v
        return Polynomial._from_dict(self.nvars, self.order, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.constant(1, self.nvars, self.order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def lift(self, order: int) -> "Polynomial":
        if order == self.order:
            return self
        return Polynomial._from_dict(self.nvars, order, {e: c.lift(order) for e, c in self.terms.items()})

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable i by values[i]."""
        if len(values) != self.nvars:
            raise ValueError("substitution needs one value per variable")
        nv = values[0].nvars if values else 0
        out = Polynomial(nv, self.order)
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in cache:
                cache[key] = Polynomial.constant(1, nv, self.order) if k == 0 else power(i, k - 1) * values[i]
            return cache[key]

        for e, c in self.terms.items():
            term = Polynomial.constant(c, nv, self.order)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def act(self, m: CycMatrix) -> "Polynomial":
        """The polynomial x -> f(m x)."""
        forms = linear_forms(m)
        return self.substitute(forms)

    def sorted_terms(self) -> list[tuple[Exponent, CyclotomicNumber]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def leading_monomial(self) -> Exponent:
        return min(self.terms, key=grlex_key)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(_coeff_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_coeff_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()})"


def _coeff_str(c: CyclotomicNumber) -> str:
    s = str(c)
    return s if c.is_rational() else f"({s})"


def linear_forms(m: CycMatrix) -> list[Polynomial]:
    """Row i of m as the linear form sum_j m[i][j] x_j."""
    n = m.dim
    out = []
    for row in m.rows:
        terms = {tuple(int(k == j) for k in range(n)): x for j, x in enumerate(row) if x}
        out.append(Polynomial._from_dict(n, m.order, terms))
    return out


def from_monomial(e: Iterable[int], order: int = 1, coeff=1) -> Polynomial:
    e = tuple(e)
    return Polynomial(len(e), order, {e: coeff})

"""Exact arithmetic in Q(zeta_N), power basis modulo the N-th cyclotomic
polynomial, plus dense and sparse linear algebra over it."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Hashable, Iterable, Sequence

from .errors import CapExceeded

DEFAULT_ORDER_CEILING = 120


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def _poly_divmod_int(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact quotient of integer polynomials (low-to-high), den monic."""
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]
        if c:
            quot[k - dq] = c
            for j, d in enumerate(den):
                num[k - dq + j] -= c * d
    assert not any(num), "division was not exact"
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^k mod Phi_n for k = 0 .. 2*phi(n) - 2 (enough for one product)."""
    phi = totient(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [Fraction(0)] * phi
    cur[0] = Fraction(1)
    for _ in range(max(2 * phi - 1, 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            cur = [c - top * poly[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce(order: int, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    phi = totient(order)
    c = [Fraction(x) for x in coeffs]
    if len(c) <= phi:
        return tuple(c + [Fraction(0)] * (phi - len(c)))
    poly = cyclotomic_polynomial(order)
    for k in range(len(c) - 1, phi - 1, -1):
        top = c[k]
        if top:
            for j in range(phi + 1):
                c[k - phi + j] -= top * poly[j]
    return tuple(c[:phi])


class CyclotomicNumber:
    """An element of Q(zeta_N) in the power basis 1, z, ..., z^(phi(N)-1)."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Iterable[Fraction | int | str] = ()):
        self.order = order
        self.coeffs = _reduce(order, [Fraction(x) for x in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, order: int, coeffs: tuple[Fraction, ...]) -> "CyclotomicNumber":
        obj = cls.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, order: int, value: Fraction | int) -> "CyclotomicNumber":
        return cls._raw(order, (Fraction(value),) + (Fraction(0),) * (totient(order) - 1))

    @classmethod
    def zeta(cls, order: int, k: int = 1) -> "CyclotomicNumber":
        k %= order
        return cls(order, [0] * k + [1])

    def _coerce(self, other: object) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(f"mixed cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.order, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.order, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        phi = len(self.coeffs)
        if phi == 1:
            return CyclotomicNumber._raw(self.order, (self.coeffs[0] * o.coeffs[0],))
        if self.is_rational():
            return o * self.coeffs[0]
        if o.is_rational():
            return self * o.coeffs[0]
        table = _power_table(self.order)
        out = [Fraction(0)] * phi
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if not b:
                    continue
                ab = a * b
                if i + j < phi:
                    out[i + j] += ab
                else:
                    for t, v in enumerate(table[i + j]):
                        if v:
                            out[t] += ab * v
        return CyclotomicNumber._raw(self.order, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Inverse via the extended Euclidean algorithm against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.rational(self.order, 1 / self.coeffs[0])
        # invariant: r_i == s_i * a (mod Phi)
        r0 = [Fraction(x) for x in cyclotomic_polynomial(self.order)]
        r1 = _trim(list(self.coeffs))
        s0: list[Fraction] = []
        s1 = [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        c = r1[0]
        return CyclotomicNumber(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.rational(self.order, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.order, self.coeffs))
        return self._hash

    def lift(self, order: int) -> "CyclotomicNumber":
        """Image under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M^(M/N)."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        if self.is_rational():
            return CyclotomicNumber.rational(order, self.coeffs[0])
        out = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, a in enumerate(self.coeffs):
            out[i * step] = a
        return CyclotomicNumber(order, out)

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def serialize(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            mono = "z" if k == 1 else f"z^{k}"
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.order}, [{', '.join(map(str, self.coeffs))}])"


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return q, _trim(a[: len(b) - 1] or [Fraction(0)])


def cyc_add(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a + b


def cyc_mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    return a * b


def cyc_inv(a: CyclotomicNumber) -> CyclotomicNumber:
    return a.inverse()


def check_ceiling(order: int, ceiling: int = DEFAULT_ORDER_CEILING) -> int:
    if order > ceiling:
        raise CapExceeded(f"cyclotomic order {order} exceeds the ceiling {ceiling}")
    return order


# -- matrices ---------------------------------------------------------------


class CycMatrix:
    """Square matrix over Q(zeta_N) with hashable, canonical entries."""

    __slots__ = ("dim", "order", "rows", "_hash")

    def __init__(self, order: int, rows: Sequence[Sequence[CyclotomicNumber | int | Fraction]]):
        self.order = order
        self.dim = len(rows)
        out = []
        for r in rows:
            if len(r) != self.dim:
                raise ValueError("matrix must be square")
            out.append(tuple(x if isinstance(x, CyclotomicNumber) else CyclotomicNumber.rational(order, x) for x in r))
        for r in out:
            for x in r:
                if x.order != order:
                    raise ValueError("matrix entries have mixed cyclotomic orders")
        self.rows = tuple(out)
        self._hash = None

    @classmethod
    def identity(cls, dim: int, order: int = 1) -> "CycMatrix":
        one = CyclotomicNumber.rational(order, 1)
        zero = CyclotomicNumber.rational(order, 0)
        return cls(order, [[one if i == j else zero for j in range(dim)] for i in range(dim)])

    @classmethod
    def diagonal(cls, order: int, entries: Sequence[CyclotomicNumber | int]) -> "CycMatrix":
        n = len(entries)
        return cls(order, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __mul__(self, other: "CycMatrix") -> "CycMatrix":
        return mat_mul(self, other)

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return CycMatrix(self.order, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "CycMatrix":
        return CycMatrix(self.order, [[-a for a in r] for r in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, CycMatrix) and self.order == other.order and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def key(self) -> tuple:
        """Canonical serialisation: reduced coefficient vectors, row-major."""
        return (self.order, tuple(tuple(x.coeffs for x in r) for r in self.rows))

    def is_identity(self) -> bool:
        return all((x == 1) if i == j else x.is_zero() for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def apply(self, v: Sequence[CyclotomicNumber]) -> list[CyclotomicNumber]:
        zero = CyclotomicNumber.rational(self.order, 0)
        return [sum((a * b for a, b in zip(r, v) if a and b), zero) for r in self.rows]

    def lift(self, order: int) -> "CycMatrix":
        if order == self.order:
            return self
        return CycMatrix(order, [[x.lift(order) for x in r] for r in self.rows])

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.order, [list(c) for c in zip(*self.rows)] if self.dim else [])

    def __repr__(self) -> str:
        return "CycMatrix(" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + ")"


def mat_mul(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    if a.order != b.order or a.dim != b.dim:
        raise ValueError("matrix order/dimension mismatch")
    n = a.dim
    zero = CyclotomicNumber.rational(a.order, 0)
    cols = list(zip(*b.rows)) if n else []
    out = []
    for r in a.rows:
        nz = [(k, x) for k, x in enumerate(r) if x]
        out.append(tuple(sum((x * col[k] for k, x in nz if col[k]), zero) for col in cols))
    m = CycMatrix.__new__(CycMatrix)
    m.order, m.dim, m.rows, m._hash = a.order, n, tuple(out), None
    return m


def rref(rows: Sequence[Sequence[CyclotomicNumber]]) -> tuple[list[list[CyclotomicNumber]], list[int]]:
    """Reduced row echelon form over the field; returns (nonzero rows, pivots)."""
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv if x else x for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: CycMatrix | Sequence[Sequence[CyclotomicNumber]]) -> int:
    rows = m.rows if isinstance(m, CycMatrix) else m
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[CyclotomicNumber]], ncols: int, order: int) -> list[list[CyclotomicNumber]]:
    """Basis of {x : rows @ x == 0}, one vector per free column, in RREF."""
    zero = CyclotomicNumber.rational(order, 0)
    one = CyclotomicNumber.rational(order, 1)
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return rref(basis)[0] if basis else []


def mat_inv(m: CycMatrix) -> CycMatrix:
    n = m.dim
    zero = CyclotomicNumber.rational(m.order, 0)
    one = CyclotomicNumber.rational(m.order, 1)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m.rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return CycMatrix(m.order, [r[n:] for r in red])


class SparseEchelon:
    """Incrementally maintained reduced echelon basis of sparse vectors.

    Vectors are dicts from hashable column keys to nonzero field elements.
    ``sort_key`` orders columns; the pivot of a row is its smallest column.
    """

    def __init__(self, sort_key=None):
        self.sort_key = sort_key or (lambda c: c)
        self.rows: dict[Hashable, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        for col in sorted((c for c in v if c in self.rows), key=self.sort_key):
            if col not in v:
                continue
            f = v[col]
            for c, x in self.rows[col].items():
                nv = v.get(c)
                nv = -(f * x) if nv is None else nv - f * x
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)
            # pivot columns of other rows never appear in a stored row, so
            # reducing in ascending order never reintroduces earlier pivots
        return v

    def add(self, vec: dict) -> dict | None:
        """Insert vec; returns its normalised reduced form, or None if dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        piv = min(v, key=self.sort_key)
        inv = v[piv].inverse()
        v = {c: x * inv for c, x in v.items()}
        for col, row in self.rows.items():
            f = row.get(piv)
            if f:
                for c, x in v.items():
                    nv = row.get(c)
                    nv = -(f * x) if nv is None else nv - f * x
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        self.rows[piv] = v
        return v

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[dict]:
        """Rows sorted by pivot."""
        return [self.rows[p] for p in sorted(self.rows, key=self.sort_key)]

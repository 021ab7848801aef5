"""Exact arithmetic in cyclotomic integer rings Z[zeta_m].

Every character sum in this package takes values in Z[zeta_m] for a small
root order m (the residue characteristic p, the unit group order q-1, or
their lcm).  An element is stored as an integer coordinate vector on the
power basis 1, zeta, ..., zeta^(phi(m)-1), reduced modulo the m-th
cyclotomic polynomial.  Equality is therefore a tuple comparison and all
identity checks are exact.  Floating point appears only in
:meth:`CycElem.embed`, which is for display and sanity bounds, never for
equality decisions.

Elements of different orders are compared and combined by promoting both
to Z[zeta_lcm] (index-stretching the exponents), so mixed expressions such
as Gauss-sum products against Kloosterman sums live in one common ring.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _poly_divmod_exact(f: list[int], g: list[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of f by g over Z; every division step must be exact."""
    f = list(f)
    dg = len(g) - 1
    lead = g[-1]
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c == 0:
            continue
        if c % lead:
            raise ArithmeticError("non-exact polynomial division")
        c //= lead
        q[i - dg] = c
        for j, b in enumerate(g):
            f[i - dg + j] -= c * b
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return q, f


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Ascending coefficients of Phi_m, computed as (x^m - 1) / prod_{d|m, d<m} Phi_d."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod_exact(num, list(cyclotomic_polynomial(d)))
            assert all(c == 0 for c in rem)
    return tuple(num)


@lru_cache(maxsize=None)
def _power_rows(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k is the coordinate vector of x^k mod Phi_m, for 0 <= k < max(m, 2*phi(m)-1)."""
    phi = euler_phi(m)
    top = cyclotomic_polynomial(m)
    rows: list[tuple[int, ...]] = []
    for k in range(max(m, 2 * phi - 1)):
        if k < phi:
            row = [0] * phi
            row[k] = 1
        else:
            prev = rows[k - 1]
            row = [0] + list(prev[: phi - 1])
            carry = prev[phi - 1]
            if carry:
                for i in range(phi):
                    row[i] -= carry * top[i]
        rows.append(tuple(row))
    return tuple(rows)


class CycElem:
    """An element of Z[zeta_m] in canonical power-basis coordinates."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        phi = euler_phi(m)
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coordinates for order {m}, got {len(coeffs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *args):
        raise AttributeError("CycElem is immutable")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_int(c: int, m: int = 1) -> "CycElem":
        v = [0] * euler_phi(m)
        v[0] = int(c)
        return CycElem(m, v)

    def promote(self, order: int) -> "CycElem":
        """Re-express this element in Z[zeta_order]; requires m | order."""
        if order == self.m:
            return self
        if order % self.m:
            raise ValueError(f"cannot promote order {self.m} into order {order}")
        stretch = order // self.m
        rows = _power_rows(order)
        out = [0] * euler_phi(order)
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * stretch) % order]
                for j, r in enumerate(row):
                    out[j] += c * r
        return CycElem(order, out)

    def _common(self, other: "CycElem") -> tuple["CycElem", "CycElem"]:
        if self.m == other.m:
            return self, other
        order = self.m * other.m // gcd(self.m, other.m)
        return self.promote(order), other.promote(order)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        a, b = self._common(other)
        return CycElem(a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __neg__(self):
        return CycElem(self.m, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        other = _coerce(other)
        a, b = self._common(other)
        phi = len(a.coeffs)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        rows = _power_rows(a.m)
        out = [0] * phi
        for k, c in enumerate(conv):
            if c:
                row = rows[k]
                for j, r in enumerate(row):
                    out[j] += c * r
        return CycElem(a.m, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in the integer ring")
        result = CycElem.from_int(1, self.m)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycElem":
        """Apply zeta_m -> zeta_m^(-1); complex conjugation under the standard embedding."""
        rows = _power_rows(self.m)
        out = [0] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(-i) % self.m]
                for j, r in enumerate(row):
                    out[j] += c * r
        return CycElem(self.m, out)

    # -- queries -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycElem.from_int(other)
        if not isinstance(other, CycElem):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # cross-order equality makes a consistent hash awkward; not needed

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_int(self) -> int:
        """The value as a rational integer, if it is one."""
        if any(self.coeffs[1:]):
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def embed(self) -> complex:
        """Numerical value at zeta_m = exp(2*pi*i/m).  Display only."""
        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(c * z**i for i, c in enumerate(self.coeffs) if c) + 0j

    def to_json(self) -> dict:
        w = self.embed()
        return {"m": self.m, "coeffs": list(self.coeffs), "re": w.real, "im": w.imag}

    def __repr__(self):
        if not any(self.coeffs):
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            else:
                mono = f"z{self.m}" if i == 1 else f"z{self.m}^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def _coerce(x) -> CycElem:
    if isinstance(x, CycElem):
        return x
    if isinstance(x, int):
        return CycElem.from_int(x)
    raise TypeError(f"cannot interpret {x!r} as a cyclotomic integer")


def root_of_unity(m: int, j: int = 1) -> CycElem:
    """zeta_m^j in canonical form."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    row = _power_rows(m)[j % m]
    return CycElem(m, row)


def zero(m: int = 1) -> CycElem:
    return CycElem.from_int(0, m)


def one(m: int = 1) -> CycElem:
    return CycElem.from_int(1, m)


def _frac_poly_divmod(f, g):
    f = list(f)
    dg = len(g) - 1
    q = [Fraction(0)] * max(len(f) - dg, 0)
    inv = Fraction(1) / g[-1]
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv
        if c:
            q[i - dg] = c
            for j, b in enumerate(g):
                f[i - dg + j] -= c * b
    while len(f) > 1 and not f[-1]:
        f.pop()
    return q, f


def div_exact(x: CycElem, y) -> CycElem:
    """x / y when y is nonzero and the quotient lies in Z[zeta]; error otherwise.

    Inversion happens in Q[x]/Phi_m (a field) by the extended Euclidean
    algorithm over Fraction coefficients; the result must come out integral.
    """
    y = _coerce(y)
    a, b = x._common(y)
    if b.is_zero():
        raise ZeroDivisionError("division by zero in Z[zeta]")
    phi_m = [Fraction(c) for c in cyclotomic_polynomial(a.m)]
    b_poly = [Fraction(c) for c in b.coeffs]
    while len(b_poly) > 1 and not b_poly[-1]:
        b_poly.pop()
    # extended Euclid on (Phi_m, b): s1*b == gcd (mod Phi_m), gcd a nonzero constant
    # since Phi_m is irreducible over Q
    r0, r1 = phi_m, b_poly
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1 and any(r1):
        q, r2 = _frac_poly_divmod(r0, r1)
        s2 = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - 1 - len(s0))
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    s2[i + j] -= qc * sc
        r0, r1 = r1, r2
        s0, s1 = s1, s2
    if not any(r1):
        raise ZeroDivisionError("division by zero in Z[zeta]")
    c = r1[0]
    inv_coeffs = [s / c for s in s1]
    _, inv_red = _frac_poly_divmod(inv_coeffs, phi_m)
    inv_red += [Fraction(0)] * (len(a.coeffs) - len(inv_red))
    # multiply a by the inverse, reduce, and demand integrality
    conv = [Fraction(0)] * (len(a.coeffs) + len(inv_red) - 1)
    for i, u in enumerate(a.coeffs):
        if u:
            for j, v in enumerate(inv_red):
                conv[i + j] += u * v
    _, red = _frac_poly_divmod(conv, phi_m)
    red += [Fraction(0)] * (len(a.coeffs) - len(red))
    out = []
    for v in red:
        if v.denominator != 1:
            raise ValueError("quotient is not integral in Z[zeta]")
        out.append(int(v))
    return CycElem(a.m, out)

"""Finite fields F_q (q = p^f, p an odd prime) with characters.

Fields are desk-scale: every element is enumerated at construction time and
discrete logarithms come from a precomputed table, which makes square
detection and multiplicative-character evaluation trivial.  The generator is
the smallest primitive element in a fixed deterministic element order, so
all downstream tables (character values, parametrizations) are reproducible
run to run.

Elements are coefficient vectors over F_p with respect to a monic
irreducible modulus; for f = 1 the modulus is trivial and elements are
plain residues.
"""

from __future__ import annotations

import itertools

from endoscope.cyclo import CycElem, root_of_unity

_FIELD_CACHE: dict = {}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _pmod(f: tuple, g: tuple, p: int) -> tuple:
    """f mod g over F_p; g monic."""
    f = list(f)
    dg = len(g) - 1
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] % p
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return tuple(c % p for c in f[:dg])


def _pmul(a: tuple, b: tuple, p: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _is_irreducible(modulus: tuple, p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..deg/2."""
    f = len(modulus) - 1
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = tuple(tail) + (1,)
            rem = _pmod(modulus, g, p)
            if not any(rem):
                return False
    return True


class Fq:
    """The field with q = p^f elements.  Construct through :func:`fq_new`."""

    __slots__ = ("p", "f", "q", "modulus", "elements", "generator", "_dlog", "_key")

    def __init__(self, p: int, f: int, modulus: tuple):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus
        self._key = (p, f, modulus)
        # deterministic element order: base-p value with the constant coefficient least significant
        reps = sorted(
            itertools.product(range(p), repeat=f),
            key=lambda t: sum(c * p**i for i, c in enumerate(t)),
        )
        self.elements = tuple(FqElem(self, r) for r in reps)
        self.generator = self._find_generator()
        self._dlog = {}
        x = self.one()
        for k in range(self.q - 1):
            self._dlog[x.rep] = k
            x = x * self.generator

    def _find_generator(self) -> "FqElem":
        for x in self.elements:
            if x.is_zero():
                continue
            order = 1
            y = x
            while not y.is_one():
                y = y * x
                order += 1
            if order == self.q - 1:
                return x
        raise AssertionError("no primitive element found")

    # -- element constructors ----------------------------------------------

    def element(self, v) -> "FqElem":
        if isinstance(v, FqElem):
            if v.parent._key != self._key:
                raise ValueError("element of a different field")
            return v
        if isinstance(v, int):
            rep = (v % self.p,) + (0,) * (self.f - 1)
            return FqElem(self, rep)
        rep = tuple(int(c) % self.p for c in v)
        if len(rep) != self.f:
            raise ValueError(f"expected {self.f} coefficients")
        return FqElem(self, rep)

    def zero(self) -> "FqElem":
        return self.element(0)

    def one(self) -> "FqElem":
        return self.element(1)

    def units(self) -> tuple:
        return tuple(x for x in self.elements if not x.is_zero())

    def __repr__(self):
        if self.f == 1:
            return f"F_{self.p}"
        return f"F_{self.q} = F_{self.p}[t]/{self._modulus_str()}"

    def _modulus_str(self):
        parts = []
        for i, c in enumerate(self.modulus):
            if c:
                parts.append("t^%d" % i if i > 1 else ("t" if i == 1 else str(c)))
        return "(" + "+".join(reversed(parts)) + ")"


class FqElem:
    """An element of an :class:`Fq`, as a reduced coefficient vector."""

    __slots__ = ("parent", "rep")

    def __init__(self, parent: Fq, rep: tuple):
        self.parent = parent
        self.rep = rep

    def _same_field(self, other) -> "FqElem":
        if isinstance(other, int):
            return self.parent.element(other)
        if not isinstance(other, FqElem) or other.parent._key != self.parent._key:
            raise ValueError(f"cannot combine {self!r} with {other!r}")
        return other

    def __add__(self, other):
        other = self._same_field(other)
        p = self.parent.p
        return FqElem(self.parent, tuple((a + b) % p for a, b in zip(self.rep, other.rep)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._same_field(other)
        p = self.parent.p
        return FqElem(self.parent, tuple((a - b) % p for a, b in zip(self.rep, other.rep)))

    def __rsub__(self, other):
        return self._same_field(other) - self

    def __neg__(self):
        p = self.parent.p
        return FqElem(self.parent, tuple((-a) % p for a in self.rep))

    def __mul__(self, other):
        other = self._same_field(other)
        F = self.parent
        if F.f == 1:
            return FqElem(F, ((self.rep[0] * other.rep[0]) % F.p,))
        prod = _pmul(self.rep, other.rep, F.p)
        return FqElem(F, _pmod(prod + (0,), F.modulus, F.p))

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("inverting 0 in a finite field")
        F = self.parent
        return self.parent.generator ** ((-fq_dlog(self)) % (F.q - 1))

    def __truediv__(self, other):
        return self * self._same_field(other).inverse()

    def __rtruediv__(self, other):
        return self._same_field(other) * self.inverse()

    def __pow__(self, e: int):
        result = self.parent.one()
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.parent.element(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.parent._key == other.parent._key and self.rep == other.rep

    def __hash__(self):
        return hash((self.parent._key, self.rep))

    def is_zero(self) -> bool:
        return not any(self.rep)

    def is_one(self) -> bool:
        return self.rep[0] == 1 and not any(self.rep[1:])

    def lift(self) -> int:
        """Integer representative in [0, p); prime-field elements only."""
        if any(self.rep[1:]):
            raise ValueError(f"{self!r} is not in the prime field")
        return self.rep[0]

    def __repr__(self):
        if self.parent.f == 1:
            return f"{self.rep[0]}"
        parts = []
        for i, c in enumerate(self.rep):
            if c:
                parts.append(str(c) if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
        return "+".join(parts) if parts else "0"


def fq_new(p: int, f: int = 1, modulus=None) -> Fq:
    """Construct (and intern) F_{p^f}.

    With no modulus given and f > 1, picks the lexicographically smallest
    irreducible monic polynomial, ordering candidates by their coefficient
    tuples (c_{f-1}, ..., c_1, c_0).
    """
    if not _is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if f < 1:
        raise ValueError("f must be positive")
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree f")
        if f > 1 and not _is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
    elif f == 1:
        modulus = (0, 1)
    else:
        for head in itertools.product(range(p), repeat=f):
            cand = tuple(reversed(head)) + (1,)
            if _is_irreducible(cand, p):
                modulus = cand
                break
    key = (p, f, modulus)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = Fq(p, f, modulus)
    return _FIELD_CACHE[key]


def fq_trace(x: FqElem) -> FqElem:
    """Tr(x) = sum of x^(p^i), returned in the prime field F_p."""
    F = x.parent
    total = x
    y = x
    for _ in range(F.f - 1):
        y = y**F.p
        total = total + y
    prime = fq_new(F.p, 1)
    return prime.element(total.rep[0]) if not any(total.rep[1:]) else _trace_bug(total)


def _trace_bug(t):  # pragma: no cover - the trace always lands in F_p
    raise AssertionError(f"trace {t!r} not in the prime field")


def fq_dlog(x: FqElem) -> int:
    """Exponent k with generator^k = x; table lookup."""
    if x.is_zero():
        raise ZeroDivisionError("dlog of 0 is undefined")
    return x.parent._dlog[x.rep]


def fq_is_square(x: FqElem) -> bool:
    if x.is_zero():
        raise ZeroDivisionError("square test expects a unit")
    return fq_dlog(x) % 2 == 0


def fq_sqrt(x: FqElem):
    """One square root of x, or None if x is not a square (the other root is its negative)."""
    if x.is_zero():
        raise ZeroDivisionError("square root expects a unit")
    d = fq_dlog(x)
    if d % 2:
        return None
    return x.parent.generator ** (d // 2)


class FqAddChar:
    """Additive character psi(x) = zeta_p^(Tr(c*x)) for a nonzero shift c."""

    __slots__ = ("field", "shift")

    def __init__(self, field: Fq, shift=1):
        self.field = field
        self.shift = field.element(shift)
        if self.shift.is_zero():
            raise ValueError("the shift must be nonzero (psi must be nontrivial)")

    def __call__(self, x) -> CycElem:
        x = self.field.element(x)
        t = fq_trace(self.shift * x).lift()
        return root_of_unity(self.field.p, t)

    def __repr__(self):
        return f"psi[shift={self.shift}] on {self.field}"


class FqMulChar:
    """Multiplicative character chi_j with chi_j(generator^t) = zeta_(q-1)^(j*t)."""

    __slots__ = ("field", "index")

    def __init__(self, field: Fq, index: int):
        self.field = field
        self.index = index % (field.q - 1)

    def is_trivial(self) -> bool:
        return self.index == 0

    def power(self, e: int) -> "FqMulChar":
        return FqMulChar(self.field, self.index * e)

    def __call__(self, x) -> CycElem:
        x = self.field.element(x)
        if x.is_zero():
            raise ZeroDivisionError("multiplicative character at 0")
        return root_of_unity(self.field.q - 1, self.index * fq_dlog(x))

    def __repr__(self):
        return f"chi[{self.index}] on {self.field}"

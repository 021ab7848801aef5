"""Gauss sums, generalized Kloosterman sums, and their identity suite.

Kloosterman sums ship with two independent evaluation strategies:

* ``filter`` -- enumerate all of F_q^n and keep tuples whose constrained
  power product equals a.  O(q^n); this is the oracle.
* ``dlog``   -- for a != 0, enumerate the first n-1 unit coordinates and
  solve x_n^(b_n) = a / prod(x_i^(b_i)) through discrete-log divisibility.

``strategy="check"`` runs both and demands exact agreement, which is how the
test suite cross-validates every identity below.

All values are exact elements of Z[zeta_p] (Kloosterman) or
Z[zeta_lcm(p, q-1)] (Gauss, Mellin transforms).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from endoscope.cyclo import CycElem, zero
from endoscope.errors import VerificationError
from endoscope.ffield import Fq, FqAddChar, FqElem, FqMulChar, fq_dlog


@dataclass(frozen=True, eq=False)
class KlSpec:
    """The data (psi, a, b_1, ..., b_n) of a generalized Kloosterman sum."""

    n: int
    exps: tuple
    a: FqElem
    psi: FqAddChar

    def __post_init__(self):
        if self.n < 1 or len(self.exps) != self.n:
            raise ValueError("need n >= 1 exponents")
        if any(b < 1 for b in self.exps):
            raise ValueError("exponents must be positive")
        if self.a.parent is not self.psi.field:
            raise ValueError("a and psi must live over the same field")


def gauss(chi: FqMulChar, psi: FqAddChar) -> CycElem:
    """G(chi, psi) = sum over units of chi(t) psi(t)."""
    if chi.field is not psi.field:
        raise ValueError("chi and psi must live over the same field")
    total = zero()
    for t in chi.field.units():
        total = total + chi(t) * psi(t)
    return total


def _kl_filter(spec: KlSpec) -> CycElem:
    F = spec.psi.field
    total = zero(F.p)
    for xs in itertools.product(F.elements, repeat=spec.n):
        prod = F.one()
        for x, b in zip(xs, spec.exps):
            prod = prod * x**b
        if prod == spec.a:
            s = F.zero()
            for x in xs:
                s = s + x
            total = total + spec.psi(s)
    return total


def _kl_dlog(spec: KlSpec) -> CycElem:
    F = spec.psi.field
    if spec.a.is_zero():
        raise ValueError("the dlog strategy needs a != 0")
    total = zero(F.p)
    n, exps = spec.n, spec.exps
    bn = exps[-1]
    g = gcd(bn, F.q - 1)
    step = (F.q - 1) // g
    bn_red = bn // g
    inv_bn = pow(bn_red, -1, step) if step > 1 else 0
    gen = F.generator
    for xs in itertools.product(F.units(), repeat=n - 1):
        rhs = spec.a
        s = F.zero()
        for x, b in zip(xs, exps):
            rhs = rhs / x**b
            s = s + x
        d = fq_dlog(rhs)
        if d % g:
            continue
        s0 = ((d // g) * inv_bn) % step if step > 1 else 0
        for k in range(g):
            xn = gen ** (s0 + k * step)
            total = total + spec.psi(s + xn)
    return total


def kloosterman(spec: KlSpec, strategy: str = "auto") -> CycElem:
    """Kl_a^n(psi; b_1, ..., b_n), exactly."""
    if strategy == "auto":
        strategy = "filter" if spec.a.is_zero() else "dlog"
    if strategy == "filter":
        return _kl_filter(spec)
    if strategy == "dlog":
        return _kl_dlog(spec)
    if strategy == "check":
        fast = _kl_filter(spec) if spec.a.is_zero() else _kl_dlog(spec)
        slow = _kl_filter(spec)
        if fast != slow:
            raise VerificationError(f"kloosterman strategies disagree on {spec}")
        return slow
    raise ValueError(f"unknown strategy {strategy!r}")


def kl_table(field: Fq, n: int, exps: tuple, psi: FqAddChar) -> dict:
    """All Kl_a at once: one pass over F_q^n, bucketed by the power product."""
    table = {a: zero(field.p) for a in field.elements}
    for xs in itertools.product(field.elements, repeat=n):
        prod = field.one()
        for x, b in zip(xs, exps):
            prod = prod * x**b
        s = field.zero()
        for x in xs:
            s = s + x
        table[prod] = table[prod] + psi(s)
    return table


def kl_sum_over_all(field: Fq, n: int, exps: tuple, psi: FqAddChar) -> tuple:
    """(sum over all a in F_q of Kl_a, sum over units only).

    The first is 0; subtracting Kl_0 = (-1)^(n-1) gives the unit sum (-1)^n.
    """
    table = kl_table(field, n, exps, psi)
    full = zero(field.p)
    for v in table.values():
        full = full + v
    unit = full - table[field.zero()]
    return full, unit


def kl_mellin(chi: FqMulChar, n: int, exps: tuple, psi: FqAddChar) -> tuple:
    """Mellin transform of a |-> Kl_a and the matching Gauss-sum product.

    Returns (direct, product) after asserting they agree: the direct sum
    sum_{a != 0} chi(a) Kl_a must equal prod_i G(chi^(b_i), psi).
    """
    field = psi.field
    table = kl_table(field, n, exps, psi)
    direct = zero(field.p)
    for a in field.units():
        direct = direct + chi(a) * table[a]
    product = CycElem.from_int(1)
    for b in exps:
        product = product * gauss(chi.power(b), psi)
    if direct != product:
        raise VerificationError(
            f"Mellin identity failed for chi={chi!r}, n={n}, exps={exps}: {direct} != {product}"
        )
    return direct, product


def verify_nonconstancy(field: Fq, n: int, exps: tuple, psi: FqAddChar) -> tuple:
    """A witness pair (a, a') of units with Kl_a != Kl_a'; must always exist."""
    table = kl_table(field, n, exps, psi)
    units = field.units()
    first = table[units[0]]
    for a in units[1:]:
        if table[a] != first:
            return units[0], a
    raise VerificationError(
        f"Kl_a constant on units for q={field.q}, n={n}, exps={exps}; this contradicts the Gauss-sum bound"
    )


@dataclass
class FourierUniqueness:
    """Outcome of testing Kl_{ta} == c * Kl_{tb} for all units t."""

    proportional: bool
    c: CycElem | None
    witness_t: FqElem | None


def verify_fourier_uniqueness(
    a: FqElem, b: FqElem, n: int, exps: tuple, psi: FqAddChar
) -> FourierUniqueness:
    """Test whether the a- and b-twisted Kloosterman families are proportional.

    Proportionality is decided by cross-multiplication (no division in the
    ring); when it holds the constant is recovered exactly and is forced to
    be 1 with a = b.
    """
    if a.is_zero() or b.is_zero():
        raise ValueError("a and b must be units")
    field = psi.field
    table = kl_table(field, n, exps, psi)
    units = field.units()
    # reference index: some t0 with Kl_{t0*b} != 0 (exists, else the Mellin
    # transform of the family would vanish against every character)
    t0 = next(t for t in units if not table[t * b].is_zero())
    for t in units:
        if table[t * a] * table[t0 * b] != table[t0 * a] * table[t * b]:
            return FourierUniqueness(proportional=False, c=None, witness_t=t)
    from endoscope.cyclo import div_exact

    c = div_exact(table[t0 * a], table[t0 * b])
    return FourierUniqueness(proportional=True, c=c, witness_t=None)


def standard_exponent_families(n: int) -> list:
    """The two exponent patterns exercised everywhere: all ones, and (1,2,...,2,1)."""
    fams = [(1,) * n]
    if n >= 2:
        fams.append((1,) + (2,) * (n - 2) + (1,))
    return fams


def verify_appendix(field: Fq, max_n: int, psi_shift=1) -> list:
    """Run the whole Gauss/Kloosterman identity suite over one field.

    Returns a list of (name, passed, detail) triples; every identity is an
    exact equality, so passed is simply its truth value.
    """
    psi = FqAddChar(field, psi_shift)
    items = []

    def check(name, ok, detail=""):
        items.append((name, bool(ok), detail))

    g_triv = gauss(FqMulChar(field, 0), psi)
    check(f"q={field.q} G(trivial)= -1", g_triv == CycElem.from_int(-1), repr(g_triv))
    for j in range(1, field.q - 1):
        chi = FqMulChar(field, j)
        gs = gauss(chi, psi)
        norm = gs * gs.conj()
        check(
            f"q={field.q} |G(chi_{j})|^2 = q",
            norm == CycElem.from_int(field.q),
            repr(norm),
        )

    for n in range(1, max_n + 1):
        for exps in standard_exponent_families(n):
            tag = f"q={field.q} n={n} exps={exps}"
            table = kl_table(field, n, exps, psi)
            kl0 = table[field.zero()]
            check(f"{tag} Kl_0 = (-1)^(n-1)", kl0 == CycElem.from_int((-1) ** (n - 1)), repr(kl0))
            full, unit = kl_sum_over_all(field, n, exps, psi)
            check(f"{tag} sum over all a = 0", full.is_zero(), repr(full))
            check(
                f"{tag} sum over units = (-1)^n",
                unit == CycElem.from_int((-1) ** n),
                repr(unit),
            )
            for j in range(field.q - 1):
                try:
                    kl_mellin(FqMulChar(field, j), n, exps, psi)
                    check(f"{tag} Mellin chi_{j}", True)
                except VerificationError as exc:
                    check(f"{tag} Mellin chi_{j}", False, str(exc))
            agree = all(
                kloosterman(KlSpec(n, exps, a, psi), "check") == table[a] for a in field.units()
            )
            check(f"{tag} strategies agree", agree)
            if field.q > 2:
                try:
                    verify_nonconstancy(field, n, exps, psi)
                    check(f"{tag} nonconstant on units", True)
                except VerificationError as exc:
                    check(f"{tag} nonconstant on units", False, str(exc))
    return items

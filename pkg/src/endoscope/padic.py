"""Fixed-precision p-adic scalars and dense matrices.

A scalar over the context ``Zp(p, K, E)`` represents a p-adic number x with
valuation >= -E as the pair (num, prec), meaning

    x == p**(-E) * num   (mod p**prec),      0 <= num < p**(prec+E),

together with an ``exact`` flag for values known to infinite precision
(integers, uniformizer powers, structural zeros), which keeps long matrix
computations from bleeding digits they never had to lose.  Every operation
tracks the worst-case absolute precision of its result; any query that needs
more digits than are guaranteed raises :class:`PrecisionError` instead of
ever answering wrongly.  E is the shift budget: inverting an element of
valuation v is possible only for v <= E, and a product whose valuation would
drop below -E is a hard error.

Valuation bookkeeping is what everything downstream leans on: Iwahori
membership tests, Eisenstein checks, and kernel solving are all phrased as
exact statements about valuations at the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from endoscope.errors import PrecisionError

_BIG = 10**9  # stand-in for "infinite" precision in min() computations


def _val_int(n: int, p: int) -> int:
    if n == 0:
        return _BIG
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Zp:
    """Arithmetic context: prime p, working precision K, shift budget E."""

    p: int
    K: int = 8
    E: int = 2

    def __post_init__(self):
        if self.K < 1 or self.E < 0:
            raise ValueError("need K >= 1 and E >= 0")

    # -- scalar constructors -------------------------------------------------

    def integer(self, c: int) -> "PadicScalar":
        return PadicScalar(self, c * self.p**self.E, self.K, exact=True)

    def zero(self) -> "PadicScalar":
        return self.integer(0)

    def one(self) -> "PadicScalar":
        return self.integer(1)

    def ppow(self, k: int) -> "PadicScalar":
        """p^k, exact; k >= -E."""
        if k < -self.E:
            raise PrecisionError(f"p^{k} is below the shift budget E={self.E}")
        return PadicScalar(self, self.p ** (self.E + k), self.K, exact=True)

    def teich(self, a) -> "PadicScalar":
        """Teichmueller lift: the unique (p-1)-st root of unity congruent to a mod p."""
        a_int = a if isinstance(a, int) else a.lift()
        a_int %= self.p
        if a_int == 0:
            raise ZeroDivisionError("Teichmueller lift of 0")
        mod = self.p**self.K
        x = a_int
        for _ in range(self.K + 1):
            nxt = pow(x, self.p, mod)
            if nxt == x:
                break
            x = nxt
        return PadicScalar(self, x * self.p**self.E, self.K, exact=False)


class PadicScalar:
    """One p-adic number at tracked absolute precision.  See module docstring."""

    __slots__ = ("ctx", "num", "prec", "exact")

    def __init__(self, ctx: Zp, num: int, prec: int, exact: bool):
        self.ctx = ctx
        self.exact = exact
        if exact:
            self.num = num
            self.prec = _BIG
        else:
            if prec < 1:
                raise PrecisionError("no trusted digits remain")
            # storing digits far beyond the working precision is pointless;
            # truncating the claim is always sound
            self.prec = min(prec, ctx.K + ctx.E + 16)
            self.num = num % ctx.p ** (self.prec + ctx.E)

    # -- helpers ---------------------------------------------------------------

    def _chk(self, other: "PadicScalar"):
        if self.ctx != other.ctx:
            raise ValueError("mixing scalars from different Zp contexts")

    def _vlow(self) -> int:
        """A certified lower bound for the valuation (prec when zero-at-precision)."""
        v = _val_int(self.num, self.ctx.p)
        if self.exact:
            return _BIG if self.num == 0 else v - self.ctx.E
        return min(v - self.ctx.E, self.prec)

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        self._chk(other)
        if self.exact and other.exact:
            return PadicScalar(self.ctx, self.num + other.num, 0, exact=True)
        prec = min(self.prec, other.prec)
        return PadicScalar(self.ctx, self.num + other.num, prec, exact=False)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __neg__(self):
        return PadicScalar(self.ctx, -self.num, self.prec, self.exact)

    def __mul__(self, other):
        other = self._coerce(other)
        self._chk(other)
        ctx = self.ctx
        if (self.exact and self.num == 0) or (other.exact and other.num == 0):
            return ctx.zero()
        t = self.num * other.num
        pE = ctx.p**ctx.E
        if t % pE:
            raise PrecisionError("product falls below the shift budget -E")
        t //= pE
        if self.exact and other.exact:
            return PadicScalar(ctx, t, 0, exact=True)
        prec = min(self._vlow() + other.prec, other._vlow() + self.prec)
        return PadicScalar(ctx, t, prec, exact=False)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        ctx = self.ctx
        if self.num == 0:
            if self.exact:
                raise ZeroDivisionError("inverting exact zero")
            raise PrecisionError("inverting a value that is zero at the working precision")
        v_num = _val_int(self.num, ctx.p)
        v = v_num - ctx.E
        if not self.exact and v >= self.prec:  # pragma: no cover - residues are reduced
            raise PrecisionError("valuation unresolved at the working precision")
        if v > ctx.E:
            raise PrecisionError(f"inverse would have valuation {-v} < -E = {-ctx.E}")
        m = ctx.K + max(v, 0) if self.exact else self.prec - v
        prec_out = ctx.K if self.exact else self.prec - 2 * v
        if prec_out < 1:
            raise PrecisionError("inverse has no trusted digits at this precision")
        u = (self.num // ctx.p**v_num) % ctx.p**m if not self.exact else self.num // ctx.p**v_num
        w = pow(u, -1, ctx.p**m)
        return PadicScalar(ctx, ctx.p ** (ctx.E - v) * w, prec_out, exact=False)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ctx.integer(other)
        if not isinstance(other, PadicScalar):
            raise TypeError(f"cannot interpret {other!r} as a p-adic scalar")
        return other

    def shifted(self, j: int) -> "PadicScalar":
        """Multiply by p^j (column/row rescaling helper)."""
        ctx = self.ctx
        if j >= 0:
            num = self.num * ctx.p**j
            return PadicScalar(ctx, num, self.prec + j if not self.exact else 0, self.exact)
        d = ctx.p ** (-j)
        if self.num % d:
            raise PrecisionError("downshift falls below the shift budget")
        return PadicScalar(ctx, self.num // d, self.prec + j if not self.exact else 0, self.exact)

    # -- queries -------------------------------------------------------------------

    def val(self):
        """Exact valuation; inf for exact zero, PrecisionError if unresolved."""
        if self.num == 0:
            if self.exact:
                return inf
            raise PrecisionError("valuation of a zero-at-precision value is unresolved")
        return _val_int(self.num, self.ctx.p) - self.ctx.E

    def val_at_least(self, k: int) -> bool:
        if self.num == 0:
            if self.exact or k <= self.prec:
                return True
            raise PrecisionError(f"cannot certify valuation >= {k} at precision {self.prec}")
        return _val_int(self.num, self.ctx.p) - self.ctx.E >= k

    def val_is(self, k: int) -> bool:
        return self.val_at_least(k) and not self.val_at_least(k + 1)

    def is_zero_at_precision(self, min_prec: int = 1) -> bool:
        if not self.exact and self.prec < min_prec:
            raise PrecisionError(f"only {self.prec} digits guaranteed, need {min_prec}")
        return self.num == 0

    def residue_mod(self, k: int = 1) -> int:
        """The image in O/p^k as an integer; requires valuation >= 0."""
        if not self.val_at_least(0):
            raise ValueError("negative valuation; not an integer")
        if not self.exact and self.prec < k:
            raise PrecisionError(f"need {k} digits, have {self.prec}")
        return (self.num // self.ctx.p**self.ctx.E) % self.ctx.p**k

    def equals(self, other, min_prec: int = 1) -> bool:
        return (self - self._coerce(other)).is_zero_at_precision(min_prec)

    def __repr__(self):
        ctx = self.ctx
        if self.num == 0:
            return "0" if self.exact else f"O({ctx.p}^{self.prec})"
        v = _val_int(self.num, ctx.p) - ctx.E
        u = self.num // ctx.p ** (v + ctx.E)
        if self.exact:
            return f"{u}*{ctx.p}^{v}" if v else f"{u}"
        u %= ctx.p ** (self.prec - v)
        body = f"{u}*{ctx.p}^{v}" if v else f"{u}"
        return f"{body} + O({ctx.p}^{self.prec})"


class PadicMatrix:
    """A dense matrix of :class:`PadicScalar` over one shared context."""

    __slots__ = ("ctx", "nrows", "ncols", "rows")

    def __init__(self, ctx: Zp, rows):
        self.ctx = ctx
        self.rows = tuple(tuple(self._lift(ctx, e) for e in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @staticmethod
    def _lift(ctx, e):
        if isinstance(e, int):
            return ctx.integer(e)
        if not isinstance(e, PadicScalar) or e.ctx != ctx:
            raise ValueError("entry from a different context")
        return e

    # -- constructors ------------------------------------------------------------

    @classmethod
    def identity(cls, ctx: Zp, n: int) -> "PadicMatrix":
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx: Zp, r: int, c: int) -> "PadicMatrix":
        return cls(ctx, [[0] * c for _ in range(r)])

    @classmethod
    def diagonal(cls, ctx: Zp, entries) -> "PadicMatrix":
        entries = list(entries)
        n = len(entries)
        z = ctx.zero()
        return cls(ctx, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    # -- algebra --------------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        self._shape_check(other)
        return PadicMatrix(
            self.ctx,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other):
        self._shape_check(other)
        return PadicMatrix(
            self.ctx,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self):
        return PadicMatrix(self.ctx, [[-a for a in r] for r in self.rows])

    def _shape_check(self, other):
        if not isinstance(other, PadicMatrix) or (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def __mul__(self, other):
        if isinstance(other, (int, PadicScalar)):
            s = PadicMatrix._lift(self.ctx, other) if isinstance(other, int) else other
            return PadicMatrix(self.ctx, [[a * s for a in r] for r in self.rows])
        if self.ncols != other.nrows:
            raise ValueError("inner dimension mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            out.append([_dot(r, c) for c in cols])
        return PadicMatrix(self.ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, PadicScalar)):
            return self * other
        return NotImplemented

    def scale_rows(self, scalars) -> "PadicMatrix":
        """diag(scalars) * self."""
        scalars = list(scalars)
        return PadicMatrix(self.ctx, [[s * a for a in r] for s, r in zip(scalars, self.rows)])

    def scale_cols(self, scalars) -> "PadicMatrix":
        """self * diag(scalars)."""
        scalars = list(scalars)
        return PadicMatrix(self.ctx, [[a * s for a, s in zip(r, scalars)] for r in self.rows])

    def transpose(self) -> "PadicMatrix":
        return PadicMatrix(self.ctx, list(zip(*self.rows)))

    def pow(self, e: int) -> "PadicMatrix":
        if self.nrows != self.ncols or e < 0:
            raise ValueError("pow needs a square matrix and e >= 0")
        result = PadicMatrix.identity(self.ctx, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def trace(self) -> PadicScalar:
        return _sum_scalars(self.ctx, (self.rows[i][i] for i in range(self.nrows)))

    # -- elimination-based operations --------------------------------------------------

    def inverse(self) -> "PadicMatrix":
        """Gauss-Jordan with minimal-valuation pivoting."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        a = [list(r) + [self.ctx.one() if i == j else self.ctx.zero() for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = _pick_pivot(a, col, col, n)
            if piv is None:
                raise PrecisionError("matrix is singular at the working precision")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [e * inv for e in a[col]]
            for i in range(n):
                if i != col and a[i][col].num != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return PadicMatrix(self.ctx, [r[n:] for r in a])

    def det(self) -> PadicScalar:
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        sign = 1
        acc = self.ctx.one()
        for col in range(n):
            piv = _pick_pivot(a, col, col, n)
            if piv is None:
                # a whole column is zero at precision: det is zero at precision
                prec = min(e.prec for r in a for e in r)
                prec = self.ctx.K if prec >= _BIG else prec
                return PadicScalar(self.ctx, 0, prec, exact=False)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                sign = -sign
            acc = acc * a[col][col]
            inv = a[col][col].inverse()
            for i in range(col + 1, n):
                if a[i][col].num != 0:
                    f = a[i][col] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return acc * sign

    # -- comparisons ---------------------------------------------------------------------

    def eq_at_precision(self, other, min_prec: int = 1) -> bool:
        self._shape_check(other)
        return all(
            (a - b).is_zero_at_precision(min_prec)
            for r1, r2 in zip(self.rows, other.rows)
            for a, b in zip(r1, r2)
        )

    def is_identity_at_precision(self, min_prec: int = 1) -> bool:
        return self.eq_at_precision(PadicMatrix.identity(self.ctx, self.nrows), min_prec)

    def __repr__(self):
        return "[" + "\n ".join("[" + ", ".join(repr(e) for e in r) + "]" for r in self.rows) + "]"


def _dot(row, col):
    it = iter(a * b for a, b in zip(row, col))
    total = next(it)
    for term in it:
        total = total + term
    return total


def _sum_scalars(ctx, xs):
    total = ctx.zero()
    for x in xs:
        total = total + x
    return total


def _pick_pivot(a, col, start_row, nrows):
    """Row index at or below start_row minimizing the (resolved) valuation in col."""
    best, best_v = None, None
    for i in range(start_row, nrows):
        e = a[i][col]
        if e.num == 0:
            continue
        v = e._vlow()
        if best_v is None or v < best_v:
            best, best_v = i, v
    return best


def teichmuller(ctx: Zp, a) -> PadicScalar:
    """Module-level alias for :meth:`Zp.teich`."""
    return ctx.teich(a)


def solve_kernel(m: PadicMatrix) -> list:
    """Basis of the right kernel of m at the working precision.

    Vectors are normalized to have entries in O with at least one unit entry.
    Entries that are zero at the working precision are treated as zero; the
    caller is responsible for deciding whether the resulting rank is the one
    the theory demands (and raising the precision if it is ambiguous).
    """
    ctx = m.ctx
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []  # (row, col)
    row = 0
    for col in range(nc):
        piv = _pick_pivot(a, col, row, nr)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = a[row][col].inverse()
        a[row] = [e * inv for e in a[row]]
        for i in range(nr):
            if i != row and a[i][col].num != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append((row, col))
        row += 1
        if row == nr:
            break
    pivot_cols = {c: r for r, c in pivots}
    free_cols = [c for c in range(nc) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        v = [ctx.zero()] * nc
        v[f] = ctx.one()
        for c, r in pivot_cols.items():
            v[c] = -a[r][f]
        # normalize: entries in O, not all in p
        vmin = min(e._vlow() for e in v if e.num != 0)
        if vmin < 0:
            v = [e.shifted(-vmin) for e in v]
        basis.append(tuple(v))
    return basis


def char_poly(m: PadicMatrix) -> list:
    """Coefficients c[0..n] (ascending) of det(t*I - m), by the Samuelson-Berkowitz
    division-free recurrence."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    ctx = m.ctx
    one_ = ctx.one()
    # descending coefficient vector of the 1x1 leading block
    coeffs = [one_, -m.rows[0][0]]
    for k in range(1, n):
        a = m.rows[k][k]
        row = m.rows[k][:k]
        col = [m.rows[i][k] for i in range(k)]
        # t_j sequence: 1, -a, -R C, -R A C, -R A^2 C, ...
        ts = [one_, -a]
        vec = col
        for _ in range(k - 1):
            ts.append(-_dot(row, vec))
            sub = [r[:k] for r in m.rows[:k]]
            vec = [_dot(sub_row, vec) for sub_row in sub]
        ts.append(-_dot(row, vec))
        new = [ctx.zero()] * (k + 2)
        for i, t in enumerate(ts):
            for j, c in enumerate(coeffs):
                if i + j <= k + 1:
                    new[i + j] = new[i + j] + t * c
        coeffs = new[: k + 2]
    return list(reversed(coeffs))


def is_eisenstein(coeffs) -> bool:
    """Eisenstein at p: unit leading coefficient, middle coefficients in p,
    constant term of valuation exactly 1."""
    coeffs = list(coeffs)
    if len(coeffs) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    lead, const, middle = coeffs[-1], coeffs[0], coeffs[1:-1]
    if not (lead.val_at_least(0) and not lead.val_at_least(1)):
        return False
    if not all(c.val_at_least(1) for c in middle):
        return False
    return const.val_at_least(1) and not const.val_at_least(2)

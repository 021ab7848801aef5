"""Iwahori filtrations and affine structure for GL_N(F) and SO_{2n+1}(F).

Everything here is phrased through explicit entry-wise valuation conditions
on matrices over a :class:`~endoscope.padic.Zp` context with residue field
F_p (so f = 1 throughout the group-level code).

GL_N conventions (the standard upper Iwahori of the fundamental alcove):

* I      -- units on the diagonal, integral above, divisible by p below;
* I+     -- diagonal in 1 + p, integral above, divisible below;
* I++    -- I+ with the first superdiagonal in p and the corner (N,1) in p^2.

The affine simple components of x in I+ are
(x_{12} mod p, ..., x_{N-1,N} mod p, x_{N1}/p mod p), and I++ is exactly
their joint kernel; x is affine generic when all N of them are nonzero.

SO_{2n+1} sits inside GL_{2n+1} as {g : g^t J g = J, det g = 1} for the
antidiagonal form J with alternating signs, and its Iwahori filtration is
the intersection with the GL_{2n+1} pattern above.  Its affine components
are (y_{12}, ..., y_{n,n+1}, y_{2n,1}/p) mod p: the type-B affine basis has
n+1 simple roots (the n upper-triangular simple positions plus the affine
root whose group sits at the linked entries (2n,1) and (2n+1,2)).  The
remaining superdiagonal entries carry no new data because the orthogonality
relation forces y_{i,i+1} = y_{2n+1-i,2n+2-i} mod p, so I_H++ is again the
kernel of the n+1 component functionals inside I_H+; the component map is
onto k^(n+1) (witnessed by the explicit root sections in
:func:`so_unipotent`), which pins the quotient size at q^(n+1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from endoscope.errors import PrecisionError
from endoscope.ffield import Fq, FqElem, fq_new
from endoscope.padic import PadicMatrix, PadicScalar, Zp


@dataclass(frozen=True)
class GLContext:
    """GL_N over the p-adic context; N >= 2."""

    N: int
    zp: Zp

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("need N >= 2")

    @property
    def size(self) -> int:
        return self.N

    def residue_field(self) -> Fq:
        return fq_new(self.zp.p)


@dataclass(frozen=True)
class SOContext:
    """Split SO_{2n+1} over the p-adic context; matrices have size 2n+1."""

    n: int
    zp: Zp

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    def residue_field(self) -> Fq:
        return fq_new(self.zp.p)


class IwahoriLevel(enum.Enum):
    NONE = "none"
    I = "I"
    I_PLUS = "I+"
    I_PLUSPLUS = "I++"


@lru_cache(maxsize=None)
def j_form(size: int, zp: Zp) -> PadicMatrix:
    """The antidiagonal form with J[i, size+1-i] = (-1)^(i-1) (1-based)."""
    rows = [[0] * size for _ in range(size)]
    for r in range(size):
        rows[r][size - 1 - r] = (-1) ** r
    return PadicMatrix(zp, rows)


def _j_inverse(size: int, zp: Zp) -> PadicMatrix:
    # J^2 = (-1)^(size-1) I, so J^-1 is J up to that sign
    j = j_form(size, zp)
    return j if size % 2 else -j


def theta(ctx: GLContext, g: PadicMatrix) -> PadicMatrix:
    """The outer automorphism g -> J (g^t)^(-1) J^(-1)."""
    j = j_form(ctx.N, ctx.zp)
    return j * g.transpose().inverse() * _j_inverse(ctx.N, ctx.zp)


def theta_inv(ctx: GLContext, g: PadicMatrix) -> PadicMatrix:
    """theta(g)^(-1) = J g^t J^(-1); avoids the matrix inversion."""
    j = j_form(ctx.N, ctx.zp)
    return j * g.transpose() * _j_inverse(ctx.N, ctx.zp)


def norm_theta(ctx: GLContext, g: PadicMatrix) -> PadicMatrix:
    """The twisted norm N(g) = g * theta(g)."""
    return g * theta(ctx, g)


def in_so(ctx: SOContext, h: PadicMatrix, min_prec: int = 2) -> bool:
    """Membership in SO_{2n+1} at the working precision: h^t J h = J, det h = 1."""
    if h.nrows != ctx.size or h.ncols != ctx.size:
        return False
    j = j_form(ctx.size, ctx.zp)
    if not (h.transpose() * j * h).eq_at_precision(j, min_prec):
        return False
    return h.det().equals(1, min_prec)


# -- special elements ---------------------------------------------------------


def phi(ctx: GLContext, a: FqElem) -> PadicMatrix:
    """The affine-Weyl generator with I_{N-1} on top and p*a in the corner;
    its N-th power is p*a times the identity."""
    if a.is_zero():
        raise ValueError("a must be a unit")
    zp = ctx.zp
    rows = [[zp.zero()] * ctx.N for _ in range(ctx.N)]
    for i in range(ctx.N - 1):
        rows[i][i + 1] = zp.one()
    rows[ctx.N - 1][0] = zp.ppow(1) * zp.teich(a)
    return PadicMatrix(zp, rows)


def phi_prime(ctx: SOContext, b: FqElem) -> PadicMatrix:
    """The order-two affine-Weyl generator of SO_{2n+1}: minus the antidiagonal
    permutation-like matrix with p^(-1) b^(-1) and p b in the corners."""
    if b.is_zero():
        raise ValueError("b must be a unit")
    zp = ctx.zp
    size = ctx.size
    rows = [[zp.zero()] * size for _ in range(size)]
    rows[0][size - 1] = -(zp.ppow(-1) * zp.teich(b.inverse()))
    for i in range(1, size - 1):
        rows[i][i] = zp.integer(-1)
    rows[size - 1][0] = -(zp.ppow(1) * zp.teich(b))
    return PadicMatrix(zp, rows)


# -- filtration membership ------------------------------------------------------


def _gl_pattern_level(g: PadicMatrix) -> IwahoriLevel:
    n = g.nrows
    one = g.ctx.one()
    for i in range(n):
        for j in range(n):
            e = g.rows[i][j]
            if i == j:
                if not (e.val_at_least(0) and not e.val_at_least(1)):
                    return IwahoriLevel.NONE
            elif i < j:
                if not e.val_at_least(0):
                    return IwahoriLevel.NONE
            else:
                if not e.val_at_least(1):
                    return IwahoriLevel.NONE
    if not all((g.rows[i][i] - one).val_at_least(1) for i in range(n)):
        return IwahoriLevel.I
    deeper = all(g.rows[i][i + 1].val_at_least(1) for i in range(n - 1))
    deeper = deeper and g.rows[n - 1][0].val_at_least(2)
    return IwahoriLevel.I_PLUSPLUS if deeper else IwahoriLevel.I_PLUS


def gl_level(ctx: GLContext, g: PadicMatrix) -> IwahoriLevel:
    """The deepest standard-filtration step containing g: I++ < I+ < I, else NONE."""
    if g.nrows != ctx.N or g.ncols != ctx.N:
        return IwahoriLevel.NONE
    return _gl_pattern_level(g)


def so_level(ctx: SOContext, h: PadicMatrix) -> IwahoriLevel:
    """As :func:`gl_level` for the SO_{2n+1} filtration (adds the group test)."""
    if h.nrows != ctx.size or h.ncols != ctx.size:
        return IwahoriLevel.NONE
    if not in_so(ctx, h):
        return IwahoriLevel.NONE
    return _gl_pattern_level(h)


def affine_components_gl(ctx: GLContext, g: PadicMatrix) -> tuple:
    """(x_12, ..., x_{N-1,N}, x_N1/p) mod p, for g in I+."""
    if gl_level(ctx, g) not in (IwahoriLevel.I_PLUS, IwahoriLevel.I_PLUSPLUS):
        raise ValueError("affine components are defined on I+ only")
    k = ctx.residue_field()
    comps = [k.element(g.rows[i][i + 1].residue_mod()) for i in range(ctx.N - 1)]
    comps.append(k.element(g.rows[ctx.N - 1][0].shifted(-1).residue_mod()))
    return tuple(comps)


def affine_components_so(ctx: SOContext, h: PadicMatrix) -> tuple:
    """(y_12, ..., y_{n,n+1}, y_{2n,1}/p) mod p, for h in I_H+."""
    if so_level(ctx, h) not in (IwahoriLevel.I_PLUS, IwahoriLevel.I_PLUSPLUS):
        raise ValueError("affine components are defined on I_H+ only")
    k = ctx.residue_field()
    comps = [k.element(h.rows[i][i + 1].residue_mod()) for i in range(ctx.n)]
    comps.append(k.element(h.rows[2 * ctx.n - 1][0].shifted(-1).residue_mod()))
    return tuple(comps)


def is_affine_generic_gl(ctx: GLContext, g: PadicMatrix) -> bool:
    return all(not c.is_zero() for c in affine_components_gl(ctx, g))


def is_affine_generic_so(ctx: SOContext, h: PadicMatrix) -> bool:
    return all(not c.is_zero() for c in affine_components_so(ctx, h))


# -- decompositions in the inducing subgroups -------------------------------------


def _mul_phi_inv(ctx: GLContext, m: PadicMatrix, c: FqElem) -> PadicMatrix:
    """m * phi_c^(-1): columns shift left, column 1 wraps to the end scaled by (pc)^(-1)."""
    winv = ctx.zp.ppow(-1) * ctx.zp.teich(c.inverse())
    cols = list(zip(*m.rows))
    new_cols = list(cols[1:]) + [tuple(e * winv for e in cols[0])]
    return PadicMatrix(ctx.zp, list(zip(*new_cols)))


def decompose_K(ctx: GLContext, g: PadicMatrix, a: FqElem):
    """Write g = z * x * phi_{a^-1}^m with z central, x in I+, m in 0..N-1.

    The power m is found by scanning the N candidate cosets (it is the
    valuation of det g mod N); the central part is read off the (1,1) entry
    of g*phi^(-m), well-defined up to 1+p which leaves character values
    untouched.  Raises ValueError when g lies outside Z I+ <phi_{a^-1}>.
    """
    ainv = a.inverse()
    y = g
    for m in range(ctx.N):
        if m > 0:
            y = _mul_phi_inv(ctx, y, ainv)
        e = y.rows[0][0]
        try:
            v = e.val()
        except PrecisionError:
            continue
        if v == float("inf"):
            continue
        u = e.shifted(-v).residue_mod()
        if u == 0:
            continue
        uinv = ctx.residue_field().element(u).inverse()
        t = ctx.zp.teich(uinv)
        try:
            x = PadicMatrix(ctx.zp, [[entry.shifted(-v) * t for entry in row] for row in y.rows])
        except PrecisionError:
            # some entry has valuation below v: this coset cannot match
            continue
        if _gl_pattern_level(x) in (IwahoriLevel.I_PLUS, IwahoriLevel.I_PLUSPLUS):
            z = ctx.zp.ppow(v) * ctx.zp.teich(ctx.residue_field().element(u))
            return z, x, m
    raise ValueError("element is not in Z I+ <phi>")


def decompose_Kprime(ctx: SOContext, g: PadicMatrix, b: FqElem):
    """Write g = y * (phi'_{b^-1})^m with y in I_H+ and m in {0, 1}.

    Uses the coset decomposition of I_H+<phi'> into I_H+ and phi' I_H+
    (phi' is an involution).  Raises ValueError outside the subgroup.
    """
    if so_level(ctx, g) in (IwahoriLevel.I_PLUS, IwahoriLevel.I_PLUSPLUS):
        return g, 0
    y = g * phi_prime(ctx, b.inverse())
    if so_level(ctx, y) in (IwahoriLevel.I_PLUS, IwahoriLevel.I_PLUSPLUS):
        return y, 1
    raise ValueError("element is not in I_H+ <phi'>")


# -- element constructors and samplers ----------------------------------------------


def gl_torus(ctx: GLContext, tvec) -> PadicMatrix:
    """diag of Teichmueller lifts of the given residue units."""
    return PadicMatrix.diagonal(ctx.zp, [ctx.zp.teich(t) for t in tvec])


def so_torus(ctx: SOContext, tvec) -> PadicMatrix:
    """diag(t_1, ..., t_n, 1, t_n^-1, ..., t_1^-1) with Teichmueller entries."""
    tvec = list(tvec)
    if len(tvec) != ctx.n:
        raise ValueError(f"need {ctx.n} torus coordinates")
    entries = [ctx.zp.teich(t) for t in tvec]
    entries.append(ctx.zp.one())
    entries.extend(ctx.zp.teich(t.inverse()) for t in reversed(tvec))
    return PadicMatrix.diagonal(ctx.zp, entries)


def gl_from_components(ctx: GLContext, comps, rng=None) -> PadicMatrix:
    """An I+ element with the given affine simple components (integer lifts).

    With an rng, the element is additionally spread through its I++-coset by
    random fuzz factors, so repeated draws explore the fiber of the
    component map rather than returning one canonical representative.
    """
    k = ctx.residue_field()
    comps = [k.element(c) for c in comps]
    if len(comps) != ctx.N:
        raise ValueError(f"need {ctx.N} components")
    zp = ctx.zp
    rows = [[zp.zero()] * ctx.N for _ in range(ctx.N)]
    for i in range(ctx.N):
        rows[i][i] = zp.one()
    for i in range(ctx.N - 1):
        rows[i][i + 1] = zp.integer(comps[i].lift())
    rows[ctx.N - 1][0] = zp.ppow(1) * zp.integer(comps[ctx.N - 1].lift())
    base = PadicMatrix(zp, rows)
    if rng is None:
        return base
    return random_gl_ipp(ctx, rng) * base * random_gl_ipp(ctx, rng)


def random_gl_ipp(ctx: GLContext, rng) -> PadicMatrix:
    """A random element of I++ (entry-wise construction)."""
    p, zp = ctx.zp.p, ctx.zp
    rows = [[zp.zero()] * ctx.N for _ in range(ctx.N)]
    for i in range(ctx.N):
        for j in range(ctx.N):
            if i == j:
                rows[i][j] = zp.integer(1 + p * rng.randrange(p * p))
            elif j == i + 1:
                rows[i][j] = zp.integer(p * rng.randrange(p * p))
            elif i < j:
                rows[i][j] = zp.integer(rng.randrange(p**3))
            elif (i, j) == (ctx.N - 1, 0):
                rows[i][j] = zp.integer(p * p * rng.randrange(p))
            else:
                rows[i][j] = zp.integer(p * rng.randrange(p * p))
    return PadicMatrix(zp, rows)


def random_gl_iplus(ctx: GLContext, rng) -> PadicMatrix:
    k = ctx.residue_field()
    comps = [k.element(rng.randrange(k.p)) for _ in range(ctx.N)]
    return gl_from_components(ctx, comps, rng)


def random_affine_generic_gl(ctx: GLContext, rng) -> PadicMatrix:
    k = ctx.residue_field()
    comps = [k.element(rng.randrange(1, k.p)) for _ in range(ctx.N)]
    return gl_from_components(ctx, comps, rng)


def so_root_positions(n: int):
    """Canonical entry positions (1-based, one per root) of so_{2n+1}.

    Each root pairs the entries (k, l) and (2n+2-l, 2n+2-k); positions on the
    antidiagonal (k + l = 2n + 2) carry no root.  The canonical member of
    each pair is the lexicographically smaller one.
    """
    size = 2 * n + 1
    for k in range(1, size + 1):
        for l in range(1, size + 1):
            if k == l or k + l == size + 1:
                continue
            partner = (size + 1 - l, size + 1 - k)
            if (k, l) <= partner:
                yield (k, l)


def so_unipotent(ctx: SOContext, k: int, l: int, c: PadicScalar) -> PadicMatrix:
    """exp(c B) for the root through the (k, l) entry (1-based).

    B = E_{kl} + lam E_{2n+2-l,2n+2-k} with lam = -(-1)^(k+l); for short
    roots (k or l equal to n+1) the exponential carries the extra quadratic
    term lam c^2/2 E at the chained position.
    """
    size = ctx.size
    zp = ctx.zp
    if isinstance(c, int):
        c = zp.integer(c)
    k2, l2 = size + 1 - l, size + 1 - k
    if (k, l) == (k2, l2) or k == l:
        raise ValueError("no root at this position")
    lam = -((-1) ** (k + l))
    rows = [[zp.one() if i == j else zp.zero() for j in range(size)] for i in range(size)]
    rows[k - 1][l - 1] = rows[k - 1][l - 1] + c
    rows[k2 - 1][l2 - 1] = rows[k2 - 1][l2 - 1] + lam * c
    half = zp.integer(2).inverse()
    if l == ctx.n + 1:
        rows[k - 1][l2 - 1] = rows[k - 1][l2 - 1] + lam * c * c * half
    elif k == ctx.n + 1:
        rows[k2 - 1][l - 1] = rows[k2 - 1][l - 1] + lam * c * c * half
    return PadicMatrix(zp, rows)


def so_from_components(ctx: SOContext, comps, rng=None) -> PadicMatrix:
    """An I_H+ element with the given n+1 affine simple components.

    Product of the simple root sections (i, i+1) for i <= n and the affine
    section at (2n, 1); with an rng the I_H++-fiber is randomized as in
    :func:`gl_from_components`.
    """
    k = ctx.residue_field()
    comps = [k.element(c) for c in comps]
    if len(comps) != ctx.n + 1:
        raise ValueError(f"need {ctx.n + 1} components")
    zp = ctx.zp
    m = PadicMatrix.identity(zp, ctx.size)
    for i in range(1, ctx.n + 1):
        m = m * so_unipotent(ctx, i, i + 1, zp.integer(comps[i - 1].lift()))
    m = m * so_unipotent(ctx, 2 * ctx.n, 1, zp.integer(zp.p * comps[ctx.n].lift()))
    if rng is None:
        return m
    return random_so_ipp(ctx, rng) * m * random_so_ipp(ctx, rng)


def random_so_ipp(ctx: SOContext, rng) -> PadicMatrix:
    """A random element of I_H++ (product of root sections and a T_1 torus part)."""
    zp, p, n = ctx.zp, ctx.zp.p, ctx.n
    simple = {(i, i + 1) for i in range(1, n + 1)}
    m = PadicMatrix.identity(zp, ctx.size)
    for (k, l) in so_root_positions(n):
        if k < l:
            depth = 1 if (k, l) in simple else 0
        else:
            depth = 2 if (k, l) == (2 * n, 1) else 1
        c = p**depth * rng.randrange(p * p)
        if c:
            m = m * so_unipotent(ctx, k, l, zp.integer(c))
    tvec = [zp.integer(1 + p * rng.randrange(p)) for _ in range(n)]
    diag = tvec + [zp.one()] + [t.inverse() for t in reversed(tvec)]
    return m * PadicMatrix.diagonal(zp, diag)


def random_so_iplus(ctx: SOContext, rng) -> PadicMatrix:
    k = ctx.residue_field()
    comps = [k.element(rng.randrange(k.p)) for _ in range(ctx.n + 1)]
    return so_from_components(ctx, comps, rng)


def random_affine_generic_so(ctx: SOContext, rng) -> PadicMatrix:
    k = ctx.residue_field()
    comps = [k.element(rng.randrange(1, k.p)) for _ in range(ctx.n + 1)]
    return so_from_components(ctx, comps, rng)

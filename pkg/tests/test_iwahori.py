import itertools
import random

import pytest

from endoscope.ffield import fq_new
from endoscope.iwahori import (
    GLContext,
    IwahoriLevel,
    SOContext,
    affine_components_gl,
    affine_components_so,
    decompose_K,
    decompose_Kprime,
    gl_from_components,
    gl_level,
    gl_torus,
    in_so,
    is_affine_generic_gl,
    is_affine_generic_so,
    j_form,
    norm_theta,
    phi,
    phi_prime,
    random_affine_generic_gl,
    random_affine_generic_so,
    random_gl_ipp,
    random_gl_iplus,
    random_so_ipp,
    random_so_iplus,
    so_from_components,
    so_level,
    so_root_positions,
    so_torus,
    so_unipotent,
    theta,
    theta_inv,
)
from endoscope.padic import PadicMatrix, Zp, char_poly, is_eisenstein

GL4_5 = GLContext(4, Zp(5))
GL2_5 = GLContext(2, Zp(5))
SO5_5 = SOContext(2, Zp(5))
SO3_5 = SOContext(1, Zp(5))
SO7_3 = SOContext(3, Zp(3))


def one_plus_phi(ctx, u):
    return PadicMatrix.identity(ctx.zp, ctx.N) + phi(ctx, u)


class TestPhi:
    @pytest.mark.parametrize("p,N", [(5, 2), (5, 4), (3, 6), (7, 4)])
    def test_phi_power_is_central(self, p, N):
        ctx = GLContext(N, Zp(p))
        k = ctx.residue_field()
        for a in (k.element(1), k.element(2)):
            f = phi(ctx, a)
            expected = PadicMatrix.identity(ctx.zp, N) * (ctx.zp.ppow(1) * ctx.zp.teich(a))
            assert f.pow(N).eq_at_precision(expected, 6)

    def test_det_valuation_one(self):
        k = GL4_5.residue_field()
        assert phi(GL4_5, k.element(2)).det().val() == 1

    def test_theta_of_phi(self):
        # theta(phi_{a^-1}) = -phi_{a^-1}^(-1)
        k = GL4_5.residue_field()
        for a in k.units():
            f = phi(GL4_5, a.inverse())
            assert theta(GL4_5, f).eq_at_precision(-(f.inverse()), 5)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            phi(GL4_5, GL4_5.residue_field().zero())


class TestPhiPrime:
    @pytest.mark.parametrize("p,n", [(5, 1), (5, 2), (3, 2), (7, 3)])
    def test_involution_and_membership(self, p, n):
        ctx = SOContext(n, Zp(p))
        k = ctx.residue_field()
        for b in (k.element(1), k.element(2)):
            f = phi_prime(ctx, b)
            assert in_so(ctx, f)
            assert (f * f).is_identity_at_precision(6)
            assert so_level(ctx, f) is IwahoriLevel.NONE  # corner valuation -1

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            phi_prime(SO5_5, SO5_5.residue_field().zero())


class TestTheta:
    def test_involution_on_iplus(self):
        rng = random.Random(10)
        for _ in range(5):
            g = random_gl_iplus(GL4_5, rng)
            assert theta(GL4_5, theta(GL4_5, g)).eq_at_precision(g, 4)

    def test_theta_inv_shortcut(self):
        rng = random.Random(11)
        g = random_affine_generic_gl(GL4_5, rng)
        assert (theta(GL4_5, g) * theta_inv(GL4_5, g)).is_identity_at_precision(4)

    def test_component_reversal(self):
        rng = random.Random(12)
        for ctx in (GL4_5, GL2_5, GLContext(6, Zp(3))):
            g = random_gl_iplus(ctx, rng)
            comps = affine_components_gl(ctx, g)
            tc = affine_components_gl(ctx, theta(ctx, g))
            assert tc[: ctx.N - 1] == tuple(reversed(comps[: ctx.N - 1]))
            assert tc[-1] == comps[-1]

    def test_norm_components_are_pair_sums(self):
        rng = random.Random(13)
        ctx = GL4_5
        g = random_gl_iplus(ctx, rng)
        comps = affine_components_gl(ctx, g)
        nc = affine_components_gl(ctx, norm_theta(ctx, g))
        N = ctx.N
        for i in range(N - 1):
            assert nc[i] == comps[i] + comps[N - 2 - i]
        assert nc[-1] == comps[-1] + comps[-1]

    def test_norm_of_torus_twist_is_conjugate(self):
        # N(x g theta(x)^-1) = x N(g) x^-1 for torus x
        rng = random.Random(14)
        ctx = GL4_5
        k = ctx.residue_field()
        g = random_gl_iplus(ctx, rng)
        x = gl_torus(ctx, [k.element(2), k.element(3), k.element(1), k.element(4)])
        twisted = x * g * theta(ctx, x).inverse()
        lhs = norm_theta(ctx, twisted)
        rhs = x * norm_theta(ctx, g) * x.inverse()
        assert lhs.eq_at_precision(rhs, 4)


class TestLevels:
    def test_identity_is_deepest(self):
        assert gl_level(GL4_5, PadicMatrix.identity(GL4_5.zp, 4)) is IwahoriLevel.I_PLUSPLUS

    def test_one_plus_phi_is_iplus_not_ipp(self):
        k = GL4_5.residue_field()
        g = one_plus_phi(GL4_5, k.element(1))
        assert gl_level(GL4_5, g) is IwahoriLevel.I_PLUS

    def test_nontrivial_torus_is_iwahori_only(self):
        k = GL4_5.residue_field()
        t = gl_torus(GL4_5, [k.element(2), k.element(1), k.element(1), k.element(1)])
        assert gl_level(GL4_5, t) is IwahoriLevel.I

    def test_uniformizer_diag_is_none(self):
        zp = GL2_5.zp
        m = PadicMatrix.diagonal(zp, [zp.ppow(1), zp.one()])
        assert gl_level(GL2_5, m) is IwahoriLevel.NONE

    def test_ipp_sampler_lands_in_ipp(self):
        rng = random.Random(15)
        for _ in range(5):
            assert gl_level(GL4_5, random_gl_ipp(GL4_5, rng)) is IwahoriLevel.I_PLUSPLUS
        for _ in range(5):
            m = random_so_ipp(SO5_5, rng)
            assert so_level(SO5_5, m) is IwahoriLevel.I_PLUSPLUS


class TestComponents:
    def test_one_plus_phi_components(self):
        k = GL4_5.residue_field()
        u = k.element(3)
        g = one_plus_phi(GL4_5, u)
        assert affine_components_gl(GL4_5, g) == (k.one(), k.one(), k.one(), u)
        assert is_affine_generic_gl(GL4_5, g)

    def test_from_components_round_trip_gl(self):
        rng = random.Random(16)
        k = GL4_5.residue_field()
        for _ in range(10):
            comps = tuple(k.element(rng.randrange(5)) for _ in range(4))
            g = gl_from_components(GL4_5, comps, rng)
            assert affine_components_gl(GL4_5, g) == comps

    @pytest.mark.parametrize("ctx", [SO3_5, SO5_5, SO7_3])
    def test_from_components_round_trip_so(self, ctx):
        rng = random.Random(17)
        k = ctx.residue_field()
        for _ in range(8):
            comps = tuple(k.element(rng.randrange(k.p)) for _ in range(ctx.n + 1))
            h = so_from_components(ctx, comps, rng)
            assert in_so(ctx, h)
            assert affine_components_so(ctx, h) == comps

    def test_components_need_iplus(self):
        k = GL4_5.residue_field()
        t = gl_torus(GL4_5, [k.element(2)] * 4)
        with pytest.raises(ValueError):
            affine_components_gl(GL4_5, t)

    def test_component_map_is_a_homomorphism(self):
        rng = random.Random(18)
        for _ in range(6):
            x = random_gl_iplus(GL4_5, rng)
            y = random_gl_iplus(GL4_5, rng)
            cx, cy = affine_components_gl(GL4_5, x), affine_components_gl(GL4_5, y)
            assert affine_components_gl(GL4_5, x * y) == tuple(a + b for a, b in zip(cx, cy))
        for _ in range(6):
            x = random_so_iplus(SO5_5, rng)
            y = random_so_iplus(SO5_5, rng)
            cx, cy = affine_components_so(SO5_5, x), affine_components_so(SO5_5, y)
            assert affine_components_so(SO5_5, x * y) == tuple(a + b for a, b in zip(cx, cy))

    def test_so_component_map_is_onto(self):
        # every value in k^(n+1) is hit: |I_H+/I_H++| = q^(n+1)
        ctx = SOContext(2, Zp(3))
        k = ctx.residue_field()
        seen = set()
        for comps in itertools.product(k.elements, repeat=3):
            h = so_from_components(ctx, comps)
            assert in_so(ctx, h)
            seen.add(affine_components_so(ctx, h))
        assert len(seen) == 3**3

    def test_so_linked_entries(self):
        # orthogonality forces y_{i,i+1} = y_{2n+1-i,2n+2-i} mod p and
        # y_{2n,1} = y_{2n+1,2} mod p^2
        rng = random.Random(19)
        ctx = SO5_5
        n = ctx.n
        for _ in range(6):
            h = random_so_iplus(ctx, rng)
            for i in range(1, n + 1):
                a = h.rows[i - 1][i].residue_mod()
                b = h.rows[2 * n - i][2 * n + 1 - i].residue_mod()
                assert a == b
            c1 = h.rows[2 * n - 1][0].shifted(-1).residue_mod()
            c2 = h.rows[2 * n][1].shifted(-1).residue_mod()
            assert c1 == c2

    def test_genericity_invariant_under_iplus_conjugation(self):
        rng = random.Random(20)
        for _ in range(6):
            g = random_affine_generic_gl(GL4_5, rng)
            y = random_gl_iplus(GL4_5, rng)
            conj = y * g * y.inverse()
            assert is_affine_generic_gl(GL4_5, conj)
        for _ in range(6):
            h = random_affine_generic_so(SO5_5, rng)
            y = random_so_iplus(SO5_5, rng)
            assert is_affine_generic_so(SO5_5, y * h * y.inverse())


class TestEisensteinCriterion:
    @pytest.mark.parametrize("ctx", [GL2_5, GL4_5, GLContext(6, Zp(3))])
    def test_affine_generic_minus_one_is_eisenstein(self, ctx):
        rng = random.Random(21)
        eye = PadicMatrix.identity(ctx.zp, ctx.N)
        for _ in range(5):
            g = random_affine_generic_gl(ctx, rng)
            assert is_eisenstein(char_poly(g - eye))

    def test_identity_is_not(self):
        eye = PadicMatrix.identity(GL4_5.zp, 4)
        assert not is_eisenstein(char_poly(eye))


class TestDecomposeK:
    def test_phi_itself(self):
        k = GL4_5.residue_field()
        a = k.element(2)
        f = phi(GL4_5, a.inverse())
        z, x, m = decompose_K(GL4_5, f, a)
        assert m == 1
        assert x.is_identity_at_precision(5)
        assert z.equals(1, 5)

    def test_central_uniformizer(self):
        zp = GL4_5.zp
        g = PadicMatrix.identity(zp, 4) * zp.ppow(1)
        z, x, m = decompose_K(GL4_5, g, GL4_5.residue_field().element(1))
        assert m == 0 and x.is_identity_at_precision(5) and z.val() == 1

    def test_rejects_outside(self):
        zp = GL4_5.zp
        g = PadicMatrix.diagonal(zp, [zp.ppow(1), zp.one(), zp.one(), zp.one()])
        with pytest.raises(ValueError):
            decompose_K(GL4_5, g, GL4_5.residue_field().element(1))

    def test_recomposition_and_det_valuation(self):
        rng = random.Random(22)
        ctx = GL4_5
        k = ctx.residue_field()
        a = k.element(3)
        f = phi(ctx, a.inverse())
        for m_true in range(4):
            g = random_gl_iplus(ctx, rng) * f.pow(m_true)
            scalar = ctx.zp.teich(k.element(rng.randrange(1, 5))) * ctx.zp.ppow(rng.randrange(2))
            g = g * scalar
            z, x, m = decompose_K(ctx, g, a)
            assert m == m_true
            recomposed = (x * f.pow(m)) * z
            assert recomposed.eq_at_precision(g, 4)
            assert int(g.det().val()) % ctx.N == m


class TestDecomposeKprime:
    def test_iplus_case(self):
        rng = random.Random(23)
        h = random_so_iplus(SO5_5, rng)
        y, m = decompose_Kprime(SO5_5, h, SO5_5.residue_field().element(2))
        assert m == 0 and y is h

    def test_phi_prime_case(self):
        k = SO5_5.residue_field()
        b = k.element(2)
        f = phi_prime(SO5_5, b.inverse())
        y, m = decompose_Kprime(SO5_5, f, b)
        assert m == 1
        assert y.is_identity_at_precision(5)

    def test_mixed_case(self):
        rng = random.Random(24)
        k = SO5_5.residue_field()
        b = k.element(1)
        h = random_so_iplus(SO5_5, rng)
        g = h * phi_prime(SO5_5, b.inverse())
        y, m = decompose_Kprime(SO5_5, g, b)
        assert m == 1
        assert y.eq_at_precision(h, 4)

    def test_rejects_outside(self):
        zp = SO5_5.zp
        t = so_torus(SO5_5, [SO5_5.residue_field().element(2), SO5_5.residue_field().element(1)])
        with pytest.raises(ValueError):
            decompose_Kprime(SO5_5, t * phi_prime(SO5_5, SO5_5.residue_field().element(1)), SO5_5.residue_field().element(1))


class TestSoRootSections:
    @pytest.mark.parametrize("ctx", [SO3_5, SO5_5, SO7_3])
    def test_all_sections_are_orthogonal(self, ctx):
        rng = random.Random(25)
        for (k, l) in so_root_positions(ctx.n):
            c = ctx.zp.integer(rng.randrange(1, ctx.zp.p**2))
            m = so_unipotent(ctx, k, l, c)
            assert in_so(ctx, m), (k, l)

    def test_root_count_matches_type_b(self):
        # B_n has 2n^2 roots
        for n in (1, 2, 3):
            assert len(list(so_root_positions(n))) == 2 * n * n

    def test_position_on_antidiagonal_rejected(self):
        with pytest.raises(ValueError):
            so_unipotent(SO5_5, 1, 5, SO5_5.zp.one())


def test_j_form_signs():
    j = j_form(4, Zp(5))
    assert j[0, 3].equals(1, 6) and j[1, 2].equals(-1, 6)
    assert j[2, 1].equals(1, 6) and j[3, 0].equals(-1, 6)


def test_torus_membership():
    k = SO5_5.residue_field()
    t = so_torus(SO5_5, [k.element(2), k.element(3)])
    assert in_so(SO5_5, t)
    assert so_level(SO5_5, t) is IwahoriLevel.I

from fractions import Fraction
from math import gcd

import pytest

from iwa.characters import (
    DirichletChar,
    GaloisChar,
    enumerate_characters,
    quadratic_char,
    teichmuller_char,
    trivial_char,
)
from iwa.exact import CycloInt, CycloRat, gen_bernoulli
from iwa.groupring import GroupRingElem, LevelGroup, delta_characters
from iwa.lelements import (
    cyclo_element_checks,
    euler_factor,
    iwasawa_series,
    l_element,
    lp_eval,
    lp_eval_ramified,
    required_level,
    smoothed_stickelberger,
    stickelberger,
    stickelberger_tower,
    zeta_power_vec,
)
from iwa.padic import CoeffRing, RamifiedError, embed_cyclo
from iwa.series import IwasawaSeries


def oracle_lp_value(chi, p, k, ring):
    """-(1 - chi omega^(1-k)(p) p^(k-1)) B_{k, chi omega^(1-k)} / k via the
    exact generalized-Bernoulli oracle, embedded into the ring."""
    psi = chi * teichmuller_char(p) ** (1 - k)
    bk = gen_bernoulli(k, psi.to_table())
    value = bk * Fraction(-1, k)
    if psi.conductor % p != 0:
        pval = psi.value_cyclo(p)
    else:
        pval = CycloInt.zero(psi.order)
    factor = CycloRat.from_fraction(psi.order, 1) \
        - CycloRat.from_cyclo(pval) * (p ** (k - 1))
    return embed_cyclo(value * factor, ring)


def h_series(ring, f, p, N):
    """h = 1 - (1+fp)(1+T)^(-1), the image of the smoothing element."""
    inv = IwasawaSeries.one_plus_t_power(ring, -1, N)
    return 1 - (inv * (1 + f * p))


class TestStickelberger:
    def test_pinned_level_f1_p3_k2(self):
        theta = stickelberger(1, 3, 2)
        expected = {1: Fraction(-7, 18), 2: Fraction(-5, 18), 4: Fraction(-1, 18),
                    5: Fraction(1, 18), 7: Fraction(5, 18), 8: Fraction(7, 18)}
        for a, v in expected.items():
            assert theta.coefficient(a) == v

    def test_projection_compatibility(self):
        hi = stickelberger(1, 3, 3)
        lo = stickelberger(1, 3, 2)
        assert hi.project(lo.group) == lo
        tower = stickelberger_tower(4, 3, 1, 3)
        assert tower.check_compatibility()

    def test_plus_kills_minus_fixes(self):
        theta = stickelberger(1, 3, 2)
        zero = GroupRingElem.zero(theta.group)
        assert theta.plus_part() == zero
        assert theta.minus_part() == theta

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            stickelberger(1, 3, 0)

    def test_euler_projection_relation(self):
        # projecting away a prime l of the modulus multiplies by (1 - g_l)
        for f, l, p, k in ((1, 5, 3, 2), (4, 3, 5, 1), (1, 2, 3, 2)):
            hi = stickelberger(f * l, p, k)
            lo = stickelberger(f, p, k)
            gl = GroupRingElem.group_element(lo.group, l % lo.group.modulus)
            assert hi.project(lo.group) == lo - gl * lo


class TestSmoothing:
    def test_pinned_values(self):
        sm = smoothed_stickelberger(1, 3, 2)
        expected = {1: Fraction(-3, 2), 2: Fraction(-1, 2), 4: Fraction(3, 2),
                    5: Fraction(-3, 2), 7: Fraction(1, 2), 8: Fraction(3, 2)}
        for a, v in expected.items():
            assert sm.coefficient(a) == v

    def test_integrality_scan(self):
        for f, p in ((1, 3), (4, 3), (5, 3), (1, 5), (4, 5), (1, 7)):
            for k in range(1, 5):
                sm = smoothed_stickelberger(f, p, k)
                assert all(c.denominator in (1, 2) for c in sm.coeffs)

    def test_projection_compatibility(self):
        hi = smoothed_stickelberger(4, 3, 3)
        lo = smoothed_stickelberger(4, 3, 2)
        assert hi.project(lo.group) == lo


class TestEulerFactor:
    def test_pinned_kappa(self):
        R = CoeffRing.create(5, 2)
        ef = euler_factor(2, GaloisChar(0), 1, 5, [2], R)
        elem = ef.elem(2)
        assert elem.coefficient(1).lift() == 1
        assert elem.coefficient(2).lift() == (-13) % 25

    def test_ramified_is_one(self):
        R = CoeffRing.create(5, 2)
        rho = GaloisChar(0, quadratic_char(-4))
        ef = euler_factor(2, rho, 1, 5, [1, 2], R)
        assert ef.ramified
        assert ef.elem(2) == GroupRingElem.one(ef.elem(2).group, "padic", R)

    def test_projection_compatibility(self):
        R = CoeffRing.create(5, 4)
        ef = euler_factor(2, GaloisChar(0), 1, 5, [1, 2], R)
        assert ef.elem(2).project(LevelGroup.create(1, 5, 1)) == ef.elem(1)

    def test_zero_divisor_flag(self):
        # trivial twist: 1 - g_l kills the norm element at every finite level
        R = CoeffRing.create(3, 4)
        ef = euler_factor(7, GaloisChar(1), 1, 3, [1, 2], R)
        assert ef.zero_divisor[1] and ef.zero_divisor[2]
        # kappa twist: the value 2^(-1) is not a root of unity
        ef2 = euler_factor(2, GaloisChar(0), 1, 3, [2], R)
        assert not ef2.zero_divisor[2]


class TestLElement:
    def test_even_components_are_one(self):
        # sigma = kappa * chi_{-4} is even, so every even theta-component of
        # the L-element pair collapses to numerator == denominator
        p = 3
        R = CoeffRing.create(p, 4, 2)
        sigma = GaloisChar(1, quadratic_char(-4))
        lel = l_element(sigma, 4, p, [3], R)
        seen = 0
        for theta in delta_characters(4, p):
            if theta.is_even():
                assert lel.component_is_one(theta, 3, 4)
                seen += 1
            else:
                assert not lel.component_is_one(theta, 3, 4)
        assert seen == 2

    def test_trivial_component_matches_series(self):
        # the projection to the Gamma-line of the twisted pair reproduces the
        # series: f * beta(denominator) = beta(numerator)
        p = 3
        chi = quadratic_char(-4)
        R = CoeffRing.create(p, 6, 2)
        lel = l_element(GaloisChar(0, chi), 4, p, [5], R)
        num, den = lel.component_series(trivial_char(), 5, 8)
        series = iwasawa_series(chi, p, M=3, N=8, level=5, check_stability=False)
        prod = series * den.truncate(8)
        assert prod.agrees_with(num.truncate(8))


class TestCycloChecks:
    def test_tower_norm(self):
        report = cyclo_element_checks(1, 3, 1)
        assert report["passed"]

    def test_euler_norm_pinned(self):
        # N(1 - zeta_12 -> Q(zeta_4)) = -zeta_4 = (1 - zeta_4)^(1 - F_3^{-1})
        x = (CycloInt.one(12) - CycloInt.zeta(12)).norm_to(4)
        assert x == -CycloInt.zeta(4)
        base = CycloInt.one(4) - CycloInt.zeta(4)
        twisted = base.galois(pow(3, -1, 4))
        assert x * twisted == base

    def test_drop_prime_report(self):
        report = cyclo_element_checks(4, 3, 1)
        names = [c["name"] for c in report["checks"]]
        assert any("drop 2" in n for n in names)
        assert report["passed"]

    def test_various_levels(self):
        for f, p, k in ((1, 3, 2), (5, 3, 1), (4, 5, 1), (7, 3, 1)):
            assert cyclo_element_checks(f, p, k)["passed"]


class TestIwasawaSeries:
    def test_pinned_p3_quad4(self):
        # f(0) = -(1 - chi(3)) B_{1,chi} = 1 exactly
        chi = quadratic_char(-4)
        s = iwasawa_series(chi, 3, M=6, N=8)
        assert s.coeff(0) == 1
        inv = s.newton()
        assert inv.reliable and inv.mu == 0 and inv.lam == 0

    def test_pinned_p5_quad4_trivial_zero(self):
        # chi(5) = 1 forces f(0) = 0; mu = 0 and lambda >= 1
        chi = quadratic_char(-4)
        s = iwasawa_series(chi, 5, M=5, N=8)
        assert s.coeff(0).is_zero()
        inv = s.newton()
        assert inv.reliable and inv.mu == 0 and inv.lam >= 1

    def test_matches_object_pipeline(self):
        # small level: the numpy sweep equals the group-ring beta path
        p, chi = 3, quadratic_char(-4)
        M, N, level = 3, 6, 5
        fast = iwasawa_series(chi, p, M=M, N=N, level=level, check_stability=False)
        ring = fast.ring
        n_work = N + M + 1
        g = smoothed_stickelberger(4, p, level).to_padic(ring).beta(chi, n_work)
        prod = fast * h_series(ring, 4, p, n_work).truncate(N)
        assert prod.agrees_with((-g).truncate(N))

    def test_level_stability(self):
        chi = quadratic_char(-4)
        s1 = iwasawa_series(chi, 3, M=4, N=6, level=6, check_stability=False)
        s2 = iwasawa_series(chi, 3, M=4, N=6, level=7, check_stability=False)
        assert s1.agrees_with(s2)

    def test_rejects_pole_branch(self):
        chi = teichmuller_char(5) ** 3  # chi * omega = omega^4 = trivial
        with pytest.raises(ValueError):
            iwasawa_series(chi, 5, M=3, N=6)

    def test_rejects_even_character(self):
        with pytest.raises(ValueError):
            iwasawa_series(quadratic_char(5), 3, M=3, N=6)

    def test_rejects_ramified_values(self):
        chi = next(c for c in enumerate_characters(7) if c.order == 6)
        with pytest.raises(RamifiedError):
            iwasawa_series(chi, 3, M=3, N=6)


class TestLpEval:
    def test_pinned_p5_omega2(self):
        # L_p(-1, omega^2): chi = omega, value 1/3 == 17 mod 25
        chi = teichmuller_char(5)
        v = lp_eval(chi, 5, 2, M=2)
        assert v.lift() % 25 == 17

    def test_pinned_p3_quad4(self):
        chi = quadratic_char(-4)
        v = lp_eval(chi, 3, 1, M=4)
        assert v.lift() % 3 ** 4 == 1

    def test_matches_bernoulli_oracle(self):
        for p, chi in ((3, quadratic_char(-4)), (5, teichmuller_char(5)),
                       (5, quadratic_char(-4)), (7, quadratic_char(-4))):
            for k in (1, 2, 3):
                M = 5
                v = lp_eval(chi, p, k, M=M, allow_large=True)
                oracle = oracle_lp_value(chi, p, k, v.ring)
                assert v == oracle.at_precision(M), (p, k)

    def test_series_substitution_consistency(self):
        # substituting into the computed series agrees with the direct value
        chi = quadratic_char(-4)
        p, M = 3, 4
        s = iwasawa_series(chi, p, M=M + 1, N=10)
        for k in (1, 2):
            t = s.ring.element(
                pow(pow(1 + 4 * p, k - 1, s.ring.pM), -1, s.ring.pM) - 1)
            direct = lp_eval(chi, p, k, M=M)
            sub = s.evaluate(t)
            assert (sub - direct).valuation() >= min(M, sub.prec)


def gamma_finite_char(p, j, f):
    """The wild character tau' mod p^(j+1) with tau'(a) = zeta_{p^j}^(-e(a)),
    e(a) the discrete log of <a> base 1 + fp."""
    mod = p ** (j + 1)
    pj = p ** j
    g0 = (1 + f * p) % mod
    dlog = {}
    y = 1
    for e in range(pj):
        dlog[y] = e
        y = y * g0 % mod
    table = {}
    for a in range(1, mod):
        if a % p == 0:
            continue
        t = a
        for _ in range(j + 2):
            t = pow(t, p, mod)
        principal = a * pow(t, -1, mod) % mod
        table[a] = (-dlog[principal]) % pj
    return DirichletChar._from_full_table(mod, table, pj, keep_modulus=False)


def embed_mixed(x: CycloRat, ring, p, j):
    """Embed a CycloRat of order d * p^w (d prime to p, w <= j) into the
    power basis of ring[x]/Phi_{p^j}."""
    num, den = x.scaled_integer_part()
    order = x.order
    d, pw = order, 1
    while d % p == 0:
        d //= p
        pw *= p
    assert p ** j % pw == 0
    phi_deg = (p - 1) * p ** (j - 1)
    acc = [ring.zero() for _ in range(phi_deg)]
    for t, c in enumerate(num.coeffs):
        if not c:
            continue
        if d > 1:
            alpha = pow(order // d, -1, d)
            zd = ring.element(ring.vec_pow(ring.root_of_unity(d), t * alpha % d))
        else:
            zd = ring.one()
        if pw > 1:
            beta_exp = pow(order // pw, -1, pw)
            zvec = zeta_power_vec(ring, p, j, (t * beta_exp % pw) * (p ** j // pw))
        else:
            zvec = [ring.one()] + [ring.zero()] * (phi_deg - 1)
        acc = [a + (zd * z) * int(c) for a, z in zip(acc, zvec)]
    invd = ring.element(pow(den, -1, ring.pM))
    return [a * invd for a in acc]


class TestLpEvalRamified:
    def test_tau_interpolation_p3(self):
        # tau of order 3: value equals the exact twisted Bernoulli oracle
        p, j, k = 3, 1, 1
        chi = quadratic_char(-4)
        val = lp_eval_ramified(chi, p, k, (j, 1), M=4)
        tau_char = gamma_finite_char(p, j, 4)
        psi = chi * tau_char * teichmuller_char(p) ** (1 - k)
        bk = gen_bernoulli(k, psi.to_table())
        value = bk * Fraction(-1, k)
        if psi.conductor % p != 0:
            pval = CycloRat.from_cyclo(psi.value_cyclo(p))
        else:
            pval = CycloRat.from_fraction(psi.order, 0)
        factor = CycloRat.from_fraction(psi.order, 1) - pval * (p ** (k - 1))
        oracle = embed_mixed(value * factor, val.ring, p, j)
        check = min(val.min_precision(), 2)
        assert check >= 2
        for a, b in zip(val.coeffs, oracle):
            assert (a - b).valuation() >= min(check, a.prec), (val.coeffs, oracle)


class TestRequiredLevel:
    def test_formula(self):
        # k = M + ceil(log_p(N+1)) + 1
        assert required_level(3, 6, 12) == 6 + 3 + 1
        assert required_level(5, 6, 12) == 6 + 2 + 1
        assert required_level(13, 6, 12) == 6 + 1 + 1

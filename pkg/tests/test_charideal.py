import random

import pytest

from iwa.characters import GaloisChar, quadratic_char
from iwa.charideal import (
    CanonicalGen,
    FractionalIdeal,
    IdealComponent,
    LambdaTrunc,
    PresentedModule,
    QuotientIdeal,
    ZeroDivisorAtLevel,
    alternating_char,
    base_change,
    char_of_presentation,
    det_oracle,
    euler_factor_ideal,
    frobenius_quotient_char,
    mu_vanishing_check,
    quotient_push_det,
)
from iwa.padic import PrecisionError
from iwa.series import IwasawaSeries


def lam36():
    return LambdaTrunc.create(3, 6, 8)


def rand_series(lam, rng, unit=None):
    p, M, N = lam.ring.p, lam.ring.prec, lam.N
    coeffs = [rng.randrange(0, lam.ring.pM) for _ in range(N)]
    if unit is True:
        while coeffs[0] % p == 0:
            coeffs[0] = rng.randrange(0, lam.ring.pM)
    if unit is False:
        coeffs[0] -= coeffs[0] % p ** 2 * 0 + coeffs[0] % p  # force p | c0
    return lam.series(coeffs)


def rand_presentation(lam, rng, size):
    while True:
        rows = [[rand_series(lam, rng) for _ in range(size)] for _ in range(size)]
        try:
            return PresentedModule(lam, rows)
        except PrecisionError:
            continue


class TestDeterminant:
    def test_diag_t_p(self):
        lam = lam36()
        m = PresentedModule(lam, [[lam.t_power(1), lam.zero()],
                                  [lam.zero(), lam.series([3])]])
        ideal = char_of_presentation(m)
        comp = ideal.component("1")
        assert comp.mu_lambda() == (1, 1)
        # generator is p * T
        assert comp.num.mu == 1 and comp.num.lam == 1
        assert comp.num.poly[0] == comp.num.ring.vec_zero()

    def test_upper_triangular(self):
        lam = lam36()
        m = PresentedModule(lam, [[lam.t_power(1), lam.series([3])],
                                  [lam.zero(), lam.t_power(1)]])
        comp = char_of_presentation(m).component("1")
        assert comp.mu_lambda() == (0, 2)
        assert comp.num == CanonicalGen.from_series(lam.t_power(2))

    def test_against_exact_oracle(self):
        rng = random.Random(41)
        lam = lam36()
        for size in (2, 3, 3, 4):
            m = rand_presentation(lam, rng, size)
            got = m.det()
            expected = det_oracle(m.matrix, lam)
            for j in range(lam.N):
                assert got.coeff(j).lift() % lam.ring.pM == expected[j]

    def test_zero_det_rejected(self):
        lam = lam36()
        row = [lam.series([1, 2]), lam.series([0, 1])]
        with pytest.raises(PrecisionError):
            PresentedModule(lam, [row, row])

    def test_non_square_rejected(self):
        lam = lam36()
        with pytest.raises(ValueError):
            PresentedModule(lam, [[lam.one(), lam.one()]])


class TestCanonicalForm:
    def test_unit_normalization(self):
        rng = random.Random(43)
        lam = lam36()
        for _ in range(10):
            d = rand_series(lam, rng)
            u = rand_series(lam, rng, unit=True)
            try:
                g1 = CanonicalGen.from_series(d)
            except PrecisionError:
                continue
            g2 = CanonicalGen.from_series(d * u)
            assert g1 == g2

    def test_idempotence(self):
        lam = lam36()
        s = lam.series([9, 3, 1, 4])
        g = CanonicalGen.from_series(s)
        # canonicalizing the canonical generator reproduces itself
        poly_series = IwasawaSeries(lam.ring,
                                    list(g.poly) + [lam.ring.vec_zero()] * (lam.N - len(g.poly)),
                                    [g.prec] * lam.N)
        scaled = poly_series * (3 ** g.mu)
        g2 = CanonicalGen.from_series(scaled)
        assert g == g2

    def test_weierstrass_reconstruction(self):
        rng = random.Random(47)
        lam = lam36()
        for _ in range(10):
            s = rand_series(lam, rng)
            try:
                mu, pcoeffs, unit, prec = s.weierstrass()
            except PrecisionError:
                continue
            lead = [lam.ring.vec_zero()] * lam.N
            for i, c in enumerate(pcoeffs):
                lead[i] = c.vec
            dist = IwasawaSeries(lam.ring, lead, [prec] * lam.N)
            recon = dist * unit * (lam.ring.p ** mu)
            assert recon.agrees_with(s)


class TestIdealAlgebra:
    def test_shift_inversion_cancels(self):
        lam = lam36()
        m = PresentedModule(lam, [[lam.series([3, 1])]])
        ideal = char_of_presentation(m)
        assert alternating_char([(ideal, 1), (ideal, -1)]).is_trivial()

    def test_pT_over_T_is_p(self):
        lam = lam36()
        pT = char_of_presentation(PresentedModule(lam, [[lam.series([0, 3])]]))
        T = char_of_presentation(PresentedModule(lam, [[lam.t_power(1)]]))
        quotient = alternating_char([(pT, 1), (T, -1)])
        p_ideal = char_of_presentation(PresentedModule(lam, [[lam.series([3])]]))
        assert quotient == p_ideal
        comp = quotient.component("1")
        assert comp.den is None and comp.mu_lambda() == (1, 0)

    def test_triangle_rule_block_matrices(self):
        rng = random.Random(53)
        lam = lam36()
        for _ in range(5):
            a = rand_presentation(lam, rng, 2)
            b = rand_presentation(lam, rng, 2)
            c_block = [[rand_series(lam, rng) for _ in range(2)] for _ in range(2)]
            rows = []
            for i in range(2):
                rows.append(a.matrix[i] + c_block[i])
            for i in range(2):
                rows.append([lam.zero(), lam.zero()] + b.matrix[i])
            ext = PresentedModule(lam, rows)
            lhs = char_of_presentation(ext)
            rhs = char_of_presentation(a) * char_of_presentation(b)
            assert lhs == rhs

    def test_block_diag_multiplicativity(self):
        rng = random.Random(59)
        lam = lam36()
        a = rand_presentation(lam, rng, 2)
        b = rand_presentation(lam, rng, 1)
        rows = [a.matrix[0] + [lam.zero()], a.matrix[1] + [lam.zero()],
                [lam.zero(), lam.zero()] + b.matrix[0]]
        both = PresentedModule(lam, rows)
        assert char_of_presentation(both) == char_of_presentation(a) * char_of_presentation(b)

    def test_equality_transitive_random(self):
        rng = random.Random(61)
        lam = lam36()
        d = rand_series(lam, rng, unit=True)
        ideals = []
        for _ in range(3):
            u = rand_series(lam, rng, unit=True)
            ideals.append(FractionalIdeal.principal(d * u))
        assert ideals[0] == ideals[1] == ideals[2]
        assert ideals[0] == ideals[2]


class TestBaseChange:
    def test_identity_and_normalization(self):
        lam = lam36()
        ideal = char_of_presentation(PresentedModule(lam, [[lam.series([3, 1])]]))
        assert base_change(ideal, ("normalization",)) == ideal
        assert base_change(ideal, ("component", "1")).component("1") == \
            ideal.component("1")

    def test_non_extendable_rejected(self):
        lam = lam36()
        ideal = char_of_presentation(PresentedModule(lam, [[lam.one()]]))
        with pytest.raises(ValueError):
            base_change(ideal, ("augmentation",))

    def test_tower_commutes_with_char(self):
        # char(phi_* M) = cart(phi)(char M) for the finite-level quotient map
        rng = random.Random(67)
        lam = LambdaTrunc.create(3, 5, 3)
        k = 2  # quotient degree p^(k-1) = 3
        for _ in range(8):
            m = rand_presentation(lam, rng, 2)
            lhs = quotient_push_det(m, k)  # det computed inside the quotient
            rhs = base_change(char_of_presentation(m), ("tower", k))
            lhs_ideal = QuotientIdeal({"1": lhs}, k)
            assert lhs_ideal == rhs


class TestMuVanishing:
    def test_pinned(self):
        lam = lam36()
        # Lambda/(T - p): mu = 0 (O-finite of rank 1)
        assert mu_vanishing_check(PresentedModule(lam, [[lam.series([-3, 1])]]))
        # Lambda/(p): mu = 1
        assert not mu_vanishing_check(PresentedModule(lam, [[lam.series([3])]]))
        # Lambda/(T): mu = 0
        assert mu_vanishing_check(PresentedModule(lam, [[lam.t_power(1)]]))

    def test_elementary_bridge(self):
        # for diag(f_1...f_n): mu = 0 iff every f_i has unit content iff the
        # mod-p reduction of each f_i is nonzero (O-finiteness brute force)
        rng = random.Random(71)
        lam = lam36()
        p = 3
        for _ in range(30):
            n = rng.randrange(1, 4)
            fs = []
            for _ in range(n):
                s = rand_series(lam, rng)
                if rng.random() < 0.3:
                    s = s * p  # force positive content
                fs.append(s)
            rows = [[fs[i] if i == j else lam.zero() for j in range(n)]
                    for i in range(n)]
            try:
                m = PresentedModule(lam, rows)
                got = mu_vanishing_check(m)
            except PrecisionError:
                continue
            finite = all(
                any(c.vec[0] % p for c in (f.coeff(j) for j in range(lam.N)))
                for f in fs)
            assert got == finite


class TestFrobeniusQuotient:
    def test_matches_euler_factor_ideal(self):
        for p, l, rho in ((3, 2, GaloisChar(0)), (5, 2, GaloisChar(0)),
                          (5, 3, GaloisChar(1)),
                          (5, 3, GaloisChar(2, quadratic_char(-4)))):
            f = rho.chi.conductor if not rho.chi.is_trivial() else 1
            lhs = frobenius_quotient_char(l, rho, f, p, M=4, N=8)
            rhs = euler_factor_ideal(l, rho, f, p, M=4, N=8)
            assert lhs == rhs, (p, l, rho.label())

    def test_ramified_gives_unit_ideal(self):
        rho = GaloisChar(2, quadratic_char(-4))
        ideal = frobenius_quotient_char(2, rho, 4, 5, M=4, N=6)
        assert ideal.is_trivial()

    def test_zero_divisor_level_reported(self):
        # trivial twist: 1 - g_l is a zero divisor at any finite level
        with pytest.raises(ZeroDivisorAtLevel):
            frobenius_quotient_char(7, GaloisChar(1), 1, 3, M=3, N=6, level=2)


class TestJsonIO:
    def test_presentation_roundtrip(self):
        lam = lam36()
        data = {
            "p": 3, "M": 6, "N": 8,
            "entries": [[[0, 1], [3]], [[0], [9, 0, 1]]],
        }
        m = PresentedModule.from_json(data)
        assert m.size == 2
        ideal = char_of_presentation(m)
        out = ideal.to_json()
        assert out[0]["mu"] == 0 and out[0]["lambda"] == 3

    def test_csv(self):
        text = "0 1, 3\n0, 9 0 1\n"
        m = PresentedModule.from_csv(text, 3, 6, 8)
        assert char_of_presentation(m).component("1").mu_lambda() == (0, 3)

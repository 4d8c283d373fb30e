import random
from fractions import Fraction
from math import comb, gcd

import pytest

from iwa.exact import (
    CharTable,
    CycloInt,
    CycloRat,
    bernoulli,
    bernoulli_poly,
    cyclo_embed,
    cyclo_norm,
    cyclotomic_poly,
    euler_phi,
    gen_bernoulli,
)


def bernoulli_akiyama_tanigawa(n):
    # independent oracle for B_n (with B_1 = -1/2 sign fix)
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return -a[0] if n == 1 else a[0]


def quad_char(modulus, nonresidues):
    values = {}
    for a in range(1, modulus):
        if gcd(a, modulus) == 1:
            values[a] = CycloInt.from_int(2, -1 if a in nonresidues else 1)
    return CharTable(modulus, 2, values)


def chi4():
    return quad_char(4, {3})


def chi3():
    return quad_char(3, {2})


def trivial_char():
    return CharTable(1, 1, {})


class TestBernoulli:
    def test_pinned_values(self):
        assert bernoulli(0) == 1
        assert bernoulli(3) == 0
        assert bernoulli(12) == Fraction(-691, 2730)

    def test_against_akiyama_tanigawa(self):
        for n in range(25):
            assert bernoulli(n) == bernoulli_akiyama_tanigawa(n)

    def test_recurrence_closure(self):
        for n in range(1, 61):
            assert sum(comb(n + 1, j) * bernoulli(j) for j in range(n + 1)) == 0

    def test_b1_convention(self):
        assert bernoulli(1) == Fraction(-1, 2)
        assert gen_bernoulli(1, trivial_char()) == CycloRat.from_fraction(1, Fraction(1, 2))


class TestGenBernoulli:
    def test_quadratic_mod4(self):
        assert gen_bernoulli(1, chi4()) == CycloRat.from_fraction(2, Fraction(-1, 2))

    def test_quadratic_mod3(self):
        assert gen_bernoulli(1, chi3()) == CycloRat.from_fraction(2, Fraction(-1, 3))

    def test_trivial_k2(self):
        assert gen_bernoulli(2, trivial_char()) == CycloRat.from_fraction(1, Fraction(1, 6))

    def test_independent_first_moment_formula(self):
        # for nontrivial chi, B_{1,chi} = (1/f) sum_a chi(a) a
        for chi in (chi4(), chi3(), quad_char(8, {3, 5})):
            f = chi.modulus
            acc = CycloRat(chi.order, [0])
            for a in range(1, f):
                if gcd(a, f) == 1:
                    acc = acc + CycloRat.from_cyclo(chi.value(a)) * Fraction(a, f)
            assert gen_bernoulli(1, chi) == acc

    def test_rejects_non_primitive(self):
        values = {a: CycloInt.one(2) for a in range(1, 8) if a % 2}
        induced = CharTable(8, 2, values)  # trivial character induced to mod 8
        with pytest.raises(ValueError):
            gen_bernoulli(1, induced)

    def test_wrong_parity_vanishing(self):
        # B_{k,chi} = 0 when chi(-1) != (-1)^k, except (k, chi) = (1, trivial)
        tables = [chi3(), chi4(), quad_char(8, {3, 5}), quad_char(8, {5, 7}),
                  quad_char(12, {5, 7}), trivial_char()]
        for chi in tables:
            sign = chi.parity()
            for k in range(1, 7):
                if sign != (-1) ** k:
                    value = gen_bernoulli(k, chi)
                    if chi.modulus == 1 and k == 1:
                        assert value == CycloRat.from_fraction(1, Fraction(1, 2))
                    else:
                        assert value.is_zero(), (chi.modulus, k)


class TestCycloInt:
    def test_cyclotomic_poly(self):
        assert cyclotomic_poly(1) == (-1, 1)
        assert cyclotomic_poly(2) == (1, 1)
        assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
        for m in range(1, 40):
            assert len(cyclotomic_poly(m)) == euler_phi(m) + 1

    def test_ring_axioms_random(self):
        rng = random.Random(7)
        for m in (5, 8, 9, 12):
            deg = euler_phi(m)
            for _ in range(20):
                x, y, z = (CycloInt(m, [rng.randrange(-4, 5) for _ in range(deg)])
                           for _ in range(3))
                assert (x * y) * z == x * (y * z)
                assert x * y == y * x
                assert x * (y + z) == x * y + x * z

    def test_complex_embedding_modulus_one(self):
        import cmath
        for m in (3, 4, 5, 7, 9, 12):
            root = cmath.exp(2j * cmath.pi / m)
            z = CycloInt.zeta(m)
            value = sum(c * root ** i for i, c in enumerate(z.coeffs))
            assert abs(abs(value) - 1) < 1e-12

    def test_norm_pinned(self):
        one_minus_z9 = 1 - CycloInt.zeta(9)
        assert cyclo_norm(one_minus_z9, 3) == 1 - CycloInt.zeta(3)
        one_minus_z12 = 1 - CycloInt.zeta(12)
        assert cyclo_norm(one_minus_z12, 4) == -CycloInt.zeta(4)
        assert cyclo_norm(CycloInt.one(12), 4) == CycloInt.one(4)

    def test_norm_against_complex_oracle(self):
        import cmath
        rng = random.Random(11)
        for m, target in ((9, 3), (12, 4), (15, 5), (16, 8)):
            deg = euler_phi(m)
            for _ in range(5):
                x = CycloInt(m, [rng.randrange(-3, 4) for _ in range(deg)])
                n = cyclo_norm(x, target)
                root = cmath.exp(2j * cmath.pi / m)
                expected = 1
                for j in range(1, m + 1):
                    if gcd(j, m) == 1 and j % target == 1 % target:
                        expected *= sum(c * root ** (i * j % m)
                                        for i, c in enumerate(x.coeffs))
                troot = cmath.exp(2j * cmath.pi / target)
                got = sum(c * troot ** i for i, c in enumerate(n.coeffs))
                assert abs(got - expected) < 1e-6 * max(1.0, abs(expected))

    def test_norm_transitivity(self):
        rng = random.Random(13)
        for m, mid, target in ((36, 12, 4), (24, 12, 6), (27, 9, 3)):
            deg = euler_phi(m)
            for _ in range(4):
                x = CycloInt(m, [rng.randrange(-2, 3) for _ in range(deg)])
                assert cyclo_norm(x, target) == cyclo_norm(cyclo_norm(x, mid), target)

    def test_norm_rejects_non_divisor(self):
        with pytest.raises(ValueError):
            cyclo_norm(CycloInt.zeta(9), 4)

    def test_embed_pinned(self):
        assert cyclo_embed(CycloInt.zeta(3), 9) == CycloInt.zeta(9, 3)
        assert cyclo_embed(1 - CycloInt.zeta(4), 12) == 1 - CycloInt.zeta(12, 3)

    def test_embed_rejects_non_divisor(self):
        with pytest.raises(ValueError):
            cyclo_embed(CycloInt.zeta(4), 9)

    def test_embed_then_norm_is_power(self):
        rng = random.Random(17)
        for m, big in ((3, 9), (4, 12), (5, 15)):
            degree = euler_phi(big) // euler_phi(m)
            for _ in range(5):
                x = CycloInt(m, [rng.randrange(-3, 4) for _ in range(euler_phi(m))])
                assert cyclo_norm(cyclo_embed(x, big), m) == x ** degree

    def test_embed_is_ring_hom(self):
        rng = random.Random(19)
        for m, big in ((4, 12), (9, 27)):
            deg = euler_phi(m)
            for _ in range(10):
                x = CycloInt(m, [rng.randrange(-3, 4) for _ in range(deg)])
                y = CycloInt(m, [rng.randrange(-3, 4) for _ in range(deg)])
                assert cyclo_embed(x * y, big) == cyclo_embed(x, big) * cyclo_embed(y, big)
                assert cyclo_embed(x + y, big) == cyclo_embed(x, big) + cyclo_embed(y, big)


class TestCharTable:
    def test_validation(self):
        chi = chi4()
        chi.validate()
        bad = CharTable(4, 2, {1: CycloInt.one(2), 3: CycloInt.from_int(2, 2)})
        with pytest.raises(ValueError):
            bad.validate()

    def test_conductor_brute_force(self):
        # character mod 8 induced from the quadratic character mod 4
        values = {a: CycloInt.from_int(2, -1 if a % 4 == 3 else 1)
                  for a in range(1, 8) if a % 2}
        chi = CharTable(8, 2, values)
        chi.validate()
        assert chi.conductor() == 4
        assert not chi.is_primitive()
        assert chi4().conductor() == 4
        assert trivial_char().conductor() == 1

    def test_parity(self):
        assert chi4().parity() == -1
        assert chi3().parity() == -1
        assert quad_char(8, {3, 5}).parity() == 1
        assert trivial_char().parity() == 1


class TestBernoulliPoly:
    def test_values(self):
        assert bernoulli_poly(1, Fraction(1, 4)) == Fraction(-1, 4)
        assert bernoulli_poly(2, Fraction(0)) == Fraction(1, 6)
        # B_k(1) = B_k for k >= 2, B_1(1) = 1/2
        assert bernoulli_poly(1, 1) == Fraction(1, 2)
        for k in range(2, 10):
            assert bernoulli_poly(k, 1) == bernoulli(k)

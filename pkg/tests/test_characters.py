import random
from math import gcd

import pytest

from iwa.characters import (
    DirichletChar,
    GaloisChar,
    char_from_values,
    enumerate_characters,
    eval_galois,
    kronecker,
    parse_char,
    quadratic_char,
    s_invariant,
    teichmuller_char,
    trivial_char,
)
from iwa.exact import CycloInt, euler_phi
from iwa.padic import CoeffRing, teichmuller


class TestConstruction:
    def test_mod4(self):
        chi = char_from_values(4, {3: (1, 2)})
        assert chi.conductor == 4
        assert chi.is_odd()
        assert chi.order == 2

    def test_induced_from_mod4(self):
        # modulus 8, values of the mod-4 character: conductor must come out 4
        chi = char_from_values(8, {7: (1, 2), 5: (0, 1)})
        assert chi.conductor == 4
        chi4 = char_from_values(4, {3: (1, 2)})
        for a in (1, 3):
            assert chi.value_exponent(a) == chi4.value_exponent(a)

    def test_trivial(self):
        chi = char_from_values(1, {})
        assert chi.conductor == 1 and chi.is_even() and chi.order == 1

    def test_inconsistent_rejected(self):
        # 3 has order 2 mod 4 but is assigned a 4th root of unity
        with pytest.raises(ValueError):
            char_from_values(4, {3: (1, 4)})

    def test_conductor_minimality_brute_force(self):
        for m in range(3, 61):
            for chi in enumerate_characters(m):
                c = chi.conductor
                assert m % c == 0
                # inducing back to modulus m and recomputing gives the same conductor
                for d in (d for d in range(1, c) if c % d == 0):
                    trivial_on_kernel = all(
                        chi.value_exponent(a) == 0
                        for a in range(1, m)
                        if gcd(a, m) == 1 and a % d == 1 % d
                    )
                    assert not trivial_on_kernel


class TestTeichmullerChar:
    def test_pinned_p5(self):
        R = CoeffRing.create(5, 2, 4)
        w = teichmuller_char(5)
        assert w.value_padic(2, R).vec[0] == 7
        assert w.value_padic(4, R).vec[0] == 24
        assert w.value_padic(1, R).vec[0] == 1

    def test_matches_teichmuller_map(self):
        for p in (3, 5, 7, 11, 13):
            R = CoeffRing.create(p, 4, p - 1)
            Rz = CoeffRing.create(p, 4)
            w = teichmuller_char(p)
            for a in range(1, p):
                assert w.value_padic(a, R).vec[0] == teichmuller(a, Rz).lift()

    def test_odd_of_order_p_minus_1(self):
        for p in (3, 5, 7, 11):
            w = teichmuller_char(p)
            assert w.order == p - 1
            assert w.is_odd()

    def test_reduction_mod_p_is_identity(self):
        for p in (5, 7, 11, 13):
            R = CoeffRing.create(p, 3, p - 1)
            w = teichmuller_char(p)
            for a in range(1, p):
                assert w.value_padic(a, R).vec[0] % p == a


class TestGroupLaw:
    def test_product_parity(self):
        rng = random.Random(5)
        chars = [quadratic_char(d) for d in (-4, -3, 5, 8, -8, 12)]
        for _ in range(10):
            a, b = rng.choice(chars), rng.choice(chars)
            assert (a * b).parity() == a.parity() * b.parity()

    def test_product_values(self):
        chi, psi = quadratic_char(-4), quadratic_char(-3)
        prod = chi * psi
        assert prod.conductor == 12
        for a in (1, 5, 7, 11):
            assert prod.value_cyclo(a) == CycloInt.from_int(
                2, kronecker(-4, a) * kronecker(-3, a))

    def test_inverse(self):
        w = teichmuller_char(7)
        assert (w * w.inverse()).is_trivial()
        assert (w ** 6).is_trivial()

    def test_power_order(self):
        w = teichmuller_char(11)
        assert (w ** 2).order == 5
        assert (w ** 5).order == 2
        assert (w ** 5) == quadratic_char(-11) or (w ** 5).conductor == 11


class TestGaloisChar:
    def test_eval_pinned(self):
        R = CoeffRing.create(5, 2)
        assert eval_galois(GaloisChar(1), 2, R).lift() == 13
        assert eval_galois(GaloisChar(0), 7, R).lift() == 1
        rho = GaloisChar(2, quadratic_char(-4))
        assert eval_galois(rho, 3, R).lift() == 11

    def test_multiplicative_in_l(self):
        R = CoeffRing.create(7, 4, 6)
        rho = GaloisChar(1, quadratic_char(-4))
        for l1 in (3, 5, 11):
            for l2 in (3, 5, 13):
                lhs = eval_galois(rho, l1 * l2, R) if gcd(l1 * l2, 28) == 1 else None
                # eval at a product of unramified primes via residues
                a = l1 * l2
                got = rho.eval_residue(a, R.prec, R)
                assert got == eval_galois(rho, l1, R) * eval_galois(rho, l2, R)

    def test_rejects_ramified(self):
        R = CoeffRing.create(5, 2)
        with pytest.raises(ValueError):
            eval_galois(GaloisChar(1), 5, R)
        with pytest.raises(ValueError):
            eval_galois(GaloisChar(0, quadratic_char(-4)), 2, R)

    def test_s_invariant(self):
        assert s_invariant(GaloisChar(1)) == 1
        assert s_invariant(GaloisChar(0, quadratic_char(-4))) == 0
        assert s_invariant(GaloisChar(2)) == 2

    def test_inverse_times_kappa(self):
        rho = GaloisChar(2, quadratic_char(-4))
        sigma = rho.inverse_times_kappa()
        assert sigma.kappa_power == -1
        R = CoeffRing.create(5, 3)
        l = 3
        # sigma(F_l) = l^(r-1) chi^-1(l)
        assert eval_galois(sigma, l, R).lift() == pow(l, 1, 125) * kronecker(-4, l) % 125


class TestParse:
    def test_specs(self):
        assert parse_char("triv").is_trivial()
        assert parse_char("quad:-4") == quadratic_char(-4)
        assert parse_char("teich:2", p=7) == teichmuller_char(7) ** 2
        chi = parse_char("mod:4:3=1/2")
        assert chi == quadratic_char(-4)

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            parse_char("nope")
        with pytest.raises(ValueError):
            parse_char("teich:1")


class TestEnumeration:
    def test_counts(self):
        for m in (3, 4, 5, 8, 12, 15):
            chars = list(enumerate_characters(m))
            assert len(chars) == euler_phi(m)

    def test_orthogonality(self):
        # sum over characters of chi(a) vanishes for a != 1
        m = 15
        for a in (2, 4, 7, 11):
            acc = None
            for chi in enumerate_characters(m):
                order = chi.order
                v = chi.value_cyclo(a).embed_to(24)
                acc = v if acc is None else acc + v
            assert acc.is_zero()

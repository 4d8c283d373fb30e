"""Finite-level truncations of the profinite group ring over (Z/fp^k)^*.

A level group splits as Delta x Gamma_k with Delta the product of (Z/f)^*
and the Teichmuller part of (Z/p^k)^*, and Gamma_k cyclic of order p^(k-1)
generated by the class of 1 + fp.  Group elements are labeled by residues a
(the Frobenius symbol F_a); the ring operations here are the convolution
product, tower projections, character twists, Delta-idempotents, the plus /
minus projectors, and the collapse map beta onto a power series in T that
sends the inverse of the Gamma-generator to 1 + T.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from iwa.characters import DirichletChar, GaloisChar, teichmuller_char
from iwa.exact import euler_phi
from iwa.padic import CoeffRing, PadicApprox
from iwa.series import IwasawaSeries

__all__ = [
    "LevelGroup",
    "GroupRingElem",
    "TowerElem",
    "multiply",
    "project",
    "twist",
    "idempotents",
    "delta_characters",
    "plus_minus",
    "beta",
    "LEVEL_SIZE_CAP",
]

LEVEL_SIZE_CAP = 10 ** 6


@lru_cache(maxsize=64)
def _level_group(f: int, p: int, k: int) -> "LevelGroup":
    return LevelGroup(f, p, k, _raw=True)


class LevelGroup:
    """The unit group (Z/fp^k)^* with its Delta x Gamma splitting cached."""

    def __init__(self, f: int, p: int, k: int, _raw: bool = False):
        if not _raw:
            raise TypeError("use LevelGroup.create(f, p, k)")
        if p < 3 or p % 2 == 0:
            raise ValueError("p must be an odd prime")
        if f < 1 or f % p == 0:
            raise ValueError("f must be positive and prime to p")
        if k < 1:
            raise ValueError("level k must be >= 1")
        self.f, self.p, self.k = f, p, k
        self.modulus = f * p ** k
        self.pk = p ** k
        if euler_phi(self.modulus) > LEVEL_SIZE_CAP:
            raise ValueError(
                f"group order {euler_phi(self.modulus)} exceeds the level cap")
        m = self.modulus
        self.residues = [a for a in range(1, m + 1) if gcd(a, m) == 1] if m > 1 else [1]
        self.index = {a: i for i, a in enumerate(self.residues)}
        self.order = len(self.residues)
        self.gamma_order = p ** (k - 1)
        self.gamma0 = (1 + f * p) % m
        # discrete log table for the principal units 1 + pZ/p^k
        self.gamma_log = {}
        x = 1 % self.pk
        g0 = (1 + f * p) % self.pk
        for j in range(self.gamma_order):
            self.gamma_log[x] = j
            x = x * g0 % self.pk

    @classmethod
    def create(cls, f: int, p: int, k: int) -> "LevelGroup":
        return _level_group(f, p, k)

    def __repr__(self):
        return f"LevelGroup(f={self.f}, p={self.p}, k={self.k})"

    def teich_part(self, a: int) -> int:
        """Teichmuller representative of a mod p^k."""
        return pow(a % self.pk, self.p ** (self.k - 1), self.pk)

    def principal_part(self, a: int) -> int:
        """<a>: the 1 + pZ part of a mod p^k."""
        ap = a % self.pk
        return ap * pow(self.teich_part(a), -1, self.pk) % self.pk

    def gamma_exponent(self, a: int) -> int:
        return self.gamma_log[self.principal_part(a)]

    def delta_residue(self, a: int) -> int:
        """Residue mod fp^k of the Delta-component of a (CRT with the
        Teichmuller part)."""
        m, pk, f = self.modulus, self.pk, self.f
        t = self.teich_part(a)
        if f == 1:
            return t % m
        # x == a mod f, x == t mod p^k
        inv = pow(pk % f, -1, f)
        x = t + pk * ((a - t) * inv % f)
        return x % m

    def decompose(self, a: int) -> tuple[int, int]:
        return self.delta_residue(a), self.gamma_exponent(a)

    def delta_elements(self) -> list[int]:
        return [a for a in self.residues if self.gamma_exponent(a) == 0]

    def element_order(self, a: int) -> int:
        order, x = 1, a % self.modulus
        while x != 1 % self.modulus:
            x = x * a % self.modulus
            order += 1
        return order

    def delta_prime_elements(self) -> list[int]:
        """The prime-to-p part of Delta."""
        return [a for a in self.delta_elements() if self.element_order(a) % self.p != 0]


class GroupRingElem:
    """Element of the level-k group ring, with exact (Fraction) or p-adic
    coefficients indexed by the unit residues."""

    __slots__ = ("group", "mode", "coeffs", "ring")

    def __init__(self, group: LevelGroup, mode: str, coeffs, ring: CoeffRing | None = None):
        if mode not in ("exact", "padic"):
            raise ValueError("mode must be 'exact' or 'padic'")
        if mode == "padic" and ring is None:
            raise ValueError("p-adic mode requires a coefficient ring")
        self.group = group
        self.mode = mode
        self.coeffs = list(coeffs)
        self.ring = ring
        if len(self.coeffs) != group.order:
            raise ValueError("coefficient vector has wrong length")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, group: LevelGroup, mode: str = "exact", ring=None):
        z = Fraction(0) if mode == "exact" else ring.zero()
        return cls(group, mode, [z] * group.order, ring)

    @classmethod
    def one(cls, group: LevelGroup, mode: str = "exact", ring=None):
        return cls.group_element(group, 1, mode, ring)

    @classmethod
    def group_element(cls, group: LevelGroup, a: int, mode: str = "exact", ring=None,
                      scale=1):
        x = cls.zero(group, mode, ring)
        one = Fraction(scale) if mode == "exact" else (
            scale if isinstance(scale, PadicApprox) else ring.element(scale))
        x.coeffs[group.index[a % group.modulus]] = one
        return x

    @classmethod
    def from_function(cls, group: LevelGroup, fn, mode: str = "exact", ring=None):
        return cls(group, mode, [fn(a) for a in group.residues], ring)

    # -- basics -----------------------------------------------------------
    def copy(self):
        return GroupRingElem(self.group, self.mode, list(self.coeffs), self.ring)

    def coefficient(self, a: int):
        return self.coeffs[self.group.index[a % self.group.modulus]]

    def _check_compatible(self, other: "GroupRingElem"):
        if self.group is not other.group or self.mode != other.mode:
            raise ValueError("group ring elements live on different groups or modes")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = GroupRingElem.group_element(self.group, 1, self.mode, self.ring,
                                                scale=other)
        self._check_compatible(other)
        return GroupRingElem(self.group, self.mode,
                             [a + b for a, b in zip(self.coeffs, other.coeffs)],
                             self.ring)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.group, self.mode, [-a for a in self.coeffs], self.ring)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupRingElem.group_element(self.group, 1, self.mode, self.ring,
                                                scale=other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return GroupRingElem(self.group, self.mode, [a * c for a in self.coeffs],
                             self.ring)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicApprox)):
            return self.scale(other)
        self._check_compatible(other)
        g = self.group
        m = g.modulus
        zero = Fraction(0) if self.mode == "exact" else self.ring.zero()
        out = [zero] * g.order
        for i, ca in enumerate(self.coeffs):
            if self.mode == "exact" and ca == 0:
                continue
            a = g.residues[i]
            for j, cb in enumerate(other.coeffs):
                b = g.residues[j]
                idx = g.index[a * b % m]
                out[idx] = out[idx] + ca * cb
        return GroupRingElem(g, self.mode, out, self.ring)

    __rmul__ = __mul__

    def translate(self, b: int):
        """Multiply by the group element g_b."""
        g = self.group
        m = g.modulus
        out = [None] * g.order
        for i, c in enumerate(self.coeffs):
            out[g.index[g.residues[i] * b % m]] = c
        return GroupRingElem(g, self.mode, out, self.ring)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupRingElem.group_element(self.group, 1, self.mode, self.ring,
                                                scale=other)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        self._check_compatible(other)
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def is_p_integral(self) -> bool:
        """In exact mode: every coefficient has denominator prime to p."""
        if self.mode != "exact":
            raise ValueError("integrality predicate applies to exact mode")
        p = self.group.p
        return all(c.denominator % p != 0 for c in self.coeffs)

    def to_padic(self, ring: CoeffRing, prec: int | None = None) -> "GroupRingElem":
        """Reduce exact coefficients into the p-adic coefficient ring."""
        if self.mode != "exact":
            raise ValueError("already p-adic")
        if not self.is_p_integral():
            raise ArithmeticError("element is not p-integral; cannot reduce")
        prec = prec if prec is not None else ring.prec
        out = []
        for c in self.coeffs:
            v = c.numerator * pow(c.denominator, -1, ring.pM) % ring.pM
            out.append(ring.element(v, prec))
        return GroupRingElem(self.group, "padic", out, ring)

    # -- named operations -------------------------------------------------
    def project(self, target: LevelGroup) -> "GroupRingElem":
        g = self.group
        if (target.p != g.p or g.f % target.f != 0 or target.k > g.k
                or (target.f, target.k) == (g.f, g.k)):
            raise ValueError("projection target must be a proper quotient level")
        if target.k < 1:
            raise ValueError("projection below level 1 is not defined")
        out = GroupRingElem.zero(target, self.mode, self.ring)
        tm = target.modulus
        for i, c in enumerate(self.coeffs):
            idx = target.index[g.residues[i] % tm]
            out.coeffs[idx] = out.coeffs[idx] + c
        return out

    def twist(self, rho: GaloisChar) -> "GroupRingElem":
        """Ring automorphism g_a -> rho(F_a) g_a, extended linearly."""
        if self.mode != "padic":
            raise ValueError("twists require p-adic coefficients")
        g = self.group
        if (g.f * g.pk) % rho.chi.conductor != 0:
            raise ValueError("twisting character does not factor through this level")
        out = []
        for i, c in enumerate(self.coeffs):
            a = g.residues[i]
            out.append(c * rho.eval_residue(a, g.k, self.ring))
        return GroupRingElem(g, "padic", out, self.ring)

    def eval_character(self, chi: DirichletChar):
        """Sum of chi(a) c_a over the group: the chi-evaluation ring
        homomorphism (exact mode; values as CycloRat)."""
        from iwa.exact import CycloRat
        if self.mode != "exact":
            raise ValueError("exact evaluation requires exact mode")
        acc = CycloRat(chi.order, [0])
        for i, c in enumerate(self.coeffs):
            if c:
                v = chi.value_cyclo(self.group.residues[i])
                acc = acc + CycloRat.from_cyclo(v) * c
        return acc

    def plus_part(self) -> "GroupRingElem":
        return self._signed_part(1)

    def minus_part(self) -> "GroupRingElem":
        return self._signed_part(-1)

    def _signed_part(self, sign: int):
        g = self.group
        flipped = self.translate(g.modulus - 1)
        if self.mode == "exact":
            half = Fraction(1, 2)
            mixed = [(a + sign * b) * half for a, b in zip(self.coeffs, flipped.coeffs)]
        else:
            half = self.ring.element(pow(2, -1, self.ring.pM))
            mixed = [(a + sign * b) * half for a, b in zip(self.coeffs, flipped.coeffs)]
        return GroupRingElem(g, self.mode, mixed, self.ring)

    def beta(self, chi: DirichletChar, N: int) -> IwasawaSeries:
        """Collapse onto the chi-component written in T: g_a maps to
        chi(delta(a)) (1+T)^(-e(a)), with the inverse Gamma-generator sent
        to 1 + T.  Requires p-adic mode, chi of conductor dividing fp, and
        p^(k-1) >= N."""
        if self.mode != "padic":
            raise ValueError("beta requires p-adic coefficients")
        g, ring = self.group, self.ring
        if (g.f * g.p) % chi.conductor != 0:
            raise ValueError("beta needs a character of the Delta-part "
                             "(conductor dividing fp)")
        if g.gamma_order < N:
            raise ValueError(
                f"level k={g.k} is too small for truncation N={N}")
        buckets = [ring.vec_zero() for _ in range(g.gamma_order)]
        bucket_prec = [ring.prec] * g.gamma_order
        for i, c in enumerate(self.coeffs):
            a = g.residues[i]
            e = g.gamma_exponent(a)
            # chi(delta(a)) = chi(a) since delta(a) == a mod fp
            w = chi.value_padic(a, ring)
            term = ring.vec_mul(c.vec, w.vec)
            idx = (-e) % g.gamma_order
            buckets[idx] = ring.vec_add(buckets[idx], term)
            bucket_prec[idx] = min(bucket_prec[idx], c.prec, w.prec)
        base_prec = min(bucket_prec)
        # expand sum_j b_j (1+T)^j into T-coefficients
        coeffs = []
        prec = []
        for i in range(N):
            acc = ring.vec_zero()
            for j in range(i, g.gamma_order):
                acc = ring.vec_add(acc, ring.vec_scale(buckets[j], comb(j, i)))
            coeffs.append(acc)
            prec.append(min(base_prec, _level_profile(g.p, g.k, i, base_prec)))
        return IwasawaSeries(ring, coeffs, prec,
                             meta={"p": g.p, "f": g.f, "level": g.k})

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        g = self.group
        if self.mode == "exact":
            coeffs = {str(a): str(c) for a, c in zip(g.residues, self.coeffs) if c}
        else:
            coeffs = {str(a): [str(x) for x in c.vec]
                      for a, c in zip(g.residues, self.coeffs)
                      if not c.is_zero()}
        data = {"f": g.f, "p": g.p, "k": g.k, "mode": self.mode, "coeffs": coeffs}
        if self.mode == "padic":
            data["precision"] = min((c.prec for c in self.coeffs),
                                    default=self.ring.prec)
            data["root_order"] = self.ring.root_order
        return data

    @classmethod
    def from_json(cls, data: dict, ring: CoeffRing | None = None) -> "GroupRingElem":
        group = LevelGroup.create(data["f"], data["p"], data["k"])
        if data["mode"] == "exact":
            x = cls.zero(group, "exact")
            for a, c in data["coeffs"].items():
                x.coeffs[group.index[int(a)]] = Fraction(c)
            return x
        if ring is None:
            ring = CoeffRing.create(data["p"], data["precision"],
                                    data.get("root_order", 1))
        x = cls.zero(group, "padic", ring)
        prec = data.get("precision", ring.prec)
        for a, vec in data["coeffs"].items():
            x.coeffs[group.index[int(a)]] = ring.element([int(v) for v in vec], prec)
        return x

    def __repr__(self):
        support = sum(1 for c in self.coeffs
                      if (c != 0 if self.mode == "exact" else not c.is_zero()))
        return (f"GroupRingElem(f={self.group.f}, p={self.group.p}, k={self.group.k}, "
                f"mode={self.mode}, support={support})")


class TowerElem:
    """A projection-compatible family of group ring elements across levels."""

    __slots__ = ("levels",)

    def __init__(self, levels: dict[int, GroupRingElem]):
        self.levels = dict(sorted(levels.items()))
        if not self.levels:
            raise ValueError("a tower element needs at least one level")

    def level_range(self) -> tuple[int, int]:
        ks = list(self.levels)
        return ks[0], ks[-1]

    def __getitem__(self, k: int) -> GroupRingElem:
        return self.levels[k]

    def check_compatibility(self) -> bool:
        ks = list(self.levels)
        for k_lo, k_hi in zip(ks, ks[1:]):
            if k_hi != k_lo + 1:
                continue
            x = self.levels[k_hi]
            if x.project(self.levels[k_lo].group) != self.levels[k_lo]:
                return False
        return True

    def __repr__(self):
        lo, hi = self.level_range()
        return f"TowerElem(levels {lo}..{hi})"


def _level_profile(p: int, k: int, j: int, cap: int) -> int:
    """Precision of T^j-coefficients determined by level k: the class modulo
    ((1+T)^(p^(k-1)) - 1) pins coefficient j only up to p^(k-1-floor(log_p j))."""
    if j == 0:
        return cap
    drop = 0
    q = p
    while q <= j:
        drop += 1
        q *= p
    return max(0, min(cap, k - 1 - drop))


# ----------------------------------------------------------------------
# Module-level operation wrappers.

def multiply(x: GroupRingElem, y: GroupRingElem) -> GroupRingElem:
    return x * y


def project(x: GroupRingElem, f: int, p: int, k: int) -> GroupRingElem:
    return x.project(LevelGroup.create(f, p, k))


def twist(x: GroupRingElem, rho: GaloisChar) -> GroupRingElem:
    return x.twist(rho)


def plus_minus(x: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem]:
    return x.plus_part(), x.minus_part()


def delta_characters(f: int, p: int) -> list[DirichletChar]:
    """Characters of the prime-to-p part of Delta, as first-kind Dirichlet
    characters of conductor dividing fp and order prime to p."""
    from iwa.characters import enumerate_characters
    omega = teichmuller_char(p)
    out = []
    for chi_f in enumerate_characters(f):
        if chi_f.order % p == 0:
            continue
        for j in range(p - 1):
            out.append(chi_f * omega ** j)
    return out


def idempotents(group: LevelGroup, ring: CoeffRing) -> list[tuple[DirichletChar, GroupRingElem]]:
    """Orthogonal idempotents e_theta for theta over the characters of the
    prime-to-p part of Delta."""
    delta_prime = group.delta_prime_elements()
    n = len(delta_prime)
    inv_n = pow(n, -1, ring.pM)
    out = []
    for theta in delta_characters(group.f, group.p):
        if theta.order % group.p == 0:
            continue
        e = GroupRingElem.zero(group, "padic", ring)
        for d in delta_prime:
            # e_theta = (1/n) sum_d theta^(-1)(d) g_d
            v = theta.value_padic(d, ring)
            e.coeffs[group.index[d]] = e.coeffs[group.index[d]] + v.inverse()
        e = e.scale(ring.element(inv_n))
        out.append((theta, e))
    return out


def beta(x: GroupRingElem, chi: DirichletChar, N: int) -> IwasawaSeries:
    return x.beta(chi, N)

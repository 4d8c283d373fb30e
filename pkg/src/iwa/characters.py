"""Dirichlet characters, conductor/parity logic, and Galois characters kappa^r * chi.

Characters are stored by their primitive value table: exponents of a fixed
primitive d-th root of unity on residues coprime to the conductor.  The
Frobenius dictionary used throughout identifies the symbol F_a with the
residue a, and the cyclotomic character takes the value a^(-1) on F_a
(geometric normalization); every consumer of a Frobenius symbol in this
package follows that sign convention.
"""

from __future__ import annotations

from math import gcd

from iwa.exact import CharTable, CycloInt, divisors, euler_phi, factorize
from iwa.padic import CoeffRing, PadicApprox, RamifiedError, multiplicative_order

__all__ = [
    "DirichletChar",
    "GaloisChar",
    "char_from_values",
    "teichmuller_char",
    "quadratic_char",
    "trivial_char",
    "eval_galois",
    "s_invariant",
    "parse_char",
    "enumerate_characters",
    "kronecker",
]


def _primitive_root_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    target = p - 1
    primes = list(factorize(target))
    for g in range(2, p):
        if all(pow(g, target // q, p) != 1 for q in primes):
            return g
    raise ArithmeticError("no primitive root found")


def _unit_group_generators(m: int) -> list[tuple[int, int]]:
    """Independent generators (g, order) of (Z/m)^*, via CRT on prime powers."""
    if m == 1:
        return []
    gens: list[tuple[int, int]] = []
    for q, v in factorize(m).items():
        qv = q ** v
        others = m // qv
        if q == 2:
            locals_ = []
            if v == 2:
                locals_ = [(3, 2)]
            elif v >= 3:
                locals_ = [(qv - 1, 2), (5, 2 ** (v - 2))]
        else:
            g = _primitive_root_mod_prime(q)
            if v > 1 and pow(g, q - 1, q * q) == 1:
                g += q
            locals_ = [(g % qv, euler_phi(qv))]
        for g_local, order in locals_:
            if others == 1:
                gens.append((g_local % m, order))
            else:
                # lift to == g_local mod q^v, == 1 mod (m/q^v)
                inv = pow(others % qv, -1, qv) if qv > 1 else 0
                lifted = (1 + others * ((g_local - 1) * inv % qv)) % m
                gens.append((lifted, order))
    return gens


def _closure_table(m: int, gen_exponents: dict[int, int], order: int) -> dict[int, int]:
    """Extend exponents on generators to all of (Z/m)^*; raises on inconsistency."""
    table = {1 % m: 0}
    if m == 1:
        return table
    frontier = [1]
    while frontier:
        new_frontier = []
        for a in frontier:
            for g, e in gen_exponents.items():
                b = a * g % m
                exp = (table[a] + e) % order
                if b in table:
                    if table[b] != exp:
                        raise ValueError("inconsistent generator values")
                else:
                    table[b] = exp
                    new_frontier.append(b)
        frontier = new_frontier
    if len(table) != euler_phi(m):
        raise ValueError("supplied generators do not generate the unit group")
    return table


class DirichletChar:
    """Primitive Dirichlet character; values are powers of a fixed zeta_order."""

    __slots__ = ("modulus", "conductor", "order", "_exp")

    def __init__(self, modulus: int, conductor: int, order: int, exp: dict[int, int]):
        self.modulus = modulus
        self.conductor = conductor
        self.order = order
        self._exp = exp

    # -- constructors ---------------------------------------------------
    @classmethod
    def _from_full_table(cls, modulus: int, table: dict[int, int], order: int,
                         keep_modulus: bool = True) -> "DirichletChar":
        # normalize the order to the exact order of the character
        if modulus == 1 or all(e == 0 for e in table.values()):
            return cls(modulus if keep_modulus else 1, 1, 1, {1: 0})
        g = order
        for e in table.values():
            g = gcd(g, e)
        d = order // g
        table = {a: (e // g) % d for a, e in table.items()}
        # conductor: minimal divisor of modulus through which the table factors
        cond = modulus
        for div in divisors(modulus):
            if all(table[a] == 0 for a in table if a % div == 1 % div):
                cond = div
                break
        prim = {}
        for b in range(1, cond + 1):
            if gcd(b, cond) != 1:
                continue
            # representative == b mod cond, coprime to modulus
            a = next(a for a in table if a % cond == b % cond)
            prim[b] = table[a]
        if cond == 1:
            prim = {1: 0}
        return cls(modulus if keep_modulus else cond, cond, d, prim)

    # -- values -----------------------------------------------------------
    def value_exponent(self, a: int):
        """Exponent e with chi(a) = zeta_order^e, or None off the coprime locus."""
        if self.conductor == 1:
            return 0
        a %= self.conductor
        if gcd(a, self.conductor) != 1:
            return None
        return self._exp[a]

    def value_cyclo(self, a: int) -> CycloInt:
        e = self.value_exponent(a)
        if e is None:
            return CycloInt.zero(self.order)
        return CycloInt.zeta(self.order, e) if self.order > 1 else CycloInt.one(1)

    def value_padic(self, a: int, ring: CoeffRing) -> PadicApprox:
        e = self.value_exponent(a)
        if e is None:
            return ring.zero()
        return ring.element(ring.vec_pow(ring.root_of_unity(self.order), e))

    def to_table(self) -> CharTable:
        values = {a: self.value_cyclo(a) for a in range(1, max(self.conductor, 2))
                  if gcd(a, self.conductor) == 1}
        return CharTable(self.conductor, self.order, values)

    # -- predicates ---------------------------------------------------------
    def parity(self) -> int:
        if self.conductor <= 2:
            return 1
        e = self.value_exponent(self.conductor - 1)
        return 1 if e == 0 else -1

    def is_odd(self) -> bool:
        return self.parity() == -1

    def is_even(self) -> bool:
        return self.parity() == 1

    def is_trivial(self) -> bool:
        return self.conductor == 1

    def is_first_kind(self, p: int) -> bool:
        return self.conductor % (p * p) != 0

    def values_unramified(self, p: int) -> bool:
        return self.order % p != 0

    # -- group structure ------------------------------------------------------
    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if not isinstance(other, DirichletChar):
            return NotImplemented
        m = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
        lcm_order = self.order * other.order // gcd(self.order, other.order)
        table = {}
        for a in range(1, max(m, 2)):
            if gcd(a, m) != 1:
                continue
            e1 = self.value_exponent(a)
            e2 = other.value_exponent(a)
            table[a] = (e1 * (lcm_order // self.order)
                        + e2 * (lcm_order // other.order)) % lcm_order
        if m == 1:
            table = {1: 0}
        return DirichletChar._from_full_table(m, table, lcm_order, keep_modulus=False)

    def __pow__(self, n: int) -> "DirichletChar":
        n %= self.order
        table = {a: e * n % self.order for a, e in self._exp.items()}
        return DirichletChar._from_full_table(self.conductor, table, self.order,
                                              keep_modulus=False)

    def inverse(self) -> "DirichletChar":
        return self ** (self.order - 1)

    def __eq__(self, other):
        if not isinstance(other, DirichletChar):
            return NotImplemented
        return (self.conductor == other.conductor and self.order == other.order
                and self._exp == other._exp)

    def __hash__(self):
        return hash((self.conductor, self.order, tuple(sorted(self._exp.items()))))

    def label(self) -> str:
        if self.is_trivial():
            return "triv"
        items = ",".join(f"{a}={e}/{self.order}"
                         for a, e in sorted(self._exp.items()) if e)
        return f"mod{self.conductor}[{items}]"

    def __repr__(self):
        return f"DirichletChar({self.label()})"


# ----------------------------------------------------------------------
# Constructors.

def trivial_char() -> DirichletChar:
    return DirichletChar(1, 1, 1, {1: 0})


def char_from_values(modulus: int, gen_values: dict[int, tuple[int, int]]) -> DirichletChar:
    """Build a character from values on generators.

    gen_values maps a generator g to (k, n) meaning chi(g) = zeta_n^k.
    The supplied residues must generate (Z/modulus)^*; inconsistent value
    assignments are rejected.
    """
    if modulus == 1:
        return trivial_char()
    orders = [n for _, n in gen_values.values()]
    big = 1
    for n in orders:
        big = big * n // gcd(big, n)
    gen_exp = {}
    for g, (k, n) in gen_values.items():
        if gcd(g, modulus) != 1:
            raise ValueError("generators must be coprime to the modulus")
        gen_exp[g % modulus] = k * (big // n) % big
    table = _closure_table(modulus, gen_exp, big)
    return DirichletChar._from_full_table(modulus, table, big)


def teichmuller_char(p: int) -> DirichletChar:
    """Character mod p with chi(a) equal to the Teichmuller lift of a.

    The exponent of chi(a) is the index of a with respect to the smallest
    primitive root mod p, matching the embedding policy of CoeffRing: the
    p-adic value table of this character is a |-> teichmuller(a).
    """
    if p == 2 or p < 2:
        raise ValueError("p must be an odd prime")
    g = _primitive_root_mod_prime(p)
    table = {}
    x = 1
    for e in range(p - 1):
        table[x] = e
        x = x * g % p
    return DirichletChar._from_full_table(p, table, p - 1)


def kronecker(a: int, n: int) -> int:
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    k = 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    a %= n
    while a:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def _is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True

    def squarefree(n):
        n = abs(n)
        q = 2
        while q * q <= n:
            if n % (q * q) == 0:
                return False
            q += 1
        return True

    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def quadratic_char(d: int) -> DirichletChar:
    """Quadratic character of fundamental discriminant d (Kronecker symbol)."""
    if not _is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if d == 1:
        return trivial_char()
    m = abs(d)
    table = {}
    for a in range(1, m):
        if gcd(a, m) == 1:
            table[a] = 0 if kronecker(d, a) == 1 else 1
    return DirichletChar._from_full_table(m, table, 2)


def enumerate_characters(modulus: int, primitive_only: bool = False):
    """All Dirichlet characters mod `modulus` (reduced to primitive form)."""
    if modulus == 1:
        yield trivial_char()
        return
    gens = _unit_group_generators(modulus)
    big = 1
    for _, order in gens:
        big = big * order // gcd(big, order)
    choices = [range(order) for _, order in gens]
    import itertools
    for combo in itertools.product(*choices):
        gen_exp = {g: k * (big // order) % big
                   for (g, order), k in zip(gens, combo)}
        table = _closure_table(modulus, gen_exp, big)
        chi = DirichletChar._from_full_table(modulus, table, big, keep_modulus=False)
        if primitive_only and chi.conductor != modulus:
            continue
        yield chi


# ----------------------------------------------------------------------
# Galois characters kappa^r * (chi o rec).

class GaloisChar:
    """One-dimensional Galois character kappa^r * chi with chi of the first kind.

    Evaluation at the Frobenius symbol F_l gives l^(-r) chi(l): the cyclotomic
    character kappa takes the value l^(-1) on the geometric Frobenius.
    """

    __slots__ = ("kappa_power", "chi")

    def __init__(self, kappa_power: int, chi: DirichletChar | None = None):
        self.kappa_power = kappa_power
        self.chi = chi if chi is not None else trivial_char()

    def conductor(self) -> int:
        return self.chi.conductor

    def is_ramified_at(self, l: int) -> bool:
        return self.chi.conductor % l == 0

    def check_supported(self, p: int) -> None:
        if not self.chi.is_first_kind(p):
            raise RamifiedError(
                "finite part has wild p-ramification (second kind); unsupported")
        if not self.chi.values_unramified(p):
            raise RamifiedError(
                f"character values of order {self.chi.order} generate a ramified "
                f"extension of Z_{p}")

    def inverse_times_kappa(self) -> "GaloisChar":
        """rho^-1 * kappa, the twisting character attached to rho."""
        return GaloisChar(1 - self.kappa_power, self.chi.inverse())

    def eval_frobenius(self, l: int, ring: CoeffRing) -> PadicApprox:
        p = ring.p
        if gcd(l, p * self.chi.conductor) != 1:
            raise ValueError(f"F_{l} is ramified for this character")
        r = self.kappa_power
        lpow = pow(l, -r, ring.pM) if r else 1
        return ring.element(lpow) * self.chi.value_padic(l, ring)

    def eval_residue(self, a: int, level_prec: int, ring: CoeffRing) -> PadicApprox:
        """Value at the group element labeled by the residue a (known mod p^level_prec)."""
        p = ring.p
        if gcd(a, p * self.chi.conductor) != 1:
            raise ValueError("residue is ramified for this character")
        r = self.kappa_power
        prec = ring.prec if r == 0 else min(ring.prec, level_prec)
        value = self.chi.value_padic(a, ring).at_precision(prec)
        if r:
            value = value * ring.element(pow(a, -r, ring.pM), prec)
        return value

    def label(self) -> str:
        parts = []
        if self.kappa_power:
            parts.append(f"kappa^{self.kappa_power}" if self.kappa_power != 1 else "kappa")
        if not self.chi.is_trivial():
            parts.append(self.chi.label())
        return "*".join(parts) if parts else "triv"

    def __repr__(self):
        return f"GaloisChar({self.label()})"


def eval_galois(rho: GaloisChar, l: int, ring: CoeffRing) -> PadicApprox:
    """Value of rho at the geometric Frobenius F_l: l^(-r) chi(l)."""
    return rho.eval_frobenius(l, ring)


def s_invariant(rho: GaloisChar) -> int:
    """Exponent of the infinite-order part of rho along the cyclotomic line."""
    return rho.kappa_power


# ----------------------------------------------------------------------
# Character specification syntax for the command line.

def parse_char(text: str, p: int | None = None) -> DirichletChar:
    """Parse `triv`, `quad:D`, `teich:j`, or `mod:<m>:<gen=num/den,...>`."""
    text = text.strip()
    if text == "triv":
        return trivial_char()
    if text.startswith("quad:"):
        return quadratic_char(int(text.split(":", 1)[1]))
    if text.startswith("teich:"):
        if p is None:
            raise ValueError("teich:j requires the prime p")
        j = int(text.split(":", 1)[1])
        return teichmuller_char(p) ** j
    if text.startswith("mod:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("expected mod:<m>:<gen=num/den,...>")
        modulus = int(parts[1])
        gen_values = {}
        for item in parts[2].split(","):
            gen, val = item.split("=")
            if "/" in val:
                num, den = val.split("/")
            else:
                num, den = val, "1"
            gen_values[int(gen)] = (int(num), int(den))
        return char_from_values(modulus, gen_values)
    raise ValueError(f"unrecognized character spec: {text!r}")

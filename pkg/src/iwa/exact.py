"""Exact rational and cyclotomic-integer arithmetic.

This is the oracle layer: Bernoulli numbers, generalized Bernoulli numbers
attached to character tables, and arithmetic in Z[zeta_m] with exact norm
and embedding maps between cyclotomic orders.  Everything here is exact;
no p-adic truncation happens in this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

__all__ = [
    "bernoulli",
    "bernoulli_poly",
    "gen_bernoulli",
    "CycloInt",
    "CycloRat",
    "CharTable",
    "cyclo_norm",
    "cyclo_embed",
    "cyclotomic_poly",
    "euler_phi",
    "divisors",
]


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("euler_phi requires m >= 1")
    result, n, q = 1, m, 2
    while q * q <= n:
        if n % q == 0:
            result *= q - 1
            n //= q
            while n % q == 0:
                result *= q
                n //= q
        q += 1
    if n > 1:
        result *= n - 1
    return result


def divisors(m: int) -> list[int]:
    small, large = [], []
    q = 1
    while q * q <= m:
        if m % q == 0:
            small.append(q)
            if q != m // q:
                large.append(m // q)
        q += 1
    return small + large[::-1]


def factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while q * q <= m:
        while m % q == 0:
            out[q] = out.get(q, 0) + 1
            m //= q
        q += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# ----------------------------------------------------------------------
# Integer polynomial helpers (ascending coefficient lists).

def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod_monic(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    # b must be monic; exact integer division.
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [0], a
    q = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = a[i + db]
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("order must be positive")
    f = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in divisors(m):
        if d < m:
            f, r = _poly_divmod_monic(f, list(cyclotomic_poly(d)))
            assert r == [0]
    return tuple(f)


# ----------------------------------------------------------------------
# Bernoulli numbers and polynomials.

_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2, via sum_j C(n+1,j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI_CACHE) <= n:
        k = len(_BERNOULLI_CACHE)
        acc = Fraction(0)
        for j in range(k):
            acc += comb(k + 1, j) * _BERNOULLI_CACHE[j]
        _BERNOULLI_CACHE.append(-acc / (k + 1))
    return _BERNOULLI_CACHE[n]


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    """Value B_k(x) of the k-th Bernoulli polynomial."""
    x = Fraction(x)
    acc = Fraction(0)
    for j in range(k + 1):
        acc += comb(k, j) * bernoulli(j) * x ** (k - j)
    return acc


# ----------------------------------------------------------------------
# Cyclotomic integers: Z[x]/Phi_m(x), reduced eagerly after every product.

class CycloInt:
    """Element of Z[zeta_m], stored reduced modulo the m-th cyclotomic polynomial."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs, reduce: bool = True):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        coeffs = [int(c) for c in coeffs]
        if reduce:
            coeffs = self._reduce(order, coeffs)
        deg = len(cyclotomic_poly(order)) - 1
        if len(coeffs) != deg:
            raise ValueError("coefficient vector has wrong length")
        self.coeffs = tuple(coeffs)

    @staticmethod
    def _reduce(order: int, coeffs: list[int]) -> list[int]:
        phi = list(cyclotomic_poly(order))
        deg = len(phi) - 1
        if len(coeffs) <= deg:
            return coeffs + [0] * (deg - len(coeffs))
        _, r = _poly_divmod_monic(coeffs, phi)
        return list(r) + [0] * (deg - len(r))

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, order: int) -> "CycloInt":
        return cls(order, [0])

    @classmethod
    def one(cls, order: int) -> "CycloInt":
        return cls(order, [1])

    @classmethod
    def from_int(cls, order: int, n: int) -> "CycloInt":
        return cls(order, [n])

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycloInt":
        """zeta_order ** power."""
        power %= order
        return cls(order, [0] * power + [1])

    # -- ring operations -------------------------------------------------
    def _coerce(self, other) -> "CycloInt":
        if isinstance(other, CycloInt):
            if other.order != self.order:
                raise ValueError("mixed cyclotomic orders; embed first")
            return other
        if isinstance(other, int):
            return CycloInt.from_int(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloInt(self.order,
                        [a + b for a, b in zip(self.coeffs, other.coeffs)],
                        reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return CycloInt(self.order, [-a for a in self.coeffs], reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloInt(self.order, _poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in Z[zeta]")
        result = CycloInt.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloInt.from_int(self.order, other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.order}" if i == 1 else f"z{self.order}^{i}"
                terms.append(z if c == 1 else (f"-{z}" if c == -1 else f"{c}*{z}"))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- Galois action and order maps -------------------------------------
    def galois(self, j: int) -> "CycloInt":
        """Image under zeta_m -> zeta_m^j, for j coprime to the order."""
        if gcd(j, self.order) != 1:
            raise ValueError("galois exponent must be coprime to the order")
        out = [0] * self.order
        for i, c in enumerate(self.coeffs):
            out[(i * j) % self.order] += c
        return CycloInt(self.order, out)

    def embed_to(self, target: int) -> "CycloInt":
        """Image in Z[zeta_target] under zeta_m -> zeta_target^(target/m)."""
        if target % self.order != 0:
            raise ValueError("embedding requires the source order to divide the target")
        step = target // self.order
        out = [0] * target
        for i, c in enumerate(self.coeffs):
            out[(i * step) % target] += c
        return CycloInt(target, out)

    def norm_to(self, target: int) -> "CycloInt":
        """Product of the conjugates over Q(zeta_target); requires target | order."""
        m, mm = target, self.order
        if mm % m != 0:
            raise ValueError("norm requires the target order to divide the source")
        prod = CycloInt.one(mm)
        for j in range(1, mm + 1):
            if gcd(j, mm) == 1 and j % m == 1 % m:
                prod = prod * self.galois(j)
        return _express_in_suborder(prod, m)

    def conjugate(self) -> "CycloInt":
        if self.order <= 2:
            return self
        return self.galois(self.order - 1)

    def multiplicative_order(self) -> int | None:
        """Order as a root of unity, or None if not a root of unity."""
        # roots of unity in Q(zeta_m) have order dividing lcm(2, m)
        m = self.order
        bound = m if m % 2 == 0 else 2 * m
        x = CycloInt.one(self.order)
        for n in range(1, bound + 1):
            x = x * self
            if x == CycloInt.one(self.order):
                return n
        return None


def _solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve an (n x k) full-column-rank system exactly; raises if inconsistent."""
    n, k = len(matrix), len(matrix[0])
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = Fraction(1) / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    sol = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        sol[col] = aug[r][k]
    # consistency: all non-pivot rows must have zero rhs
    for r in range(len(pivots), n):
        if aug[r][k] != 0:
            raise ArithmeticError("inconsistent linear system")
    return sol


def _express_in_suborder(x: CycloInt, m: int) -> CycloInt:
    """Rewrite x in Z[zeta_m] when x is known to lie in that subring."""
    mm = x.order
    if mm == m:
        return x
    degm = len(cyclotomic_poly(m)) - 1
    degmm = len(cyclotomic_poly(mm)) - 1
    basis = []
    for i in range(degm):
        e = CycloInt.zeta(m, i if m > 1 else 0) if i > 0 else CycloInt.one(m)
        basis.append(e.embed_to(mm).coeffs)
    matrix = [[Fraction(basis[j][i]) for j in range(degm)] for i in range(degmm)]
    rhs = [Fraction(c) for c in x.coeffs]
    sol = _solve_rational(matrix, rhs)
    out = []
    for v in sol:
        if v.denominator != 1:
            raise ArithmeticError("element does not lie in the requested subring")
        out.append(v.numerator)
    return CycloInt(m, out)


def cyclo_norm(x: CycloInt, target: int) -> CycloInt:
    """Norm of x down to Z[zeta_target]; target must divide the order of x."""
    return x.norm_to(target)


def cyclo_embed(x: CycloInt, target: int) -> CycloInt:
    """Embed x into Z[zeta_target]; the order of x must divide target."""
    return x.embed_to(target)


# ----------------------------------------------------------------------
# Rational-coefficient cyclotomic numbers (needed for Bernoulli sums).

class CycloRat:
    """Element of Q(zeta_m) with exact Fraction coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs, reduce: bool = True):
        self.order = order
        coeffs = [Fraction(c) for c in coeffs]
        if reduce:
            coeffs = self._reduce(order, coeffs)
        deg = len(cyclotomic_poly(order)) - 1
        if len(coeffs) != deg:
            raise ValueError("coefficient vector has wrong length")
        self.coeffs = tuple(coeffs)

    @staticmethod
    def _reduce(order: int, coeffs: list[Fraction]) -> list[Fraction]:
        phi = [Fraction(c) for c in cyclotomic_poly(order)]
        deg = len(phi) - 1
        coeffs = list(coeffs)
        for i in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[i]
            if c:
                for j in range(len(phi)):
                    coeffs[i - deg + j] -= c * phi[j]
        out = coeffs[:deg]
        return out + [Fraction(0)] * (deg - len(out))

    @classmethod
    def from_cyclo(cls, x: CycloInt) -> "CycloRat":
        return cls(x.order, list(x.coeffs), reduce=False)

    @classmethod
    def from_fraction(cls, order: int, q) -> "CycloRat":
        deg = len(cyclotomic_poly(order)) - 1
        return cls(order, [Fraction(q)] + [Fraction(0)] * (deg - 1), reduce=False)

    def _coerce(self, other) -> "CycloRat":
        if isinstance(other, CycloRat):
            if other.order != self.order:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, CycloInt):
            if other.order != self.order:
                raise ValueError("mixed cyclotomic orders")
            return CycloRat.from_cyclo(other)
        if isinstance(other, (int, Fraction)):
            return CycloRat.from_fraction(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloRat(self.order,
                        [a + b for a, b in zip(self.coeffs, other.coeffs)],
                        reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return CycloRat(self.order, [-a for a in self.coeffs], reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return CycloRat(self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloRat(self.order, [a / q for a in self.coeffs], reduce=False)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CycloRat({self.order}, {list(self.coeffs)})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coeffs[0]

    def denominator(self) -> int:
        d = 1
        for c in self.coeffs:
            d = d * c.denominator // gcd(d, c.denominator)
        return d

    def scaled_integer_part(self) -> tuple[CycloInt, int]:
        """Return (y, d) with y in Z[zeta] and self = y / d."""
        d = self.denominator()
        return CycloInt(self.order, [int(c * d) for c in self.coeffs], reduce=False), d

    def embed_to(self, target: int) -> "CycloRat":
        if target % self.order != 0:
            raise ValueError("embedding requires the source order to divide the target")
        step = target // self.order
        out = [Fraction(0)] * target
        for i, c in enumerate(self.coeffs):
            out[(i * step) % target] += c
        return CycloRat(target, out)


# ----------------------------------------------------------------------
# Character value tables.

class CharTable:
    """Value table of a Dirichlet character: residues mod f -> roots of unity in Z[zeta_d]."""

    __slots__ = ("modulus", "order", "values")

    def __init__(self, modulus: int, order: int, values: dict[int, CycloInt]):
        self.modulus = modulus
        self.order = order
        self.values = dict(values)
        if modulus == 1:
            self.values[0 if modulus == 1 else 1] = CycloInt.one(order)

    def value(self, a: int) -> CycloInt:
        if self.modulus == 1:
            return CycloInt.one(self.order)
        a %= self.modulus
        if gcd(a, self.modulus) != 1:
            raise ValueError("value requested at a non-coprime residue")
        return self.values[a]

    def validate(self) -> None:
        m = self.modulus
        if m == 1:
            return
        one = CycloInt.one(self.order)
        if self.value(1) != one:
            raise ValueError("character table must send 1 to 1")
        units = [a for a in range(1, m) if gcd(a, m) == 1]
        for a in units:
            if self.value(a) ** self.order != one:
                raise ValueError("character values must be roots of unity of the stated order")
        for a in units:
            for b in units:
                if self.value(a) * self.value(b) != self.value(a * b % m):
                    raise ValueError("character table is not multiplicative")

    def parity(self) -> int:
        """+1 for even, -1 for odd."""
        if self.modulus <= 2:
            return 1
        v = self.value(self.modulus - 1)
        if v == CycloInt.one(self.order):
            return 1
        if v == -CycloInt.one(self.order):
            return -1
        raise ValueError("value at -1 is not +-1")

    def conductor(self) -> int:
        m = self.modulus
        if m == 1:
            return 1
        one = CycloInt.one(self.order)
        for d in divisors(m):
            # chi factors through (Z/d)^* iff chi kills everything == 1 mod d
            trivial_on_kernel = all(
                self.value(a) == one
                for a in range(1, m)
                if gcd(a, m) == 1 and a % d == 1 % d
            )
            if trivial_on_kernel:
                return d
        return m

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus


def gen_bernoulli(k: int, chi: CharTable) -> CycloRat:
    """Generalized Bernoulli number B_{k,chi} = f^(k-1) sum_a chi(a) B_k(a/f).

    Requires a primitive table (modulus equal to the conductor).  For the
    trivial character mod 1 this returns B_k(1), so gen_bernoulli(1, triv)
    is +1/2 even though bernoulli(1) = -1/2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not chi.is_primitive():
        raise ValueError("gen_bernoulli requires a primitive character table")
    f = chi.modulus
    acc = CycloRat(chi.order, [0])
    for a in range(1, f + 1):
        if gcd(a, f) != 1:
            continue
        b = bernoulli_poly(k, Fraction(a, f))
        acc = acc + CycloRat.from_cyclo(chi.value(a)) * b
    return acc * (Fraction(f) ** (k - 1))

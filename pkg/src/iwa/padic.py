"""Precision-tracked p-adic arithmetic over Z_p and unramified extensions.

Coefficient rings are Z_p[y]/(g) with g a monic divisor of y^D - 1 for some
D prime to p, known modulo p^M.  The choice of g (equivalently, of a prime
above p) follows a fixed deterministic policy so that every embedding is
reproducible across runs: for D | p-1 the designated root of unity is the
Hensel lift of the smallest residue of exact order D mod p; for larger D the
defining polynomial is built from the first irreducible polynomial and the
first primitive root in a fixed enumeration.
"""

from __future__ import annotations

from math import gcd

from iwa.exact import CycloInt, CycloRat, factorize

__all__ = [
    "CoeffRing",
    "PadicApprox",
    "NewtonInvariants",
    "PrecisionError",
    "RamifiedError",
    "teichmuller",
    "hensel_root",
    "embed_cyclo",
    "newton_invariants",
    "padic_log",
    "gamma_exponent",
    "multiplicative_order",
]


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the requested precision."""


class RamifiedError(ValueError):
    """Raised for inputs whose values would require a ramified extension of Z_p."""


def valuation(n: int, p: int, cap: int) -> int:
    """v_p(n), capped at `cap` (and returning cap for n == 0 mod p^cap)."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError("order requires gcd(a, n) = 1")
    order, x = 1, a % n
    while x != 1:
        x = x * a % n
        order += 1
    return order


# ----------------------------------------------------------------------
# Polynomial arithmetic over Z/q (ascending int lists).

def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _pp_add(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q
                  for i in range(n)])


def _pp_sub(a, b, q):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q
                  for i in range(n)])


def _pp_mul(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _trim(out)


def _pp_scale(a, c, q):
    return _trim([ai * c % q for ai in a])


def _pp_divmod(a, b, q):
    # b monic modulo q
    if b[-1] % q != 1:
        raise ValueError("divisor must be monic")
    a = [ai % q for ai in a]
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [0], _trim(a)
    quot = [0] * (da - db + 1)
    for i in range(da - db, -1, -1):
        c = a[i + db] % q
        if c:
            quot[i] = c
            for j, bj in enumerate(b):
                a[i + j] = (a[i + j] - c * bj) % q
    return _trim(quot), _trim(a[:db] if db else [0])


def _pp_pow_mod(base, exp, modpoly, q):
    result = [1]
    base = _pp_divmod(base, modpoly, q)[1]
    while exp:
        if exp & 1:
            result = _pp_divmod(_pp_mul(result, base, q), modpoly, q)[1]
        base = _pp_divmod(_pp_mul(base, base, q), modpoly, q)[1]
        exp >>= 1
    return result


def _pp_monic(a, p):
    lead = a[-1] % p
    if lead == 0:
        raise ValueError("zero leading coefficient")
    inv = pow(lead, -1, p)
    return _pp_scale(a, inv, p)


def _pp_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b != [0]:
        a, b = b, _pp_divmod(a, _pp_monic(b, p), p)[1]
        if b != [0]:
            b = _trim(b)
    return _pp_monic(a, p) if a != [0] else [0]


def _pp_xgcd(a, b, p):
    # returns (g, s, t) with s a + t b = g over F_p, g monic
    r0, r1 = _trim([x % p for x in a]), _trim([x % p for x in b])
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        lead_inv = pow(r1[-1] % p, -1, p)
        q_poly, rem = _pp_divmod(r0, _pp_scale(r1, lead_inv, p), p)
        q_poly = _pp_scale(q_poly, lead_inv, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _pp_sub(s0, _pp_mul(q_poly, s1, p), p)
        t0, t1 = t1, _pp_sub(t0, _pp_mul(q_poly, t1, p), p)
    c = pow(r0[-1] % p, -1, p)
    return _pp_scale(r0, c, p), _pp_scale(s0, c, p), _pp_scale(t0, c, p)


def _hensel_lift_factorization(f, g, h, s, t, p, target_prec):
    """Lift f = g h (mod p), s g + t h = 1 (mod p), g monic, to mod p^target."""
    prec = 1
    while prec < target_prec:
        prec = min(2 * prec, target_prec)
        q = p ** prec
        e = _pp_sub(f, _pp_mul(g, h, q), q)
        qq, r = _pp_divmod(_pp_mul(t, e, q), g, q)
        g_new = _pp_add(g, r, q)
        h_new = _pp_add(h, _pp_add(_pp_mul(s, e, q), _pp_mul(qq, h, q), q), q)
        b = _pp_sub(_pp_add(_pp_mul(s, g_new, q), _pp_mul(t, h_new, q), q), [1], q)
        t0 = _pp_sub(t, _pp_mul(t, b, q), q)
        s0 = _pp_sub(s, _pp_mul(s, b, q), q)
        cc, t_new = _pp_divmod(t0, g_new, q)
        s = _pp_add(s0, _pp_mul(cc, h_new, q), q)
        t = t_new
        g, h = g_new, h_new
    return g, h


# ----------------------------------------------------------------------
# Deterministic construction of the defining polynomial.

def _first_irreducible(p: int, e: int) -> list[int]:
    """First monic irreducible of degree e over F_p in counting order."""
    eprimes = list(factorize(e))
    count = 0
    while True:
        digits = []
        c = count
        for _ in range(e):
            digits.append(c % p)
            c //= p
        poly = digits + [1]
        count += 1
        x = [0, 1]
        if _pp_pow_mod(x, p ** e, poly, p) != _trim([x_ % p for x_ in x]):
            continue
        ok = True
        for q in eprimes:
            d = _pp_sub(_pp_pow_mod(x, p ** (e // q), poly, p), x, p)
            if _pp_gcd(d, poly, p) != [1]:
                ok = False
                break
        if ok:
            return poly


def _gf_mul(a, b, pi, p):
    return _pp_divmod(_pp_mul(a, b, p), pi, p)[1]


def _gf_pow(a, n, pi, p):
    return _pp_pow_mod(a, n, pi, p)


def _canonical_primitive_root(p: int, e: int, d: int, pi: list[int]):
    """First element of F_p[t]/(pi) whose ((p^e-1)/d)-th power has exact order d."""
    card = p ** e - 1
    if card % d != 0:
        raise RamifiedError(f"no {d}-th roots of unity in the residue field")
    cofactor = card // d
    dprimes = list(factorize(d))
    n = 1
    while True:
        digits = []
        c = n
        for _ in range(e):
            digits.append(c % p)
            c //= p
        x = _trim(digits)
        n += 1
        if x == [0]:
            continue
        y = _gf_pow(x, cofactor, pi, p)
        if y == [0]:
            continue
        if _gf_pow(y, d, pi, p) != [1]:
            continue
        if all(_gf_pow(y, d // q, pi, p) != [1] for q in dprimes):
            return y


def _canonical_defining_poly(p: int, root_order: int, prec: int):
    """Monic divisor g of y^D - 1 mod p^prec whose class of y is the designated
    primitive D-th root of unity; returns (g, degree)."""
    d = root_order
    if d % p == 0:
        raise RamifiedError(f"mu_{d} is ramified over Z_{p}")
    q = p ** prec
    if d == 1:
        return [-1 % q, 1], 1
    e = multiplicative_order(p, d)
    if e == 1:
        seed = min(a for a in range(1, p) if multiplicative_order(a, p) == d)
        xi = _teichmuller_int(seed, p, prec)
        return [(-xi) % q, 1], 1
    pi = _first_irreducible(p, e)
    alpha = _canonical_primitive_root(p, e, d, pi)
    # minimal polynomial of alpha: orbit product over F_{p^e}[Y], whose
    # coefficients descend to F_p
    orbit = []
    conj = alpha
    for _ in range(e):
        orbit.append(conj)
        conj = _gf_pow(conj, p, pi, p)
    gf_poly = [[1]]  # polynomial in Y with F_{p^e} coefficients, ascending
    for root in orbit:
        new = [[0] for _ in range(len(gf_poly) + 1)]
        for i, coeff in enumerate(gf_poly):
            new[i + 1] = _pp_add(new[i + 1], coeff, p)
            new[i] = _pp_sub(new[i], _gf_mul(coeff, root, pi, p), p)
        gf_poly = new
    g0 = []
    for coeff in gf_poly:
        if len(_trim(list(coeff))) > 1:
            raise ArithmeticError("orbit product did not descend to F_p")
        g0.append(coeff[0] % p)
    f = [-1] + [0] * (d - 1) + [1]
    h0, rem = _pp_divmod([c % p for c in f], g0, p)
    if _trim(rem) != [0]:
        raise ArithmeticError("canonical factor does not divide y^D - 1 mod p")
    _, s, t = _pp_xgcd(g0, h0, p)
    g, _ = _hensel_lift_factorization([c % q for c in f], g0, h0, s, t, p, prec)
    _, rem = _pp_divmod([c % q for c in f], g, q)
    if _trim(rem) != [0]:
        raise ArithmeticError("lifted factor does not divide y^D - 1")
    return g, e


def _teichmuller_int(a: int, p: int, prec: int) -> int:
    q = p ** prec
    x = a % q
    if x % p == 0:
        raise ValueError("Teichmuller lift requires gcd(a, p) = 1")
    for _ in range(prec + 1):
        nxt = pow(x, p, q)
        if nxt == x:
            break
        x = nxt
    return x


# ----------------------------------------------------------------------
# Coefficient rings.

_RING_CACHE: dict[tuple[int, int, int], "CoeffRing"] = {}


class CoeffRing:
    """Unramified coefficient ring (Z/p^M)[y]/(g), g | y^D - 1, with designated
    primitive D-th root of unity equal to the class of y."""

    def __init__(self, p: int, prec: int, root_order: int = 1):
        if p == 2 or p < 2:
            raise ValueError("p must be an odd prime")
        if prec < 1:
            raise ValueError("precision must be >= 1")
        if gcd(root_order, p) != 1:
            raise RamifiedError(f"root order {root_order} is not prime to p={p}")
        self.p = p
        self.prec = prec
        self.root_order = root_order
        self.pM = p ** prec
        g, e = _canonical_defining_poly(p, root_order, prec)
        self.modpoly = tuple(g)
        self.degree = e
        # rows y^i mod g for i < 2e-1, used to reduce products
        rows = []
        cur = [1] + [0] * (e - 1)
        for i in range(2 * e - 1):
            rows.append(tuple(cur))
            cur = self._shift_reduce(cur)
        self._pow_rows = rows

    @classmethod
    def create(cls, p: int, prec: int, root_order: int = 1) -> "CoeffRing":
        key = (p, prec, root_order)
        ring = _RING_CACHE.get(key)
        if ring is None:
            ring = cls(p, prec, root_order)
            _RING_CACHE[key] = ring
        return ring

    def _shift_reduce(self, vec):
        # multiply by y and reduce mod g
        e, q = self.degree, self.pM
        out = [0] + list(vec[: e - 1])
        lead = vec[e - 1]
        if lead:
            for i in range(e):
                out[i] = (out[i] - lead * self.modpoly[i]) % q
        else:
            out = [c % q for c in out]
        return out

    def __repr__(self):
        if self.degree == 1:
            return f"Z_{self.p} mod {self.p}^{self.prec} (mu_{self.root_order})"
        return (f"unramified ext of Z_{self.p}, degree {self.degree}, "
                f"mod {self.p}^{self.prec} (mu_{self.root_order})")

    # -- raw vector arithmetic -------------------------------------------
    def vec_zero(self):
        return (0,) * self.degree

    def vec_one(self):
        return (1,) + (0,) * (self.degree - 1)

    def vec_from_int(self, n: int):
        return (n % self.pM,) + (0,) * (self.degree - 1)

    def vec_add(self, a, b, q=None):
        q = q or self.pM
        return tuple((x + y) % q for x, y in zip(a, b))

    def vec_sub(self, a, b, q=None):
        q = q or self.pM
        return tuple((x - y) % q for x, y in zip(a, b))

    def vec_mul(self, a, b, q=None):
        q = q or self.pM
        e = self.degree
        if e == 1:
            return (a[0] * b[0] % q,)
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = [0] * e
        for i, c in enumerate(prod):
            if c:
                row = self._pow_rows[i]
                for j in range(e):
                    out[j] += c * row[j]
        return tuple(c % q for c in out)

    def vec_scale(self, a, c: int, q=None):
        q = q or self.pM
        return tuple(x * c % q for x in a)

    def vec_pow(self, a, n: int, q=None):
        q = q or self.pM
        result = self.vec_one()
        base = tuple(x % q for x in a)
        while n:
            if n & 1:
                result = self.vec_mul(result, base, q)
            base = self.vec_mul(base, base, q)
            n >>= 1
        return result

    def vec_val(self, a, cap=None) -> int:
        cap = cap if cap is not None else self.prec
        return min(valuation(c, self.p, cap) for c in a)

    def vec_inv_unit(self, a, prec=None):
        """Inverse of a unit (valuation 0), via Newton lifting from mod p."""
        prec = prec or self.prec
        p = self.p
        a_mod = [c % p for c in a]
        g_mod = [c % p for c in self.modpoly]
        gpoly, s, _ = _pp_xgcd(a_mod, g_mod, p)
        if gpoly != [1]:
            raise ZeroDivisionError("element is not a unit")
        inv = list(s)
        cur = 1
        while cur < prec:
            cur = min(2 * cur, prec)
            q = p ** cur
            av = tuple(c % q for c in a)
            iv = tuple((inv[i] if i < len(inv) else 0) % q for i in range(self.degree))
            prod = self.vec_mul(av, iv, q)
            corr = self.vec_sub(self.vec_from_int(2), prod, q)
            iv = self.vec_mul(iv, corr, q)
            inv = list(iv)
        return tuple((inv[i] if i < len(inv) else 0) % (p ** prec)
                     for i in range(self.degree))

    # -- designated roots of unity ----------------------------------------
    def root_vec(self):
        """The designated primitive root of unity of order root_order."""
        if self.degree == 1:
            return ((-self.modpoly[0]) % self.pM,)
        return (0, 1) + (0,) * (self.degree - 2)

    def root_of_unity(self, d: int):
        """Designated d-th root of unity: root ** (root_order / d)."""
        if d == 1:
            return self.vec_one()
        if d == 2:
            return self.vec_from_int(-1)
        if d < 1 or self.root_order % d != 0:
            raise RamifiedError(
                f"ring carries mu_{self.root_order}; no canonical mu_{d}")
        return self.vec_pow(self.root_vec(), self.root_order // d)

    def teichmuller_int(self, a: int) -> int:
        return _teichmuller_int(a, self.p, self.prec)

    # -- element factory ---------------------------------------------------
    def element(self, value, prec=None) -> "PadicApprox":
        prec = prec if prec is not None else self.prec
        if isinstance(value, PadicApprox):
            return value.at_precision(min(prec, value.prec))
        if isinstance(value, int):
            return PadicApprox(self, self.vec_from_int(value), prec)
        return PadicApprox(self, tuple(value), prec)

    def zero(self, prec=None):
        return self.element(0, prec)

    def one(self, prec=None):
        return self.element(1, prec)


class PadicApprox:
    """Ring element known modulo p^prec (coefficient vector on the y-basis)."""

    __slots__ = ("ring", "vec", "prec")

    def __init__(self, ring: CoeffRing, vec, prec: int):
        if prec < 0:
            raise PrecisionError("precision exhausted (negative precision)")
        if prec > ring.prec:
            prec = ring.prec
        self.ring = ring
        q = ring.p ** prec
        self.vec = tuple(int(c) % q for c in vec)
        self.prec = prec

    def at_precision(self, prec: int) -> "PadicApprox":
        return PadicApprox(self.ring, self.vec, min(prec, self.prec))

    def valuation(self) -> int:
        """min coefficient valuation, capped at the precision."""
        return self.ring.vec_val(self.vec, cap=self.prec)

    def is_zero(self) -> bool:
        return self.valuation() >= self.prec

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def _coerce(self, other):
        if isinstance(other, PadicApprox):
            if other.ring is not self.ring and (
                    other.ring.p != self.ring.p
                    or other.ring.modpoly != self.ring.modpoly):
                raise ValueError("mixed coefficient rings")
            return other
        if isinstance(other, int):
            return PadicApprox(self.ring, self.ring.vec_from_int(other), self.prec)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = min(self.prec, other.prec)
        return PadicApprox(self.ring, self.ring.vec_add(self.vec, other.vec), m)

    __radd__ = __add__

    def __neg__(self):
        return PadicApprox(self.ring, tuple(-c for c in self.vec), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = min(self.prec, other.prec)
        return PadicApprox(self.ring, self.ring.vec_sub(self.vec, other.vec), m)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        m = min(self.prec, other.prec)
        return PadicApprox(self.ring, self.ring.vec_mul(self.vec, other.vec), m)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return (self ** (-n)).inverse()
        return PadicApprox(self.ring, self.ring.vec_pow(self.vec, n), self.prec)

    def inverse(self) -> "PadicApprox":
        if not self.is_unit():
            raise ZeroDivisionError("inverse of a non-unit")
        return PadicApprox(self.ring, self.ring.vec_inv_unit(self.vec, self.prec),
                           self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        v = other.valuation()
        if v >= other.prec:
            raise ZeroDivisionError("division by zero at working precision")
        m = min(self.prec, other.prec) - v
        if v == 0:
            inv = other.at_precision(min(self.prec, other.prec)).inverse()
            return (self * inv).at_precision(m)
        p = self.ring.p
        unit_vec = tuple(c // (p ** v) for c in other.vec)
        inv = self.ring.vec_inv_unit(unit_vec, m + v)
        num = self.ring.vec_mul(self.vec, inv, p ** (m + v))
        if any(c % (p ** v) for c in num):
            raise PrecisionError("quotient is not integral")
        return PadicApprox(self.ring, tuple(c // (p ** v) for c in num), m)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def lift(self) -> int:
        """Integer lift (degree-1 rings only)."""
        if self.ring.degree != 1:
            raise ValueError("lift is only defined over Z_p itself")
        return self.vec[0]

    def __repr__(self):
        body = str(self.vec[0]) if self.ring.degree == 1 else str(list(self.vec))
        return f"{body} + O({self.ring.p}^{self.prec})"


# ----------------------------------------------------------------------
# Named operations.

def teichmuller(a: int, ring: CoeffRing) -> PadicApprox:
    """The (p-1)-th root of unity congruent to a mod p."""
    if a % ring.p == 0:
        raise ValueError("Teichmuller lift requires a unit argument")
    return ring.element(ring.teichmuller_int(a))


def hensel_root(poly, seed: int, ring: CoeffRing) -> PadicApprox:
    """Newton-lift a simple root mod p of an integer polynomial to precision M."""
    p, q = ring.p, ring.pM
    coeffs = [int(c) for c in poly]

    def f(x):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % q
        return acc

    def fprime(x):
        acc = 0
        for i in range(len(coeffs) - 1, 0, -1):
            acc = (acc * x + i * coeffs[i]) % q
        return acc

    x = seed % q
    if f(x) % p != 0:
        raise ValueError("seed is not a root mod p")
    if fprime(x) % p == 0:
        raise ValueError("seed is not a simple root mod p")
    for _ in range(ring.prec.bit_length() + 2):
        step = f(x) * pow(fprime(x), -1, q) % q
        x = (x - step) % q
        if step == 0:
            break
    if f(x) % q != 0:
        raise ArithmeticError("Newton iteration failed to converge")
    return ring.element(x)


def embed_cyclo(x, ring: CoeffRing, prec=None) -> PadicApprox:
    """Embed a CycloInt/CycloRat of order d | root_order via the designated root."""
    prec = prec if prec is not None else ring.prec
    if isinstance(x, CycloRat):
        # the value may be integral even when the denominator carries p: the
        # embedded numerator can be divisible by the prime above p.  Division
        # tracks the precision loss and raises if the quotient is not integral.
        num, den = x.scaled_integer_part()
        emb = embed_cyclo(num, ring, prec)
        return emb / ring.element(den, prec)
    if not isinstance(x, CycloInt):
        raise TypeError("embed_cyclo expects a CycloInt or CycloRat")
    d = x.order
    if gcd(d, ring.p) != 1:
        raise RamifiedError(f"mu_{d} is ramified over Z_{ring.p}")
    zeta = ring.root_of_unity(d)
    acc = ring.vec_zero()
    power = ring.vec_one()
    for c in x.coeffs:
        if c:
            acc = ring.vec_add(acc, ring.vec_scale(power, c))
        power = ring.vec_mul(power, zeta)
    return PadicApprox(ring, acc, prec)


class NewtonInvariants:
    """mu/lambda data read off a coefficient list, with a reliability flag."""

    __slots__ = ("mu", "lam", "reliable")

    def __init__(self, mu, lam, reliable: bool):
        self.mu = mu
        self.lam = lam
        self.reliable = reliable

    def __repr__(self):
        return f"NewtonInvariants(mu={self.mu}, lambda={self.lam}, reliable={self.reliable})"

    def __eq__(self, other):
        return (isinstance(other, NewtonInvariants)
                and (self.mu, self.lam, self.reliable) == (other.mu, other.lam, other.reliable))


def newton_invariants(coeffs, N: int | None = None) -> NewtonInvariants:
    """mu = min coefficient valuation, lambda = first index attaining it.

    Each coefficient is a PadicApprox (or (valuation, precision) pair).  The
    result is flagged unreliable unless the minimum is certified: some
    coefficient must be provably nonzero, and every coefficient's precision
    must exceed the candidate mu.
    """
    pairs = []
    for c in coeffs[: N if N is not None else len(coeffs)]:
        if isinstance(c, PadicApprox):
            pairs.append((c.valuation(), c.prec))
        else:
            pairs.append((int(c[0]), int(c[1])))
    if not pairs:
        return NewtonInvariants(None, None, False)
    certified = [(v, m) for v, m in pairs if v < m]
    if not certified:
        return NewtonInvariants(None, None, False)
    mu = min(v for v, _ in pairs)
    lam = next(i for i, (v, _) in enumerate(pairs) if v == mu)
    reliable = all(m > mu for _, m in pairs) and pairs[lam][0] < pairs[lam][1]
    return NewtonInvariants(mu, lam, reliable)


# ----------------------------------------------------------------------
# p-adic logarithm and Gamma-exponents.

def padic_log(x: int, p: int, prec: int) -> int:
    """log(x) mod p^prec for x == 1 mod p; the result has valuation >= 1."""
    if x % p != 1:
        raise ValueError("padic_log requires x == 1 mod p")
    guard = 1
    while p ** guard <= prec + 2 * guard + 4:
        guard += 1
    nmax = prec + guard + 1
    work = prec + guard + 1
    q = p ** work
    u = (x - 1) % q
    acc = 0
    term = 1
    for n in range(1, nmax + 1):
        term = term * u % q
        v_n = valuation(n, p, work)
        # v(term) >= n > v_p(n), so term/n is integral
        contrib = (term // (p ** v_n)) * pow(n // (p ** v_n), -1, q) % q
        acc = (acc + contrib) % q if n % 2 == 1 else (acc - contrib) % q
    return acc % (p ** prec)


def gamma_exponent(x: int, f: int, p: int, prec: int) -> int:
    """Exponent s mod p^prec with (1+fp)^s = <x> in 1 + pZ_p.

    <x> is the principal-unit part of x (x times the inverse of its
    Teichmuller representative).
    """
    if x % p == 0:
        raise ValueError("x must be a p-adic unit")
    work = prec + 2
    q = p ** (work + 1)
    t = _teichmuller_int(x, p, work + 1)
    principal = x % q * pow(t, -1, q) % q
    num = padic_log(principal, p, work)
    den = padic_log((1 + f * p) % q, p, work)
    v = valuation(den, p, work)
    if valuation(num, p, work) < v:
        raise ArithmeticError("exponent is not p-integral")
    result = (num // p ** v) * pow(den // p ** v, -1, p ** work) % (p ** work)
    return result % (p ** prec)

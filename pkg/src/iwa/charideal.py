"""Characteristic ideals of presented torsion modules over truncated Iwasawa
algebras.

A presented module is a square matrix over Lambda = O[[T]] truncated at
(p^M, T^N) whose determinant is a nonzerodivisor; its characteristic ideal is
the principal ideal generated by the determinant, stored in canonical
Weierstrass form p^mu * P(T) * (unit normalized away).  Ideals multiply
componentwise, support formal inverses, and are compared only through their
canonical forms; the identities (multiplicativity on triangles, shift
inversion, base-change commutation, Euler-factor comparison) are exercised by
the verification suites.
"""

from __future__ import annotations

from math import gcd

from iwa.characters import GaloisChar
from iwa.groupring import LevelGroup, delta_characters
from iwa.padic import (
    CoeffRing,
    PadicApprox,
    PrecisionError,
    gamma_exponent,
    valuation,
)
from iwa.series import IwasawaSeries

__all__ = [
    "LambdaTrunc",
    "PresentedModule",
    "CanonicalGen",
    "FractionalIdeal",
    "char_of_presentation",
    "alternating_char",
    "base_change",
    "mu_vanishing_check",
    "frobenius_quotient_char",
    "euler_factor_ideal",
    "QuotientIdeal",
    "ZeroDivisorAtLevel",
]


class ZeroDivisorAtLevel(ArithmeticError):
    """The requested finite level makes the Euler factor a zero divisor."""


class LambdaTrunc:
    """The ring O[T] modulo (p^M, T^N) with O an unramified coefficient ring."""

    __slots__ = ("ring", "N")

    def __init__(self, ring: CoeffRing, N: int):
        self.ring = ring
        self.N = N

    @classmethod
    def create(cls, p: int, M: int, N: int, root_order: int = 1) -> "LambdaTrunc":
        return cls(CoeffRing.create(p, M, root_order), N)

    def series(self, coeffs, prec=None) -> IwasawaSeries:
        if isinstance(coeffs, IwasawaSeries):
            return coeffs.truncate(self.N)
        coeffs = list(coeffs)[: self.N]
        coeffs += [0] * (self.N - len(coeffs))
        vecs = [self.ring.vec_from_int(c) if isinstance(c, int) else tuple(c)
                for c in coeffs]
        return IwasawaSeries(self.ring, vecs, prec)

    def one(self) -> IwasawaSeries:
        return IwasawaSeries.constant(self.ring, 1, self.N)

    def zero(self) -> IwasawaSeries:
        return IwasawaSeries.constant(self.ring, 0, self.N)

    def t_power(self, j: int) -> IwasawaSeries:
        return self.one().shift(j)

    def __repr__(self):
        return f"LambdaTrunc(p={self.ring.p}, M={self.ring.prec}, N={self.N})"


class PresentedModule:
    """Square presentation matrix with nonzerodivisor determinant."""

    __slots__ = ("lam", "matrix", "size", "_det")

    def __init__(self, lam: LambdaTrunc, matrix):
        self.lam = lam
        self.matrix = [list(row) for row in matrix]
        self.size = len(self.matrix)
        if any(len(row) != self.size for row in self.matrix):
            raise ValueError("presentation matrices must be square")
        self._det = _det_series(self.matrix, lam)
        if self._det.is_zero():
            raise PrecisionError(
                f"determinant vanishes mod (p^{lam.ring.prec}, T^{lam.N}); "
                "the module is not presented as torsion at this precision")

    def det(self) -> IwasawaSeries:
        return self._det

    @classmethod
    def from_json(cls, data: dict) -> "PresentedModule":
        lam = LambdaTrunc.create(data["p"], data["M"], data["N"],
                                 data.get("root_order", 1))
        rows = []
        for row in data["entries"]:
            rows.append([lam.series([int(c) for c in cell]) for cell in row])
        return cls(lam, rows)

    @classmethod
    def from_csv(cls, text: str, p: int, M: int, N: int) -> "PresentedModule":
        lam = LambdaTrunc.create(p, M, N)
        rows = []
        for line in text.strip().splitlines():
            cells = [c.strip() for c in line.split(",")]
            rows.append([lam.series([int(x) for x in cell.split()]) for cell in cells])
        return cls(lam, rows)


def _det_series(matrix, lam: LambdaTrunc) -> IwasawaSeries:
    """Determinant by expansion over column subsets (exact in the truncation)."""
    n = len(matrix)
    if n == 0:
        return lam.one()
    # dp over subsets of columns: minor determinants of the top rows
    prev = {0: lam.one()}
    for i in range(n):
        cur = {}
        for subset, value in prev.items():
            sign = 1
            for j in range(n):
                bit = 1 << j
                if subset & bit:
                    continue
                term = value * matrix[i][j]
                if sign < 0:
                    term = -term
                key = subset | bit
                cur[key] = term if key not in cur else cur[key] + term
                sign = -sign
        prev = cur
    return prev[(1 << n) - 1]


def det_oracle(matrix, lam: LambdaTrunc):
    """Independent elimination oracle: lift the entries to exact integer
    polynomials, expand the determinant over Z[T], and reduce.  Only valid
    for degree-1 coefficient rings."""
    if lam.ring.degree != 1:
        raise ValueError("the exact oracle applies to Z_p coefficients")
    n = len(matrix)
    lifted = [[[c[0] for c in entry.coeffs] for entry in row] for row in matrix]

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out

    def poly_add(a, b, sign=1):
        m = max(len(a), len(b))
        return [(a[i] if i < len(a) else 0) + sign * (b[i] if i < len(b) else 0)
                for i in range(m)]

    prev = {0: [1]}
    for i in range(n):
        cur = {}
        for subset, value in prev.items():
            sign = 1
            for j in range(n):
                bit = 1 << j
                if subset & bit:
                    continue
                term = poly_mul(value, lifted[i][j])
                if sign < 0:
                    term = [-x for x in term]
                key = subset | bit
                cur[key] = term if key not in cur else poly_add(cur[key], term)
                sign = -sign
        prev = cur
    full = prev[(1 << n) - 1]
    pM = lam.ring.pM
    out = [(full[i] if i < len(full) else 0) % pM for i in range(lam.N)]
    return out


# ----------------------------------------------------------------------
# Canonical generators and fractional ideals.

class CanonicalGen:
    """p^mu times a distinguished monic polynomial, at a stated precision."""

    __slots__ = ("ring", "mu", "poly", "prec")

    def __init__(self, ring: CoeffRing, mu: int, poly, prec: int):
        self.ring = ring
        self.mu = mu
        norm = []
        q = ring.p ** max(prec, 0)
        for c in poly:
            vec = c.vec if isinstance(c, PadicApprox) else c
            norm.append(tuple(int(x) % q for x in vec))
        self.poly = norm
        self.prec = prec

    @property
    def lam(self) -> int:
        return len(self.poly) - 1

    @classmethod
    def one(cls, ring: CoeffRing, prec=None) -> "CanonicalGen":
        return cls(ring, 0, [ring.vec_one()], prec if prec is not None else ring.prec)

    @classmethod
    def from_series(cls, series: IwasawaSeries) -> "CanonicalGen":
        mu, pcoeffs, _unit, prec = series.weierstrass()
        return cls(series.ring, mu, [c.vec for c in pcoeffs], prec)

    def __mul__(self, other: "CanonicalGen") -> "CanonicalGen":
        ring = self.ring
        prec = min(self.prec, other.prec)
        out = [ring.vec_zero()] * (self.lam + other.lam + 1)
        for i, a in enumerate(self.poly):
            for j, b in enumerate(other.poly):
                out[i + j] = ring.vec_add(out[i + j], ring.vec_mul(a, b))
        return CanonicalGen(ring, self.mu + other.mu, out, prec)

    def __eq__(self, other):
        if not isinstance(other, CanonicalGen):
            return NotImplemented
        if self.mu != other.mu or self.lam != other.lam:
            return False
        prec = min(self.prec, other.prec)
        q = self.ring.p ** prec
        return all(all((x - y) % q == 0 for x, y in zip(a, b))
                   for a, b in zip(self.poly, other.poly))

    def divides_exactly(self, other: "CanonicalGen"):
        """other / self if the distinguished parts divide exactly at precision."""
        if self.mu > other.mu or self.lam > other.lam:
            return None
        ring = self.ring
        prec = min(self.prec, other.prec)
        q = ring.p ** prec
        rem = [tuple(x % q for x in c) for c in other.poly]
        quot = [ring.vec_zero()] * (other.lam - self.lam + 1)
        for i in range(other.lam - self.lam, -1, -1):
            c = rem[i + self.lam]
            quot[i] = c
            for j, b in enumerate(self.poly):
                rem[i + j] = ring.vec_sub(rem[i + j], ring.vec_mul(c, b, q), q)
        if any(ring.vec_val(c, cap=prec) < prec for c in rem):
            return None
        # the quotient of distinguished polynomials is distinguished
        for c in quot[:-1]:
            if ring.vec_val(c, cap=prec) == 0:
                return None
        return CanonicalGen(ring, other.mu - self.mu, quot, prec)

    def is_one(self) -> bool:
        return self.mu == 0 and self.lam == 0

    def to_json(self) -> dict:
        return {"mu": self.mu, "lambda": self.lam,
                "distinguished_coeffs": [[str(x) for x in c] for c in self.poly],
                "precision": self.prec}

    def __repr__(self):
        return f"CanonicalGen(p^{self.mu} * distinguished deg {self.lam})"


class IdealComponent:
    """num / den pair of canonical generators (den = None means integral)."""

    __slots__ = ("num", "den")

    def __init__(self, num: CanonicalGen, den: CanonicalGen | None = None):
        self.num = num
        self.den = den
        self._reduce()

    def _reduce(self):
        if self.den is None:
            return
        common = min(self.num.mu, self.den.mu)
        if common:
            self.num = CanonicalGen(self.num.ring, self.num.mu - common,
                                    self.num.poly, self.num.prec)
            self.den = CanonicalGen(self.den.ring, self.den.mu - common,
                                    self.den.poly, self.den.prec)
        quot = self.den.divides_exactly(self.num)
        if quot is not None:
            self.num = quot
            self.den = None
        elif self.den.is_one():
            self.den = None

    def inverse(self) -> "IdealComponent":
        num = self.den if self.den is not None else CanonicalGen.one(
            self.num.ring, self.num.prec)
        return IdealComponent(num, self.num)

    def __mul__(self, other: "IdealComponent") -> "IdealComponent":
        num = self.num * other.num
        dens = [d for d in (self.den, other.den) if d is not None]
        den = None
        if dens:
            den = dens[0]
            if len(dens) == 2:
                den = dens[0] * dens[1]
        return IdealComponent(num, den)

    def __eq__(self, other):
        if not isinstance(other, IdealComponent):
            return NotImplemented
        one = CanonicalGen.one(self.num.ring, self.num.prec)
        lhs = self.num * (other.den if other.den is not None else one)
        rhs = other.num * (self.den if self.den is not None else one)
        return lhs == rhs

    def is_trivial(self) -> bool:
        return self == IdealComponent(CanonicalGen.one(self.num.ring, self.num.prec))

    def mu_lambda(self) -> tuple[int, int]:
        mu = self.num.mu - (self.den.mu if self.den else 0)
        lam = self.num.lam - (self.den.lam if self.den else 0)
        return mu, lam

    def to_json(self) -> dict:
        data = self.num.to_json()
        if self.den is not None:
            data["denominator"] = self.den.to_json()
        return data

    def __repr__(self):
        if self.den is None:
            return f"({self.num!r})"
        return f"({self.num!r} / {self.den!r})"


class FractionalIdeal:
    """Invertible fractional ideal: one canonical component per character."""

    __slots__ = ("components",)

    def __init__(self, components: dict):
        self.components = dict(components)

    @classmethod
    def principal(cls, series: IwasawaSeries, label: str = "1") -> "FractionalIdeal":
        return cls({label: IdealComponent(CanonicalGen.from_series(series))})

    def labels(self):
        return list(self.components)

    def component(self, label) -> IdealComponent:
        return self.components[label]

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        if set(self.components) != set(other.components):
            raise ValueError("ideals live on different component sets")
        return FractionalIdeal({k: self.components[k] * other.components[k]
                                for k in self.components})

    def inverse(self) -> "FractionalIdeal":
        return FractionalIdeal({k: c.inverse() for k, c in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, FractionalIdeal):
            return NotImplemented
        if set(self.components) != set(other.components):
            return False
        return all(self.components[k] == other.components[k] for k in self.components)

    def is_trivial(self) -> bool:
        return all(c.is_trivial() for c in self.components.values())

    def to_json(self) -> list:
        return [dict(chi=str(k), **c.to_json())
                for k, c in sorted(self.components.items(), key=lambda kv: str(kv[0]))]

    def __repr__(self):
        return f"FractionalIdeal({self.components})"


# ----------------------------------------------------------------------
# Named operations.

def char_of_presentation(m: PresentedModule, label: str = "1") -> FractionalIdeal:
    """The principal ideal generated by det(m), in canonical form."""
    return FractionalIdeal.principal(m.det(), label)


def alternating_char(parts) -> FractionalIdeal:
    """Product of (ideal, sign) pairs with exponents +-1."""
    result = None
    for ideal, sign in parts:
        term = ideal if sign == 1 else ideal.inverse()
        result = term if result is None else result * term
    if result is None:
        raise ValueError("empty alternating product")
    return result


def mu_vanishing_check(m: PresentedModule) -> bool:
    """True iff the canonical generator of char(m) has mu = 0 (equivalently,
    the module is O-finite).  Raises PrecisionError when undetermined."""
    inv = m.det().newton()
    if not inv.reliable:
        raise PrecisionError("mu is not determined at working precision")
    return inv.mu == 0


def base_change(ideal: FractionalIdeal, phi) -> "FractionalIdeal | QuotientIdeal":
    """Image of an ideal under a transfer map.

    phi is one of ("component", label), ("normalization",), or ("tower", k):
    component projection extracts one character component, normalization
    splits a product ring into its vector of components (the identity on the
    stored representation), and the tower map pushes each component into the
    finite group ring O[T]/((1+T)^(p^(k-1)) - 1).
    """
    kind = phi[0]
    if kind == "component":
        return FractionalIdeal({phi[1]: ideal.components[phi[1]]})
    if kind == "normalization":
        return FractionalIdeal(dict(ideal.components))
    if kind == "tower":
        k = phi[1]
        return QuotientIdeal({label: _push_to_level(c, k)
                              for label, c in ideal.components.items()}, k)
    raise ValueError(f"non-extendable descriptor: {phi!r}")


# ----------------------------------------------------------------------
# Finite-level quotient ring O[T]/((1+T)^(p^(k-1)) - 1).

def _reduce_mod_quotient(ring: CoeffRing, coeffs, n: int):
    """Reduce a T-polynomial modulo (1+T)^n - 1 = T^n + sum_{0<j<n} C(n,j) T^j."""
    from math import comb
    out = list(coeffs) + [ring.vec_zero()] * max(0, n - len(coeffs))
    for i in range(len(out) - 1, n - 1, -1):
        c = out[i]
        if all(x == 0 for x in c):
            continue
        out[i] = ring.vec_zero()
        for j in range(1, n):
            pos = i - n + j
            out[pos] = ring.vec_sub(out[pos], ring.vec_scale(c, comb(n, j)))
    return out[:n]


def _push_to_level(component: IdealComponent, k: int) -> "QuotientElement":
    if component.den is not None:
        raise ValueError("tower push of a non-integral ideal is not supported")
    gen = component.num
    ring = gen.ring
    n = ring.p ** (k - 1)
    if gen.lam >= n:
        raise ValueError("generator degree exceeds the level quotient")
    coeffs = [ring.vec_zero()] * n
    for i, c in enumerate(gen.poly):
        coeffs[i] = tuple(x * ring.p ** gen.mu % ring.pM for x in c)
    return QuotientElement(ring, k, coeffs, prec=min(gen.prec + gen.mu, ring.prec))


class QuotientElement:
    """Element of O[T]/((1+T)^(p^(k-1)) - 1) as a T-coefficient vector."""

    __slots__ = ("ring", "k", "coeffs", "prec")

    def __init__(self, ring: CoeffRing, k: int, coeffs, prec: int | None = None):
        self.ring = ring
        self.k = k
        self.coeffs = list(coeffs)
        self.prec = ring.prec if prec is None else prec

    def n(self):
        return self.ring.p ** (self.k - 1)

    def mult_matrix(self):
        """Multiplication matrix over Z/p^M on the flattened basis T^i y^j."""
        ring = self.ring
        n = self.n()
        e = ring.degree
        cols = []
        for i in range(n):
            shifted = _reduce_mod_quotient(
                ring, [ring.vec_zero()] * i + list(self.coeffs), n)
            for j in range(e):
                yj = tuple(1 if t == j else 0 for t in range(e))
                col = []
                for pos in range(n):
                    col.extend(ring.vec_mul(shifted[pos], yj))
                cols.append(col)
        import numpy as _np
        return _np.array(cols, dtype=object).T

    def flatten(self):
        out = []
        for c in self.coeffs:
            out.extend(c)
        return out

    def is_unit(self) -> bool:
        # the quotient mod p is F[T]/T^n: unit iff the constant term is a unit
        return self.ring.vec_val(self.coeffs[0], cap=self.ring.prec) == 0

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        q = self.ring.p ** min(self.prec, other.prec)
        return all(all((x - y) % q == 0 for x, y in zip(a, b))
                   for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, other: "QuotientElement") -> "QuotientElement":
        ring = self.ring
        n = self.n()
        prod = [ring.vec_zero()] * (2 * n - 1)
        for i, x in enumerate(self.coeffs):
            if all(v == 0 for v in x):
                continue
            for j, y in enumerate(other.coeffs):
                prod[i + j] = ring.vec_add(prod[i + j], ring.vec_mul(x, y))
        return QuotientElement(ring, self.k, _reduce_mod_quotient(ring, prod, n),
                               prec=min(self.prec, other.prec))

    def __add__(self, other: "QuotientElement") -> "QuotientElement":
        ring = self.ring
        return QuotientElement(ring, self.k,
                               [ring.vec_add(a, b)
                                for a, b in zip(self.coeffs, other.coeffs)],
                               prec=min(self.prec, other.prec))

    def __neg__(self):
        return QuotientElement(self.ring, self.k,
                               [tuple(-x for x in c) for c in self.coeffs],
                               prec=self.prec)


def quotient_push_series(series: IwasawaSeries, k: int) -> QuotientElement:
    """Image of a truncated series in O[T]/((1+T)^(p^(k-1)) - 1); requires the
    truncation to fit under the quotient degree."""
    ring = series.ring
    n = ring.p ** (k - 1)
    if series.N > n:
        raise ValueError("truncation exceeds the quotient degree")
    coeffs = list(series.coeffs) + [ring.vec_zero()] * (n - series.N)
    return QuotientElement(ring, k, coeffs)


def quotient_push_det(m: PresentedModule, k: int) -> QuotientElement:
    """Determinant of the pushed presentation, computed inside the finite
    quotient ring (the left side of the base-change commutation)."""
    pushed = [[quotient_push_series(entry, k) for entry in row] for row in m.matrix]
    n = m.size
    ring = m.lam.ring
    one = QuotientElement(ring, k, [ring.vec_one()]
                          + [ring.vec_zero()] * (ring.p ** (k - 1) - 1))
    prev = {0: one}
    for i in range(n):
        cur = {}
        for subset, value in prev.items():
            sign = 1
            for j in range(n):
                bit = 1 << j
                if subset & bit:
                    continue
                term = value * pushed[i][j]
                if sign < 0:
                    term = -term
                key = subset | bit
                cur[key] = term if key not in cur else cur[key] + term
                sign = -sign
        prev = cur
    return prev[(1 << n) - 1]


class QuotientIdeal:
    """Ideal of the finite-level quotient ring, one generator per component;
    equality is mutual divisibility decided by linear algebra mod p^M."""

    __slots__ = ("components", "k")

    def __init__(self, components: dict, k: int):
        self.components = dict(components)
        self.k = k

    def __eq__(self, other):
        if not isinstance(other, QuotientIdeal) or self.k != other.k:
            return NotImplemented
        if set(self.components) != set(other.components):
            return False
        for label in self.components:
            a, b = self.components[label], other.components[label]
            if not (_divides_quotient(b, a) and _divides_quotient(a, b)):
                return False
        return True


def _divides_quotient(a: QuotientElement, b: QuotientElement) -> bool:
    """Whether b lies in the ideal (a) of the quotient ring, at the joint
    precision of the two elements."""
    A = a.mult_matrix()
    target = b.flatten()
    prec = min(a.prec, b.prec)
    return _solve_mod_prime_power(A, target, a.ring.p, prec) is not None


def _solve_mod_prime_power(A, b, p, M):
    """Solve A x = b over Z/p^M (A given as an object-dtype matrix)."""
    q = p ** M
    rows = [list(map(int, row)) + [int(bb) % q] for row, bb in zip(A.tolist(), b)]
    n_rows = len(rows)
    n_cols = len(rows[0]) - 1
    pivots = []
    r = 0
    for col in range(n_cols):
        best, best_v = None, M
        for i in range(r, n_rows):
            v = valuation(rows[i][col] % q, p, M)
            if v < best_v:
                best, best_v = i, v
        if best is None or best_v >= M:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        lead = rows[r][col] % q
        unit = lead // p ** best_v
        inv_unit = pow(unit, -1, q)
        rows[r] = [x * inv_unit % q for x in rows[r]]
        for i in range(n_rows):
            if i != r:
                c = rows[i][col] % q
                if c % (p ** best_v) == 0:
                    factor = c // p ** best_v
                    rows[i] = [(x - factor * y) % q
                               for x, y in zip(rows[i], rows[r])]
        pivots.append((r, col, best_v))
        r += 1
        if r == n_rows:
            break
    x = [0] * n_cols
    # rows are now (near) echelon: check consistency and back-substitute
    used = {rr for rr, _, _ in pivots}
    for i in range(n_rows):
        if i not in used:
            if rows[i][n_cols] % q != 0 and all(v % q == 0 for v in rows[i][:n_cols]):
                return None
    for rr, col, v in reversed(pivots):
        rhs = rows[rr][n_cols] % q
        for c2 in range(col + 1, n_cols):
            rhs = (rhs - rows[rr][c2] * x[c2]) % q
        if rhs % p ** v != 0:
            return None
        x[col] = rhs // p ** v % (p ** (M - v))
    # verify
    for i in range(n_rows):
        acc = 0
        for c2 in range(n_cols):
            acc += rows[i][c2] * x[c2]
        if (acc - rows[i][n_cols]) % q != 0:
            return None
    return x


# ----------------------------------------------------------------------
# Frobenius-quotient modules and Euler-factor ideals.

def _sigma_value(rho: GaloisChar, l: int, ring: CoeffRing) -> PadicApprox:
    return rho.inverse_times_kappa().eval_frobenius(l, ring)


def frobenius_quotient_char(l: int, rho: GaloisChar, f: int, p: int,
                            M: int = 6, N: int = 12,
                            level: int | None = None) -> FractionalIdeal:
    """Characteristic ideal of the module presented by 1 - sigma(F_l) g_l
    (sigma = rho^-1 kappa) on the group ring: per character component theta,
    the ideal of Lambda generated by 1 - sigma(l) theta(l) (1+T)^(-e_l), with
    e_l the p-adic Gamma-exponent of l.  Must equal the Euler factor's ideal.
    """
    if l == p:
        raise ValueError("l must differ from p")
    ramified = rho.is_ramified_at(l)
    guard = max(valuation(i, p, M) for i in range(1, N + 1))
    ring = CoeffRing.create(p, M + guard + 1, _delta_root_order(f, p))
    components = {}
    for theta in delta_characters(f, p):
        label = theta.label()
        if ramified:
            components[label] = IdealComponent(CanonicalGen.one(ring, M))
            continue
        if gcd(l, f * p) != 1:
            raise ValueError(f"prime {l} divides the tower modulus and rho is "
                             "unramified there")
        u = _sigma_value(rho, l, ring) * theta.value_padic(l, ring)
        e_l = gamma_exponent(l, f, p, ring.prec)
        if level is not None:
            n = LevelGroup.create(f, p, level).element_order(l % (f * p ** level))
            if (u ** n) == 1:
                raise ZeroDivisorAtLevel(
                    f"1 - sigma(F_{l}) g_{l} is a zero divisor at level {level} "
                    f"on component {label}")
        series = 1 - (IwasawaSeries.one_plus_t_power(
            ring, (-e_l) % ring.pM, N, exponent_prec=ring.prec) * u)
        components[label] = IdealComponent(CanonicalGen.from_series(series))
    return FractionalIdeal(components)


def _delta_root_order(f: int, p: int) -> int:
    order = p - 1
    for theta in delta_characters(f, p):
        order = order * theta.order // gcd(order, theta.order)
    return order


def euler_factor_ideal(l: int, rho: GaloisChar, f: int, p: int,
                       M: int = 6, N: int = 12,
                       levels: tuple[int, int] | None = None) -> FractionalIdeal:
    """The ideal generated by the Euler factor at l, computed from finite
    levels of the tower (with stability between the two levels) - the
    independent route against frobenius_quotient_char."""
    from iwa.lelements import required_level
    if levels is None:
        k = required_level(p, M, N)
        levels = (k, k + 1)
    ramified = rho.is_ramified_at(l)
    ring = CoeffRing.create(p, M + 2, _delta_root_order(f, p))
    components = {}
    for theta in delta_characters(f, p):
        label = theta.label()
        if ramified:
            components[label] = IdealComponent(CanonicalGen.one(ring, M))
            continue
        series_pair = []
        for k in levels:
            group = LevelGroup.create(f, p, k)
            e_k = (-group.gamma_exponent(l % group.modulus)) % group.gamma_order
            u = _sigma_value(rho, l, ring) * theta.value_padic(l, ring)
            series = 1 - (IwasawaSeries.one_plus_t_power(ring, e_k, N) * u)
            # honest profile: level k pins T^j only mod p^(k-1-floor(log_p j))
            from iwa.groupring import _level_profile
            prof = [_level_profile(p, k, j, ring.prec) for j in range(N)]
            series = IwasawaSeries(ring, series.coeffs,
                                   [min(a, b) for a, b in zip(series.prec, prof)])
            series_pair.append(series)
        if not series_pair[0].agrees_with(series_pair[1]):
            raise PrecisionError(f"Euler factor not stable between levels {levels}")
        best = max(series_pair, key=lambda s: min(s.prec))
        components[label] = IdealComponent(CanonicalGen.from_series(best))
    return FractionalIdeal(components)

"""Truncated power series over a p-adic coefficient ring.

An IwasawaSeries is a coefficient list modulo (p^M, T^N) with an explicit
per-coefficient precision profile: series produced from a finite level k of
the cyclotomic tower carry less certainty in their high T-coefficients, and
every arithmetic operation propagates the profile honestly.
"""

from __future__ import annotations

from math import factorial

from iwa.padic import (
    CoeffRing,
    NewtonInvariants,
    PadicApprox,
    PrecisionError,
    newton_invariants,
    valuation,
)

__all__ = ["IwasawaSeries"]


def _binomial_int(s: int, j: int) -> int:
    """C(s, j) for any integer s (generalized binomial, always an integer)."""
    num = 1
    for i in range(j):
        num *= s - i
    return num // factorial(j)


class IwasawaSeries:
    """Series sum c_j T^j over a CoeffRing, c_j known mod p^prec[j], j < N."""

    __slots__ = ("ring", "N", "coeffs", "prec", "meta")

    def __init__(self, ring: CoeffRing, coeffs, prec=None, meta=None):
        self.ring = ring
        self.N = len(coeffs)
        norm = []
        self.prec = []
        prec = prec if prec is not None else [ring.prec] * self.N
        for c, m in zip(coeffs, prec):
            m = max(0, min(int(m), ring.prec))
            if isinstance(c, PadicApprox):
                m = min(m, c.prec)
                c = c.vec
            elif isinstance(c, int):
                c = ring.vec_from_int(c)
            q = ring.p ** m
            norm.append(tuple(int(x) % q for x in c))
            self.prec.append(m)
        self.coeffs = norm
        self.meta = dict(meta) if meta else {}

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, ring: CoeffRing, value, N: int) -> "IwasawaSeries":
        zero = ring.vec_zero()
        first = value if not isinstance(value, int) else ring.vec_from_int(value)
        return cls(ring, [first] + [zero] * (N - 1))

    @classmethod
    def one_plus_t_power(cls, ring: CoeffRing, exponent, N: int,
                         exponent_prec: int | None = None) -> "IwasawaSeries":
        """(1+T)^s truncated at T^N.

        `exponent` is an integer, or a p-adic integer given modulo
        p^exponent_prec; in the p-adic case coefficient j is determined
        modulo p^(exponent_prec - v_p(j!)).
        """
        p = ring.p
        if exponent_prec is None:
            coeffs = [ring.vec_from_int(_binomial_int(exponent, j)) for j in range(N)]
            return cls(ring, coeffs)
        s = int(exponent)
        coeffs, prec = [], []
        q = p ** exponent_prec
        num = 1
        for j in range(N):
            if j > 0:
                num = num * ((s - (j - 1)) % q) % q
            vfac = valuation(factorial(j), p, exponent_prec)
            unit = factorial(j) // (p ** vfac)
            m = exponent_prec - vfac
            if m <= 0:
                coeffs.append(ring.vec_zero())
                prec.append(0)
                continue
            val = num * pow(unit, -1, q) % q
            if val % (p ** vfac):
                raise ArithmeticError("binomial of a p-adic integer must be integral")
            coeffs.append(ring.vec_from_int(val // (p ** vfac)))
            prec.append(m)
        return cls(ring, coeffs, prec)

    @classmethod
    def from_int_coeffs(cls, ring: CoeffRing, ints, N: int | None = None) -> "IwasawaSeries":
        ints = list(ints)
        if N is not None:
            ints = ints[:N] + [0] * (N - len(ints))
        return cls(ring, [ring.vec_from_int(c) for c in ints])

    # -- access -----------------------------------------------------------
    def coeff(self, j: int) -> PadicApprox:
        if j >= self.N:
            raise IndexError("coefficient beyond truncation")
        return PadicApprox(self.ring, self.coeffs[j], self.prec[j])

    def coeff_pairs(self):
        """(valuation, precision) pairs for Newton-polygon analysis."""
        return [(self.ring.vec_val(c, cap=m), m)
                for c, m in zip(self.coeffs, self.prec)]

    def min_precision(self) -> int:
        return min(self.prec) if self.prec else 0

    # -- arithmetic ---------------------------------------------------------
    def _check_ring(self, other: "IwasawaSeries"):
        if self.ring.p != other.ring.p or self.ring.modpoly != other.ring.modpoly:
            raise ValueError("mixed coefficient rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = IwasawaSeries.constant(self.ring, other, self.N)
        self._check_ring(other)
        n = min(self.N, other.N)
        coeffs = [self.ring.vec_add(self.coeffs[j], other.coeffs[j]) for j in range(n)]
        prec = [min(self.prec[j], other.prec[j]) for j in range(n)]
        return IwasawaSeries(self.ring, coeffs, prec)

    __radd__ = __add__

    def __neg__(self):
        return IwasawaSeries(self.ring, [tuple(-x for x in c) for c in self.coeffs],
                             list(self.prec))

    def __sub__(self, other):
        if isinstance(other, int):
            other = IwasawaSeries.constant(self.ring, other, self.N)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        ring = self.ring
        if isinstance(other, int):
            coeffs = [ring.vec_scale(c, other) for c in self.coeffs]
            return IwasawaSeries(ring, coeffs, list(self.prec))
        if isinstance(other, PadicApprox):
            coeffs = [ring.vec_mul(c, other.vec) for c in self.coeffs]
            prec = [min(m, other.prec) for m in self.prec]
            return IwasawaSeries(ring, coeffs, prec)
        self._check_ring(other)
        n = min(self.N, other.N)
        vals_a = [ring.vec_val(c, cap=m) for c, m in zip(self.coeffs, self.prec)]
        vals_b = [ring.vec_val(c, cap=m) for c, m in zip(other.coeffs, other.prec)]
        coeffs, prec = [], []
        for t in range(n):
            acc = ring.vec_zero()
            m = ring.prec
            for i in range(t + 1):
                j = t - i
                acc = ring.vec_add(acc, ring.vec_mul(self.coeffs[i], other.coeffs[j]))
                m = min(m, self.prec[i] + vals_b[j], other.prec[j] + vals_a[i])
            coeffs.append(acc)
            prec.append(m)
        return IwasawaSeries(ring, coeffs, prec)

    __rmul__ = __mul__

    def truncate(self, N: int) -> "IwasawaSeries":
        return IwasawaSeries(self.ring, self.coeffs[:N], self.prec[:N], self.meta)

    def shift(self, j: int) -> "IwasawaSeries":
        """Multiply by T^j."""
        zero = self.ring.vec_zero()
        coeffs = [zero] * j + list(self.coeffs[: self.N - j])
        prec = [self.ring.prec] * j + list(self.prec[: self.N - j])
        return IwasawaSeries(self.ring, coeffs, prec)

    # -- comparisons ----------------------------------------------------------
    def agrees_with(self, other: "IwasawaSeries", min_digits: int = 1) -> bool:
        """Equality on the overlap of the two precision profiles."""
        self._check_ring(other)
        n = min(self.N, other.N)
        p = self.ring.p
        for j in range(n):
            m = min(self.prec[j], other.prec[j])
            if m < min_digits:
                continue
            q = p ** m
            if any((a - b) % q for a, b in zip(self.coeffs[j], other.coeffs[j])):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, IwasawaSeries):
            return NotImplemented
        return self.agrees_with(other)

    def is_zero(self) -> bool:
        return all(self.ring.vec_val(c, cap=m) >= m
                   for c, m in zip(self.coeffs, self.prec))

    # -- structure --------------------------------------------------------------
    def newton(self, N: int | None = None) -> NewtonInvariants:
        return newton_invariants(self.coeff_pairs(), N)

    def is_unit(self) -> bool:
        v0 = self.ring.vec_val(self.coeffs[0], cap=self.prec[0])
        return v0 == 0 and self.prec[0] >= 1

    def inverse(self) -> "IwasawaSeries":
        if not self.is_unit():
            raise ZeroDivisionError("series is not a unit at working precision")
        ring = self.ring
        m = self.min_precision()
        q = ring.p ** m
        inv0 = ring.vec_inv_unit(self.coeffs[0], m)
        out = [inv0]
        for n in range(1, self.N):
            acc = ring.vec_zero()
            for i in range(1, n + 1):
                acc = ring.vec_add(acc, ring.vec_mul(self.coeffs[i], out[n - i], q), q)
            out.append(ring.vec_mul(tuple(-x for x in acc), inv0, q))
        return IwasawaSeries(ring, out, [m] * self.N)

    def content_valuation(self) -> int:
        """mu: minimal coefficient valuation (requires a reliable reading)."""
        inv = self.newton()
        if not inv.reliable:
            raise PrecisionError("content is not determined at working precision")
        return inv.mu

    def divide_p_power(self, mu: int) -> "IwasawaSeries":
        p = self.ring.p
        coeffs, prec = [], []
        for c, m in zip(self.coeffs, self.prec):
            if any(x % p ** min(mu, m) for x in c):
                raise ArithmeticError("coefficient is not divisible by p^mu")
            coeffs.append(tuple(x // p ** mu for x in c))
            prec.append(m - mu)
        return IwasawaSeries(self.ring, coeffs, prec)

    def weierstrass_divide(self, d: "IwasawaSeries"):
        """Division by d with unit coefficient at index lam(d): self = q*d + r,
        deg_T r < lam.  Returns (q, r_coeffs)."""
        ring = self.ring
        inv = d.newton()
        if not inv.reliable or inv.mu != 0:
            raise PrecisionError("divisor must have unit content at working precision")
        lam = inv.lam
        m = min(self.min_precision(), d.min_precision())
        N = min(self.N, d.N)

        def pad(series):
            if series.N >= N:
                return series.truncate(N)
            coeffs = list(series.coeffs) + [ring.vec_zero()] * (N - series.N)
            prec = list(series.prec) + [m] * (N - series.N)
            return IwasawaSeries(ring, coeffs, prec)

        q_series = IwasawaSeries(ring, [ring.vec_zero()] * N, [m] * N)
        b_unit = IwasawaSeries(ring, d.coeffs[lam:N], [m] * (N - lam))
        b_inv = b_unit.inverse()
        rem = self.truncate(N)
        for _ in range(m + 1):
            hi = IwasawaSeries(ring, rem.coeffs[lam:N], [m] * (N - lam))
            if hi.is_zero():
                break
            step = pad(hi * b_inv)
            q_series = q_series + step
            rem = self.truncate(N) - pad(q_series * d.truncate(N))
        r = rem.coeffs[:lam]
        for j in range(lam, N):
            if ring.vec_val(rem.coeffs[j], cap=m) < m:
                raise PrecisionError("weierstrass division failed to converge")
        return q_series, [PadicApprox(ring, c, m) for c in r]

    def weierstrass(self):
        """Canonical form p^mu * P * unit, P distinguished monic of degree lam.

        Returns (mu, P, unit, prec) with P a list of PadicApprox of length
        lam + 1 and unit an IwasawaSeries.  The reported precision accounts
        for the truncation: data mod (p^m, T^N) pins P only mod p^(N // lam),
        because a T^N-tail reduces mod P to a perturbation of that size.
        """
        inv = self.newton()
        if not inv.reliable:
            raise PrecisionError("Newton data unreliable; increase level or precision")
        mu, lam = inv.mu, inv.lam
        reduced = self.divide_p_power(mu) if mu else self
        if lam >= self.N:
            raise PrecisionError("distinguished degree exceeds truncation")
        ring = self.ring
        m = reduced.min_precision()
        prec_out = m if lam == 0 else min(m, reduced.N // lam)
        tlam = IwasawaSeries(ring, [ring.vec_zero()] * lam + [ring.vec_one()]
                             + [ring.vec_zero()] * (reduced.N - lam - 1),
                             [m] * reduced.N)
        q, r = tlam.weierstrass_divide(reduced)
        p_coeffs = [(-ri).at_precision(prec_out) for ri in r] \
            + [PadicApprox(ring, ring.vec_one(), prec_out)]
        for ri in r:
            if ri.valuation() == 0:
                raise ArithmeticError("distinguished part has a unit lower coefficient")
        unit = q.inverse()
        return mu, p_coeffs, unit, prec_out

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, t: PadicApprox) -> PadicApprox:
        """Value at T = t for v(t) >= 1, with honest precision accounting."""
        ring = self.ring
        vt = t.valuation()
        if vt < 1:
            raise PrecisionError("evaluation requires v(t) >= 1")
        acc = ring.vec_zero()
        power = ring.vec_one()
        out_prec = min(self.prec[0], self.N * vt, t.prec)
        for j in range(self.N):
            acc = ring.vec_add(acc, ring.vec_mul(self.coeffs[j], power))
            power = ring.vec_mul(power, t.vec)
            if j > 0:
                out_prec = min(out_prec, self.prec[j] + j * vt)
        return PadicApprox(ring, acc, out_prec)

    # -- serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        inv = self.newton()
        data = {
            "p": self.ring.p,
            "M": self.ring.prec,
            "N": self.N,
            "coeffs": [[str(x) for x in c] for c in self.coeffs],
            "coeff_prec": list(self.prec),
            "mu": inv.mu,
            "lambda": inv.lam,
            "reliable": inv.reliable,
        }
        data.update(self.meta)
        return data

    def __repr__(self):
        inv = self.newton()
        return (f"IwasawaSeries(p={self.ring.p}, N={self.N}, "
                f"mu={inv.mu}, lambda={inv.lam}, reliable={inv.reliable})")

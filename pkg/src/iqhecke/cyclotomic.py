"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are sparse integer-exponent dicts with Fraction coefficients,
canonicalized modulo the n-th cyclotomic polynomial.  This is the scalar
ring for every zero-tolerance identity in the package: character values,
Gauss sums, twisted-sum identities.  Quadratic irrationalities sqrt(-d)
enter through the quadratic Gauss sum, so the whole imaginary quadratic
field embeds exactly.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple


def _poly_divmod_int(num: List[int], den: List[int]) -> Tuple[List[int], List[int]]:
    # exact division of integer polynomials, den monic
    num = list(num)
    dn = len(den) - 1
    out = [0] * (max(len(num) - dn, 0))
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            out[i - dn] = c
            for j, dj in enumerate(den):
                num[i - dn + j] -= c * dj
    return out, num[:dn]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n(x), ascending degree."""
    if n == 1:
        return (-1, 1)
    poly = [0] * (n + 1)
    poly[0], poly[n] = -1, 1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
            assert not any(r), "cyclotomic division must be exact"
            poly = q
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> List[Tuple[int, ...]]:
    """Row j = coefficients of x^(phi+j) mod Phi_n, for j in [0, n-phi)."""
    phi_coeffs = cyclotomic_poly(n)
    phi = len(phi_coeffs) - 1
    row0 = [-c for c in phi_coeffs[:phi]]  # x^phi = -(lower part), Phi monic
    rows = [tuple(row0)]
    prev = row0
    for _ in range(1, n - phi):
        top = prev[phi - 1]
        nxt = [top * row0[0]]
        for i in range(1, phi):
            nxt.append(prev[i - 1] + top * row0[i])
        rows.append(tuple(nxt))
        prev = nxt
    return rows


@lru_cache(maxsize=None)
def _roots_table(n: int) -> Tuple[complex, ...]:
    return tuple(cmath.exp(2j * cmath.pi * k / n) for k in range(n))


class Cyc:
    """An element of Q(zeta_n), zeta_n = exp(2*pi*i/n)."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: Dict[int, Fraction]):
        self.n = n
        self.c = {e % n: v for e, v in coeffs.items() if v != 0}

    # ---- constructors -------------------------------------------------
    @staticmethod
    def zero(n: int = 1) -> "Cyc":
        return Cyc(n, {})

    @staticmethod
    def one(n: int = 1) -> "Cyc":
        return Cyc(n, {0: Fraction(1)})

    @staticmethod
    def from_rational(q, n: int = 1) -> "Cyc":
        q = Fraction(q)
        return Cyc(n, {0: q})

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyc":
        return Cyc(n, {k % n: Fraction(1)})

    # ---- order handling ------------------------------------------------
    def lift(self, m: int) -> "Cyc":
        """Rewrite in Q(zeta_m), n | m."""
        if m == self.n:
            return self
        assert m % self.n == 0
        s = m // self.n
        return Cyc(m, {e * s: v for e, v in self.c.items()})

    @staticmethod
    def _common(x: "Cyc", y: "Cyc") -> Tuple["Cyc", "Cyc"]:
        if x.n == y.n:
            return x, y
        m = math.lcm(x.n, y.n)
        return x.lift(m), y.lift(m)

    # ---- ring operations ------------------------------------------------
    def __add__(self, other) -> "Cyc":
        other = _as_cyc(other)
        a, b = Cyc._common(self, other)
        c = dict(a.c)
        for e, v in b.c.items():
            w = c.get(e, Fraction(0)) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return Cyc(a.n, c)

    __radd__ = __add__

    def __neg__(self) -> "Cyc":
        return Cyc(self.n, {e: -v for e, v in self.c.items()})

    def __sub__(self, other) -> "Cyc":
        return self + (-_as_cyc(other))

    def __rsub__(self, other) -> "Cyc":
        return _as_cyc(other) + (-self)

    def __mul__(self, other) -> "Cyc":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.n, {e: v * q for e, v in self.c.items()})
        other = _as_cyc(other)
        a, b = Cyc._common(self, other)
        out: Dict[int, Fraction] = {}
        n = a.n
        for e1, v1 in a.c.items():
            for e2, v2 in b.c.items():
                e = e1 + e2
                if e >= n:
                    e -= n
                w = out.get(e, Fraction(0)) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        return Cyc(n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Cyc":
        if k < 0:
            return self.inv() ** (-k)
        out = Cyc.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other) -> "Cyc":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.n, {e: v / q for e, v in self.c.items()})
        return self * _as_cyc(other).inv()

    def __rtruediv__(self, other) -> "Cyc":
        return _as_cyc(other) * self.inv()

    # ---- Galois --------------------------------------------------------
    def galois(self, t: int) -> "Cyc":
        """Apply zeta -> zeta^t, gcd(t, n) = 1."""
        assert math.gcd(t, self.n) == 1
        return Cyc(self.n, {(e * t) % self.n: v for e, v in self.c.items()})

    def conj(self) -> "Cyc":
        """Complex conjugation zeta -> zeta^{-1}."""
        return Cyc(self.n, {(-e) % self.n: v for e, v in self.c.items()})

    def inv(self) -> "Cyc":
        """Inverse via the product of Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        prod = Cyc.one(self.n)
        for t in range(2, self.n + 1):
            if t <= self.n and math.gcd(t, self.n) == 1 and t != 1:
                prod = prod * self.galois(t)
        if self.n == 1:
            return Cyc(1, {0: 1 / self.c.get(0)})
        norm = (self * prod).rational_value()
        return prod * (1 / norm)

    # ---- canonical form and predicates ----------------------------------
    def canonical(self) -> Tuple[Fraction, ...]:
        """Coefficient tuple on the power basis 1, z, .., z^(phi-1)."""
        n = self.n
        phi = euler_phi(n)
        out = [Fraction(0)] * phi
        rows = None
        for e, v in self.c.items():
            if e < phi:
                out[e] += v
            else:
                if rows is None:
                    rows = _reduction_rows(n)
                row = rows[e - phi]
                for i, r in enumerate(row):
                    if r:
                        out[i] += v * r
        return tuple(out)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.canonical())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        a, b = Cyc._common(self, Cyc.zero(self.n))
        return hash((a.n, a.canonical()))

    def is_rational(self) -> bool:
        can = self.canonical()
        return all(v == 0 for v in can[1:])

    def rational_value(self) -> Fraction:
        can = self.canonical()
        if any(v != 0 for v in can[1:]):
            raise ValueError("not a rational number")
        return can[0]

    def is_root_of_unity(self) -> bool:
        c = self.c
        return len(c) == 1 and abs(next(iter(c.values()))) == 1

    # ---- numerics --------------------------------------------------------
    def to_complex(self) -> complex:
        roots = _roots_table(self.n)
        return sum((float(v) * roots[e] for e, v in self.c.items()), 0j)

    def __repr__(self):
        if not self.c:
            return "Cyc(0)"
        terms = ", ".join(f"z{self.n}^{e}*{v}" for e, v in sorted(self.c.items()))
        return f"Cyc[{terms}]"

    def serialize(self) -> dict:
        can = self.canonical()
        return {
            "order": self.n,
            "coeffs": [[v.numerator, v.denominator] for v in can],
            "decimal": complex_str(self.to_complex()),
        }


def _as_cyc(x) -> Cyc:
    if isinstance(x, Cyc):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyc.from_rational(x)
    raise TypeError(f"cannot coerce {type(x)} to Cyc")


def complex_str(z: complex) -> str:
    return f"{z.real:.12e}{z.imag:+.12e}j"


def kronecker_symbol(a: int, b: int) -> int:
    """Kronecker symbol (a|b)."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if b < 0:
        return (-1 if a < 0 else 1) * kronecker_symbol(a, -b)
    res = 1
    while b % 2 == 0:
        b //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            res = -res
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                res = -res
        if a % 4 == 3 and b % 4 == 3:
            res = -res
        a, b = b % a, a
    return res if b == 1 else 0


@lru_cache(maxsize=None)
def sqrt_of_discriminant(disc: int) -> Cyc:
    """sqrt(disc) for a fundamental discriminant disc < 0, inside Q(zeta_|disc|).

    Realized as the quadratic Gauss sum sum_k (disc|k) zeta_|disc|^k, which
    equals i*sqrt(|disc|) for disc < 0.
    """
    assert disc < 0
    m = -disc
    coeffs = {}
    for k in range(1, m):
        s = kronecker_symbol(disc, k)
        if s:
            coeffs[k] = Fraction(s)
    g = Cyc(m, coeffs)
    # sanity pin: g^2 must equal disc
    assert (g * g).rational_value() == disc
    return g


def nth_root_of_unity_solutions(n_target: int, value: Cyc) -> List[Cyc]:
    """All roots of unity w with w^n_target = value, for value a root of unity."""
    if not value.is_root_of_unity():
        raise ValueError("value must be a root of unity")
    (e, v), = value.c.items()
    n = value.n
    if v == -1:
        if n % 2 == 0:
            e = (e + n // 2) % n
        else:
            e, n = (2 * e + n) % (2 * n), 2 * n
    # w = zeta_big^j with j*n_target = e*(big/n) (mod big)
    big = n * n_target
    rhs = (e * (big // n)) % big
    g = math.gcd(n_target, big)
    if rhs % g:
        return []
    step = big // g
    j0 = (rhs // g) * pow((n_target // g) % step, -1, step) % step
    return [Cyc.zeta(big, j0 + t * step) for t in range(g)]

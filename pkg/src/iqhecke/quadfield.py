"""Exact arithmetic in an imaginary quadratic field Q(sqrt(-D)).

Elements are written over the integral basis {1, omega} with omega =
(1+sqrt(-D))/2 when -D = 1 mod 4 and omega = sqrt(-D) otherwise.  Integral
ideals are stored in two-by-two Hermite normal form Z*a + Z*(b + c*omega),
the canonical shape that makes equality and hashing O(1).  The class group
is built from reduced binary quadratic forms of discriminant -d_F, which
double as canonical labels for ideal classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclotomic import Cyc, kronecker_symbol, sqrt_of_discriminant


def _squarefree(n: int) -> bool:
    if n <= 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization of a positive integer."""
    n = abs(n)
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class QuadElt:
    """x + y*omega with rational x, y."""

    __slots__ = ("field", "x", "y")

    def __init__(self, field: "QuadField", x, y):
        self.field = field
        self.x = Fraction(x)
        self.y = Fraction(y)

    def __add__(self, other):
        o = self.field.elt(other)
        return QuadElt(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.field, -self.x, -self.y)

    def __sub__(self, other):
        return self + (-self.field.elt(other))

    def __rsub__(self, other):
        return self.field.elt(other) + (-self)

    def __mul__(self, other):
        o = self.field.elt(other)
        t, n = self.field.omega_trace, self.field.omega_norm
        # omega^2 = t*omega - n
        x = self.x * o.x - n * self.y * o.y
        y = self.x * o.y + self.y * o.x + t * self.y * o.y
        return QuadElt(self.field, x, y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self.field.elt(other)
        nm = o.norm()
        if nm == 0:
            raise ZeroDivisionError
        return self * o.conj() * (1 / nm)

    def __rtruediv__(self, other):
        return self.field.elt(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (self.field.one() / self) ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "QuadElt":
        t = self.field.omega_trace
        return QuadElt(self.field, self.x + t * self.y, -self.y)

    def norm(self) -> Fraction:
        t, n = self.field.omega_trace, self.field.omega_norm
        return self.x * self.x + t * self.x * self.y + n * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x + self.field.omega_trace * self.y

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.x == other and self.y == 0
        return isinstance(other, QuadElt) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def to_complex(self) -> complex:
        return float(self.x) + float(self.y) * self.field.omega_complex

    def to_cyc(self, order: Optional[int] = None) -> Cyc:
        """Exact image in a cyclotomic field containing the quadratic field."""
        w = self.field.omega_cyc
        if order is not None:
            m = math.lcm(w.n, order)
            w = w.lift(m)
        return Cyc.from_rational(self.x, w.n) + w * self.y

    def __repr__(self):
        return f"({self.x} + {self.y}*w{self.field.D})"


@dataclass(frozen=True)
class IdealHNF:
    """Integral ideal Z*a + Z*(b + c*omega) in Hermite normal form."""

    field: "QuadField"
    a: int
    b: int
    c: int

    def __post_init__(self):
        assert self.a > 0 and self.c > 0
        assert self.a % self.c == 0 and self.b % self.c == 0
        assert 0 <= self.b < self.a

    @property
    def norm(self) -> int:
        return self.a * self.c

    def gens(self) -> Tuple[QuadElt, QuadElt]:
        F = self.field
        return F.elt_xy(self.a, 0), F.elt_xy(self.b, self.c)

    def contains(self, e: QuadElt) -> bool:
        if not e.is_integral():
            return False
        return self.contains_xy(int(e.x), int(e.y))

    def contains_xy(self, x: int, y: int) -> bool:
        if y % self.c:
            return False
        return (x - self.b * (y // self.c)) % self.a == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.c == 1

    def key(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def serialize(self) -> List[int]:
        return [self.a, self.b, self.c]

    def __repr__(self):
        return f"Ideal[{self.a}, {self.b}+{self.c}w | D={self.field.D}]"


def _hnf_from_columns(field: "QuadField", cols: Sequence[Tuple[int, int]]) -> IdealHNF:
    """HNF of the Z-module spanned by columns (x, y) in basis (1, omega)."""
    cols = [(int(x), int(y)) for x, y in cols if x or y]
    if not cols:
        raise ValueError("zero module")
    # c = gcd of y-parts; combine columns to reach it
    c, bx = 0, 0
    for x, y in cols:
        if y == 0:
            continue
        if c == 0:
            c, bx = abs(y), x if y > 0 else -x
        else:
            g, u, v = _xgcd(c, y)
            bx = u * bx + v * x
            c = g
    xs = []
    for x, y in cols:
        if c:
            x = x - (y // c) * bx
        xs.append(x)
    a = 0
    for x in xs:
        a = math.gcd(a, x)
    if c == 0:
        raise ValueError("module of rank < 2 is not an ideal")
    if a == 0:
        raise ValueError("module of rank < 2 is not an ideal")
    b = bx % a
    return IdealHNF(field, a, b, c)


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class QuadField:
    """Q(sqrt(-D)) for squarefree D >= 1."""

    def __init__(self, D: int):
        if not _squarefree(D):
            raise ValueError(f"D = {D} must be a squarefree positive integer")
        self.D = D
        if (-D) % 4 == 1:  # D = 3 mod 4
            self.d_F = D
            self.omega_trace, self.omega_norm = 1, (1 + D) // 4
        else:
            self.d_F = 4 * D
            self.omega_trace, self.omega_norm = 0, D
        self.disc = -self.d_F
        # omega = (t + sqrt(disc))/2 with t = Tr(omega)
        self.omega_complex = complex(self.omega_trace / 2.0, math.sqrt(self.d_F) / 2.0)
        self._class_data = None

    # ---- element constructors -------------------------------------------
    def elt(self, v) -> QuadElt:
        if isinstance(v, QuadElt):
            assert v.field == self
            return v
        return QuadElt(self, v, 0)

    def elt_xy(self, x, y) -> QuadElt:
        return QuadElt(self, x, y)

    def one(self) -> QuadElt:
        return QuadElt(self, 1, 0)

    def sqrt_minus_D(self) -> QuadElt:
        """The element sqrt(-D) in the (1, omega) basis."""
        if self.omega_trace:  # omega = (1+sqrt(-D))/2
            return QuadElt(self, Fraction(-1), Fraction(2))
        return QuadElt(self, 0, 1)

    @property
    def omega_cyc(self) -> Cyc:
        # omega = (t + sqrt(-d_F))/2 in both integral-basis cases
        s = sqrt_of_discriminant(self.disc)
        return (Cyc.from_rational(self.omega_trace, s.n) + s) * Fraction(1, 2)

    # ---- ideals ----------------------------------------------------------
    def ideal(self, *gens) -> IdealHNF:
        cols: List[Tuple[int, int]] = []
        for g in gens:
            e = self.elt(g) if not isinstance(g, QuadElt) else g
            if not e.is_integral():
                raise ValueError("ideal generators must be integral")
            for m in (e, e * QuadElt(self, 0, 1)):
                cols.append((int(m.x), int(m.y)))
        return _hnf_from_columns(self, cols)

    def unit_ideal(self) -> IdealHNF:
        return IdealHNF(self, 1, 0, 1)

    def ideal_from_hnf(self, a: int, b: int, c: int) -> IdealHNF:
        I = IdealHNF(self, a, b % a, c)
        # closure under omega requires a*c | Nm(b + c*omega)
        nb = self.elt_xy(I.b, I.c).norm()
        if nb % (I.a * I.c):
            raise ValueError("triple is not an ideal")
        return I

    def ideal_mul(self, I: IdealHNF, J: IdealHNF) -> IdealHNF:
        if I.field != J.field:
            raise ValueError("ideals from different fields")
        gi = I.gens()
        gj = J.gens()
        cols = []
        for x in gi:
            for y in gj:
                m = x * y
                for mm in (m, m * QuadElt(self, 0, 1)):
                    cols.append((int(mm.x), int(mm.y)))
        return _hnf_from_columns(self, cols)

    def ideal_pow(self, I: IdealHNF, k: int) -> IdealHNF:
        out = self.unit_ideal()
        base = I
        while k:
            if k & 1:
                out = self.ideal_mul(out, base)
            base = self.ideal_mul(base, base)
            k >>= 1
        return out

    def ideal_conj(self, I: IdealHNF) -> IdealHNF:
        g1, g2 = I.gens()
        return self.ideal(g1.conj(), g2.conj())

    def ideal_divides(self, J: IdealHNF, I: IdealHNF) -> bool:
        """J | I, i.e. I is contained in J."""
        g1, g2 = I.gens()
        return J.contains(g1) and J.contains(g2)

    def ideal_div(self, I: IdealHNF, J: IdealHNF) -> IdealHNF:
        """Exact quotient I / J for J | I."""
        if not self.ideal_divides(J, I):
            raise ValueError("not divisible")
        # I * conj(J) = Nm(J) * (I/J)
        K = self.ideal_mul(I, self.ideal_conj(J))
        n = J.norm
        assert K.a % n == 0 and K.b % n == 0 and K.c % n == 0
        return IdealHNF(self, K.a // n, K.b // n, K.c // n)

    def ideal_coprime(self, I: IdealHNF, J: IdealHNF) -> bool:
        g = math.gcd(I.norm, J.norm)
        if g == 1:
            return True
        for p in factorize(g):
            for P in self.split_prime(p).primes_above:
                if self.ideal_divides(P, I) and self.ideal_divides(P, J):
                    return False
        return True

    # ---- primes -----------------------------------------------------------
    @lru_cache(maxsize=None)
    def split_prime(self, p: int) -> "PrimeFactor":
        if p < 2 or not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        sym = kronecker_symbol(self.disc, p)
        t, n = self.omega_trace, self.omega_norm
        if sym == -1:
            P = IdealHNF(self, p, 0, p)
            return PrimeFactor(p, "inert", (P,), (1,))
        # root of x^2 - t x + n mod p (double root when ramified)
        if p == 2:
            root = next(r for r in (0, 1) if (r * r - t * r + n) % 2 == 0)
        else:
            s = _sqrt_mod_p((t * t - 4 * n) % p, p)
            if s is None:
                raise RuntimeError(f"splitting symbol and minimal polynomial disagree at {p}")
            root = (t + s) * pow(2, -1, p) % p
        P1 = IdealHNF(self, p, (-root) % p, 1)
        if sym == 0:
            return PrimeFactor(p, "ramified", (P1,), (2,))
        root2 = (t - root) % p
        if root2 == root:
            raise RuntimeError(f"split prime {p} produced a double root")
        P2 = IdealHNF(self, p, (-root2) % p, 1)
        return PrimeFactor(p, "split", (P1, P2), (1, 1))

    def primes_above(self, p: int) -> Tuple[IdealHNF, ...]:
        return self.split_prime(p).primes_above

    def prime_by_spec(self, p: int, index: int = 0) -> IdealHNF:
        pf = self.split_prime(p)
        return pf.primes_above[index]

    def factor_ideal(self, I: IdealHNF) -> List[Tuple[IdealHNF, int]]:
        if I.norm == 0:
            raise ValueError("zero ideal")
        out = []
        for p in sorted(factorize(I.norm)):
            pf = self.split_prime(p)
            for P in pf.primes_above:
                e = 0
                J = I
                while self.ideal_divides(P, J):
                    J = self.ideal_div(J, P)
                    e += 1
                if e:
                    out.append((P, e))
        return out

    def different(self) -> IdealHNF:
        """The different, generated by sqrt(disc)."""
        s = self.sqrt_minus_D()
        if self.d_F == 4 * self.D:
            return self.ideal(self.elt(2) * s)
        return self.ideal(s)

    # ---- forms and the class group -----------------------------------------
    def _form_of_ideal(self, I: IdealHNF) -> Tuple[int, int, int]:
        a1, b1 = I.a // I.c, I.b // I.c
        t, n = self.omega_trace, self.omega_norm
        A = a1
        B = 2 * b1 + t
        C = (b1 * b1 + t * b1 + n) // a1
        return reduce_form(A, B, C)

    def _ideal_of_form(self, form: Tuple[int, int, int]) -> IdealHNF:
        A, B, _C = form
        t = self.omega_trace
        b1 = (B - t) // 2
        return IdealHNF(self, A, b1 % A, 1)

    def class_label(self, I: IdealHNF) -> Tuple[int, int, int]:
        return self._form_of_ideal(I)

    @property
    def class_number(self) -> int:
        return len(self._classes()["labels"])

    def _classes(self) -> dict:
        if self._class_data is None:
            labels = reduced_forms(self.disc)
            h = len(labels)
            label_set = set(labels)
            principal = self._form_of_ideal(self.unit_ideal())
            # group structure by BFS over small prime ideals
            table: Dict[Tuple[int, int, int], Dict] = {
                principal: {"rep": self.unit_ideal()}
            }
            gens: List[IdealHNF] = []
            p = 2
            while len(table) < h:
                if _is_prime(p) and kronecker_symbol(self.disc, p) != -1:
                    for P in self.split_prime(p).primes_above:
                        lab = self.class_label(P)
                        if lab not in table:
                            gens.append(P)
                            # close the subgroup under multiplication by P
                            cur = {l: d["rep"] for l, d in table.items()}
                            while True:
                                new = {}
                                for l, rep in cur.items():
                                    K = self.ideal_mul(rep, P)
                                    lk = self.class_label(K)
                                    if lk not in table and lk not in new:
                                        new[lk] = self._ideal_of_form(lk)
                                if not new:
                                    break
                                for lk, rep in new.items():
                                    table[lk] = {"rep": rep}
                                cur = new
                p += 1
                if p > 4 * self.d_F + 100:
                    raise RuntimeError("class group generation failed")
            self._class_data = {
                "labels": labels,
                "table": table,
                "principal": principal,
            }
            assert len(table) == h, "BFS closure must reach every reduced form"
        return self._class_data

    def class_rep(self, label: Tuple[int, int, int]) -> IdealHNF:
        return self._classes()["table"][label]["rep"]

    def principal_label(self) -> Tuple[int, int, int]:
        return self._classes()["principal"]

    # ---- principal ideals ---------------------------------------------------
    def principal_test(self, I: IdealHNF) -> Optional[QuadElt]:
        """A canonical generator when I is principal, else None.

        The generator minimizes norm (forced equal to Nm I), then is
        normalized so the first nonzero coordinate over (1, omega) is
        positive, breaking ties lexicographically.
        """
        sols = self._norm_form_solutions(I)
        if not sols:
            return None
        normed = []
        for e in sols:
            x, y = e.x, e.y
            if x < 0 or (x == 0 and y < 0):
                x, y = -x, -y
            normed.append((x, y))
        x, y = sorted(normed)[0]
        return self.elt_xy(x, y)

    def _norm_form_solutions(self, I: IdealHNF) -> List[QuadElt]:
        a1, b1 = I.a // I.c, I.b // I.c
        t, n = self.omega_trace, self.omega_norm
        A = a1
        B = 2 * b1 + t
        C = (b1 * b1 + t * b1 + n) // a1
        # A x^2 + B x y + C y^2 = 1, positive definite
        sols = []
        ymax = math.isqrt(4 * A // self.d_F) + 1
        for y in range(-ymax, ymax + 1):
            # solve A x^2 + B x y + (C y^2 - 1) = 0
            disc = B * B * y * y - 4 * A * (C * y * y - 1)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for sign in (s, -s) if s else (0,):
                num = -B * y + sign
                if num % (2 * A) == 0:
                    x = num // (2 * A)
                    alpha = self.elt_xy(x * a1 + y * b1, y) * I.c
                    if alpha.norm() == I.norm:
                        sols.append(alpha)
        return sols

    def reduce_ideal_tracked(self, I: IdealHNF, avoid: int = 1) -> Tuple[IdealHNF, QuadElt]:
        """(J, gamma) with I = (gamma) * J, Nm(J) small and coprime to avoid."""
        a1, b1 = I.a // I.c, I.b // I.c
        t, n = self.omega_trace, self.omega_norm
        A, B, C = a1, 2 * b1 + t, (b1 * b1 + t * b1 + n) // a1
        best = None
        bound = 1
        while best is None:
            bound += 2
            for y in range(-bound, bound + 1):
                for x in range(-bound, bound + 1):
                    if x == 0 and y == 0:
                        continue
                    m = A * x * x + B * x * y + C * y * y
                    if math.gcd(m, avoid) == 1 and (best is None or m < best[0]):
                        best = (m, x, y)
            if bound > 1000:
                raise RuntimeError("tracked reduction failed to find coprime value")
        m, x, y = best
        beta = self.elt_xy(x * a1 + y * b1, y) * I.c
        # (beta) = I * K with Nm(K) = m, so I = (beta/m) * conj(K)
        K = self.ideal_div(self.ideal(beta), I)
        J = self.ideal_conj(K)
        gamma = beta / m
        return J, gamma

    # ---- enumeration ---------------------------------------------------------
    def ideals_of_norm(self, n: int) -> List[IdealHNF]:
        """All integral ideals of norm exactly n."""
        out = [self.unit_ideal()]
        for p, e in sorted(factorize(n).items()):
            pf = self.split_prime(p)
            choices = []
            if pf.kind == "split":
                P, Q = pf.primes_above
                choices = [
                    (self.ideal_pow(P, i), self.ideal_pow(Q, e - i)) for i in range(e + 1)
                ]
                choices = [self.ideal_mul(x, y) for x, y in choices]
            elif pf.kind == "inert":
                if e % 2:
                    return []
                choices = [self.ideal_pow(pf.primes_above[0], e // 2)]
            else:
                choices = [self.ideal_pow(pf.primes_above[0], e)]
            out = [self.ideal_mul(I, c) for I in out for c in choices]
        return out

    def __repr__(self):
        return f"QuadField(D={self.D}, d_F={self.d_F})"

    def __hash__(self):
        return hash(("QuadField", self.D))

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.D == self.D


@dataclass(frozen=True)
class PrimeFactor:
    p: int
    kind: str  # split | inert | ramified
    primes_above: Tuple[IdealHNF, ...]
    ramification: Tuple[int, ...]


def reduce_form(A: int, B: int, C: int) -> Tuple[int, int, int]:
    """Reduce a positive definite binary quadratic form."""
    while True:
        if -A < B <= A <= C and not (A == C and B < 0):
            return (A, B, C)
        if C < A or (C == A and B < 0):
            A, B, C = C, -B, A
            continue
        # normalize B into (-A, A]
        r = B % (2 * A)
        if r > A:
            r -= 2 * A
        C = C + (r * r - B * B) // (4 * A)
        B = r


def reduced_forms(disc: int) -> List[Tuple[int, int, int]]:
    """All reduced positive definite forms of discriminant disc < 0."""
    assert disc < 0 and disc % 4 in (0, 1)
    out = []
    bmax = math.isqrt(-disc // 3)
    for B in range(-bmax, bmax + 1):
        if (B - disc) % 2:
            continue
        rem = B * B - disc
        # 4AC = rem
        for A in range(max(B, 1), math.isqrt(rem // 4) + 1):
            if rem % (4 * A) == 0:
                C = rem // (4 * A)
                if A <= C and -A < B <= A and not (A == C and B < 0):
                    out.append((A, B, C))
    return sorted(out)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _sqrt_mod_p(a: int, p: int) -> Optional[int]:
    """Tonelli-Shanks square root mod an odd prime, None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@lru_cache(maxsize=None)
def make_field(D: int) -> QuadField:
    """Public constructor; instances are interned per D."""
    return QuadField(D)

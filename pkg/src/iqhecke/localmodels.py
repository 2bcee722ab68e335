"""Local induced-representation calculus at a finite place.

Elements of the completion are carried as (valuation, unit residue) at a
finite working precision O(pi^N); valuation decisions that would exceed the
window raise PrecisionError rather than silently guessing.  Values of the
distinguished vectors are Laurent monomial sums in the deformation symbol
X = Nm(P)^{-z/2} with exact cyclotomic coefficients, so the twisting
identities can be checked with zero tolerance.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cyclotomic import Cyc
from .quadfield import IdealHNF, QuadElt, QuadField, factorize
from .rayclass import ResidueRing, unit_group
from .characters import CharValue, _ring


class PrecisionError(Exception):
    """A valuation decision exceeded the working precision."""


# --------------------------------------------------------------------------
# places and local elements
# --------------------------------------------------------------------------

class LocalPlace:
    """A finite place with a fixed uniformizer and precision window."""

    def __init__(self, F: QuadField, P: IdealHNF, precision: int = 20):
        self.field = F
        self.prime = P
        self.Q = P.norm
        self.p = min(factorize(P.norm))
        self.N = precision
        kind = F.split_prime(self.p).kind
        self.kind = kind
        self.ring = ResidueRing(F, F.ideal_pow(P, precision))
        self.lattices = [F.ideal_pow(P, j) for j in range(precision + 1)]
        if kind in ("split", "inert"):
            self.pi_elt = F.elt(self.p) if kind == "inert" else F.elt(self.p)
            if kind == "split":
                # p itself uniformizes the place; the conjugate-place content
                # is handled through the anti-uniformizer below
                Pbar = next(Q for Q in F.split_prime(self.p).primes_above if Q != P)
                beta = Pbar.gens()[1]
                if self._ord_exact(beta) != 0 or self._ord_other(beta, Pbar) != 1:
                    beta = beta + F.elt(self.p)
                assert self._ord_exact(beta) == 0 and self._ord_other(beta, Pbar) == 1
                self.rho = beta / self.p
                self.sigma = self.pi_elt * self.rho
            else:
                self.rho = F.one() / self.p
                self.sigma = F.one()
        else:  # ramified
            g2 = P.gens()[1]
            if self._ord_exact(g2) != 1:
                g2 = g2 + F.elt(self.p)
            assert self._ord_exact(g2) == 1
            self.pi_elt = g2
            self.rho = F.one() / g2
            self.sigma = F.one()
        self._pi_res_pows = None
        self._sigma_res = None

    def _ord_exact(self, x: QuadElt) -> int:
        """ord_P of a nonzero field element, via the principal ideal."""
        den = math.lcm(x.x.denominator, x.y.denominator)
        num = x * den
        e = 0
        F = self.field
        J = F.ideal(num)
        while F.ideal_divides(self.prime, J):
            J = F.ideal_div(J, self.prime)
            e += 1
        dord = 0
        d = den
        while d % self.p == 0:
            d //= self.p
            dord += 1
        eP = 2 if self.kind == "ramified" else 1
        return e - dord * eP

    def _ord_other(self, x: QuadElt, Q: IdealHNF) -> int:
        F = self.field
        e = 0
        J = F.ideal(x)
        while F.ideal_divides(Q, J):
            J = F.ideal_div(J, Q)
            e += 1
        return e

    # residues are pairs mod P^N
    def residue(self, x: QuadElt) -> Tuple[int, int]:
        return self.ring.reduce(x)

    def pi_residue_power(self, k: int) -> Tuple[int, int]:
        if self._pi_res_pows is None:
            self._pi_res_pows = [self.ring.reduce(self.field.one())]
        while len(self._pi_res_pows) <= k:
            self._pi_res_pows.append(
                self.ring.mul(self._pi_res_pows[-1], self.ring.reduce(self.pi_elt))
            )
        return self._pi_res_pows[k]

    def element(self, x, unit=None, val: Optional[int] = None) -> "LocalElement":
        """Local image of an exact field element, or (val, unit) data."""
        F = self.field
        if unit is not None:
            return LocalElement(self, val, self.ring.reduce(F.elt(unit))
                                if not isinstance(unit, tuple) else unit, self.N)
        x = F.elt(x) if not isinstance(x, QuadElt) else x
        if x.is_zero():
            return LocalElement(self, None, None, self.N, exact=x)
        v = self._ord_exact(x)
        if v >= 0:
            # x = pi^v u with u = x rho^v sigma^{-v} (sigma = pi rho, a unit)
            res = self._unit_residue(x * self.rho**v, extra_sigma=-v)
        else:
            # u = x * pi^{|v|} exactly
            res = self._unit_residue(x * self.pi_elt ** (-v))
        return LocalElement(self, v, res, self.N, exact=x)

    def _unit_residue(self, y: QuadElt, extra_sigma: int = 0) -> Tuple[int, int]:
        """Residue mod P^N of an element integral at the place.

        At split places the conjugate-place poles are cleared first by
        multiplying with the conjugate-uniformizing unit sigma = pi*rho."""
        k = 0
        if self.kind == "split":
            while math.lcm(y.x.denominator, y.y.denominator) % self.p == 0:
                y = y * self.sigma
                k += 1
        res = self.ring.reduce_fraction(y)
        total = k - extra_sigma
        if self.kind == "split" and total:
            s = self.ring.reduce_fraction(self.sigma)
            if total > 0:
                s = self.ring.inverse(s)
            for _ in range(abs(total)):
                res = self.ring.mul(res, s)
        return res

    def zero(self) -> "LocalElement":
        return LocalElement(self, None, None, self.N, exact=self.field.elt(0))

    def one(self) -> "LocalElement":
        return LocalElement(self, 0, self.ring.reduce(self.field.one()), self.N,
                            exact=self.field.one())

    def from_val_unit(self, val: int, unit_res: Tuple[int, int],
                      prec: Optional[int] = None) -> "LocalElement":
        return LocalElement(self, val, unit_res, prec if prec is not None else self.N)

    def residue_val(self, res: Tuple[int, int], prec: int) -> int:
        """Largest j <= prec with the lift in P^j; PrecisionError at the cap."""
        x, y = res
        if x == 0 and y == 0:
            raise PrecisionError("residue vanishes to working precision")
        j = 0
        while j < prec and self.lattices[j + 1].contains_xy(x, y):
            j += 1
        if j >= prec:
            raise PrecisionError("valuation exceeds the precision window")
        return j

    def shift_down(self, res: Tuple[int, int], j: int) -> Tuple[int, int]:
        """Residue of lift/pi^j for a lift divisible by pi^j."""
        if j == 0:
            return res
        lift = self.field.elt_xy(*res)
        return self._unit_residue(lift * self.rho**j, extra_sigma=-j)


def _shadow_ok(x: Optional[QuadElt]) -> bool:
    if x is None:
        return False
    h = max(x.x.numerator.bit_length(), x.x.denominator.bit_length(),
            x.y.numerator.bit_length(), x.y.denominator.bit_length())
    return h <= 512


class LocalElement:
    """pi^val * unit at precision O(pi^prec); val None encodes zero.

    Elements built from exact field data carry the exact value as a shadow,
    which lets additions recognize true zeros; elements built from raw
    residue data have no shadow and live strictly inside the precision
    window, raising PrecisionError on undecidable valuations."""

    __slots__ = ("place", "val", "unit", "prec", "exact")

    def __init__(self, place: LocalPlace, val: Optional[int],
                 unit: Optional[Tuple[int, int]], prec: int,
                 exact: Optional[QuadElt] = None):
        self.place = place
        self.val = val
        self.unit = unit
        self.prec = prec
        self.exact = exact

    def is_zero(self) -> bool:
        return self.val is None

    def ord(self) -> int:
        if self.val is None:
            raise PrecisionError("valuation of an exact zero requested")
        return self.val

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        if self.is_zero() or other.is_zero():
            return self.place.zero()
        ex = None
        if self.exact is not None and other.exact is not None:
            ex = self.exact * other.exact
            if not _shadow_ok(ex):
                ex = None
        return LocalElement(
            self.place, self.val + other.val,
            self.place.ring.mul(self.unit, other.unit),
            min(self.prec, other.prec), exact=ex,
        )

    def inv(self) -> "LocalElement":
        if self.is_zero():
            raise ZeroDivisionError
        ex = None if self.exact is None else self.place.field.one() / self.exact
        return LocalElement(self.place, -self.val,
                            self.place.ring.inverse(self.unit), self.prec,
                            exact=ex)

    def __truediv__(self, other: "LocalElement") -> "LocalElement":
        return self * other.inv()

    def __neg__(self) -> "LocalElement":
        if self.is_zero():
            return self
        m1 = self.place.ring.reduce(self.place.field.elt(-1))
        ex = None if self.exact is None else -self.exact
        return LocalElement(self.place, self.val,
                            self.place.ring.mul(self.unit, m1), self.prec,
                            exact=ex)

    def __add__(self, other: "LocalElement") -> "LocalElement":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.exact is not None and other.exact is not None:
            s_ex = self.exact + other.exact
            if _shadow_ok(s_ex):
                return self.place.element(s_ex)
        place = self.place
        v = min(self.val, other.val)
        r1 = self.unit
        d1 = self.val - v
        if d1:
            r1 = place.ring.mul(r1, place.pi_residue_power(d1))
        r2 = other.unit
        d2 = other.val - v
        if d2:
            r2 = place.ring.mul(r2, place.pi_residue_power(d2))
        s = place.ring.reduce_xy(r1[0] + r2[0], r1[1] + r2[1])
        # the shifted summands are valid mod P^(d_i + prec_i)
        window = min(d1 + self.prec, d2 + other.prec, place.N)
        if s == (0, 0):
            raise PrecisionError("cancellation to working precision in addition")
        j = place.residue_val(s, window)
        return LocalElement(place, v + j, place.shift_down(s, j), window - j)

    def __sub__(self, other: "LocalElement") -> "LocalElement":
        return self + (-other)

    def unit_residue_mod(self, k: int) -> Tuple[int, int]:
        """The unit part modulo P^k (requires prec >= k)."""
        if self.prec < k:
            raise PrecisionError("unit residue requested beyond precision")
        return self.unit

    def __repr__(self):
        if self.is_zero():
            return "Loc(0)"
        return f"Loc(pi^{self.val} * {self.unit} + O(pi^{self.val}+{self.prec}))"


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------

class LocalMatrix:
    """Two-by-two matrix of local elements."""

    def __init__(self, place: LocalPlace, entries):
        self.place = place
        self.m = [[self._coerce(e) for e in row] for row in entries]

    def _coerce(self, e):
        if isinstance(e, LocalElement):
            return e
        return self.place.element(e)

    @staticmethod
    def from_rational(place: LocalPlace, rows) -> "LocalMatrix":
        return LocalMatrix(place, rows)

    def __getitem__(self, ij):
        return self.m[ij[0]][ij[1]]

    def __mul__(self, other: "LocalMatrix") -> "LocalMatrix":
        a, b = self.m, other.m
        out = [[None, None], [None, None]]
        for i in range(2):
            for j in range(2):
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j]
        return LocalMatrix(self.place, out)

    def det(self) -> LocalElement:
        return self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]

    def is_integral(self) -> bool:
        return all(e.is_zero() or e.val >= 0 for row in self.m for e in row)

    def in_gl2_o(self) -> bool:
        d = self.det()
        return self.is_integral() and not d.is_zero() and d.val == 0

    def __repr__(self):
        return f"[[{self.m[0][0]}, {self.m[0][1]}], [{self.m[1][0]}, {self.m[1][1]}]]"


def iwasawa(g: LocalMatrix) -> Tuple[LocalMatrix, LocalMatrix, str]:
    """g = b k with b upper triangular and k in GL2(O), plus a branch tag.

    The branch follows the valuation comparison of the bottom row: when the
    lower-left entry dominates, k is lower unipotent; otherwise a Weyl-type
    k with unit lower-left entry is used."""
    place = g.place
    a, b = g.m[0]
    c, d = g.m[1]
    if c.is_zero() and d.is_zero():
        raise ValueError("matrix is singular")
    det = g.det()
    if det.is_zero():
        raise ValueError("matrix is singular")
    use_unipotent = (not d.is_zero()) and (c.is_zero() or c.ord() > d.ord())
    if use_unipotent:
        B = LocalMatrix(place, [[det / d, b], [place.zero(), d]])
        k = LocalMatrix(place, [[place.one(), place.zero()],
                                [c / d if not c.is_zero() else place.zero(),
                                 place.one()]])
        tag = "unipotent"
    else:
        B = LocalMatrix(place, [[det / c, a], [place.zero(), c]])
        k = LocalMatrix(place, [[place.zero(), -place.one()],
                                [place.one(), d / c if not d.is_zero()
                                 else place.zero()]])
        tag = "weyl"
    assert k.in_gl2_o(), "Iwasawa K-part must be integral with unit determinant"
    return B, k, tag


# --------------------------------------------------------------------------
# symbolic values: Laurent polynomials in X = Nm(P)^{-z/2}
# --------------------------------------------------------------------------

class ZPoly:
    """Finite sum of cyclotomic coefficients times integer powers of X."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Optional[Dict[int, Cyc]] = None):
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                if not v.is_zero():
                    self.c[e] = v

    @staticmethod
    def zero() -> "ZPoly":
        return ZPoly()

    @staticmethod
    def one() -> "ZPoly":
        return ZPoly({0: Cyc.one()})

    @staticmethod
    def monomial(v: Cyc, e: int = 0) -> "ZPoly":
        return ZPoly({e: v})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.c.values())

    def __add__(self, other: "ZPoly") -> "ZPoly":
        out = dict(self.c)
        for e, v in other.c.items():
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
        return ZPoly(out)

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + other.scale(Cyc.from_rational(-1))

    def scale(self, v: Cyc) -> "ZPoly":
        return ZPoly({e: c * v for e, c in self.c.items()})

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        out: Dict[int, Cyc] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                if e in out:
                    out[e] = out[e] + v1 * v2
                else:
                    out[e] = v1 * v2
        return ZPoly(out)

    def __eq__(self, other) -> bool:
        return (self - other).is_zero()

    def at_z(self, z: complex, Q: int) -> complex:
        """Numeric value with X = Q^{-z/2}."""
        x = Q ** (-z / 2.0) if isinstance(z, (int, float)) else cmath.exp(
            (-z / 2.0) * math.log(Q))
        return sum(v.to_complex() * x**e for e, v in self.c.items())

    def __repr__(self):
        if not self.c:
            return "ZPoly(0)"
        return " + ".join(f"({v})*X^{e}" for e, v in sorted(self.c.items()))


# --------------------------------------------------------------------------
# local characters and character pairs
# --------------------------------------------------------------------------

class LocalChar:
    """Local character: unramified value on the uniformizer (a monomial in
    X) times a finite-order unit character of conductor P^r."""

    def __init__(self, place: LocalPlace, pi_value: ZPoly,
                 unit_char: Optional[Callable] = None, cond_exp: int = 0):
        self.place = place
        self.pi_value = pi_value
        self.unit_char = unit_char
        self.r = cond_exp

    def on_units(self, res: Tuple[int, int]) -> Cyc:
        if self.unit_char is None or self.r == 0:
            return Cyc.one()
        return self.unit_char(res)

    def __call__(self, e: LocalElement) -> ZPoly:
        if e.is_zero():
            raise ValueError("local characters are defined on nonzero elements")
        out = ZPoly.one()
        v = e.ord()
        if v:
            out = _zpoly_pow(self.pi_value, v)
        if self.r == 0 or self.unit_char is None:
            return out
        return out.scale(self.on_units(e.unit_residue_mod(self.r)))

    def value_at_pi_power(self, k: int) -> ZPoly:
        return _zpoly_pow(self.pi_value, k)

    def twist(self, other: "LocalChar") -> "LocalChar":
        def both(res):
            return self.on_units(res) * other.on_units(res)

        return LocalChar(
            self.place, self.pi_value * other.pi_value, both,
            max(self.r, other.r),
        )

    def inverse(self) -> "LocalChar":
        def inv_units(res):
            return self.on_units(res).inv()

        return LocalChar(self.place, _zpoly_inv_monomial(self.pi_value),
                         inv_units, self.r)


def _zpoly_pow(p: ZPoly, k: int) -> ZPoly:
    if k < 0:
        return _zpoly_pow(_zpoly_inv_monomial(p), -k)
    out = ZPoly.one()
    base = p
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def _zpoly_inv_monomial(p: ZPoly) -> ZPoly:
    items = [(e, v) for e, v in p.c.items() if not v.is_zero()]
    if len(items) != 1:
        raise ValueError("only monomial values are invertible here")
    e, v = items[0]
    return ZPoly({-e: v.inv()})


@dataclass
class LocalCharPair:
    """The inducing data (eta1, eta2) with conductor exponents r <= s.

    r is the conductor exponent of eta1 and s the exponent of the conductor
    of the induced representation (product of both conductors).  The |.|^{z/2}
    deformation is carried by X-powers inside the uniformizer values."""

    place: LocalPlace
    eta1: LocalChar
    eta2: LocalChar

    @property
    def r(self) -> int:
        return self.eta1.r

    @property
    def s(self) -> int:
        return self.eta1.r + self.eta2.r

    def twist(self, mu: LocalChar) -> "LocalCharPair":
        return LocalCharPair(self.place, self.eta1.twist(mu), self.eta2.twist(mu))


def unramified_pair(place: LocalPlace, v1: Cyc, v2: Cyc,
                    z_twist: bool = True) -> LocalCharPair:
    """Unramified pair with uniformizer values v1 X, v2 X^{-1} (the
    deformation twist shifts eta1 by |.|^{z/2} and eta2 by |.|^{-z/2})."""
    e1 = LocalChar(place, ZPoly.monomial(v1, 1 if z_twist else 0))
    e2 = LocalChar(place, ZPoly.monomial(v2, -1 if z_twist else 0))
    return LocalCharPair(place, e1, e2)


def unit_char_from_residue_char(place: LocalPlace, r: int,
                                exps: Sequence[int]) -> Callable:
    """Finite-order character of (O/P^r)^* given by generator exponents."""
    ring = unit_group(place.field, place.field.ideal_pow(place.prime, r))
    grp = ring.structure()
    orders = grp.orders
    N = math.lcm(*orders) if orders else 1

    def chi(res: Tuple[int, int]) -> Cyc:
        small = ring.reduce(place.field.elt_xy(*res))
        vec = grp.dlog(small)
        e = sum(k * d * (N // n) for k, d, n in zip(exps, vec, orders))
        return Cyc.zeta(N, e % N)

    return chi


def primitive_unit_chars(place: LocalPlace, r: int) -> List[Tuple[Callable, Tuple[int, ...], int]]:
    """All unit characters of conductor exactly P^r, with data and order."""
    F = place.field
    ring = unit_group(F, F.ideal_pow(place.prime, r))
    grp = ring.structure()
    orders = grp.orders
    if not orders:
        return []
    smaller = F.ideal_pow(place.prime, r - 1)
    kernel_idx = []
    units = ring.enumerate_units()
    for u in units:
        if smaller.contains(ring.elt(u) - F.one()):
            kernel_idx.append(grp.dlog(u))
    out = []
    N = math.lcm(*orders)

    def rec(i, cur):
        if i == len(orders):
            yield tuple(cur)
            return
        for k in range(orders[i]):
            yield from rec(i + 1, cur + [k])

    for exps in rec(0, []):
        if not any(exps):
            continue
        # conductor exactly P^r: nontrivial on 1 + P^{r-1} when r >= 2
        if r >= 2:
            prim = False
            for vec in kernel_idx:
                e = sum(k * d * (N // n) for k, d, n in zip(exps, vec, orders))
                if e % N:
                    prim = True
                    break
            if not prim:
                continue
        order = 1
        for n, k in zip(orders, exps):
            if k:
                order = math.lcm(order, n // math.gcd(n, k))
        out.append((unit_char_from_residue_char(place, r, exps), exps, order))
    return out


# --------------------------------------------------------------------------
# distinguished vectors
# --------------------------------------------------------------------------

def eval_newvector(pair: LocalCharPair, g: LocalMatrix) -> ZPoly:
    """The normalized new vector, supported on B (1 0; pi^r 1) K1(P^s)."""
    r, s = pair.r, pair.s
    B, k, _tag = iwasawa(g)
    k1 = k.m[0][0]
    k3 = k.m[1][0]
    if r < s:
        ok = (not k3.is_zero()) and k3.ord() == r
    else:
        ok = k3.is_zero() or k3.ord() >= s
    if not ok:
        return ZPoly.zero()
    val = pair.eta1(B.m[0][0]) * pair.eta2(B.m[1][1])
    if not k1.is_zero() and k1.ord() == 0:
        val = val * pair.eta1(k1)
    if r < s:
        t2 = k3 * pair.place.from_val_unit(-r, pair.place.ring.reduce(
            pair.place.field.one()))
        val = val * pair.eta2(t2)
    return val


def eval_spherical(pair: LocalCharPair, g: LocalMatrix,
                   mu: Optional[LocalChar] = None) -> ZPoly:
    """Spherical vector of the mu-twisted pair; requires eta_i unramified
    and the ratio eta1/eta2 unramified after twisting."""
    if pair.eta1.r or pair.eta2.r:
        raise ValueError("spherical vector needs an unramified base pair")
    tw = pair.twist(mu) if mu is not None else pair
    B, k, _tag = iwasawa(g)
    val = tw.eta1(B.m[0][0]) * tw.eta2(B.m[1][1])
    return val * tw.eta1(k.det())


def twist_l32(pair: LocalCharPair, mu: LocalChar, g: LocalMatrix) -> Dict:
    """Pointwise identity: newvector of the base pair times mu(det g)
    equals the spherical vector of the twisted pair."""
    lhs = eval_newvector(pair, g)
    detg = g.det()
    lhs = lhs * mu(detg)
    rhs = eval_spherical(pair, g, mu)
    return {"lhs": lhs, "rhs": rhs, "pass": lhs == rhs}


def twisted_sum_p32(pair: LocalCharPair, mu: LocalChar,
                    g: LocalMatrix) -> Dict:
    """Finite twisted sum of spherical translates against the closed form.

    sum_x mu^{-1}(x) Psi0_{eta mu}(g (1, x/pi^r; 0, 1)) =
    mu^{-1}(-1) (eta2/eta1)(P^r) L^{-1}(eta1/eta2, 0) Psi_new_{eta mu}(g),
    checked exactly in cyclotomic arithmetic."""
    place = pair.place
    F = place.field
    r = mu.r
    assert r >= 1, "the twisting character must be ramified"
    ring_r = unit_group(F, F.ideal_pow(place.prime, r))
    lhs = ZPoly.zero()
    one = place.one()
    zero = place.zero()
    for x in ring_r.enumerate_units():
        top = place.element(F.elt_xy(*x) / place.pi_elt**r)
        n_x = LocalMatrix(place, [[one, top], [zero, one]])
        term = eval_spherical(pair, g * n_x, mu)
        lhs = lhs + term.scale(mu.on_units(x).inv())
    # closed form
    minus1 = place.ring.reduce(F.elt(-1))
    c_mu = mu.on_units(minus1).inv()
    ratio21 = _zpoly_pow(pair.eta2.pi_value * _zpoly_inv_monomial(pair.eta1.pi_value), r)
    l_inv = ZPoly.one() - pair.eta1.pi_value * _zpoly_inv_monomial(pair.eta2.pi_value)
    newv = eval_newvector(pair.twist(mu), g)
    rhs = ratio21.scale(c_mu) * l_inv * newv
    return {"lhs": lhs, "rhs": rhs, "pass": lhs == rhs}


def theta_twist_newvector(pair: LocalCharPair, theta: LocalChar,
                          g: LocalMatrix) -> Dict:
    """Twisted-sum transform of the newvector at a place where the base pair
    is unramified and theta is ramified:

    sum_x theta^{-1}(x) Psi_new_eta(g (1, -x/pi^n; 0, 1)) =
    Psi_new_{eta theta}(g) theta^{-1}(-det g) (eta2/eta1)(P^n)
    L^{-1}(eta1/eta2, 0)."""
    place = pair.place
    F = place.field
    n = theta.r
    assert n >= 1 and pair.r == 0 and pair.s == 0
    ring_n = unit_group(F, F.ideal_pow(place.prime, n))
    lhs = ZPoly.zero()
    one = place.one()
    zero = place.zero()
    for x in ring_n.enumerate_units():
        top = place.element(-F.elt_xy(*x) / place.pi_elt**n)
        n_x = LocalMatrix(place, [[one, top], [zero, one]])
        term = eval_newvector(pair, g * n_x)
        lhs = lhs + term.scale(theta.on_units(x).inv())
    detg = g.det()
    minus_det = -detg
    factor_char = theta(minus_det)
    factor_char = ZPoly({e: v.inv() for e, v in factor_char.c.items()})
    ratio21 = _zpoly_pow(pair.eta2.pi_value * _zpoly_inv_monomial(pair.eta1.pi_value), n)
    l_inv = ZPoly.one() - pair.eta1.pi_value * _zpoly_inv_monomial(pair.eta2.pi_value)
    newv = eval_newvector(pair.twist(theta), g)
    rhs = newv * factor_char * ratio21 * l_inv
    return {"lhs": lhs, "rhs": rhs, "pass": lhs == rhs,
            "factor": factor_char * ratio21 * l_inv}


# --------------------------------------------------------------------------
# local factors of the toroidal integral
# --------------------------------------------------------------------------

def local_toroidal_factor(pair: LocalCharPair, case: int,
                          theta: Optional[LocalChar] = None,
                          unit_count: Optional[int] = None) -> Callable:
    """Closed-form local factor as a function of numeric z.

    Cases: 1 both unramified; 2 only eta1 ramified (r = s); 3 only eta2
    ramified; 4 both ramified with unramified ratio; 5 theta ramified at the
    place.  Case 6 is the archimedean factor below.  The pair here carries
    the undeformed uniformizer values; theta is a finite-order local twist."""
    place = pair.place
    Q = place.Q

    def phi1(z):
        return pair.eta1.pi_value.at_z(0, Q) * (
            theta.pi_value.at_z(0, Q) if theta is not None else 1.0)

    def phi2(z):
        return pair.eta2.pi_value.at_z(0, Q) * (
            theta.pi_value.at_z(0, Q) if theta is not None else 1.0)

    v1 = pair.eta1.pi_value.at_z(0, Q)
    v2 = pair.eta2.pi_value.at_z(0, Q)
    vt = theta.pi_value.at_z(0, Q) if theta is not None else 1.0

    if case == 1:
        def f(z):
            l1 = 1.0 / (1 - v1 * vt * Q ** (-z / 2))
            l2 = 1.0 / (1 - Q ** (-z / 2) / (v2 * vt))
            l12 = 1.0 / (1 - (v1 / v2) * Q ** (-z))
            return l1 * l2 / l12
        return f
    if case == 2:
        r = pair.r
        def f(z):
            return (v2 * vt) ** (-r) * Q ** (-r * z / 2) / (
                1 - Q ** (-z / 2) / (v2 * vt))
        return f
    if case == 3:
        def f(z):
            return 1.0 / (1 - v1 * vt * Q ** (-z / 2))
        return f
    if case == 4:
        r = pair.r
        def f(z):
            return (v2 * vt) ** (-r) * Q ** (-r * z / 2)
        return f
    if case == 5:
        assert theta is not None and theta.r >= 1
        n = theta.r
        count = unit_count if unit_count is not None else _unit_count(place, n)
        minus1 = place.ring.reduce(place.field.elt(-1))
        th_m1 = theta.on_units(minus1).inv().to_complex()

        def f(z):
            linv = 1 - (v1 / v2) * Q ** (-z)
            return th_m1 * linv * (v1 * vt) ** (-n) * Q ** (n * z / 2) * count
        return f
    raise ValueError("case must be 1..5")


def _unit_count(place: LocalPlace, n: int) -> int:
    Q = place.Q
    return Q**n - Q ** (n - 1)


def local_toroidal_integral_truncated(pair: LocalCharPair, z: complex,
                                      theta: Optional[LocalChar] = None,
                                      shells: int = 60) -> complex:
    """Direct shell-by-shell evaluation of the defining local integral,
    int theta(x) Psi((1 0; 1 x)) d*x, as a truncated sum; the measure gives
    each unit class mod the theta conductor mass one."""
    place = pair.place
    F = place.field
    Q = place.Q
    n = theta.r if theta is not None else 0
    resolution = max(n, pair.s, 1)
    ring_n = unit_group(F, F.ideal_pow(place.prime, resolution))
    units = ring_n.enumerate_units()
    total = 0j
    one = place.one()
    zero = place.zero()
    for t in range(-shells, shells + 1):
        for ures in units:
            x_exact = F.elt_xy(*ures) * place.pi_elt**t
            x = place.element(x_exact)
            gmat = LocalMatrix(place, [[one, zero], [place.element(F.one()), x]])
            if theta is not None:
                # the theta-twisted vector expanded as a translate sum
                val = 0j
                for yres in units:
                    n_y = LocalMatrix(place, [
                        [one, place.element(-F.elt_xy(*yres) / place.pi_elt**n)],
                        [zero, one],
                    ])
                    term = eval_newvector(pair, gmat * n_y)
                    val += term.at_z(z, Q) * theta.on_units(yres).inv().to_complex()
                weight = theta(x).at_z(z, Q)
                total += weight * val
            else:
                term = eval_newvector(pair, gmat)
                # measure: the whole unit group has mass one off the theta set
                total += term.at_z(z, Q) / len(units)
    return total


def archimedean_factor(m: int, mprime: int, z: complex) -> complex:
    """(-1)^(m - m')/2 * Gamma(z/2 + m - m' + 1) Gamma(z/2 + m' + 1)
    / Gamma(z + m + 2), on its convergence strip."""
    from .analytic import complex_gamma

    z = complex(z)
    if z.real / 2 <= -(m - mprime + 1) or z.real / 2 <= -(mprime + 1):
        raise ValueError("outside the convergence strip")
    return ((-1) ** (m - mprime) / 2.0 *
            complex_gamma(z / 2 + m - mprime + 1) *
            complex_gamma(z / 2 + mprime + 1) /
            complex_gamma(z + m + 2))


def archimedean_quadrature(m: int, mprime: int, z: float) -> float:
    """Numerical radial integral behind the archimedean factor."""
    from scipy import integrate

    def integrand(t):
        return t ** (z / 2 + m - mprime) / (1 + t) ** (z + 2 + m)

    val, _err = integrate.quad(integrand, 0, math.inf, limit=200)
    return (-1) ** (m - mprime) / 2.0 * val

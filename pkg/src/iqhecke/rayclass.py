"""Finite abelian quotients of an imaginary quadratic field.

Two families: unit groups (O/f)^* presented by independent generators of
prime-power order, and ray class groups Cl_f presented concretely as pairs
(ideal class, unit residue mod global units), with a discrete log for every
coprime ideal.  Both power the finite parts of Hecke characters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .quadfield import IdealHNF, QuadElt, QuadField, factorize, _xgcd


# --------------------------------------------------------------------------
# generic finite abelian structure
# --------------------------------------------------------------------------

class FiniteAbelianGroup:
    """Structure of a finite abelian group given by explicit elements.

    Decomposed one Sylow subgroup at a time into cyclic factors of
    prime-power order; tabulates a discrete log for every element.
    """

    def __init__(self, elements: Sequence[Hashable], mul: Callable, identity: Hashable):
        self.mul = mul
        self.identity = identity
        self.elements = list(elements)
        self.order = len(self.elements)
        self.generators: List[Hashable] = []
        self.orders: List[int] = []
        self._dlog: Dict[Hashable, Tuple[int, ...]] = {}
        self._build()

    def _pow(self, x, k):
        out = self.identity
        b = x
        while k:
            if k & 1:
                out = self.mul(out, b)
            b = self.mul(b, b)
            k >>= 1
        return out

    def _build(self):
        n = self.order
        table: Dict[Hashable, List[int]] = {self.identity: []}
        for ell in sorted(factorize(n)) if n > 1 else []:
            cof = n
            while cof % ell == 0:
                cof //= ell
            sylow = list({self._pow(x, cof) for x in self.elements})
            basis, orders, dlog = self._p_group_basis(sylow, ell)
            merged: Dict[Hashable, List[int]] = {}
            for e_old, vec_old in table.items():
                for s, vec_s in dlog.items():
                    merged[self.mul(e_old, s)] = vec_old + list(vec_s)
            table = merged
            self.generators.extend(basis)
            self.orders.extend(orders)
        assert len(table) == n, "generator decomposition must cover the group"
        self._dlog = {k: tuple(v) for k, v in table.items()}

    def _p_group_basis(self, elems, ell):
        """Classical quotient-lifting decomposition of an abelian ell-group.

        A maximal-order element generates a direct summand; the complement
        is found by recursing on the quotient and lifting each quotient
        generator to an element of the same order.
        """

        def ell_order_exp(x, mul, ident):
            k = 0
            while x != ident:
                x = _pow_with(mul, ident, x, ell)
                k += 1
            return k

        def rec(elem_list, mul, ident):
            if len(elem_list) == 1:
                return []
            g = max(elem_list, key=lambda x: ell_order_exp(x, mul, ident))
            a = ell ** ell_order_exp(g, mul, ident)
            gpowers = {}
            x = ident
            for k in range(a):
                gpowers[x] = k
                x = mul(x, g)
            coset_of = {}
            for e in elem_list:
                if e in coset_of:
                    continue
                orbit = []
                y = e
                for _ in range(a):
                    orbit.append(y)
                    y = mul(y, g)
                key = min(orbit)
                for o in orbit:
                    coset_of[o] = key

            def qmul(x, y):
                return coset_of[mul(x, y)]

            qelems = sorted(set(coset_of.values()))
            sub = rec(qelems, qmul, coset_of[ident])
            out = [(g, a)]
            for h, b in sub:
                # lift h to an element of true order b
                x = _pow_with(mul, ident, h, b)
                c = gpowers[x]
                assert c % b == 0, "quotient lift divisibility must hold"
                hh = mul(h, _pow_with(mul, ident, g, (-(c // b)) % a))
                assert _pow_with(mul, ident, hh, b) == ident
                out.append((hh, b))
            return out

        pairs = rec(sorted(elems), self.mul, self.identity)
        pairs = [(g, a) for g, a in pairs if a > 1]
        basis = [g for g, _ in pairs]
        orders = [a for _, a in pairs]
        # tabulate dlog by enumerating products
        hset: Dict[Hashable, Tuple[int, ...]] = {self.identity: ()}
        for g, a in pairs:
            powers = [self.identity]
            x = g
            for _ in range(a - 1):
                powers.append(x)
                x = self.mul(x, g)
            hset = {
                self.mul(h, pk): tuple(list(vec) + [k])
                for h, vec in hset.items()
                for k, pk in enumerate(powers)
            }
        assert len(hset) == len(elems), "basis must regenerate the Sylow subgroup"
        return basis, orders, hset

    def dlog(self, x) -> Tuple[int, ...]:
        return self._dlog[x]

    def __contains__(self, x):
        return x in self._dlog


def _pow_with(mul, ident, x, k):
    out = ident
    b = x
    while k:
        if k & 1:
            out = mul(out, b)
        b = mul(b, b)
        k >>= 1
    return out


# --------------------------------------------------------------------------
# residue rings (O/f)^*
# --------------------------------------------------------------------------

class ResidueRing:
    """(O/f)^* with generators, orders and discrete logs."""

    MAX_UNITS = 200_000

    def __init__(self, field: QuadField, modulus: IdealHNF):
        assert modulus.norm > 0
        self.field = field
        self.modulus = modulus
        self.prime_powers = field.factor_ideal(modulus)
        self._structure: Optional[FiniteAbelianGroup] = None
        self._crt_cache: Dict = {}

    # residues are (x, y) pairs over the basis (1, omega)
    def reduce(self, e: QuadElt) -> Tuple[int, int]:
        if not e.is_integral():
            return self.reduce_fraction(e)
        return self.reduce_xy(int(e.x), int(e.y))

    def reduce_xy(self, x: int, y: int) -> Tuple[int, int]:
        m = self.modulus
        v = y % m.c
        k = (y - v) // m.c
        x = (x - k * m.b) % m.a
        return (x, v)

    def reduce_fraction(self, e: QuadElt) -> Tuple[int, int]:
        den = math.lcm(e.x.denominator, e.y.denominator)
        num = self.field.elt_xy(e.x * den, e.y * den)
        if math.gcd(den, self.modulus.norm) != 1:
            raise ValueError("denominator not coprime to the modulus")
        inv = pow(den, -1, self.modulus.a)
        return self.reduce(num * inv)

    def elt(self, r: Tuple[int, int]) -> QuadElt:
        return self.field.elt_xy(r[0], r[1])

    def unit_lift(self, r: Tuple[int, int]) -> QuadElt:
        """Integral lift of a unit residue; 1 when the modulus is (1)."""
        e = self.elt(r)
        return self.field.one() if e.is_zero() else e

    def mul(self, r1: Tuple[int, int], r2: Tuple[int, int]) -> Tuple[int, int]:
        # integer fast path: omega^2 = t*omega - n
        t, n = self.field.omega_trace, self.field.omega_norm
        x1, y1 = r1
        x2, y2 = r2
        return self.reduce_xy(x1 * x2 - n * y1 * y2,
                              x1 * y2 + y1 * x2 + t * y1 * y2)

    def is_unit(self, r: Tuple[int, int]) -> bool:
        x, y = r
        return all(not P.contains_xy(x, y) for P, _ in self.prime_powers)

    def enumerate_units(self) -> List[Tuple[int, int]]:
        m = self.modulus
        if m.norm > self.MAX_UNITS:
            raise RuntimeError("modulus too large for exhaustive unit enumeration")
        return [
            (x, y)
            for y in range(m.c)
            for x in range(m.a)
            if self.is_unit((x, y))
        ]

    @property
    def unit_order(self) -> int:
        n = self.modulus.norm
        for P, _ in self.prime_powers:
            n = n // P.norm * (P.norm - 1)
        return n

    def structure(self) -> FiniteAbelianGroup:
        if self._structure is None:
            units = self.enumerate_units()
            ident = self.reduce(self.field.one())
            grp = self._cyclic_fast_path(units, ident)
            if grp is None:
                grp = FiniteAbelianGroup(units, self.mul, ident)
            assert grp.order == self.unit_order
            self._structure = grp
        return self._structure

    def _cyclic_fast_path(self, units, ident):
        """Walk powers of a generator when the unit group is cyclic."""
        M = len(units)
        if M == 1:
            return FiniteAbelianGroup(units, self.mul, ident)
        fac = sorted(factorize(M))
        for g in units[:60]:
            # order test via prime cofactors
            if any(_pow_with(self.mul, ident, g, M // ell) == ident for ell in fac):
                continue
            table = {}
            x = ident
            for k in range(M):
                table[x] = (k,)
                x = self.mul(x, g)
            if len(table) != M:
                break
            grp = FiniteAbelianGroup.__new__(FiniteAbelianGroup)
            grp.mul = self.mul
            grp.identity = ident
            grp.elements = list(units)
            grp.order = M
            grp.generators = [g]
            grp.orders = [M]
            grp._dlog = table
            return grp
        return None

    @property
    def unit_generators(self) -> List[Tuple[Tuple[int, int], int]]:
        g = self.structure()
        return list(zip(g.generators, g.orders))

    def dlog(self, e) -> Tuple[int, ...]:
        r = self.reduce(e) if isinstance(e, QuadElt) else e
        if not self.is_unit(r):
            raise ValueError("element is not a unit modulo f")
        return self.structure().dlog(r)

    def inverse(self, r: Tuple[int, int]) -> Tuple[int, int]:
        """Solve u w = 1 modulo the lattice by integer linear algebra."""
        t, n = self.field.omega_trace, self.field.omega_norm
        ux, uy = r
        m = self.modulus
        cols = [
            (ux, uy),                      # u * (1, 0)
            (-n * uy, ux + t * uy),        # u * (0, 1) = u * omega
            (m.a, 0),
            (m.b, m.c),
        ]
        combo = _solve_target(cols, (1, 0))
        if combo is None:
            raise ValueError("element is not invertible modulo f")
        return self.reduce_xy(combo[0], combo[1])

    def crt_lift(self, e: QuadElt, place: IdealHNF) -> QuadElt:
        """Integral lift congruent to e at the place-primary part, 1 elsewhere."""
        key = place.key()
        if key not in self._crt_cache:
            Q = None
            for P, k in self.prime_powers:
                if P == place:
                    Q = self.field.ideal_pow(P, k)
            if Q is None:
                raise ValueError("place does not divide the modulus")
            R = self.field.ideal_div(self.modulus, Q)
            self._crt_cache[key] = ideal_crt_pair(self.field, Q, R)
        a, b = self._crt_cache[key]  # a in Q, b in R, a + b = 1
        return self.field.elt_xy(*self.reduce(e * b + a))


def unit_group(F: QuadField, f: IdealHNF) -> ResidueRing:
    """(O/f)^* with its structure forced."""
    ring = ResidueRing(F, f)
    if not f.is_one():
        ring.structure()
    return ring


def ideal_crt_pair(field: QuadField, A: IdealHNF, B: IdealHNF) -> Tuple[QuadElt, QuadElt]:
    """(a, b) with a in A, b in B, a + b = 1, for coprime A, B."""
    cols = []
    for g in list(A.gens()) + list(B.gens()):
        cols.append((int(g.x), int(g.y)))
    combo = _solve_target(cols, (1, 0))
    if combo is None:
        raise ValueError("ideals are not coprime")
    ga = list(A.gens())
    a = field.elt(0)
    for coef, g in zip(combo[:2], ga):
        a = a + g * coef
    b = field.one() - a
    assert A.contains(a) and B.contains(b), "CRT decomposition failed"
    return a, b


def _solve_target(cols: List[Tuple[int, int]], target: Tuple[int, int]) -> Optional[List[int]]:
    """Integer combination of 2-vectors reaching target, with coefficients."""
    k = len(cols)
    track = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    work = [list(c) for c in cols]

    # zero out all but one second coordinate
    piv = None
    for j in range(k):
        if work[j][1] == 0:
            continue
        if piv is None:
            piv = j
            continue
        i = piv
        while work[j][1]:
            q = work[i][1] // work[j][1]
            work[i] = [a - q * b for a, b in zip(work[i], work[j])]
            track[i] = [a - q * b for a, b in zip(track[i], track[j])]
            work[i], work[j] = work[j], work[i]
            track[i], track[j] = track[j], track[i]
        piv = i
    res = [0] * k
    tx, ty = target
    if ty:
        if piv is None or ty % work[piv][1]:
            return None
        q = ty // work[piv][1]
        res = [r + q * t for r, t in zip(res, track[piv])]
        tx -= q * work[piv][0]
    if tx:
        idxs = [j for j in range(k) if j != piv and work[j][0]]
        if not idxs:
            return None
        vals = [work[j][0] for j in idxs]
        coefs = _gcd_combo(vals)
        g = sum(c * v for c, v in zip(coefs, vals))
        if tx % g:
            return None
        scale = tx // g
        for j, cf in zip(idxs, coefs):
            res = [r + scale * cf * t for r, t in zip(res, track[j])]
    sx = sum(res[j] * cols[j][0] for j in range(k))
    sy = sum(res[j] * cols[j][1] for j in range(k))
    return res if (sx, sy) == target else None


def _gcd_combo(vals: List[int]) -> List[int]:
    coefs = [1]
    g = vals[0]
    for v in vals[1:]:
        gg, u, w = _xgcd(g, v)
        coefs = [c * u for c in coefs] + [w]
        g = gg
    return coefs


def integer_kernel(rows: List[List[int]]) -> List[List[int]]:
    """Basis of the integer kernel of a matrix given by rows."""
    if not rows:
        return []
    n = len(rows[0])
    cols = [[rows[r][c] for r in range(len(rows))] for c in range(n)]
    track = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    m = len(rows)
    for row in range(m):
        piv = None
        for j in range(r, n):
            if cols[j][row]:
                piv = j
                break
        if piv is None:
            continue
        cols[r], cols[piv] = cols[piv], cols[r]
        track[r], track[piv] = track[piv], track[r]
        for j in range(r + 1, n):
            while cols[j][row]:
                q = cols[r][row] // cols[j][row]
                cols[r] = [a - q * b for a, b in zip(cols[r], cols[j])]
                track[r] = [a - q * b for a, b in zip(track[r], track[j])]
                cols[r], cols[j] = cols[j], cols[r]
                track[r], track[j] = track[j], track[r]
        r += 1
    return [track[j] for j in range(r, n)] + [
        track[j] for j in range(r) if not any(cols[j])
    ]


def snf_diagonal(M: List[List[int]]) -> List[int]:
    """Diagonal invariants of the Smith normal form."""
    A = [row[:] for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    out = []
    k = 0
    while k < min(n, m):
        piv = None
        best = None
        for i in range(k, n):
            for j in range(k, m):
                if A[i][j] and (best is None or abs(A[i][j]) < best):
                    best, piv = abs(A[i][j]), (i, j)
        if piv is None:
            break
        A[k], A[piv[0]] = A[piv[0]], A[k]
        for row in A:
            row[k], row[piv[1]] = row[piv[1]], row[k]
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, n):
                if A[i][k]:
                    q = A[i][k] // A[k][k]
                    A[i] = [a - q * b for a, b in zip(A[i], A[k])]
                    if A[i][k]:
                        A[k], A[i] = A[i], A[k]
                        dirty = True
            for j in range(k + 1, m):
                if A[k][j]:
                    q = A[k][j] // A[k][k]
                    for row in A:
                        row[j] -= q * row[k]
                    if A[k][j]:
                        for row in A:
                            row[k], row[j] = row[j], row[k]
                        dirty = True
            # entries below-right must be divisible by the pivot
            if not dirty:
                for i in range(k + 1, n):
                    bad = next((j for j in range(k + 1, m) if A[i][j] % A[k][k]), None)
                    if bad is not None:
                        A[k] = [a + b for a, b in zip(A[k], A[i])]
                        dirty = True
                        break
        out.append(abs(A[k][k]))
        k += 1
    return out


# --------------------------------------------------------------------------
# ray class groups
# --------------------------------------------------------------------------

@dataclass
class RayClassGroup:
    """Cl_f(F): ideals coprime to f modulo the ray (alpha), alpha = 1 mod f."""

    field: QuadField
    modulus: IdealHNF
    ring: ResidueRing
    generators: List[IdealHNF]             # prime ideal generators
    relations: List[List[int]]             # relation lattice basis (rows)
    relations_snf: List[int]               # SNF diagonal of the relation lattice
    basis_reps: List[IdealHNF]             # small ideals realizing a diagonal basis
    basis_orders: List[int]
    basis_ray_generators: List[QuadElt]    # alpha_j with B_j^{d_j} = (alpha_j)
    class_reps: Dict
    _pair_dlog: Dict = dfield(default_factory=dict)
    _gen_dlog: Dict = dfield(default_factory=dict)
    _unit_orbits: Dict = dfield(default_factory=dict)

    @property
    def order(self) -> int:
        out = 1
        for d in self.basis_orders:
            out *= d
        return out

    # -- the concrete pair invariant ----------------------------------------
    def unit_orbit_key(self, r: Tuple[int, int]) -> Tuple[int, int]:
        if r not in self._unit_orbits:
            orbit = [self.ring.mul(r, self.ring.reduce(u)) for u in field_units(self.field)]
            key = min(orbit)
            for o in orbit:
                self._unit_orbits[o] = key
        return self._unit_orbits[r]

    def pair(self, I: IdealHNF) -> Tuple[Tuple[int, int, int], Tuple[int, int]]:
        """(class label, unit-orbit residue) classifying [I] in Cl_f."""
        F = self.field
        if not F.ideal_coprime(I, self.modulus):
            raise ValueError("ideal is not coprime to the ray modulus")
        label = F.class_label(I)
        A = self.class_reps[label]
        num = F.ideal_mul(I, F.ideal_conj(A))
        gamma0 = F.one()
        if num.norm > 10**10:
            num, gamma0 = F.reduce_ideal_tracked(num, avoid=self.modulus.norm)
        g = F.principal_test(num)
        if g is None:
            raise ValueError("ideal is not coprime to the modulus or pair failed")
        gamma = gamma0 * g / A.norm
        return label, self.unit_orbit_key(self.ring.reduce_fraction(gamma))

    def dlog_basis(self, I: IdealHNF) -> Tuple[int, ...]:
        """Exponents over the diagonal basis reps."""
        return self._pair_dlog[self.pair(I)]

    def dlog(self, I: IdealHNF) -> Tuple[int, ...]:
        """Exponents over the prime generators (defined mod relations)."""
        if not self._gen_dlog:
            # BFS over products of the prime generators
            start = self.dlog_basis(self.field.unit_ideal())
            gen_vecs = [self.dlog_basis(g) for g in self.generators]
            table = {start: tuple([0] * len(self.generators))}
            frontier = [start]
            while frontier:
                nxt = []
                for v in frontier:
                    ex = table[v]
                    for i, gv in enumerate(gen_vecs):
                        w = tuple(
                            (a + b) % d for a, b, d in zip(v, gv, self.basis_orders)
                        )
                        if w not in table:
                            e2 = list(ex)
                            e2[i] += 1
                            table[w] = tuple(e2)
                            nxt.append(w)
                frontier = nxt
            assert len(table) == self.order, "prime generators must generate"
            self._gen_dlog = table
        return self._gen_dlog[self.dlog_basis(I)]

    def residual_generator(self, I: IdealHNF, exps: Sequence[int]) -> QuadElt:
        """gamma with I = prod B_j^exps_j * (gamma), (gamma) in the ray class of 1."""
        F = self.field
        avoid = self.modulus.norm
        num = I
        gamma = F.one()
        den = 1
        for B, e in zip(self.basis_reps, exps):
            for _ in range(e):
                num = F.ideal_mul(num, F.ideal_conj(B))  # times B^{-1} * Nm(B)
                den *= B.norm
                num, g0 = F.reduce_ideal_tracked(num, avoid=avoid)
                gamma = gamma * g0
        g = F.principal_test(num)
        assert g is not None, "residual must be principal"
        return gamma * g / den


def field_units(F: QuadField) -> List[QuadElt]:
    """Units of the ring of integers."""
    if F.D == 1:
        return [F.elt(1), F.elt(-1), F.elt_xy(0, 1), F.elt_xy(0, -1)]
    if F.D == 3:
        w = F.elt_xy(0, 1)
        return [F.elt(1), F.elt(-1), w, -w, w - F.one(), F.one() - w]
    return [F.elt(1), F.elt(-1)]


def ray_class_group(F: QuadField, f: IdealHNF, avoid_norm: int = 1) -> RayClassGroup:
    """Build Cl_f with prime generators coprime to f and to avoid_norm."""
    ring = ResidueRing(F, f)
    F._classes()
    # class representatives coprime to Nm(f)
    class_reps = {}
    for label in F._classes()["table"]:
        rep = F.class_rep(label)
        if math.gcd(rep.norm, f.norm * avoid_norm) == 1:
            class_reps[label] = rep
        else:
            class_reps[label] = _class_rep_coprime(F, label, f.norm * avoid_norm)

    grp = RayClassGroup(
        field=F, modulus=f, ring=ring, generators=[], relations=[],
        relations_snf=[], basis_reps=[], basis_orders=[],
        basis_ray_generators=[], class_reps=class_reps,
    )

    # abstract pair group under cocycle multiplication
    if f.is_one():
        unit_orbits = [grp.unit_orbit_key(ring.reduce(F.one()))]
    else:
        orbit_keys = {grp.unit_orbit_key(u) for u in ring.enumerate_units()}
        unit_orbits = sorted(orbit_keys)
    labels = sorted(F._classes()["table"])
    elements = [(lab, u) for lab in labels for u in unit_orbits]

    cocycle: Dict = {}

    def mul(p1, p2):
        (c1, u1), (c2, u2) = p1, p2
        key = (c1, c2)
        if key not in cocycle:
            A1, A2 = class_reps[c1], class_reps[c2]
            prod = F.ideal_mul(A1, A2)
            c3 = F.class_label(prod)
            A3 = class_reps[c3]
            num = F.ideal_mul(prod, F.ideal_conj(A3))
            g = F.principal_test(num)
            assert g is not None
            tau = g / A3.norm
            cocycle[key] = (c3, ring.reduce_fraction(tau))
        c3, taur = cocycle[key]
        return (c3, grp.unit_orbit_key(ring.mul(ring.mul(u1, u2), taur)))

    identity = (F.principal_label(), grp.unit_orbit_key(ring.reduce(F.one())))
    abstract = FiniteAbelianGroup(elements, mul, identity)
    grp._pair_dlog = dict(abstract._dlog)

    # realize the diagonal basis as small ideals
    basis_reps, basis_orders, alphas = [], [], []
    for gen_pair, order in zip(abstract.generators, abstract.orders):
        lab, u = gen_pair
        A = class_reps[lab]
        # pair(A * (delta)) = (lab, delta * gamma_A); pick delta accordingly
        pA = grp.pair(A)
        delta_res = ring.mul(u, ring.inverse(pA[1]))
        B = F.ideal_mul(A, F.ideal(ring.unit_lift(delta_res)))
        assert grp.pair(B) == gen_pair, "failed to realize a basis element"
        basis_reps.append(B)
        basis_orders.append(order)
    grp.basis_reps = basis_reps
    grp.basis_orders = basis_orders

    # ray generators alpha_j of B_j^{d_j}
    for B, d in zip(basis_reps, basis_orders):
        num, gamma, den = F.unit_ideal(), F.one(), 1
        for _ in range(d):
            num = F.ideal_mul(num, B)
            num, g0 = F.reduce_ideal_tracked(num, avoid=f.norm)
            gamma = gamma * g0
        g = F.principal_test(num)
        assert g is not None
        alphas.append(gamma * g)
    grp.basis_ray_generators = alphas

    # prime ideal generators (smallest-norm degree-one primes first)
    gen_primes: List[IdealHNF] = []
    seen = {tuple([0] * len(basis_orders))}
    target = grp.order
    p = 2
    while len(seen) < target or not gen_primes:
        if _is_prime_int(p) and math.gcd(p, f.norm * avoid_norm) == 1:
            pf = F.split_prime(p)
            if pf.kind != "inert":
                for P in pf.primes_above:
                    v = grp.dlog_basis(P)
                    gen_primes.append(P)
                    # close
                    frontier = list(seen)
                    while frontier:
                        nxt = []
                        for s in frontier:
                            w = tuple((a + b) % d for a, b, d in zip(s, v, basis_orders))
                            if w not in seen:
                                seen.add(w)
                                nxt.append(w)
                        frontier = nxt
                    if len(seen) == target:
                        break
        p += 1
        if p > 10**5:
            raise RuntimeError("failed to generate the ray class group by primes")
        if len(seen) == target and gen_primes:
            break
    # drop redundant generators (keep a minimal prefix achieving generation)
    kept = []
    seen = {tuple([0] * len(basis_orders))}
    for P in gen_primes:
        if len(seen) == target:
            break
        kept.append(P)
        v = grp.dlog_basis(P)
        frontier = list(seen)
        while frontier:
            nxt = []
            for s in frontier:
                w = tuple((a + b) % d for a, b, d in zip(s, v, basis_orders))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
            frontier = nxt
    grp.generators = kept

    # relation lattice of the prime generators
    k = len(kept)
    r = len(basis_orders)
    vecs = [grp.dlog_basis(P) for P in kept]
    rows = []
    for j in range(r):
        rows.append([vecs[i][j] for i in range(k)] + [
            basis_orders[j] if jj == j else 0 for jj in range(r)
        ])
    kern = integer_kernel(rows)
    rel_rows = [v[:k] for v in kern]
    rel_rows = [row for row in rel_rows if any(row)]
    grp.relations = rel_rows
    grp.relations_snf = snf_diagonal(rel_rows) if rel_rows else []
    return grp


def _class_rep_coprime(F: QuadField, label, avoid: int) -> IdealHNF:
    p = 2
    while p < 10**5:
        if _is_prime_int(p) and avoid % p:
            try:
                pf = F.split_prime(p)
            except ValueError:
                pf = None
            if pf and pf.kind != "inert":
                for P in pf.primes_above:
                    if F.class_label(P) == label:
                        return P
        p += 1
    raise RuntimeError("no coprime class representative found")


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True

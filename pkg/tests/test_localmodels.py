import random
from fractions import Fraction

import pytest

from iqhecke.cyclotomic import Cyc
from iqhecke.quadfield import make_field
from iqhecke.localmodels import (
    LocalCharPair,
    LocalChar,
    LocalMatrix,
    LocalPlace,
    PrecisionError,
    ZPoly,
    archimedean_factor,
    archimedean_quadrature,
    eval_newvector,
    eval_spherical,
    iwasawa,
    local_toroidal_factor,
    local_toroidal_integral_truncated,
    primitive_unit_chars,
    theta_twist_newvector,
    twist_l32,
    twisted_sum_p32,
    unit_char_from_residue_char,
    unramified_pair,
)


def same_local(e1, e2):
    if e1.is_zero() or e2.is_zero():
        return e1.is_zero() and e2.is_zero()
    if e1.val != e2.val:
        return False
    prec = min(e1.prec, e2.prec)
    place = e1.place
    diff = place.field.elt_xy(e1.unit[0] - e2.unit[0], e1.unit[1] - e2.unit[1])
    return place.lattices[prec].contains(diff)


def rational_matrix(pl, rng, p):
    F = pl.field
    ents = []
    for _ in range(4):
        num = F.elt_xy(rng.randint(-9, 9), rng.randint(-9, 9))
        den = rng.choice([1, p, p * p])
        ents.append(num / den)
    return LocalMatrix(pl, [[ents[0], ents[1]], [ents[2], ents[3]]])


@pytest.mark.parametrize("D,p", [(1, 5), (1, 3), (1, 2), (5, 2), (2, 2), (5, 5)])
def test_iwasawa_reconstruction(D, p):
    F = make_field(D)
    P = F.split_prime(p).primes_above[0]
    pl = LocalPlace(F, P)
    rng = random.Random(100 * D + p)
    done = 0
    while done < 120:
        g = rational_matrix(pl, rng, p)
        try:
            if g.det().is_zero():
                continue
            B, k, tag = iwasawa(g)
        except (PrecisionError, ValueError, ZeroDivisionError):
            continue
        assert B.m[1][0].is_zero()
        assert k.in_gl2_o()
        Bk = B * k
        for i in range(2):
            for j in range(2):
                assert same_local(Bk.m[i][j], g.m[i][j]), (D, p, i, j)
        done += 1


def test_iwasawa_branch_examples():
    # (1 0; 1 x) with ord(x) >= 0 takes the Weyl branch, k = (0 -1; 1 x)
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    x = pl.element(F.elt(3))
    g = LocalMatrix(pl, [[pl.one(), pl.zero()], [pl.one(), x]])
    B, k, tag = iwasawa(g)
    assert tag == "weyl"
    assert same_local(B.m[0][0], x) and same_local(B.m[0][1], pl.one())
    # ord(x) < 0 keeps the unipotent branch: (1 0; 0 x)(1 0; x^{-1} 1)
    xneg = pl.element(F.one() / 5)
    g2 = LocalMatrix(pl, [[pl.one(), pl.zero()], [pl.one(), xneg]])
    B2, k2, tag2 = iwasawa(g2)
    assert tag2 == "unipotent"
    assert same_local(k2.m[1][0], xneg.inv())
    # upper triangular input: B = g, k = 1
    g3 = LocalMatrix(pl, [[pl.element(F.elt(2)), pl.element(F.elt(7))],
                          [pl.zero(), pl.one()]])
    B3, k3, _ = iwasawa(g3)
    assert same_local(B3.m[0][0], g3.m[0][0]) and k3.m[1][0].is_zero()


def test_precision_error_on_deep_cancellation():
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0], precision=6)
    a = pl.element(F.elt(1))
    with pytest.raises(PrecisionError):
        _ = a + (-pl.element(F.one()))  # exact cancellation
    with pytest.raises(PrecisionError):
        # 5^6 vanishes through the whole window
        _ = a + pl.element(F.elt(5**6 - 1))
    with pytest.raises(PrecisionError):
        _ = pl.element(F.elt(5**7 + 1)) + (-pl.element(F.one()))
    # a decidable valuation inside the window is fine
    c = a + pl.element(F.elt(5**3 - 1))
    assert c.val == 3


def make_pair(pl, v1=None, v2=None):
    v1 = v1 if v1 is not None else Cyc.zeta(8)
    v2 = v2 if v2 is not None else Cyc.from_rational(3)
    return unramified_pair(pl, v1, v2)


def test_newvector_normalization_and_support():
    # with a ramified mu-twist (r = 1, s = 2): value 1 at (1 0; pi 1),
    # zero at (1 0; 1 1) and at (1 0; pi^2 1)-type points off the coset
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    pair = make_pair(pl)
    mus = primitive_unit_chars(pl, 1)
    chi, exps, order = next(m for m in mus if m[2] == 4)
    mu = LocalChar(pl, ZPoly.one(), chi, 1)
    tw = pair.twist(mu)
    assert tw.r == 1 and tw.s == 2
    one, zero = pl.one(), pl.zero()
    pi1 = pl.from_val_unit(1, pl.ring.reduce(F.one()))
    g_on = LocalMatrix(pl, [[one, zero], [pi1, one]])
    val = eval_newvector(tw, g_on)
    assert val == ZPoly.one()
    g_off = LocalMatrix(pl, [[one, zero], [one, one]])
    assert eval_newvector(tw, g_off).is_zero()
    pi0 = pl.from_val_unit(0, pl.ring.reduce(F.one()))
    g_r_minus = LocalMatrix(pl, [[one, zero], [pi0, one]])
    assert eval_newvector(tw, g_r_minus).is_zero()


def test_spherical_values():
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    pair = make_pair(pl)
    one, zero = pl.one(), pl.zero()
    assert eval_spherical(pair, LocalMatrix(pl, [[one, zero], [zero, one]])) == ZPoly.one()
    # diag(pi, 1) -> eta1(pi) = v1 * X
    pi1 = pl.from_val_unit(1, pl.ring.reduce(F.one()))
    g = LocalMatrix(pl, [[pi1, zero], [zero, one]])
    v = eval_spherical(pair, g)
    assert v == ZPoly.monomial(Cyc.zeta(8), 1)


def test_spherical_transformation_law():
    rng = random.Random(3)
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    pair = make_pair(pl)
    one, zero = pl.one(), pl.zero()
    done = 0
    while done < 40:
        g = rational_matrix(pl, rng, 5)
        try:
            if g.det().is_zero():
                continue
            base = eval_spherical(pair, g)
        except (PrecisionError, ValueError, ZeroDivisionError):
            continue
        t1 = pl.element(F.elt(rng.choice([1, 2, 5, 10])))
        t2 = pl.element(F.elt(rng.choice([1, 3, 25])))
        u = pl.element(F.elt_xy(rng.randint(-3, 3), rng.randint(-3, 3)))
        b = LocalMatrix(pl, [[t1, u], [zero, t2]])
        try:
            lhs = eval_spherical(pair, b * g)
        except (PrecisionError, ValueError, ZeroDivisionError):
            continue
        rhs = pair.eta1(t1) * pair.eta2(t2) * base
        assert lhs == rhs
        done += 1


def test_twist_l32_pointwise():
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    pair = make_pair(pl)
    mus = primitive_unit_chars(pl, 1)
    chi, exps, order = mus[0]
    mu = LocalChar(pl, ZPoly.one(), chi, 1)
    one, zero = pl.one(), pl.zero()
    mats = [
        LocalMatrix(pl, [[one, zero], [zero, one]]),
        LocalMatrix(pl, [[one, zero], [one, pl.from_val_unit(1, pl.ring.reduce(F.one()))]]),
        LocalMatrix(pl, [[pl.element(F.elt(2)), pl.element(F.elt(3))],
                         [pl.element(F.elt(5)), pl.element(F.elt(4))]]),
    ]
    for g in mats:
        if g.det().is_zero():
            continue
        out = twist_l32(pair, mu, g)
        assert out["pass"], g


def test_twisted_sum_exact_r1():
    F = make_field(1)
    pl = LocalPlace(F, F.split_prime(5).primes_above[0])
    pair = make_pair(pl)
    one, zero = pl.one(), pl.zero()
    pi1 = pl.from_val_unit(1, pl.ring.reduce(F.one()))
    g = LocalMatrix(pl, [[one, zero], [pi1, one]])
    for chi, exps, order in primitive_unit_chars(pl, 1):
        mu = LocalChar(pl, ZPoly.one(), chi, 1)
        out = twisted_sum_p32(pair, mu, g)
        assert out["pass"], exps
    # at the identity both sides vanish by orthogonality, exactly
    gid = LocalMatrix(pl, [[one, zero], [zero, one]])
    chi, exps, order = primitive_unit_chars(pl, 1)[0]
    mu = LocalChar(pl, ZPoly.one(), chi, 1)
    out = twisted_sum_p32(pair, mu, gid)
    assert out["pass"] and out["lhs"].is_zero()


def test_twisted_sum_exact_r2_inert():
    # Nm P = 9 with r = 2 exercises the deep cancellation branch
    F = make_field(1)
    pl = LocalPlace(F, F.ideal(3))
    pair = make_pair(pl, Cyc.zeta(4), Cyc.from_rational(2))
    one, zero = pl.one(), pl.zero()
    g = LocalMatrix(pl, [[one, zero],
                         [pl.from_val_unit(2, pl.ring.reduce(F.one())), one]])
    chars = primitive_unit_chars(pl, 2)
    assert chars, "there must be characters of conductor exactly P^2"
    for chi, exps, order in chars[:6]:
        mu = LocalChar(pl, ZPoly.one(), chi, 2)
        out = twisted_sum_p32(pair, mu, g)
        assert out["pass"], exps


def test_theta_twist_factor():
    F = make_field(1)
    pl = LocalPlace(F, F.ideal(7))
    pair = make_pair(pl, Cyc.from_rational(2), Cyc.from_rational(3))
    chi, exps, order = primitive_unit_chars(pl, 1)[0]
    th = LocalChar(pl, ZPoly.one(), chi, 1)
    one, zero = pl.one(), pl.zero()
    for g in [
        LocalMatrix(pl, [[one, zero],
                         [pl.from_val_unit(1, pl.ring.reduce(F.one())), one]]),
        LocalMatrix(pl, [[pl.element(F.elt(2)), one], [zero, one]]),
    ]:
        out = theta_twist_newvector(pair, th, g)
        assert out["pass"]


def test_local_toroidal_cases_vs_truncation():
    F = make_field(1)
    z = 4.0
    # case 1: both unramified
    pl = LocalPlace(F, F.split_prime(13).primes_above[0])
    pair = unramified_pair(pl, Cyc.zeta(8), Cyc.from_rational(1), z_twist=False)
    pair_z = unramified_pair(pl, Cyc.zeta(8), Cyc.from_rational(1), z_twist=True)
    closed = local_toroidal_factor(pair, 1)(z)
    direct = local_toroidal_integral_truncated(pair_z, z, shells=40)
    assert abs(closed - direct) < 1e-10 * (1 + abs(closed))
    # case 5: theta ramified
    pl7 = LocalPlace(F, F.ideal(7))
    pair7 = unramified_pair(pl7, Cyc.from_rational(2), Cyc.from_rational(3),
                            z_twist=False)
    pair7z = unramified_pair(pl7, Cyc.from_rational(2), Cyc.from_rational(3),
                             z_twist=True)
    chi, exps, order = primitive_unit_chars(pl7, 1)[0]
    th = LocalChar(pl7, ZPoly.one(), chi, 1)
    closed5 = local_toroidal_factor(pair7, 5, theta=th)(z)
    direct5 = local_toroidal_integral_truncated(pair7z, z, theta=th, shells=30)
    assert abs(closed5 - direct5) < 1e-8 * (1 + abs(closed5))


def test_archimedean_factor_values():
    assert abs(archimedean_factor(0, 0, 0) - 0.5) < 1e-12
    assert abs(archimedean_factor(2, 1, 0) - (-1.0 / 12)) < 1e-12
    with pytest.raises(ValueError):
        archimedean_factor(0, 0, -4.0)


def test_archimedean_quadrature_matches():
    for m, mp, z in [(3, 1, 0.5), (1, 0, 0.0), (2, 2, 1.0)]:
        a = archimedean_factor(m, mp, z)
        b = archimedean_quadrature(m, mp, z)
        assert abs(a - b) < 1e-6 * (1 + abs(a)), (m, mp, z)

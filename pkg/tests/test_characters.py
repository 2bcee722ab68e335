import math
import random
from fractions import Fraction

import pytest

from iqhecke.cyclotomic import Cyc
from iqhecke.quadfield import make_field
from iqhecke.characters import (
    anticyclotomic_char,
    build_char,
    class_group_char,
    conj_c,
    construct_greenchar,
    construct_minram,
    inverse_char,
    is_same_char,
    mul_chars,
    norm_char,
    ord_p_class_number_trick,
    ord_p_of_value,
    power_char,
    quotient_char,
    restrict_to_rationals,
    star,
    trivial_char,
)


def coprime_primes(F, chi, count, start=2):
    out = []
    p = start
    while len(out) < count:
        try:
            pf = F.split_prime(p)
        except ValueError:
            p += 1
            continue
        if F.ideal_coprime(F.ideal(p), chi.modulus):
            out.extend(pf.primes_above)
        p += 1
    return out[:count]


def test_trivial_char():
    F = make_field(1)
    chi = trivial_char(F)
    assert chi.conductor.is_one()
    for P in coprime_primes(F, chi, 6):
        assert (chi.eval(P).exact_cyc() - Cyc.one()).is_zero()


def test_norm_char_value():
    F = make_field(1)
    nm = norm_char(F)
    P = F.split_prime(5).primes_above[0]
    assert abs(nm.eval(P).to_complex() - 5) < 1e-12
    assert nm.a == nm.b == 1


def test_minram_qi():
    F = make_field(1)
    P = F.split_prime(5).primes_above[0]
    chi = construct_minram(F, P)
    assert (chi.a, chi.b) == (1, 0)
    assert chi.conductor == P
    # principal alpha = 1 mod (2+i): lambda((alpha)) = alpha exactly
    alpha = F.elt_xy(3, 1)
    assert P.contains(alpha - F.one())
    v = chi.eval(F.ideal(alpha))
    assert v.is_exact()
    assert (v.exact_cyc() - alpha.to_cyc()).is_zero()


def test_minram_rejects_small_q():
    F = make_field(1)
    P = F.split_prime(2).primes_above[0]
    with pytest.raises(ValueError):
        construct_minram(F, P)


def test_build_char_unit_obstruction():
    F = make_field(1)
    # a=1, b=0 with trivial eps violates eps(i) * i = 1
    with pytest.raises(ValueError):
        build_char(F, 1, 0, F.ideal(5), [0], [0, 0])


def test_multiplicativity_random():
    rng = random.Random(4)
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(5).primes_above[0])
    prims = coprime_primes(F, chi, 8, start=3)
    for _ in range(60):
        I, J = rng.choice(prims), rng.choice(prims)
        lhs = chi.eval(F.ideal_mul(I, J))
        rhs = chi.eval(I) * chi.eval(J)
        if lhs.is_exact() and rhs.is_exact():
            assert (lhs.exact_cyc() - rhs.exact_cyc()).is_zero()
        else:
            assert abs(lhs.to_complex() - rhs.to_complex()) < 1e-12 * (
                1 + abs(lhs.to_complex())
            )


def test_multiplicativity_class_number_two():
    rng = random.Random(8)
    F = make_field(5)
    chi = construct_greenchar(F, 1)
    prims = coprime_primes(F, chi, 8, start=3)
    for _ in range(50):
        I, J = rng.choice(prims), rng.choice(prims)
        lhs = chi.eval(F.ideal_mul(I, J)).to_complex()
        rhs = (chi.eval(I) * chi.eval(J)).to_complex()
        assert abs(lhs - rhs) < 1e-11 * (1 + abs(lhs))


def test_absolute_value_law():
    F = make_field(5)
    chi = construct_greenchar(F, 2)  # type z^2 zbar^{-1}
    for P in coprime_primes(F, chi, 6, start=3):
        v = abs(chi.eval(P).to_complex())
        assert abs(v - P.norm ** ((chi.a + chi.b) / 2)) < 1e-9


def test_conj_c_swaps_type_and_matches_conjugate_ideals():
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(5).primes_above[0])
    cc = conj_c(chi)
    assert (cc.a, cc.b) == (chi.b, chi.a)
    for P in coprime_primes(F, chi, 6, start=3):
        lhs = cc.eval(P)
        rhs = chi.eval(F.ideal_conj(P))
        assert abs(lhs.to_complex() - rhs.to_complex()) < 1e-12


def test_star_involution_and_formula():
    F = make_field(2)
    chi = construct_greenchar(F, 1)
    st = star(chi)
    stst = star(st)
    for P in coprime_primes(F, chi, 6, start=3):
        # star formula on ideals
        direct = chi.eval(F.ideal_conj(P)).inv().to_complex() * P.norm
        assert abs(st.eval(P).to_complex() - direct) < 1e-10
        assert abs(stst.eval(P).to_complex() - chi.eval(P).to_complex()) < 1e-10


def test_star_fixed_points():
    for D in (7, 2, 5):
        F = make_field(D)
        chi = construct_greenchar(F, 1)
        assert is_same_char(star(chi), chi, sample=20)


def test_star_of_norm_involution():
    F = make_field(1)
    nm = norm_char(F)
    st = star(nm)
    stst = star(st)
    assert is_same_char(stst, nm, sample=10)


def test_greenchar_conductors():
    F7 = make_field(7)
    assert construct_greenchar(F7, 1).conductor == F7.different()
    F5 = make_field(5)
    chi = construct_greenchar(F5, 2)
    assert chi.conductor == F5.ideal_mul(F5.ideal(2), F5.different())
    assert (chi.a, chi.b) == (2, -1)


def test_greenchar_restriction_law():
    for D in (1, 2, 7):
        F = make_field(D)
        chi = construct_greenchar(F, 1)
        label, t = restrict_to_rationals(chi)
        assert label == "omega"
        assert t == 1


def test_anticyclotomic_class_group_char():
    F = make_field(5)
    theta = class_group_char(F, [1])
    assert theta.is_finite_order()
    # theta(conj I) = theta(I)^{-1} holds for class group characters
    for P in coprime_primes(F, theta, 6, start=3):
        v = theta.eval(P).exact_cyc()
        w = theta.eval(F.ideal_conj(P)).exact_cyc()
        assert (v * w - Cyc.one()).is_zero()
    label, t = restrict_to_rationals(theta)
    assert label == "trivial" and t == 0


def test_anticyclotomic_inert_conductor():
    F = make_field(1)
    th = anticyclotomic_char(F, 7)
    assert th.conductor == F.ideal(7)
    assert th.is_finite_order()
    for P in coprime_primes(F, th, 6, start=3):
        v = th.eval(P).exact_cyc()
        w = th.eval(F.ideal_conj(P)).exact_cyc()
        assert (v * w - Cyc.one()).is_zero()


def test_product_and_quotient_chars():
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(5).primes_above[0])
    psi = construct_minram(F, F.split_prime(13).primes_above[0])
    prod = mul_chars(chi, psi)
    assert (prod.a, prod.b) == (2, 0)
    quot = quotient_char(prod, psi)
    assert is_same_char(quot, chi, sample=10)
    assert prod.conductor == F.ideal_mul(chi.conductor, psi.conductor)
    inv = inverse_char(chi)
    for P in coprime_primes(F, prod, 4, start=3):
        assert abs(
            (chi.eval(P) * inv.eval(P)).to_complex() - 1
        ) < 1e-12


def test_conductor_of_square_drops():
    # quadratic part of eps dies in the square
    F = make_field(5)
    chi = construct_greenchar(F, 1)
    sq = power_char(chi, 2)
    assert sq.conductor.norm < chi.conductor.norm or sq.conductor.is_one()


def test_ord_p_formula_and_class_number_trick():
    for D in (1, 2, 5):
        F = make_field(D)
        chis = [construct_greenchar(F, 1)]
        if D == 1:
            chis.append(construct_minram(F, F.split_prime(13).primes_above[0]))
        for chi in chis:
            for p in (3, 7, 11, 13, 29, 31):
                if not F.ideal_coprime(chi.conductor, F.ideal(p)):
                    continue
                try:
                    pf = F.split_prime(p)
                except ValueError:
                    continue
                if pf.kind == "ramified":
                    continue
                for v in pf.primes_above:
                    direct = ord_p_of_value(chi, p, v)
                    trick = ord_p_class_number_trick(chi, p, v)
                    assert Fraction(direct) == trick, (D, p)


def test_ord_p_examples():
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(13).primes_above[0])  # (a,b)=(1,0)
    P, Pbar = F.split_prime(5).primes_above
    assert ord_p_of_value(chi, 5, P) == -1
    assert ord_p_of_value(chi, 5, Pbar) == 0
    assert ord_p_of_value(chi, 5, F.unit_ideal()) == 0
    # (a,b) = (2,-1): uniformizer at Pbar gives +1
    chi2 = mul_chars((chi, 2), (norm_char(F), -1))
    wait = (chi2.a, chi2.b)
    assert wait == (1, -1)
    chi3 = mul_chars((chi, 1), (chi2, 1))  # (2, -1)
    assert (chi3.a, chi3.b) == (2, -1)
    assert ord_p_of_value(chi3, 5, Pbar) == 1


def test_ord_p_rejects_bad_p():
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(5).primes_above[0])
    with pytest.raises(ValueError):
        ord_p_of_value(chi, 2, F.ideal(3))  # 2 ramifies
    with pytest.raises(ValueError):
        ord_p_of_value(chi, 5, F.ideal(3))  # 5 divides the conductor


def test_eval_rejects_non_coprime():
    F = make_field(1)
    chi = construct_minram(F, F.split_prime(5).primes_above[0])
    with pytest.raises(Exception):
        chi.eval(F.ideal(5))


def test_principal_normalization_off_the_ray():
    # lambda((alpha)) = eps(alpha) alpha^a conj(alpha)^b must hold for every
    # principal ideal, not only alpha = 1 mod f
    F = make_field(1)
    th = anticyclotomic_char(F, 7)
    for xy in [(2, 1), (3, 2), (1, 4), (5, 2)]:
        al = F.elt_xy(*xy)
        if not F.ideal_coprime(F.ideal(al), th.modulus):
            continue
        got = th.eval(F.ideal(al)).exact_cyc()
        want = th.principal_value(al).exact_cyc()
        assert (got - want).is_zero(), xy
    F5 = make_field(5)
    chi = construct_greenchar(F5, 1)
    for xy in [(1, 2), (4, 1), (2, 3)]:
        al = F5.elt_xy(*xy)
        if not F5.ideal_coprime(F5.ideal(al), chi.modulus):
            continue
        got = chi.eval(F5.ideal(al)).to_complex()
        want = chi.principal_value(al).to_complex()
        assert abs(got - want) < 1e-10, xy

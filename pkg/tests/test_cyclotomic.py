import math
import random
from fractions import Fraction

import pytest

from iqhecke.cyclotomic import (
    Cyc,
    cyclotomic_poly,
    euler_phi,
    kronecker_symbol,
    nth_root_of_unity_solutions,
    sqrt_of_discriminant,
)


def test_cyclotomic_polys_small():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_phi():
    assert [euler_phi(n) for n in (1, 2, 3, 4, 5, 6, 12)] == [1, 1, 2, 2, 4, 2, 4]


def test_zeta_relations():
    z = Cyc.zeta(5)
    s = z + z**2 + z**3 + z**4
    assert s == -1
    assert (z**5) == 1
    assert z * z.conj() == 1


def test_mixed_orders_and_inverse():
    rng = random.Random(7)
    for _ in range(25):
        n1, n2 = rng.choice([3, 4, 5, 8, 12]), rng.choice([3, 4, 6, 9])
        x = Cyc(n1, {rng.randrange(n1): Fraction(rng.randint(-3, 3)) for _ in range(2)})
        y = Cyc(n2, {rng.randrange(n2): Fraction(rng.randint(-3, 3)) for _ in range(2)})
        z = (x + y) * (x - y)
        assert z == x * x - y * y
        if not x.is_zero():
            assert x * x.inv() == 1


def test_numeric_agreement():
    z = Cyc.zeta(7, 3) * Fraction(2, 3) + Cyc.zeta(7, 5)
    w = z * z - z.conj()
    num = w.to_complex()
    direct = (z.to_complex()) ** 2 - z.to_complex().conjugate()
    assert abs(num - direct) < 1e-12


def test_kronecker():
    # (d/p) for d = -4: p = 5 split, p = 3 inert
    assert kronecker_symbol(-4, 5) == 1
    assert kronecker_symbol(-4, 3) == -1
    assert kronecker_symbol(-20, 2) == 0
    assert kronecker_symbol(-8, 3) == 1


@pytest.mark.parametrize("disc", [-4, -8, -3, -20, -7, -24, -40, -23])
def test_sqrt_disc(disc):
    s = sqrt_of_discriminant(disc)
    assert (s * s).rational_value() == disc
    approx = s.to_complex()
    assert abs(approx - 1j * math.sqrt(-disc)) < 1e-9


def test_root_solutions():
    val = Cyc.zeta(4)  # i
    sols = nth_root_of_unity_solutions(2, val)
    assert sols, "i must have square roots among roots of unity"
    for w in sols:
        assert w * w == val
    sols2 = nth_root_of_unity_solutions(3, Cyc.from_rational(-1))
    for w in sols2:
        assert w**3 == Cyc.from_rational(-1)

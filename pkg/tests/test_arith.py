import random
from math import gcd, prod

import pytest

from shimcurve.arith import (
    QuadOrderDisc, class_number, class_number_brute, dedekind_psi, divisors,
    euler_phi, factorization, hall_divisors, hall_product, is_squarefree,
    kronecker, omega, split_discriminant,
)


def test_factorization_reconstructs():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randrange(1, 10**7)
        fac = factorization(n)
        assert prod(p**e for p, e in fac) == n
        assert list(fac) == sorted(fac)
        assert all(e >= 1 for _, e in fac)


def test_factorization_vs_sympy():
    import sympy
    for n in list(range(1, 2000)) + [437, 19 * 23, 437 * 439, 10**6 + 3]:
        assert dict(factorization(n)) == sympy.factorint(n), n


def test_factorization_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorization(0)


def test_kronecker_values():
    assert kronecker(-3, 3) == 0
    assert kronecker(-4, 3) == -1  # squares mod 3 are {0, 1}
    assert kronecker(-4, 5) == 1   # 1 = -4 mod 5
    assert kronecker(-8, 3) == 1
    assert kronecker(2, 7) == 1
    assert kronecker(-1, 2) == 1
    assert kronecker(3, 2) == -1
    assert kronecker(5, 0) == 0
    assert kronecker(1, 0) == 1


def test_kronecker_vs_euler_criterion():
    for p in (3, 5, 7, 11, 13, 17, 101):
        for a in range(-30, 30):
            want = pow(a % p, (p - 1) // 2, p)
            want = {0: 0, 1: 1, p - 1: -1}[want]
            assert kronecker(a, p) == want, (a, p)


def test_kronecker_multiplicative():
    rng = random.Random(2)
    for _ in range(300):
        a, b = rng.randrange(-50, 50), rng.randrange(-50, 50)
        n, m = rng.randrange(-40, 40), rng.randrange(-40, 40)
        if not (a * b == 0 and n < 0):  # (0|-1) = 1 breaks the identity
            assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
        if not (n < 0 and m < 0 and a < 0):  # sign convention at -1 factors
            assert kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m)


def test_psi_phi():
    assert dedekind_psi(1) == 1
    assert dedekind_psi(6) == 12
    assert dedekind_psi(17) == 18
    assert dedekind_psi(25) == 30
    assert euler_phi(6) == 2
    assert euler_phi(210) == 48
    for n in range(1, 60):
        assert dedekind_psi(n) == sum(d for d in divisors(n) if is_squarefree(n // d))


def test_hall_divisors():
    assert hall_divisors(1) == [1]
    assert hall_divisors(12) == [1, 3, 4, 12]
    assert hall_divisors(6) == [1, 2, 3, 6]
    for n in (6, 12, 60, 360, 19250):
        hd = hall_divisors(n)
        assert len(hd) == 2 ** omega(n)
        assert 1 in hd and n in hd
        for m in hd:
            assert n % m == 0 and gcd(m, n // m) == 1
        # closed under m1 o m2 = m1 m2 / gcd^2 (elementary abelian 2-group)
        s = set(hd)
        for m1 in hd:
            for m2 in hd:
                assert hall_product(m1, m2) in s
            assert hall_product(m1, m1) == 1


def test_split_discriminant():
    assert split_discriminant(-4) == (-4, 1)
    assert split_discriminant(-12) == (-3, 2)
    assert split_discriminant(-100) == (-4, 5)
    assert split_discriminant(-600) == (-24, 5)
    assert split_discriminant(-27) == (-3, 3)
    with pytest.raises(ValueError):
        split_discriminant(-5)
    q = QuadOrderDisc.from_disc(-108)
    assert (q.fundamental, q.conductor) == (-3, 6)


def test_class_number_small():
    assert class_number(-3) == 1
    assert class_number(-4) == 1
    assert class_number(-24) == 2
    assert class_number(-15) == 2
    assert class_number(-23) == 3
    assert class_number(-600) == 8
    with pytest.raises(ValueError):
        class_number(-5)
    with pytest.raises(ValueError):
        class_number(4)


def test_class_number_vs_brute_force():
    # acceptance property: agreement for all -10^4 < d < 0
    for d in range(-3, -10**4, -1):
        if d % 4 in (0, 1):
            assert class_number(d) == class_number_brute(d), d

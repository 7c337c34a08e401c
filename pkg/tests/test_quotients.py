import random
from math import gcd

import pytest

from shimcurve.arith import class_number, hall_divisors, hall_product, omega
from shimcurve.quotients import (
    ALSubgroup, EmbeddingTableError, all_subgroups, curve_genus, e_k,
    fixed_orders, fixed_point_count, gonality_genus_lower_bound,
    local_embedding_number, quotient_genus, ribet_sign, star_genus,
    subgroup_span,
)


def test_e_k():
    assert e_k(6, 1, 4) == 2
    assert e_k(6, 1, 3) == 2
    assert e_k(6, 25, 3) == 0   # delta_5(3) = 0 since (-3|5) = -1
    assert e_k(6, 25, 4) == 4
    with pytest.raises(ValueError):
        e_k(6, 1, 5)


def test_curve_genus():
    assert curve_genus(6, 1) == 0
    assert curve_genus(10, 1) == 0
    assert curve_genus(6, 11) == 3
    assert curve_genus(6, 25) == 5
    assert curve_genus(15, 2) == 3
    assert curve_genus(15, 7) == 5
    assert curve_genus(51, 2) == 9
    with pytest.raises(ValueError):
        curve_genus(12, 1)  # not squarefree
    with pytest.raises(ValueError):
        curve_genus(30, 1)  # odd number of primes
    with pytest.raises(ValueError):
        curve_genus(6, 3)   # not coprime


def test_fixed_orders():
    assert fixed_orders(2) == [-4, -8]
    assert fixed_orders(3) == [-3, -12]
    assert fixed_orders(6) == [-24]
    assert fixed_orders(27) == [-27, -108]
    assert fixed_orders(25) == [-100]
    with pytest.raises(ValueError):
        fixed_orders(1)


def test_local_embedding_ramified_prime():
    assert local_embedding_number(-4, 3, "ramified") == 2
    assert local_embedding_number(-12, 2, "ramified") == 0  # 2 | conductor
    assert local_embedding_number(-8, 3, "ramified") == 0
    assert local_embedding_number(-3, 3, "ramified") == 1
    assert local_embedding_number(-100, 2, "ramified") == 1


def test_local_embedding_eichler_level_one():
    # classical 1 + (d|p) for p || N away from the conductor
    for d in (-3, -4, -8, -15, -20, -24):
        for p in (3, 5, 7, 11, 13):
            if d % p:
                from shimcurve.arith import kronecker
                assert local_embedding_number(d, p, 1) == 1 + kronecker(d, p)


def test_local_embedding_eichler_higher_level():
    # split stays 2, inert and ramified die beyond e = 1 (conductor prime to p)
    assert local_embedding_number(-4, 5, 2) == 2     # (-4|5) = 1
    assert local_embedding_number(-4, 5, 3) == 2
    assert local_embedding_number(-8, 5, 2) == 0     # inert
    assert local_embedding_number(-15, 5, 2) == 0    # 5 ramified in Q(sqrt(-15))
    assert local_embedding_number(-15, 5, 1) == 1
    # conductor valuation 1 at p = 2: split pattern 2, 4, 6, 6, ...
    assert local_embedding_number(-4 * 7, 2, 1) == 2   # d0 = -7, split at 2
    assert local_embedding_number(-4 * 7, 2, 2) == 4
    assert local_embedding_number(-4 * 7, 2, 3) == 6
    assert local_embedding_number(-4 * 7, 2, 4) == 6
    # conductor valuation 1 at p = 2: inert pattern 2, 2, 0, 0, ...
    assert local_embedding_number(-4 * 3, 2, 1) == 2   # d0 = -3, inert at 2
    assert local_embedding_number(-4 * 3, 2, 2) == 2
    assert local_embedding_number(-4 * 3, 2, 3) == 0
    with pytest.raises(EmbeddingTableError):
        local_embedding_number(-2500, 5, 1)  # conductor valuation 2 at 5


def test_fixed_point_count():
    assert fixed_point_count(6, 1, 6) == 2
    assert fixed_point_count(6, 1, 2) == 2
    assert fixed_point_count(6, 1, 3) == 2
    # hand-checked values at (6, 25); exercises level-25 embedding counts
    assert fixed_point_count(6, 25, 2) == 4
    assert fixed_point_count(6, 25, 3) == 0
    assert fixed_point_count(6, 25, 6) == 4
    assert fixed_point_count(6, 25, 25) == 4
    assert fixed_point_count(6, 25, 50) == 0
    assert fixed_point_count(6, 25, 75) == 4
    assert fixed_point_count(6, 25, 150) == 8
    with pytest.raises(ValueError):
        fixed_point_count(6, 1, 4)


def test_quotient_genus():
    assert quotient_genus(6, 1, (1, 6)) == 0
    assert quotient_genus(21, 5, subgroup_span([3, 5], 105)) == 1
    assert quotient_genus(51, 2, (1, 51)) == 2
    assert quotient_genus(15, 7, (1, 3)) == 1
    assert quotient_genus(15, 7, subgroup_span([3, 5], 105)) == 1
    assert quotient_genus(210, 11, subgroup_span([2, 5, 7, 33], 2310)) == 1
    assert quotient_genus(6, 17, subgroup_span([2, 3], 102)) == 1
    assert quotient_genus(15, 2, (1, 30)) == 1
    # all six genus-1 rows at (6, 25) from the published non-squarefree table
    for gens in ([150], [2, 3], [2, 25], [3, 25], [3, 50], [6, 50]):
        assert quotient_genus(6, 25, subgroup_span(gens, 150)) == 1, gens


def test_star_genus():
    assert star_genus(6, 25) == 0
    assert star_genus(6, 1) == 0
    assert star_genus(15, 7) == 0
    assert star_genus(51, 2) == 0


def test_fixed_point_parity():
    # involutions on a real-pointless curve pair up fixed points
    rng = random.Random(3)
    pairs = [(6, n) for n in range(1, 60) if gcd(n, 6) == 1]
    pairs += [(15, n) for n in range(1, 40) if gcd(n, 15) == 1]
    pairs += [(10, 21), (14, 9), (21, 4), (22, 5), (35, 8)]
    for D, N in pairs:
        for m in hall_divisors(D * N):
            if m > 1:
                assert fixed_point_count(D, N, m) % 2 == 0, (D, N, m)


def test_quotient_genus_tower_consistency():
    # quotient in two index-2 stages agrees with the one-shot quotient; a
    # point fixed by all of a (Z/2)^2 would have non-cyclic stabilizer, so
    # the induced involution on X/<w> has (Fix(m1) + Fix(m2))/2 fixed points
    levels = [(6, 5), (6, 35), (10, 9), (15, 4), (21, 2), (6, 25), (14, 5)]
    for D, N in levels:
        for W in all_subgroups(D * N):
            if len(W) != 4:
                continue
            g_direct = quotient_genus(D, N, W)
            for w in W:
                if w == 1:
                    continue
                gm = quotient_genus(D, N, (1, w))
                up = sum(fixed_point_count(D, N, m)
                         for m in W if m not in (1, w))
                num = 2 * gm - 2 - up // 2
                assert up % 2 == 0 and num % 4 == 0
                assert num // 4 + 1 == g_direct, (D, N, W, w)


def test_ribet_sign():
    assert ribet_sign(6, 1) == 1
    assert ribet_sign(6, 2) == -1
    assert ribet_sign(6, 6) == 1
    assert ribet_sign(210, 10) == 1
    assert ribet_sign(210, 30) == -1


def test_subgroup_enumeration():
    subs = all_subgroups(6)
    assert len(subs) == 5
    assert (1,) in subs and (1, 2, 3, 6) in subs
    assert len(all_subgroups(30)) == 16
    assert len(all_subgroups(210)) == 67
    assert len(all_subgroups(2310)) == 374
    assert len(all_subgroups(30030)) == 2825
    for s in all_subgroups(60):
        ALSubgroup(s)  # validates closure, involutions, 2-power order


def test_alsubgroup_validation():
    with pytest.raises(ValueError):
        ALSubgroup((1, 2, 3))  # not closed
    with pytest.raises(ValueError):
        ALSubgroup((2, 6))  # missing identity
    with pytest.raises(ValueError):
        subgroup_span([4], 6)


def test_gonality_bound():
    assert gonality_genus_lower_bound(19226701, 1) > 2
    assert gonality_genus_lower_bound(6, 1) <= 0
    assert gonality_genus_lower_bound(10**6, 1) < gonality_genus_lower_bound(10**7, 1)
    # certificate already exceeds 2 at the published inclusive scan bound,
    # so scanning DN <= 19226700 covers every level it could ever rule in
    assert gonality_genus_lower_bound(18 * 10**6, 1) < 2 < gonality_genus_lower_bound(19226700, 1)

"""Elementary number theory shared by every other module.

Everything here is exact integer arithmetic: factorization by trial
division (inputs in scope stay far below 2*10^7 after sieving), Kronecker
symbols, Dedekind psi, Hall divisors, and class numbers of imaginary
quadratic orders by reduced-form enumeration.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd, isqrt
import threading

__all__ = [
    "factorization", "omega", "is_squarefree", "divisors",
    "kronecker", "euler_phi", "dedekind_psi", "hall_divisors",
    "hall_product", "QuadOrderDisc", "split_discriminant",
    "class_number", "class_number_brute",
]


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)
# trial-divisor increments coprime to 30, starting from 17
_WHEEL = (2, 4, 6, 2, 6, 4, 2, 4)


@lru_cache(maxsize=1 << 18)
def factorization(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as a sorted tuple of (p, e) pairs."""
    if n < 1:
        raise ValueError(f"factorization needs n >= 1, got {n}")
    out = []
    for p in _SMALL_PRIMES:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p, i = 17, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) & 7
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorization(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorization(n))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    ds = [1]
    for p, e in factorization(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out 2's of n; (a|2) is 0, 1, -1 for a even, a = +-1 (8), a = +-3 (8)
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol on odd n by quadratic reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def euler_phi(n: int) -> int:
    return reduce(lambda v, pe: v // pe[0] * (pe[0] - 1), factorization(n), n)


def dedekind_psi(n: int) -> int:
    """psi(n) = n * prod_{p | n} (1 + 1/p); the index of Gamma_0(n)."""
    return reduce(lambda v, pe: v // pe[0] * (pe[0] + 1), factorization(n), n)


def hall_divisors(n: int) -> list[int]:
    """Divisors m of n with gcd(m, n/m) = 1, sorted ascending."""
    parts = [p**e for p, e in factorization(n)]
    out = [1]
    for q in parts:
        out += [d * q for d in out]
    return sorted(out)


def hall_product(m1: int, m2: int) -> int:
    """Group law on Hall divisors: m1 * m2 / gcd(m1, m2)^2."""
    g = gcd(m1, m2)
    return m1 * m2 // (g * g)


def split_discriminant(d: int) -> tuple[int, int]:
    """Write d = f^2 * d0 with d0 a fundamental discriminant; return (d0, f)."""
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative quadratic discriminant")
    f = 1
    for p, e in factorization(-d):
        f *= p ** (e // 2)
    d0 = d // (f * f)
    if d0 % 4 not in (0, 1):
        # squarefree part is 2 or 3 mod 4, so conductor loses one factor of 2
        f //= 2
        d0 *= 4
    return d0, f


@dataclass(frozen=True)
class QuadOrderDisc:
    """Discriminant of an imaginary quadratic order, split as f^2 * d0."""

    disc: int
    fundamental: int
    conductor: int

    @classmethod
    def from_disc(cls, d: int) -> "QuadOrderDisc":
        d0, f = split_discriminant(d)
        return cls(d, d0, f)

    def __post_init__(self):
        if self.disc >= 0:
            raise ValueError("order discriminant must be negative")
        if self.conductor**2 * self.fundamental != self.disc:
            raise ValueError("disc != f^2 * fundamental")


_class_number_cache: dict[int, int] = {}
_class_number_lock = threading.Lock()


def class_number(d: int) -> int:
    """Class number h(d) of the imaginary quadratic order of discriminant d.

    Counts primitive reduced forms (a, b, c), |b| <= a <= c, b >= 0 when
    |b| = a or a = c, of discriminant b^2 - 4ac = d.  Cached; safe to call
    from several threads (worst case a value is computed twice).
    """
    h = _class_number_cache.get(d)
    if h is not None:
        return h
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative quadratic discriminant")
    h = 0
    b = d & 1
    bmax = isqrt(-d // 3)
    while b <= bmax:
        t = (b * b - d) // 4
        a = max(b, 1)
        while a * a <= t:
            if t % a == 0:
                c = t // a
                if gcd(gcd(a, b), c) == 1:
                    # b = 0, a = b and a = c are the ambiguous forms,
                    # counted once; other (a, b, c) pair with (a, -b, c)
                    h += 1 if (b == 0 or b == a or a == c) else 2
            a += 1
        b += 2
    with _class_number_lock:
        _class_number_cache[d] = h
    return h


def class_number_warm(values: dict[int, int]) -> None:
    """Pre-warm the class-number cache, e.g. from a batch computation."""
    with _class_number_lock:
        _class_number_cache.update(values)


def class_number_brute(d: int) -> int:
    """Independent reduced-form count, looping a then b (test oracle)."""
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative quadratic discriminant")
    h = 0
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, b), c) == 1:
                h += 1
    return h

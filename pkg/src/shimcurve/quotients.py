"""Genus and fixed-point arithmetic for X_0^D(N) and its Atkin-Lehner quotients.

The genus of X_0^D(N) comes from the standard formula (Euler phi, Dedekind
psi and the elliptic-point terms e_3, e_4).  Fixed points of w_m are CM
points by at most two imaginary quadratic orders (Ogg), counted by
h(R) * prod_p nu_p(R) over primes p | DN/m, where nu_p is a local optimal
embedding number.  Riemann-Hurwitz then gives the genus of X_0^D(N)/W for
any subgroup W of the Atkin-Lehner group W_0(D,N) = (Z/2)^omega(DN).

Local embedding numbers for the Eichler order of level p^e in M_2(Q_p) are
obtained by counting K^*-orbits of ordered length-e paths on the
Bruhat-Tits tree whose endpoint distances to the fixed locus of K^* realize
the conductor valuation; see Ogg's and Hijikata's optimal embedding counts.
Only conductor valuation c <= 1 is ever reachable from Hall divisors
(p | DN/m forces p coprime to m, so p^2 never divides the conductor);
larger c raises EmbeddingTableError rather than guessing.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .arith import (
    class_number, dedekind_psi, euler_phi, factorization, hall_divisors,
    hall_product, is_squarefree, kronecker, omega, split_discriminant,
)

__all__ = [
    "ShimuraLevel", "ALSubgroup", "QuotientRecord", "EmbeddingTableError",
    "e_k", "curve_genus", "fixed_orders", "local_embedding_number",
    "fixed_point_count", "quotient_genus", "ribet_sign", "subgroup_span",
    "all_subgroups", "star_genus", "gonality_genus_lower_bound",
]


class EmbeddingTableError(ValueError):
    """An optimal-embedding count outside the validated table was requested."""


@dataclass(frozen=True)
class ShimuraLevel:
    """Level data (D, N): D an indefinite quaternion discriminant, gcd(D,N)=1."""

    D: int
    N: int

    def __post_init__(self):
        validate_level(self.D, self.N)


def validate_level(D: int, N: int) -> None:
    if D <= 1 or not is_squarefree(D) or omega(D) % 2:
        raise ValueError(f"D={D} is not an indefinite quaternion discriminant")
    if N < 1 or gcd(D, N) != 1:
        raise ValueError(f"N={N} must be positive and coprime to D={D}")


@dataclass(frozen=True)
class ALSubgroup:
    """Subgroup of W_0(D,N), stored as the full sorted tuple of Hall divisors."""

    elements: tuple[int, ...]

    @classmethod
    def spanned_by(cls, gens, DN: int) -> "ALSubgroup":
        return cls(subgroup_span(gens, DN))

    def __post_init__(self):
        elts = self.elements
        if 1 not in elts or list(elts) != sorted(set(elts)):
            raise ValueError("subgroup must be a sorted tuple containing 1")
        s = set(elts)
        for m1 in elts:
            if hall_product(m1, m1) != 1:
                raise ValueError(f"{m1} is not an involution")
            for m2 in elts:
                if hall_product(m1, m2) not in s:
                    raise ValueError("not closed under the Hall product")
        if len(elts) & (len(elts) - 1):
            raise ValueError("order must be a power of 2")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, m):
        return m in self.elements


def subgroup_span(gens, DN: int) -> tuple[int, ...]:
    """Closure of the given Hall divisors of DN under the Hall product."""
    hall = set(hall_divisors(DN))
    span = {1}
    for g in gens:
        if g not in hall:
            raise ValueError(f"{g} is not a Hall divisor of {DN}")
        span |= {hall_product(g, x) for x in span}
    return tuple(sorted(span))


def all_subgroups(DN: int) -> list[tuple[int, ...]]:
    """Every subgroup of W_0 = (Z/2)^omega(DN), each as its full element tuple.

    Enumerated via reduced row-echelon bases over GF(2) on the prime
    coordinates of DN: pivot columns are chosen first and free entries may
    only sit right of their pivot and outside all pivot columns, so each
    subspace is produced exactly once.
    """
    from itertools import combinations

    prime_powers = [p**e for p, e in factorization(DN)]
    r = len(prime_powers)

    def vec_to_m(v):
        m = 1
        for i in range(r):
            if v >> i & 1:
                m *= prime_powers[i]
        return m

    out = []
    for k in range(r + 1):
        for pivots in combinations(range(r), k):
            pset = set(pivots)
            free = [[c for c in range(p + 1, r) if c not in pset]
                    for p in pivots]

            def fill(i, rows):
                if i == k:
                    span = {0}
                    for v in rows:
                        span |= {v ^ x for x in span}
                    out.append(tuple(sorted(vec_to_m(v) for v in span)))
                    return
                for mask in range(1 << len(free[i])):
                    v = 1 << pivots[i]
                    for t, c in enumerate(free[i]):
                        if mask >> t & 1:
                            v |= 1 << c
                    fill(i + 1, rows + [v])

            fill(0, [])
    return out


def e_k(D: int, N: int, k: int) -> int:
    """Elliptic-point term e_k(D, N) of the genus formula, k in {3, 4}."""
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    validate_level(D, N)
    val = 1
    for p, _ in factorization(D):
        val *= 1 - kronecker(-k, p)
    for ell, e in factorization(N):
        s = kronecker(-k, ell)
        if e == 1:
            val *= 1 + s
        else:
            val *= 2 if s == 1 else 0
    return val


def curve_genus(D: int, N: int) -> int:
    """Genus of X_0^D(N)."""
    validate_level(D, N)
    g = Fraction(euler_phi(D) * dedekind_psi(N), 12) \
        - Fraction(e_k(D, N, 4), 4) - Fraction(e_k(D, N, 3), 3) + 1
    if g.denominator != 1 or g < 0:
        raise ArithmeticError(f"non-integral genus for ({D}, {N}): {g}")
    return int(g)


def fixed_orders(m: int) -> list[int]:
    """Discriminants of the CM orders whose points w_m fixes (Ogg)."""
    if m <= 1:
        raise ValueError("m must exceed 1")
    if m == 2:
        return [-4, -8]
    if m % 4 == 3:
        return [-m, -4 * m]
    return [-4 * m]


def _orbits_same_component(p: int, c: int, e: int, j0_count):
    """Ordered-path orbit count with both endpoints over one branch point.

    Endpoints at distances a, b <= c from the fixed locus with max = c,
    diverging after j common steps, giving path length e = a + b - 2j.
    j0_count(mn) is the orbit count at immediate divergence (j = 0), the
    only place the three splitting types differ.
    """
    total = 0
    for a in range(c + 1):
        for b in range(c + 1):
            if max(a, b) != c:
                continue
            t = a + b - e
            if t < 0 or t % 2:
                continue
            j = t // 2
            mn = min(a, b)
            if j > mn:
                continue
            if j == mn:
                total += 1
            elif j == 0:
                total += j0_count(mn)
            else:
                total += (p - 1) * p ** (mn - j - 1)
    return total


def _nu_split(p: int, c: int, e: int) -> int:
    if c == 0:
        return 2
    total = 0
    # endpoints hanging over two distinct apartment vertices (2 orientations)
    for a in range(c + 1):
        for b in range(c + 1):
            if max(a, b) == c and a + b <= e - 1:
                total += 2 * (1 if min(a, b) == 0 else
                              (p - 1) * p ** (min(a, b) - 1))
    # both endpoints over one apartment vertex; at j = 0 the two branches
    # use distinct off-apartment directions, of which there are p - 1
    total += _orbits_same_component(p, c, e, lambda mn: (p - 2) * p ** (mn - 1))
    return total


def _nu_inert(p: int, c: int, e: int) -> int:
    if c == 0:
        return 0
    # single fixed vertex with p + 1 directions: j = 0 leaves p choices
    return _orbits_same_component(p, c, e, lambda mn: p**mn)


def _nu_ramified(p: int, c: int, e: int) -> int:
    if c == 0:
        return 1 if e == 1 else 0
    total = _orbits_same_component(p, c, e, lambda mn: (p - 1) * p ** (mn - 1))
    # endpoints on opposite sides of the fixed edge
    for a in range(c + 1):
        for b in range(c + 1):
            if max(a, b) == c and a + b + 1 == e:
                total += p ** min(a, b)
    return total


def local_embedding_number(d: int, p: int, level) -> int:
    """Optimal embeddings nu_p of the order of discriminant d, locally at p.

    level is the string "ramified" when p | D (maximal order in the local
    division algebra), or the exponent e >= 1 when p^e || N (Eichler order
    of level p^e in M_2(Q_p)).
    """
    d0, f = split_discriminant(d)
    c = 0
    while f % p == 0:
        f //= p
        c += 1
    if level == "ramified":
        return 0 if c else 1 - kronecker(d0, p)
    e = int(level)
    if e < 1:
        raise ValueError("Eichler level exponent must be >= 1")
    if c > 1:
        raise EmbeddingTableError(
            f"embedding table incomplete: p={p}, e={e}, conductor valuation {c}")
    s = kronecker(d0, p)
    if s == 1:
        return _nu_split(p, c, e)
    if s == -1:
        return _nu_inert(p, c, e)
    return _nu_ramified(p, c, e)


def fixed_point_count(D: int, N: int, m: int) -> int:
    """Number of fixed points of w_m on X_0^D(N)."""
    validate_level(D, N)
    if m <= 1 or D * N % m or gcd(m, D * N // m) != 1:
        raise ValueError(f"m={m} must be a Hall divisor of DN exceeding 1")
    total = 0
    for d in fixed_orders(m):
        term = class_number(d)
        for p, e in factorization(D * N // m):
            if term == 0:
                break
            term *= local_embedding_number(d, p, "ramified" if D % p == 0 else e)
        total += term
    return total


def quotient_genus(D: int, N: int, W) -> int:
    """Genus of X_0^D(N)/W by Riemann-Hurwitz over the 2-group W."""
    elements = tuple(W.elements if isinstance(W, ALSubgroup) else W)
    if 1 not in elements:
        raise ValueError("W must contain 1")
    g = curve_genus(D, N)
    ram = sum(fixed_point_count(D, N, m) for m in elements if m != 1)
    num = 2 * g - 2 - ram
    den = 2 * len(elements)
    if num % den:
        raise ArithmeticError(
            f"Riemann-Hurwitz gives non-integral genus for ({D},{N},{elements})")
    gq = num // den + 1
    if gq < 0:
        raise ArithmeticError(f"negative quotient genus for ({D},{N},{elements})")
    return gq


def star_genus(D: int, N: int) -> int:
    """Genus of X_0^D(N)* = X_0^D(N)/W_0(D,N)."""
    return quotient_genus(D, N, hall_divisors(D * N))


def ribet_sign(D: int, m: int) -> int:
    """Sign (-1)^omega(gcd(D, m)) of w_m transported to the D-new modular side."""
    return -1 if omega(gcd(D, m)) % 2 else 1


@dataclass(frozen=True)
class QuotientRecord:
    """One row of the enumeration: a quotient X_0^D(N)/W and its genus."""

    D: int
    N: int
    W: tuple[int, ...]
    genus: int
    annotations: dict = field(default_factory=dict, compare=False)

    def sort_key(self):
        return (self.D, self.N, self.W)

    def as_dict(self):
        return {"D": self.D, "N": self.N, "W": list(self.W), "genus": self.genus,
                **self.annotations}


# -- gonality prefilter certificate ----------------------------------------

def _round_down(x: Fraction, scale: int = 10**24) -> Fraction:
    return Fraction(x.numerator * scale // x.denominator, scale)


def _round_up(x: Fraction, scale: int = 10**24) -> Fraction:
    return Fraction(-((-x.numerator) * scale // x.denominator), scale)


def _ln_bounds(x: Fraction, terms: int = 24) -> tuple[Fraction, Fraction]:
    """Certified rational bounds lo <= ln(x) <= hi for x > 1."""
    if x <= 1:
        raise ValueError("need x > 1")
    # range-reduce by halving: ln x = k ln 2 + ln r with r in [1, 2)
    LN2_LO = Fraction(693147180559945309, 10**18)
    LN2_HI = Fraction(693147180559945310, 10**18)
    k = 0
    while x >= 2:
        x /= 2
        k += 1
    if x == 1:
        return k * LN2_LO, k * LN2_HI
    t = _round_down((x - 1) / (x + 1))
    t_hi = _round_up((x - 1) / (x + 1))
    # ln r = 2 atanh t; partial sums underestimate, tail <= geometric bound
    s = Fraction(0)
    tpow = t_hi
    t2 = t_hi * t_hi
    for i in range(terms):
        s += tpow / (2 * i + 1)
        tpow = _round_up(tpow * t2)
    hi = 2 * s + 2 * tpow / ((2 * terms + 1) * (1 - t2))
    s = Fraction(0)
    tpow = t
    t2 = t * t
    for i in range(terms):
        s += _round_down(tpow / (2 * i + 1))
        tpow = _round_down(tpow * t2)
    lo = 2 * s
    return k * LN2_LO + _round_down(lo), k * LN2_HI + _round_up(hi)


# e^gamma with gamma the Euler-Mascheroni constant
_EXP_GAMMA_HI = Fraction(17810724179901980, 10**16)


def gonality_genus_lower_bound(D: int, N: int) -> Fraction:
    """Certified rational lower bound for the gonality of X_0^D(N)*.

    Combines Abramovich's linear gonality-genus bound (with the improved
    975/8192 constant) with an explicit genus lower bound in DN; the value
    is only useful as a prefilter certificate: once it exceeds 2 the star
    quotient cannot have genus <= 2.
    """
    DN = D * N
    if DN < 3:
        return Fraction(-1)
    _, lnhi = _ln_bounds(Fraction(DN))
    _, lnlnhi = _ln_bounds(lnhi)
    # 3 / loglog 6: certified upper bound via a lower bound on loglog 6
    lnlo6, _ = _ln_bounds(Fraction(6))
    lnlnlo6, _ = _ln_bounds(lnlo6)
    c_hi = 3 / lnlnlo6
    # sqrt lower bound good to 1e-6 relative; plain isqrt is too lossy at
    # the boundary the prefilter is used for
    sqrt_lo = Fraction(isqrt(DN * 10**12), 10**6)
    genus_term_lo = sqrt_lo / 12 / (_EXP_GAMMA_HI * lnlnhi + c_hi)
    return Fraction(975, 16384) * (genus_term_lo - Fraction(7, 3))

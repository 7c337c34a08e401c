"""Definite quaternion arithmetic: Eichler orders, ideal classes, units.

Everything is exact: elements are integer 4-vectors over a common
denominator in the basis 1, i, j, k = ij with i^2 = a, j^2 = b (a, b < 0),
lattices are HNF-canonicalized integer matrices over a denominator, and
short vectors come from exact Fincke-Pohst on the reduced-norm Gram.

The completeness certificate for every computed class set is the Eichler
mass formula  sum_i 1/#(O_i^x/{+-1}) = phi(D) psi(N) / 12,  asserted
exactly; two-sided ideals certify themselves through P^2 = q O.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import dedekind_psi, euler_phi, factorization, is_squarefree, kronecker, omega
from ._linalg import (
    fp_enumerate, hnf, in_lattice, lattice_canon, mat_det4, mat_inv_scaled,
    solve_left_coords,
)

__all__ = [
    "QuatAlgebra", "Lattice", "hilbert_symbol", "ramified_primes", "build_algebra",
    "standard_order", "maximal_order", "eichler_order", "two_sided_prime",
    "al_ideal", "p_neighbors", "ideal_isomorphic", "ClassSet", "ideal_classes", "reduce_ideal", "unit_elements",
    "unit_half_order",
]


# ---------------------------------------------------------------------------
# Hilbert symbols

def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega2(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_symbol(a: int, b: int, p) -> int:
    """Hilbert symbol (a, b)_p for p prime or the string "inf"."""
    if a == 0 or b == 0:
        raise ValueError("arguments must be nonzero")
    if p == "inf":
        return -1 if a < 0 and b < 0 else 1
    al = 0
    while a % p == 0:
        a //= p
        al += 1
    be = 0
    while b % p == 0:
        b //= p
        be += 1
    if p == 2:
        e = _eps(a) * _eps(b) + al * _omega2(b) + be * _omega2(a)
        return -1 if e % 2 else 1
    s = 1
    if al % 2 and be % 2 and (p - 1) // 2 % 2:
        s = -s
    if be % 2:
        s *= kronecker(a, p)
    if al % 2:
        s *= kronecker(b, p)
    return s


def ramified_primes(a: int, b: int) -> list[int]:
    """Finite primes where the quaternion algebra (a, b | Q) ramifies."""
    ps = {2}
    for x in (a, b):
        for q, _ in factorization(abs(x)):
            ps.add(q)
    return sorted(q for q in ps if hilbert_symbol(a, b, q) == -1)


# ---------------------------------------------------------------------------
# the algebra

@dataclass(frozen=True)
class QuatAlgebra:
    """Definite rational quaternion algebra with i^2 = a, j^2 = b, ij = -ji."""

    a: int
    b: int
    disc: int

    def mul(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * (x2 * y3 - x3 * y2),
            x0 * y2 + x2 * y0 + a * (x1 * y3 - x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    @staticmethod
    def conj(x):
        return (x[0], -x[1], -x[2], -x[3])

    @staticmethod
    def trd(x):
        return 2 * x[0]

    def nrd(self, x):
        a, b = self.a, self.b
        return x[0] ** 2 - a * x[1] ** 2 - b * x[2] ** 2 + a * b * x[3] ** 2


def build_algebra(disc: int, smooth_bound: int = 47) -> QuatAlgebra:
    """Definite algebra of the given squarefree discriminant (odd #primes).

    Structure constants (a, b) are the lexicographically first negative
    pair, scanning |a| then |b|, whose Hilbert symbols are -1 exactly at
    the primes of disc (and infinity).  Auxiliary prime factors are kept
    below smooth_bound so the maximal-order saturation stays cheap.
    """
    fac = factorization(disc)
    if any(e > 1 for _, e in fac) or len(fac) % 2 == 0:
        raise ValueError(f"{disc} is not a definite quaternion discriminant")
    target = [p for p, _ in fac]

    def smooth_ok(x):
        return all(q <= smooth_bound or disc % q == 0
                   for q, _ in factorization(abs(x)))

    for abs_a in range(1, 256):
        if not smooth_ok(abs_a):
            continue
        for abs_b in range(1, max(8 * disc, 512)):
            if not smooth_ok(abs_b):
                continue
            if ramified_primes(-abs_a, -abs_b) == target:
                return QuatAlgebra(-abs_a, -abs_b, disc)
    raise ArithmeticError(f"no structure constants found for disc {disc}")


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """Full rank-4 lattice in a quaternion algebra: rows(basis)/den, HNF."""

    alg: QuatAlgebra
    basis: tuple[tuple[int, ...], ...]
    den: int

    @classmethod
    def from_rows(cls, alg, rows, den=1):
        m, d = lattice_canon([list(r) for r in rows], den)
        return cls(alg, m, d)

    def elements(self):
        return [(row, self.den) for row in self.basis]

    def scale(self, c: Fraction) -> "Lattice":
        c = Fraction(c)
        rows = [[v * c.numerator for v in r] for r in self.basis]
        return Lattice.from_rows(self.alg, rows, self.den * c.denominator)

    def mul(self, other: "Lattice") -> "Lattice":
        alg = self.alg
        rows = [list(alg.mul(x, y)) for x in self.basis for y in other.basis]
        return Lattice.from_rows(alg, rows, self.den * other.den)

    def conjugate(self) -> "Lattice":
        rows = [list(self.alg.conj(r)) for r in self.basis]
        return Lattice.from_rows(self.alg, rows, self.den)

    def mul_elem(self, vec, vden=1) -> "Lattice":
        rows = [list(self.alg.mul(r, vec)) for r in self.basis]
        return Lattice.from_rows(self.alg, rows, self.den * vden)

    def elem_mul(self, vec, vden=1) -> "Lattice":
        rows = [list(self.alg.mul(vec, r)) for r in self.basis]
        return Lattice.from_rows(self.alg, rows, self.den * vden)

    def add(self, other: "Lattice") -> "Lattice":
        d1, d2 = self.den, other.den
        rows = [[v * d2 for v in r] for r in self.basis]
        rows += [[v * d1 for v in r] for r in other.basis]
        return Lattice.from_rows(self.alg, rows, d1 * d2)

    def contains(self, vec, vden=1) -> bool:
        return in_lattice((self.basis, self.den), vec, vden)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(r, other.den) for r in other.basis)

    def gram_nrd_int(self):
        """Integer matrix T with T[i][j] = trd(b_i conj(b_j)); the reduced
        norm of sum c_i b_i / den equals (c T c^T) / (2 den^2)."""
        alg = self.alg
        rows = self.basis
        return [[alg.trd(alg.mul(rows[i], alg.conj(rows[j])))
                 for j in range(4)] for i in range(4)]

    def nrd_content(self) -> Fraction:
        g = 0
        alg = self.alg
        for i, r in enumerate(self.basis):
            g = gcd(g, alg.nrd(r))
            for s in self.basis[i + 1:]:
                g = gcd(g, alg.trd(alg.mul(r, alg.conj(s))))
        return Fraction(g, self.den ** 2)

    def reduced_discriminant(self) -> Fraction:
        det = mat_det4(self.gram_nrd_int())
        val = Fraction(abs(det), self.den ** 8)
        # disc = discrd^2
        num, den = val.numerator, val.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn != num or rd * rd != den:
            raise ArithmeticError("trace-form determinant is not a square")
        return Fraction(rn, rd)

    def is_order(self) -> bool:
        if not self.contains((1, 0, 0, 0)):
            return False
        alg = self.alg
        d2 = self.den * self.den
        for x in self.basis:
            for y in self.basis:
                if not self.contains(alg.mul(x, y), d2):
                    return False
        return True

    def right_order(self) -> "Lattice":
        # O_R(I) = (1/nrd I) conj(I) I, valid for locally principal lattices
        return self.conjugate().mul(self).scale(1 / self.nrd_content())

    def left_order(self) -> "Lattice":
        return self.mul(self.conjugate()).scale(1 / self.nrd_content())

    def dual(self) -> "Lattice":
        """Dual lattice under the pairing (x, y) -> trd(x conj(y))."""
        T = self.gram_nrd_int()  # = B G0 B^T over den^2 with G0 the unit Gram
        inv, det = mat_inv_scaled(T)
        # dual basis rows: den^2 * T^{-1} B / den = den * inv * B / det
        rows = [[self.den * sum(inv[i][k] * self.basis[k][j] for k in range(4))
                 for j in range(4)] for i in range(4)]
        return Lattice.from_rows(self.alg, rows, det) if det > 0 else \
            Lattice.from_rows(self.alg, [[-v for v in r] for r in rows], -det)

    def intersect(self, other: "Lattice") -> "Lattice":
        return self.dual().add(other.dual()).dual()

    def one_coords(self):
        c = solve_left_coords([list(r) for r in self.basis], self.den,
                              (1, 0, 0, 0), 1)
        if c is None:
            raise ValueError("lattice does not contain 1")
        return c

    def coords_to_elem(self, coords):
        v = [0, 0, 0, 0]
        for c, row in zip(coords, self.basis):
            for t in range(4):
                v[t] += c * row[t]
        return tuple(v)

    def to_json(self) -> str:
        return json.dumps({"a": self.alg.a, "b": self.alg.b,
                           "disc": self.alg.disc,
                           "basis": [list(r) for r in self.basis],
                           "den": self.den})


def standard_order(alg: QuatAlgebra) -> Lattice:
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    return Lattice.from_rows(alg, rows)


def _superorder_at(order: Lattice, q: int) -> Lattice | None:
    """An order containing `order` with index q, or None."""
    alg = order.alg
    den = order.den
    # candidates x = v/q with v a nonzero F_q-combination of the basis,
    # normalized so the first nonzero coordinate is 1
    coords_list = []
    for lead in range(4):
        base = [0] * lead + [1]
        tail = 4 - lead - 1
        for rest in range(q ** tail):
            c = list(base)
            r = rest
            for _ in range(tail):
                c.append(r % q)
                r //= q
            coords_list.append(c)
    for c in coords_list:
        v = order.coords_to_elem(c)
        # integrality prefilter: trd(x), nrd(x), trd(x conj(b_i)) integral
        if (alg.trd(v)) % (den * q):
            continue
        if alg.nrd(v) % (den * den * q * q):
            continue
        ok = True
        for bvec in order.basis:
            if alg.trd(alg.mul(v, alg.conj(bvec))) % (den * den * q):
                ok = False
                break
        if not ok:
            continue
        rows = [[t * q for t in r] for r in order.basis] + [list(v)]
        cand = Lattice.from_rows(alg, rows, den * q)
        if cand.is_order():
            return cand
    return None


def maximal_order(alg: QuatAlgebra) -> Lattice:
    """A maximal order, by saturating the standard order prime by prime."""
    order = standard_order(alg)
    discrd = order.reduced_discriminant()
    assert discrd.denominator == 1
    ratio = int(discrd) // alg.disc
    if int(discrd) % alg.disc:
        raise ArithmeticError("standard order discriminant not divisible by disc")
    while ratio > 1:
        q = factorization(ratio)[0][0]
        bigger = _superorder_at(order, q)
        if bigger is None:
            raise ArithmeticError(f"saturation stuck at q={q} for {alg}")
        order = bigger
        ratio //= q
    assert order.reduced_discriminant() == alg.disc
    return order


# ---------------------------------------------------------------------------
# Eichler orders

def _idempotent_mod(order: Lattice, p: int):
    """Coordinates (mod p) of a nontrivial idempotent of order/p*order.

    Requires order to be split at p (p coprime to its discriminant)."""
    one = order.one_coords()
    alg = order.alg
    den = order.den

    def coords_iter():
        if p == 2:
            for mask in range(1, 16):
                yield [mask >> t & 1 for t in range(4)]
        else:
            # deterministic sweep; char polys split for ~half the elements
            for c0 in range(p):
                for c1 in range(p):
                    for c2 in range(p):
                        for c3 in range(p):
                            yield [c0, c1, c2, c3]

    for c in coords_iter():
        v = order.coords_to_elem(c)
        t = alg.trd(v)
        n = alg.nrd(v)
        if t % den or n % (den * den):
            raise ArithmeticError("order basis is not integral")
        t //= den
        n //= den * den
        disc = (t * t - 4 * n) % p
        if disc == 0:
            continue
        if p == 2:
            # x^2 - tx + n with t odd, n even: roots 0, 1 mod 2
            if t % 2 == 1 and n % 2 == 0:
                lam1, lam2 = 1, 0
            else:
                continue
        else:
            r = _sqrt_mod(disc, p)
            if r is None:
                continue
            inv2 = pow(2, p - 2, p)
            lam1 = (t + r) * inv2 % p
            lam2 = (t - r) * inv2 % p
        dinv = pow((lam1 - lam2) % p, p - 2, p)
        e = [(ci - lam2 * oi) * dinv % p for ci, oi in zip(c, one)]
        return e
    raise ArithmeticError(f"no split element found mod {p}")


def _sqrt_mod(a: int, p: int):
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
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


def _lift_idempotent(order: Lattice, e_coords, p: int, e_exp: int):
    """Newton-lift an idempotent mod p to one mod p^e_exp (coordinates)."""
    alg = order.alg
    den = order.den
    mod = p
    cur = list(e_coords)
    while mod < p ** e_exp:
        mod = min(mod * mod, p ** e_exp)
        v = order.coords_to_elem(cur)
        v2 = alg.mul(v, v)
        v3 = alg.mul(v2, v)
        # 3 e^2 - 2 e^3 in coordinates
        c2 = solve_left_coords([list(r) for r in order.basis], order.den,
                               v2, den * den)
        c3 = solve_left_coords([list(r) for r in order.basis], order.den,
                               v3, den * den * den)
        cur = [(3 * a2 - 2 * a3) % mod for a2, a3 in zip(c2, c3)]
    return cur


def eichler_order(max_order: Lattice, N: int) -> Lattice:
    """Eichler order of level N inside a maximal order, gcd(N, disc) = 1."""
    alg = max_order.alg
    if N < 1 or gcd(N, alg.disc) != 1:
        raise ValueError("level must be positive and coprime to the discriminant")
    order = max_order
    for p, e in factorization(N):
        e_coords = _idempotent_mod(order, p)
        if e > 1:
            e_coords = _lift_idempotent(order, e_coords, p, e)
        evec = order.coords_to_elem(e_coords)
        pe = p ** e
        rows = [list(alg.mul(r, evec)) for r in order.basis]
        rows += [[v * pe * order.den for v in r] for r in order.basis]
        L = Lattice.from_rows(alg, rows, order.den ** 2)
        # L is principal, O g with g of elementary divisors (1, p^e); the
        # level-p^e Eichler order is the stabilizer of the pair of maximal
        # orders O and O_R(L) = g^-1 O g
        new = order.intersect(L.right_order())
        if not new.is_order():
            raise ArithmeticError(f"Eichler step at {p}^{e} failed")
        order = new
    if order.reduced_discriminant() != alg.disc * N:
        raise ArithmeticError("Eichler order has wrong reduced discriminant")
    return order


# ---------------------------------------------------------------------------
# two-sided ideals and the Atkin-Lehner action on classes

def two_sided_prime(order: Lattice, q: int) -> Lattice:
    """The two-sided prime P above q | disc(order) * level, with P^2 = qO."""
    alg = order.alg
    # radical of order/q*order = kernel of the mod-q pairing trd(xy)
    T = [[alg.trd(alg.mul(x, y)) for y in order.basis] for x in order.basis]
    d2 = order.den * order.den
    Tq = [[(v // d2) % q for v in row] for row in T]
    if any(v % d2 for row in T for v in row):
        raise ArithmeticError("non-integral trace pairing on an order")
    kern = _kernel_mod(Tq, q)
    rows = [[v * q for v in r] for r in order.basis]
    for c in kern:
        rows.append(list(order.coords_to_elem(c)))
    P = Lattice.from_rows(alg, rows, order.den)
    qO = Lattice.from_rows(alg, [[v * q for v in r] for r in order.basis],
                           order.den)
    if P.mul(P) != qO:
        raise ArithmeticError(f"two-sided prime above {q}: P^2 != qO")
    if order.mul(P) != P or P.mul(order) != P:
        raise ArithmeticError(f"ideal above {q} is not two-sided")
    return P


def _kernel_mod(mat, q):
    """Basis of the kernel of a 4x4 matrix over F_q (row vectors v: vM=0)."""
    m = [[mat[i][j] % q for j in range(4)] for i in range(4)]
    idn = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    # row-reduce [m | I]
    rank = 0
    for col in range(4):
        piv = None
        for r in range(rank, 4):
            if m[r][col] % q:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        idn[rank], idn[piv] = idn[piv], idn[rank]
        inv = pow(m[rank][col], q - 2, q) if q > 2 else m[rank][col]
        m[rank] = [v * inv % q for v in m[rank]]
        idn[rank] = [v * inv % q for v in idn[rank]]
        for r in range(4):
            if r != rank and m[r][col] % q:
                f = m[r][col]
                m[r] = [(a - f * b) % q for a, b in zip(m[r], m[rank])]
                idn[r] = [(a - f * b) % q for a, b in zip(idn[r], idn[rank])]
        rank += 1
    return [idn[r] for r in range(rank, 4)]


def al_ideal(order: Lattice, m: int) -> Lattice:
    """Two-sided ideal b with b^2 = m * order, m a Hall divisor of disc*level."""
    level = int(order.reduced_discriminant())
    if m == 1:
        return order
    if level % m or gcd(m, level // m) != 1 or not is_squarefree(m):
        raise ValueError(f"m={m} must be a squarefree Hall divisor of {level}")
    b = order
    for q, _ in factorization(m):
        b = b.mul(two_sided_prime(order, q))
    mO = Lattice.from_rows(order.alg,
                           [[v * m for v in r] for r in order.basis], order.den)
    if b.mul(b) != mO:
        raise ArithmeticError(f"al ideal for m={m}: b^2 != mO")
    return b


# ---------------------------------------------------------------------------
# neighbors, isomorphism testing, ideal classes

def p_neighbors(ideal: Lattice, p: int) -> list[Lattice]:
    """The p+1 left-ideal sublattices of index p^2 (Bruhat-Tits neighbors)."""
    R = ideal.right_order()
    if int(R.reduced_discriminant()) % p == 0:
        raise ValueError(f"{p} divides the discriminant of the right order")
    alg = ideal.alg
    pI_rows = [[v * p for v in r] for r in ideal.basis]
    seen = {}
    for lead in range(4):
        for rest in range(p ** (4 - lead - 1)):
            c = [0] * lead + [1]
            r = rest
            for _ in range(4 - lead - 1):
                c.append(r % p)
                r //= p
            u = R.coords_to_elem(c)
            nr = Fraction(alg.nrd(u), R.den ** 2)
            if nr.numerator % p:
                continue
            rows = [list(alg.mul(x, u)) for x in ideal.basis]
            rows = [[v * R.den for v in rr] for rr in pI_rows] + rows
            J = Lattice.from_rows(alg, rows, ideal.den * R.den)
            seen[(J.basis, J.den)] = J
    out = list(seen.values())
    if len(out) != p + 1:
        raise ArithmeticError(f"expected {p + 1} neighbors, found {len(out)}")
    return out


def ideal_isomorphic(I: Lattice, J: Lattice):
    """A witness alpha (as (vec, den)) with J = I * alpha, or None.

    I and J must be left ideals over the same left order.  The search runs
    over minimal vectors of conj(I) * J; any hit is verified exactly before
    being returned, so a non-None answer is self-certifying.
    """
    alg = I.alg
    M = I.conjugate().mul(J)
    target = I.nrd_content() * J.nrd_content()
    gram = M.gram_nrd_int()
    # nrd(x_int / den) = (x G x^T) / (2 den^2) <= target
    bound = 2 * target * M.den ** 2
    if bound.denominator != 1:
        raise ArithmeticError("non-integral norm bound")
    nI = I.nrd_content()
    for v in fp_enumerate(gram, int(bound)):
        xi = M.coords_to_elem(v)
        if Fraction(alg.nrd(xi), M.den ** 2) != target:
            continue
        # alpha = xi / (M.den * nrd(I))
        aden = M.den * nI
        cand = I.mul_elem(xi, 1).scale(1 / aden)
        if cand == J:
            return xi, aden
    return None


def unit_half_order(order: Lattice) -> int:
    """#(O^x / {+-1}): count of norm-1 vectors up to sign."""
    gram = order.gram_nrd_int()
    units = [v for v in fp_enumerate(gram, 2 * order.den ** 2)
             if order.alg.nrd(order.coords_to_elem(v)) == order.den ** 2]
    f = len(units)
    if f not in (1, 2, 3, 4, 6, 12):
        raise ArithmeticError(f"unit half-order {f} outside expected range")
    return f


def unit_elements(order: Lattice):
    """All 2f norm-1 units of the order, as integer vectors over order.den."""
    gram = order.gram_nrd_int()
    out = []
    for v in fp_enumerate(gram, 2 * order.den ** 2):
        x = order.coords_to_elem(v)
        if order.alg.nrd(x) == order.den ** 2:
            out.append(x)
            out.append(tuple(-t for t in x))
    return out


@dataclass
class ClassSet:
    """Left-ideal class representatives of a definite Eichler order."""

    order: Lattice
    reps: list[Lattice]
    right_orders: list[Lattice]
    unit_counts: list[int]
    neighbor_prime: int

    @property
    def h(self) -> int:
        return len(self.reps)

    def mass(self) -> Fraction:
        return sum(Fraction(1, f) for f in self.unit_counts)

    def class_of(self, ideal: Lattice) -> int:
        key = (ideal.basis, ideal.den)
        for idx, r in enumerate(self.reps):
            if (r.basis, r.den) == key or ideal_isomorphic(r, ideal) is not None:
                return idx
        raise ArithmeticError("lattice not equivalent to any representative")


def reduce_ideal(ideal: Lattice) -> Lattice:
    """A small equivalent ideal: right-multiply by the conjugate of a
    minimal vector (keeps reduced norms bounded along neighbor walks)."""
    gram = ideal.gram_nrd_int()
    best = None
    bound = min(gram[i][i] for i in range(4))
    for v in fp_enumerate(gram, bound):
        x = ideal.coords_to_elem(v)
        n = ideal.alg.nrd(x)
        if best is None or n < best[0]:
            best = (n, x)
    if best is None:
        raise ArithmeticError("no short vector found")
    return ideal.mul_elem(ideal.alg.conj(best[1]))


def ideal_classes(order: Lattice, neighbor_prime: int | None = None) -> ClassSet:
    """Left-ideal classes by breadth-first p-neighbor search.

    Completeness is certified by the exact mass formula; the starting
    vertex is the order itself and the expansion prime is the least prime
    not dividing the reduced discriminant.  Representatives are reduced so
    their norms stay small no matter how deep the walk goes.
    """
    alg = order.alg
    level = int(order.reduced_discriminant())
    if neighbor_prime is None:
        neighbor_prime = 2
        while level % neighbor_prime == 0:
            neighbor_prime = _next_prime(neighbor_prime)
    p0 = neighbor_prime
    reps = [order]
    visited = {(order.basis, order.den)}
    queue = [order]
    while queue:
        cur = queue.pop()
        for J in p_neighbors(cur, p0):
            Jr = reduce_ideal(J)
            key = (Jr.basis, Jr.den)
            if key in visited:
                continue
            visited.add(key)
            if all(ideal_isomorphic(rep, Jr) is None for rep in reps):
                reps.append(Jr)
                queue.append(Jr)
    rords = [I.right_order() for I in reps]
    counts = [unit_half_order(R) for R in rords]
    cs = ClassSet(order, reps, rords, counts, p0)
    expected = Fraction(euler_phi(alg.disc) * dedekind_psi(level // alg.disc), 12)
    if cs.mass() != expected:
        raise ArithmeticError(
            f"mass formula failed: {cs.mass()} != {expected} "
            f"(disc {alg.disc}, level {level // alg.disc})")
    return cs


def _next_prime(p: int) -> int:
    q = p + 1
    while len(factorization(q)) != 1 or factorization(q)[0][1] != 1:
        q += 1
    return q

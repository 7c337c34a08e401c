"""Exact integer/rational linear algebra for rank-4 lattices.

Lattices are stored as (M, den): the rows of the integer matrix M divided
by the positive integer den form a basis.  Hermite normal form gives the
canonical representative, so lattice equality is matrix equality.
"""

from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "hnf", "mat_det4", "mat_inv_scaled", "lattice_canon", "lattice_equal",
    "lattice_index", "in_lattice", "solve_left_coords", "fp_enumerate",
]


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix with full column rank 4.

    Returns exactly 4 rows, upper triangular with positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    rows = [list(r) for r in rows if any(r)]
    n = 4
    basis = []
    for col in range(n):
        # gcd-eliminate column `col` among remaining rows
        pivot_row = None
        for r in rows:
            if r[col]:
                if pivot_row is None:
                    pivot_row = r
                else:
                    a, b = pivot_row[col], r[col]
                    # extended gcd row operation
                    g, x, y = _xgcd(a, b)
                    pa, pb = a // g, b // g
                    new_p = [x * u + y * v for u, v in zip(pivot_row, r)]
                    new_r = [-pb * u + pa * v for u, v in zip(pivot_row, r)]
                    pivot_row[:] = new_p
                    r[:] = new_r
        if pivot_row is None:
            raise ValueError("matrix does not have full column rank")
        if pivot_row[col] < 0:
            pivot_row[:] = [-u for u in pivot_row]
        rows = [r for r in rows if r is not pivot_row and any(r)]
        basis.append(pivot_row)
    # reduce above pivots, left to right so later columns stay reduced
    for i in range(1, n):
        p = basis[i][i]
        for j in range(i):
            q = basis[j][i] // p
            if q:
                basis[j] = [u - q * v for u, v in zip(basis[j], basis[i])]
    return basis


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def mat_det4(m) -> int:
    """Determinant of a 4x4 integer (or Fraction) matrix, by expansion."""
    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    total = 0
    sign = 1
    for c in range(4):
        minor = [[m[r][cc] for cc in range(4) if cc != c] for r in range(1, 4)]
        total += sign * m[0][c] * det3(minor)
        sign = -sign
    return total


def mat_inv_scaled(m) -> tuple[list[list[int]], int]:
    """Adjugate-based inverse: returns (A, d) with m^{-1} = A / d exactly."""
    d = mat_det4(m)
    if d == 0:
        raise ValueError("singular matrix")

    def cof(r, c):
        minor = [[m[i][j] for j in range(4) if j != c]
                 for i in range(4) if i != r]
        s = (minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
             - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
             + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]))
        return -s if (r + c) % 2 else s

    adj = [[cof(c, r) for c in range(4)] for r in range(4)]  # transposed cofactors
    return adj, d


def lattice_canon(rows: list[list[int]], den: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Canonical (HNF, reduced denominator) form of the lattice rows/den."""
    if den < 0:
        raise ValueError("denominator must be positive")
    basis = hnf(rows)
    g = den
    for r in basis:
        for v in r:
            g = gcd(g, v)
            if g == 1:
                break
    if g > 1:
        basis = [[v // g for v in r] for r in basis]
        den //= g
    return tuple(tuple(r) for r in basis), den


def lattice_equal(a, b) -> bool:
    return a == b


def lattice_index(sup, sub) -> Fraction:
    """Generalized index [sup : sub] as a positive rational."""
    (ms, ds), (mt, dt) = sup, sub
    return abs(Fraction(mat_det4(mt), dt**4) / Fraction(mat_det4(ms), ds**4))


def solve_left_coords(mat, den, vec, vden):
    """Coordinates c with c * (mat/den) = vec/vden, or None if non-integral."""
    inv, d = mat_inv_scaled(mat)
    # c = (vec/vden) * den * mat^{-1} = vec * den * inv / (vden * d)
    c = []
    for j in range(4):
        num = sum(vec[i] * inv[i][j] for i in range(4)) * den
        q, r = divmod(num, vden * d)
        if r:
            return None
        c.append(q)
    return c


def in_lattice(latt, vec, vden=1) -> bool:
    (m, d) = latt
    return solve_left_coords(m, d, vec, vden) is not None


def _fsqrt_floor(fr: Fraction) -> Fraction:
    if fr < 0:
        return Fraction(-1)
    return Fraction(isqrt(fr.numerator * fr.denominator), fr.denominator)


def lll_gram(gram, delta=Fraction(99, 100)):
    """Gram-based LLL: returns (G', U) with G' = U G U^T Lovasz-reduced.

    Exact rational arithmetic throughout; U is unimodular over Z.
    """
    n = len(gram)
    G = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
            for j in range(i + 1, n):
                mu[j][i] = (G[j][i] - sum(mu[j][k] * mu[i][k] * B[k]
                                          for k in range(i))) / B[i]
        return mu, B

    def size_reduce(k, mu):
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                for t in range(n):
                    G[k][t] -= q * G[j][t]
                for t in range(n):
                    G[t][k] = G[k][t]
                G[k][k] = G[k][k]  # symmetric update done via rows+cols
                mu, _ = gso()
        return mu

    # recompute-from-scratch variant: n = 4 so the cost is negligible
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:
            raise ArithmeticError("LLL failed to terminate")
        mu, B = gso()
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[j])]
                _gram_row_op(G, k, j, q)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            U[k], U[k - 1] = U[k - 1], U[k]
            _gram_swap(G, k, k - 1)
            k = max(k - 1, 1)
    return G, U


def _gram_row_op(G, k, j, q):
    # G <- E G E^T with E = I - q e_k e_j^T: row op, then column op
    n = len(G)
    for t in range(n):
        G[k][t] -= q * G[j][t]
    for t in range(n):
        G[t][k] -= q * G[t][j]


def _gram_swap(G, a, b):
    G[a], G[b] = G[b], G[a]
    for row in G:
        row[a], row[b] = row[b], row[a]


def fp_enumerate(gram, bound) -> list[tuple[int, ...]]:
    """All nonzero integer 4-vectors v with v G v^T <= bound (Fincke-Pohst).

    Only one of each +-v pair is returned (first nonzero coordinate > 0).
    gram is symmetric positive definite with int or Fraction entries and
    bound a nonnegative int or Fraction; evaluation is exact.
    """
    n = 4
    G = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    # LDL^T with L unit lower triangular: Q(x) = sum d_i (x_i + sum_{j>i} u_ij x_j)^2
    d = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        s = G[i][i] - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if s <= 0:
            raise ValueError("Gram matrix is not positive definite")
        d[i] = s
        for j in range(i + 1, n):
            u[i][j] = (G[i][j] - sum(d[k] * u[k][i] * u[k][j]
                                     for k in range(i))) / d[i]

    bound = Fraction(bound)
    out = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            if any(x):
                v = tuple(x)
                # canonical sign
                for c in v:
                    if c:
                        out.append(v if c > 0 else tuple(-t for t in v))
                        break
            return
        t = sum(u[i][j] * x[j] for j in range(i + 1, n))
        radius = _fsqrt_floor(remaining / d[i]) + 1  # safe over-cover
        lo = int(-radius - t) - 1
        hi = int(radius - t) + 1
        for xi in range(lo, hi + 1):
            val = d[i] * (xi + t) ** 2
            if val <= remaining:
                x[i] = xi
                rec(i - 1, remaining - val)
        x[i] = 0

    rec(n - 1, bound)
    return sorted(set(out))

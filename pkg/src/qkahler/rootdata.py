"""Root systems, the weight-lattice pairing, and cominuscule node data.

Weights are tuples of integers in fundamental-weight coordinates; the
simple root alpha_j is then the j-th column of the Cartan matrix.  The
symmetric pairing is normalized so that short roots in a simply-laced
component have (alpha, alpha) = 2 and the longer roots of B/C/D scale up
by d_i = (alpha_i, alpha_i)/2 in {1, 2}; every (alpha_i, alpha_j) is an
integer and every weight pairing lies in (1/m) Z for the recorded
denominator m.  The deformation variable t of the scalar field stands
for q^(1/m), so q-powers of pairings are exact Laurent monomials.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import ShapeError, UnsupportedType
from .scalars import Scalar


def _chain(n):
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = 2
        if i + 1 < n:
            A[i][i + 1] = -1
            A[i + 1][i] = -1
    return A


def _cartan_and_d(series, rank):
    if series == "A" and rank >= 1:
        return _chain(rank), [1] * rank
    if series == "B" and rank >= 2:
        A = _chain(rank)
        A[rank - 1][rank - 2] = -2  # alpha_rank is the short root
        return A, [2] * (rank - 1) + [1]
    if series == "C" and rank >= 2:
        A = _chain(rank)
        A[rank - 2][rank - 1] = -2  # alpha_rank is the long root
        return A, [1] * (rank - 1) + [2]
    if series == "D" and rank >= 3:
        A = _chain(rank - 1)
        for row in A:
            row.append(0)
        A.append([0] * rank)
        A[rank - 1][rank - 1] = 2
        A[rank - 3][rank - 1] = -1  # branch node carries both end nodes
        A[rank - 1][rank - 3] = -1
        return A, [1] * rank
    if series == "E" and rank in (6, 7):
        n = rank
        A = [[0] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 2
        chain = [1, 3, 4, 5, 6, 7][: n - 1]  # nodes 1-3-4-5-6(-7), 2 hangs off 4
        for a, b in zip(chain, chain[1:]):
            A[a - 1][b - 1] = -1
            A[b - 1][a - 1] = -1
        A[2 - 1][4 - 1] = -1
        A[4 - 1][2 - 1] = -1
        return A, [1] * rank
    raise UnsupportedType(f"root system {series}{rank} not supported")


def _invert_fraction_matrix(A):
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j))
         for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def _positive_roots(A, n):
    # closure of the simple roots under root strings, alpha-coordinates
    simple = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    roots = set(simple)
    level = list(simple)
    while level:
        nxt = []
        for beta in level:
            for i in range(n):
                s = sum(A[i][k] * beta[k] for k in range(n))
                p = 0
                gamma = list(beta)
                while True:
                    gamma[i] -= 1
                    if tuple(gamma) in roots:
                        p += 1
                    else:
                        break
                if p - s >= 1:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        level = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


class RootSystem:
    """Cartan data plus the exact weight-lattice pairing for one series/rank."""

    def __init__(self, series, rank):
        series = str(series).upper()
        if not isinstance(rank, int) or rank < 1:
            raise UnsupportedType(f"bad rank {rank!r}")
        A, d = _cartan_and_d(series, rank)
        self.series = series
        self.rank = rank
        self.cartan = tuple(tuple(row) for row in A)
        self.d = tuple(d)
        ainv = _invert_fraction_matrix(A)
        self._ainv = ainv
        # (omega_i, omega_j) = d_j * (A^-1)_{ji}
        self.gram = tuple(tuple(d[j] * ainv[j][i] for j in range(rank))
                          for i in range(rank))
        m = 1
        for row in self.gram:
            for x in row:
                m = m * x.denominator // gcd(m, x.denominator)
        self.m = m
        self._proots = _positive_roots(A, rank)

    # -- basic data -------------------------------------------------------

    def alpha(self, s):
        """Simple root alpha_s (1-based) in fundamental-weight coordinates."""
        self._check_node(s)
        return tuple(self.cartan[i][s - 1] for i in range(self.rank))

    def omega(self, s):
        self._check_node(s)
        return tuple(int(i == s - 1) for i in range(self.rank))

    def rho(self):
        return (1,) * self.rank

    def _check_node(self, s):
        if not isinstance(s, int) or not (1 <= s <= self.rank):
            raise UnsupportedType(f"node {s!r} out of range for {self.series}{self.rank}")

    def alpha_coords(self, mu):
        """Coordinates of a weight in the simple-root basis (Fractions)."""
        return tuple(sum(self._ainv[i][j] * mu[j] for j in range(self.rank))
                     for i in range(self.rank))

    def positive_roots(self):
        """Positive roots in alpha-coordinates, sorted by height."""
        return list(self._proots)

    def highest_root(self):
        return self._proots[-1]

    def pairing(self, mu, nu):
        if len(mu) != self.rank or len(nu) != self.rank:
            raise ShapeError("weight of wrong length")
        acc = Fraction(0)
        for i, x in enumerate(mu):
            if x:
                row = self.gram[i]
                for j, y in enumerate(nu):
                    if y:
                        acc += x * y * row[j]
        return acc

    def qpow(self, x):
        """q^x as an exact Laurent monomial in t = q^(1/m)."""
        e = Fraction(x) * self.m
        if e.denominator != 1:
            raise ShapeError(f"q^{x} is not a power of t = q^(1/{self.m})")
        return Scalar.t_pow(int(e))

    def weyl_dim(self, lam):
        """Dimension of the irreducible module of highest weight lam."""
        num = 1
        den = 1
        for beta in self._proots:
            a = sum(beta[k] * self.d[k] * (lam[k] + 1) for k in range(self.rank))
            b = sum(beta[k] * self.d[k] for k in range(self.rank))
            num *= a
            den *= b
        if num % den:
            raise ShapeError("Weyl dimension did not come out integral")
        return num // den

    def convention_stamp(self):
        return {
            "series": self.series,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "d": list(self.d),
            "m": self.m,
            "weight_gram": [[str(x) for x in row] for row in self.gram],
            "normalization": "short simply-laced roots have (alpha,alpha)=2; "
                             "longer roots scale by d_i; t = q^(1/m)",
        }

    def __repr__(self):
        return f"RootSystem({self.series}{self.rank}, m={self.m})"


def build_root_system(series, rank):
    return RootSystem(series, rank)


def irreducible_nodes(rs):
    """Nodes whose coefficient in the highest root is 1 (cominuscule nodes)."""
    theta = rs.highest_root()
    return [i + 1 for i, c in enumerate(theta) if c == 1]


def pair(rs, mu, nu):
    """Exact symmetric pairing of two weights in omega-coordinates."""
    return rs.pairing(mu, nu)


def classical_flag_dim(rs, s):
    """Complex dimension of the classical flag manifold for a cominuscule node."""
    if s not in irreducible_nodes(rs):
        raise UnsupportedType(
            f"node {s} of {rs.series}{rs.rank} is not cominuscule")
    n = rs.rank
    if rs.series == "A":
        return s * (n + 1 - s)
    if rs.series == "B":
        return 2 * n - 1
    if rs.series == "C":
        return n * (n + 1) // 2
    if rs.series == "D":
        if s == 1:
            return 2 * n - 2
        return n * (n - 1) // 2
    if rs.series == "E":
        if n == 6:
            return 16
        if n == 7:
            return 27
    raise UnsupportedType(f"no classical dimension entry for {rs.series}{n} node {s}")

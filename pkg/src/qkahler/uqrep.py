"""Multiplicity-free irreducible modules over the quantized enveloping algebra.

Conventions: coproduct Delta(K) = K (x) K, Delta(E) = E (x) K + 1 (x) E,
Delta(F) = F (x) 1 + K^-1 (x) F; compact-form star K* = K, E* = F K,
F* = K^-1 E, with the deformation parameter in (0, 1).

A module is built from its highest-weight vector by applying F-monomials:
one representative word is kept per weight, tested for survival in the
irreducible quotient through the contravariant (Shapovalov) pairing,
computed exactly by pushing E's through F-words.  Weight multiplicities
are checked beforehand with Freudenthal's recursion -- an independent
route -- and anything with a multiplicity above 1 is rejected.  Basis
order: lowest weight first, highest weight last (index N-1), sorted by
height with coordinate tuples breaking ties.

Matrices are sparse dicts {(row, col): Scalar}; all identities
(commutators, Serre relations, contravariance, nilpotency) are verified
exactly over Q(i)(t) when a module is constructed.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (InternalConsistency, MultiplicityUnsupported, ShapeError)
from .rootdata import pair
from .scalars import ONE, ZERO, Scalar


# ---------------------------------------------------------------------------
# sparse matrix helpers: {(row, col): Scalar}, zero entries never stored
# ---------------------------------------------------------------------------

def sp_set(M, r, c, v):
    if v.is_zero():
        M.pop((r, c), None)
    else:
        M[(r, c)] = v


def sp_add_to(M, r, c, v):
    cur = M.get((r, c))
    new = v if cur is None else cur + v
    sp_set(M, r, c, new)


def sp_mul(A, B):
    rows_of_b = {}
    for (j, k), v in B.items():
        rows_of_b.setdefault(j, []).append((k, v))
    out = {}
    for (i, j), a in A.items():
        for k, b in rows_of_b.get(j, ()):
            sp_add_to(out, i, k, a * b)
    return out


def sp_sub(A, B):
    out = dict(A)
    for key, v in B.items():
        cur = out.get(key)
        new = -v if cur is None else cur - v
        if new.is_zero():
            out.pop(key, None)
        else:
            out[key] = new
    return out


def sp_scale(A, s):
    if s.is_zero():
        return {}
    return {key: v * s for key, v in A.items()}


def sp_eye(n):
    return {(i, i): ONE for i in range(n)}


def sp_pow(A, k, n):
    out = sp_eye(n)
    for _ in range(k):
        out = sp_mul(out, A)
    return out


def sp_is_zero(A):
    return not A


# ---------------------------------------------------------------------------
# q-integers and q-binomials in q_i = q^{d_i}
# ---------------------------------------------------------------------------

def qint(rs, i, c):
    """Symmetric quantum integer [c] at q_i = q^(d_i), a Laurent polynomial."""
    if c == 0:
        return ZERO
    sgn = 1
    if c < 0:
        sgn, c = -1, -c
    k = rs.m * rs.d[i - 1]
    acc = ZERO
    for j in range(c):
        acc = acc + Scalar.t_pow(k * (c - 1 - 2 * j))
    return acc if sgn > 0 else -acc


def qbinom(rs, i, n, k):
    num = ONE
    den = ONE
    for j in range(1, k + 1):
        num = num * qint(rs, i, n - k + j)
        den = den * qint(rs, i, j)
    return num / den


# ---------------------------------------------------------------------------
# Freudenthal weight multiplicities (independent of the monomial route)
# ---------------------------------------------------------------------------

def freudenthal_multiplicities(rs, lam):
    """All weights of the irreducible module of highest weight lam, with
    multiplicities, via Freudenthal's recursion."""
    lam = tuple(lam)
    rank = rs.rank
    rho = rs.rho()
    lam_rho = tuple(x + 1 for x in lam)
    c0 = pair(rs, lam_rho, lam_rho)
    proots_w = []
    for beta in rs.positive_roots():
        w = [0] * rank
        for k, ck in enumerate(beta):
            if ck:
                al = rs.alpha(k + 1)
                w = [x + ck * y for x, y in zip(w, al)]
        proots_w.append(tuple(w))

    def in_cone(nu):
        # lam - nu must be a nonnegative integer combination of simple roots
        diff = tuple(l - x for l, x in zip(lam, nu))
        for c in rs.alpha_coords(diff):
            if c.denominator != 1 or c < 0:
                return False
        return True

    target = rs.weyl_dim(lam)
    mult = {lam: 1}
    total = 1
    frontier = [lam]
    while total < target:
        cand = set()
        for mu in frontier:
            for s in range(1, rank + 1):
                al = rs.alpha(s)
                cand.add(tuple(x - y for x, y in zip(mu, al)))
        cand -= set(mult)
        frontier = []
        found_any = False
        for mu in sorted(cand):
            rhs = Fraction(0)
            for bw in proots_w:
                k = 1
                while True:
                    nu = tuple(x + k * y for x, y in zip(mu, bw))
                    if not in_cone(nu):
                        break
                    mn = mult.get(nu, 0)
                    if mn:
                        rhs += mn * pair(rs, nu, bw)
                    k += 1
            mu_rho = tuple(x + 1 for x in mu)
            denom = c0 - pair(rs, mu_rho, mu_rho)
            if denom == 0:
                if rhs != 0:
                    raise InternalConsistency("Freudenthal recursion degenerate")
                continue
            val = 2 * rhs / denom
            if val.denominator != 1 or val < 0:
                raise InternalConsistency("Freudenthal gave a non-integer multiplicity")
            val = int(val)
            if val:
                mult[mu] = val
                total += val
                frontier.append(mu)
                found_any = True
        if not found_any and total < target:
            raise InternalConsistency("weight cone exhausted below the Weyl dimension")
    if total != target:
        raise InternalConsistency("multiplicities overshoot the Weyl dimension")
    return mult


# ---------------------------------------------------------------------------
# contravariant pairing of F-words on the Verma module (exact, memoized)
# ---------------------------------------------------------------------------

def _pair_words(rs, lam, w, u, memo):
    if not w:
        return ONE if not u else ZERO
    if not u:
        return ZERO
    key = (w, u)
    got = memo.get(key)
    if got is not None:
        return got
    i = w[0]
    rest = w[1:]
    n = len(u)
    # suffix weights: sw[a] = lam - sum_{b>a} alpha_{u_b}
    sw = [None] * n
    cur = tuple(lam)
    for a in range(n - 1, -1, -1):
        sw[a] = cur
        if a:
            al = rs.alpha(u[a])
            cur = tuple(x - y for x, y in zip(cur, al))
    wt_u = tuple(x - y for x, y in zip(cur, rs.alpha(u[0])))
    out = ZERO
    for a in range(n):
        if u[a] != i:
            continue
        c = sw[a][i - 1]  # <suffix weight, alpha_i^vee> in omega-coordinates
        f = qint(rs, i, c)
        if f.is_zero():
            continue
        out = out + f * _pair_words(rs, lam, rest, u[:a] + u[a + 1:], memo)
    if not out.is_zero():
        ai = rs.alpha(i)
        shift = tuple(x + y for x, y in zip(wt_u, ai))
        out = rs.qpow(-pair(rs, ai, shift)) * out
    memo[key] = out
    return out


# ---------------------------------------------------------------------------
# the module class
# ---------------------------------------------------------------------------

class ModuleRep:
    """A based module: weights per index plus sparse E/F matrices."""

    def __init__(self, rs, label, weights, E, F, norms=None):
        self.rs = rs
        self.label = label
        self.weights = list(weights)
        self.E = E  # list over simple nodes, each {(row, col): Scalar}
        self.F = F
        self.norms = norms
        self.dim = len(self.weights)

    def weight(self, j):
        return self.weights[j]

    def k_entry(self, a, j):
        """Diagonal K_a eigenvalue on basis vector j."""
        return self.rs.qpow(pair(self.rs, self.rs.alpha(a), self.weights[j]))

    def hw_index(self):
        wset = set(self.weights)
        hits = [j for j, mu in enumerate(self.weights)
                if all(tuple(x + y for x, y in zip(mu, self.rs.alpha(a)))
                       not in wset for a in range(1, self.rs.rank + 1))]
        if len(hits) != 1:
            raise InternalConsistency(f"{self.label}: highest weight not unique")
        return hits[0]

    def lw_index(self):
        wset = set(self.weights)
        hits = [j for j, mu in enumerate(self.weights)
                if all(tuple(x - y for x, y in zip(mu, self.rs.alpha(a)))
                       not in wset for a in range(1, self.rs.rank + 1))]
        if len(hits) != 1:
            raise InternalConsistency(f"{self.label}: lowest weight not unique")
        return hits[0]

    def __repr__(self):
        return f"ModuleRep({self.label}, dim={self.dim})"


def build_irrep(rs, s):
    """The irreducible module with highest weight omega_s, fully verified."""
    lam = rs.omega(s)
    return _build_module(rs, lam, f"V(w{s})")


def _build_module(rs, lam, label):
    mults = freudenthal_multiplicities(rs, lam)
    bad = sorted(mu for mu, k in mults.items() if k > 1)
    if bad:
        raise MultiplicityUnsupported(
            f"{label}: weight {bad[0]} has multiplicity {mults[bad[0]]}")

    def height(mu):
        diff = tuple(l - x for l, x in zip(lam, mu))
        h = sum(rs.alpha_coords(diff))
        if h.denominator != 1:
            raise InternalConsistency("non-integral height")
        return int(h)

    memo = {}
    words = {tuple(lam): ()}
    norms = {tuple(lam): ONE}
    by_height = sorted(mults, key=lambda mu: (height(mu), mu))
    for mu in by_height:
        if mu not in words:
            raise InternalConsistency(
                f"{label}: weight {mu} unreachable by F-monomials")
        w = words[mu]
        for i in range(1, rs.rank + 1):
            al = rs.alpha(i)
            nu = tuple(x - y for x, y in zip(mu, al))
            if nu not in mults or nu in words:
                continue
            wp = (i,) + w
            nrm = _pair_words(rs, lam, wp, wp, memo)
            if not nrm.is_zero():
                words[nu] = wp
                norms[nu] = nrm

    # basis order: height descending (lowest weight first), hw last
    order = sorted(mults, key=lambda mu: (-height(mu), mu))
    idx = {mu: j for j, mu in enumerate(order)}
    N = len(order)
    rank = rs.rank
    F = [dict() for _ in range(rank)]
    for j, mu in enumerate(order):
        for a in range(1, rank + 1):
            al = rs.alpha(a)
            nu = tuple(x - y for x, y in zip(mu, al))
            k = idx.get(nu)
            if k is None:
                continue
            wp = (a,) + words[mu]
            c = _pair_words(rs, lam, wp, words[nu], memo) / norms[nu]
            if not c.is_zero():
                F[a - 1][(k, j)] = c
    nlist = [norms[mu] for mu in order]
    E = [dict() for _ in range(rank)]
    for a in range(1, rank + 1):
        for (j, k), c in F[a - 1].items():
            # contravariance: E entries are adjoint to F K against the form
            val = c * rs.qpow(pair(rs, rs.alpha(a), order[k])) * nlist[j] / nlist[k]
            if not val.is_zero():
                E[a - 1][(k, j)] = val
    mod = ModuleRep(rs, label, order, E, F, norms=nlist)
    verify_module(mod)
    if mod.weights[-1] != tuple(lam):
        raise InternalConsistency("highest weight not last in basis order")
    return mod


def dual_rep(V):
    """Dual module on the dual basis: [X]* = [S(X)]^T, weights negated."""
    rs = V.rs
    rank = rs.rank
    weights = [tuple(-x for x in mu) for mu in V.weights]
    E = [dict() for _ in range(rank)]
    F = [dict() for _ in range(rank)]
    for a in range(1, rank + 1):
        al = rs.alpha(a)
        for (j, k), c in V.E[a - 1].items():
            # S(E) = -E K^{-1}
            E[a - 1][(k, j)] = -c * rs.qpow(-pair(rs, al, V.weights[k]))
        for (j, k), c in V.F[a - 1].items():
            # S(F) = -K F
            F[a - 1][(k, j)] = -c * rs.qpow(pair(rs, al, V.weights[j]))
    label = V.label + "*"
    mod = ModuleRep(rs, label, weights, E, F)
    verify_module(mod)
    return mod


# ---------------------------------------------------------------------------
# contravariant form and verification
# ---------------------------------------------------------------------------

def contravariant_form(V):
    """Diagonal norms of the contravariant form, normalized to 1 at the
    highest weight, with the defining adjointness verified exactly."""
    rs = V.rs
    N = V.dim
    G = [None] * N
    G[V.hw_index()] = ONE
    # propagate down the F-edges from the highest weight
    changed = True
    while changed:
        changed = False
        for a in range(1, rs.rank + 1):
            for (r, c), f in V.F[a - 1].items():
                if G[c] is None or G[r] is not None:
                    continue
                e = V.E[a - 1].get((c, r))
                if e is None:
                    raise InternalConsistency(
                        f"{V.label}: F-edge without matching E-edge")
                # (F b_c, F b_c)-style propagation along the edge c -> r
                G[r] = G[c] * e * rs.qpow(-pair(rs, rs.alpha(a), V.weights[c])) / f
                changed = True
    if any(g is None for g in G):
        raise InternalConsistency(f"{V.label}: form propagation did not reach all indices")
    check_contravariance(V, G)
    return G


def check_contravariance(V, G):
    rs = V.rs
    for a in range(1, rs.rank + 1):
        keys = set(V.E[a - 1]) | {(k, j) for (j, k) in V.F[a - 1]}
        for (k, j) in keys:
            e = V.E[a - 1].get((k, j), ZERO)
            f = V.F[a - 1].get((j, k), ZERO)
            # (E_a v_j, v_k) = (v_j, F_a K_a v_k)
            lhs = e.conj() * G[k]
            rhs = f * rs.qpow(pair(rs, rs.alpha(a), V.weights[k])) * G[j]
            if lhs != rhs:
                raise InternalConsistency(f"{V.label}: contravariance fails at {(a, k, j)}")


def dual_norms(V, norms):
    """Norms of the dual basis under the dual-side contravariant form:
    index i carries q^(2 rho, wt_i) / n_i."""
    rs = V.rs
    two_rho = tuple(2 for _ in range(rs.rank))
    return [rs.qpow(pair(rs, two_rho, V.weights[i])) / norms[i]
            for i in range(V.dim)]


def verify_module(V):
    """Exact checks: weight compatibility, commutators, Serre relations,
    nilpotency, and the extremal vectors."""
    rs = V.rs
    rank = rs.rank
    N = V.dim
    wset = set(V.weights)
    if len(wset) != N:
        raise MultiplicityUnsupported(f"{V.label}: repeated weights in basis")
    for a in range(1, rank + 1):
        al = rs.alpha(a)
        for (k, j), _ in V.F[a - 1].items():
            if V.weights[k] != tuple(x - y for x, y in zip(V.weights[j], al)):
                raise InternalConsistency(f"{V.label}: F_{a} breaks weights")
        for (k, j), _ in V.E[a - 1].items():
            if V.weights[k] != tuple(x + y for x, y in zip(V.weights[j], al)):
                raise InternalConsistency(f"{V.label}: E_{a} breaks weights")
    # [E_a, F_b] = delta_ab (K_a - K_a^-1)/(q_a - q_a^-1)
    for a in range(1, rank + 1):
        for b in range(1, rank + 1):
            comm = sp_sub(sp_mul(V.E[a - 1], V.F[b - 1]),
                          sp_mul(V.F[b - 1], V.E[a - 1]))
            expect = {}
            if a == b:
                for j in range(N):
                    c = V.weights[j][a - 1]
                    v = qint(rs, a, c)
                    if not v.is_zero():
                        expect[(j, j)] = v
            if comm != expect:
                raise InternalConsistency(f"{V.label}: [E_{a}, F_{b}] wrong")
    # Serre relations
    for a in range(1, rank + 1):
        for b in range(1, rank + 1):
            if a == b:
                continue
            nab = 1 - rs.cartan[a - 1][b - 1]
            for X in (V.E, V.F):
                acc = {}
                for r in range(nab + 1):
                    term = sp_mul(sp_pow(X[a - 1], nab - r, N),
                                  sp_mul(X[b - 1], sp_pow(X[a - 1], r, N)))
                    coef = qbinom(rs, a, nab, r)
                    if r % 2:
                        coef = -coef
                    for key, v in sp_scale(term, coef).items():
                        sp_add_to(acc, key[0], key[1], v)
                if acc:
                    raise InternalConsistency(f"{V.label}: Serre relation fails ({a},{b})")
    # nilpotency and extremal vectors
    hw = V.hw_index()
    lw = V.lw_index()
    for a in range(1, rank + 1):
        if not sp_is_zero(sp_pow(V.E[a - 1], N, N)):
            raise InternalConsistency(f"{V.label}: E_{a} not nilpotent")
        if any(j == hw for (_, j) in V.E[a - 1]):
            raise InternalConsistency(f"{V.label}: E_{a} does not kill the highest weight")
        if any(j == lw for (_, j) in V.F[a - 1]):
            raise InternalConsistency(f"{V.label}: F_{a} does not kill the lowest weight")
    return True

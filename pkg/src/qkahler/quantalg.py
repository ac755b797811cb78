"""The quantized coordinate algebra presented by braid-coefficient relations.

Generators come in two bands indexed by the module basis: f-band (degree
(1,0)) and v-band (degree (0,1)).  The defining relations are quadratic
with coefficients read off the braid tensors: an ff family, a vv family
on the dual side, and a vf exchange family; the element c = sum v^k f^k
is central and is set to 1 in the quotient.  Everything here works in
graded slices of the free algebra: words are tuples of (kind, index)
tokens, a slice is all words of one kind-profile, and the relation ideal
is materialized slice by slice as an online echelon, so membership tests
and dimension counts are exact.
"""

from __future__ import annotations

import itertools

import mpmath

from .errors import (CentralityFailed, DegreeLimit, IdentityFailed,
                     ProjectionFailed, ShapeError, StarMismatch)
from .linalg import Echelon
from .rootdata import pair
from .scalars import ONE, ZERO, eval_mp
from .uqrep import dual_norms


# ---------------------------------------------------------------------------
# free words
# ---------------------------------------------------------------------------

def _arrangements(kinds):
    """Distinct orderings of a multiset of kind labels."""
    if not kinds:
        yield ()
        return
    seen = set()
    for k in kinds:
        if k in seen:
            continue
        seen.add(k)
        rest = list(kinds)
        rest.remove(k)
        for tail in _arrangements(rest):
            yield (k,) + tail


def words_of(counts, N):
    """All words with the given kind profile, indices running over 0..N-1.

    counts is a dict {kind: multiplicity}; a word is a tuple of
    (kind, index) tokens.
    """
    kinds = []
    for k in sorted(counts):
        kinds.extend([k] * counts[k])
    out = []
    for arr in _arrangements(kinds):
        for idx in itertools.product(range(N), repeat=len(arr)):
            out.append(tuple(zip(arr, idx)))
    return out


def _split_counts(counts):
    """All ways to split a kind profile into a left and right profile."""
    keys = sorted(counts)
    ranges = [range(counts[k] + 1) for k in keys]
    for take in itertools.product(*ranges):
        left = {k: c for k, c in zip(keys, take) if c}
        right = {k: counts[k] - c for k, c in zip(keys, take) if counts[k] - c}
        yield left, right


def _profile_of(word):
    prof = {}
    for kind, _ in word:
        prof[kind] = prof.get(kind, 0) + 1
    return prof


def _sub_profile(counts, sub):
    out = dict(counts)
    for k, c in sub.items():
        if out.get(k, 0) < c:
            return None
        out[k] -= c
        if not out[k]:
            del out[k]
    return out


def ideal_slice_rows(counts, N, relations):
    """Spanning rows of the two-sided relation ideal in one word slice."""
    for rel in relations:
        prof = _profile_of(next(iter(rel)))
        rem = _sub_profile(counts, prof)
        if rem is None:
            continue
        for lc, rc in _split_counts(rem):
            for u in words_of(lc, N):
                for v in words_of(rc, N):
                    yield {u + w + v: coeff for w, coeff in rel.items()}


def elem_add(a, b):
    out = dict(a)
    for w, v in b.items():
        nv = out.get(w, ZERO) + v
        if nv.is_zero():
            out.pop(w, None)
        else:
            out[w] = nv
    return out


def elem_scale(a, s):
    if s.is_zero():
        return {}
    return {w: v * s for w, v in a.items()}


# ---------------------------------------------------------------------------
# the algebra
# ---------------------------------------------------------------------------

class CoordinateAlgebra:
    """Quadratic presentation of the coordinate algebra for one node.

    Built from the braid family of the defining module; exposes exact
    slice dimensions, ideal membership, a vf-ordering normal form, and
    the verification battery (centrality, projections, counit, star).
    """

    def __init__(self, V, Vd, fam, max_degree=4):
        if fam.V is not V or fam.Vd is not Vd:
            raise ShapeError("braid family does not match the modules")
        self.V = V
        self.Vd = Vd
        self.fam = fam
        self.rs = V.rs
        self.N = V.dim
        self.max_degree = max_degree
        self.base = V.hw_index()
        lam = V.weights[V.hw_index()]
        self.lam = lam
        self.q_lam = self.rs.qpow(pair(self.rs, lam, lam))
        self.relations = {"ff": [], "vv": [], "vf": []}
        qli = self.q_lam.inverse()
        for name, comp, kinds, scale in (("ff", fam.vv.comp, ("f", "f"), qli),
                                         ("vv", fam.vsvs.comp, ("v", "v"), qli)):
            by_upper = {}
            for (i, j, k, l), val in comp.items():
                by_upper.setdefault((i, j), {})[(k, l)] = val
            for (i, j), terms in sorted(by_upper.items()):
                row = {((kinds[0], i), (kinds[1], j)): ONE}
                for (k, l), val in sorted(terms.items()):
                    key = ((kinds[0], k), (kinds[1], l))
                    row[key] = row.get(key, ZERO) - scale * val
                row = {w: v for w, v in row.items() if not v.is_zero()}
                if row:
                    self.relations[name].append(row)
        vf = {}
        for (i, j, k, l), val in sorted(fam.vvs.comp.items()):
            vf.setdefault((i, j), {})[(k, l)] = self.q_lam * val
        self._vf_rewrite = vf
        for (i, j), terms in sorted(vf.items()):
            row = {(("v", i), ("f", j)): ONE}
            for (k, l), c in sorted(terms.items()):
                key = (("f", k), ("v", l))
                row[key] = row.get(key, ZERO) - c
            row = {w: v for w, v in row.items() if not v.is_zero()}
            if row:
                self.relations["vf"].append(row)
        self._slices = {}
        self._all_relations = (self.relations["ff"] + self.relations["vv"]
                               + self.relations["vf"])

    # -- slices ------------------------------------------------------------

    def _check_degree(self, counts):
        d = sum(counts.values())
        if d > self.max_degree:
            raise DegreeLimit(
                f"slice degree {d} beyond the configured bound "
                f"{self.max_degree}")

    def words(self, nf, nv):
        self._check_degree({"f": nf, "v": nv})
        return words_of({"f": nf, "v": nv}, self.N)

    def ideal_echelon(self, nf, nv):
        """Echelonized relation-ideal slice in bidegree (nf, nv)."""
        key = (nf, nv)
        if key not in self._slices:
            self._check_degree({"f": nf, "v": nv})
            ech = Echelon()
            counts = {}
            if nf:
                counts["f"] = nf
            if nv:
                counts["v"] = nv
            for row in ideal_slice_rows(counts, self.N, self._all_relations):
                ech.add(row)
            self._slices[key] = ech
        return self._slices[key]

    def dim(self, nf, nv):
        """Exact dimension of the algebra slice in bidegree (nf, nv)."""
        return len(self.words(nf, nv)) - self.ideal_echelon(nf, nv).rank()

    # -- structure ---------------------------------------------------------

    def central_element(self):
        return {(("v", k), ("f", k)): ONE for k in range(self.N)}

    def z_word(self, i, j):
        return (("f", i), ("v", j))

    def counit(self, elem):
        acc = ZERO
        for w, v in elem.items():
            if all(idx == self.base for _, idx in w):
                acc = acc + v
        return acc

    def normal_form(self, elem):
        """Rewrite every vf adjacency to the fv side; exact and terminating."""
        if isinstance(elem, tuple):
            elem = {elem: ONE}
        work = dict(elem)
        out = {}
        while work:
            w, coeff = work.popitem()
            pos = next((p for p in range(len(w) - 1)
                        if w[p][0] == "v" and w[p + 1][0] == "f"), None)
            if pos is None:
                nv = out.get(w, ZERO) + coeff
                if nv.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = nv
                continue
            i, j = w[pos][1], w[pos + 1][1]
            for (k, l), c in self._vf_rewrite.get((i, j), {}).items():
                nw = w[:pos] + (("f", k), ("v", l)) + w[pos + 2:]
                nv = work.get(nw, ZERO) + coeff * c
                if nv.is_zero():
                    work.pop(nw, None)
                else:
                    work[nw] = nv
        return out

    # -- verification battery ----------------------------------------------

    def verify_counit(self):
        """The counit must kill every defining relation, exactly."""
        for row in self._all_relations:
            if not self.counit(row).is_zero():
                raise IdentityFailed("counit does not vanish on a relation")
        if not (self.counit(self.central_element()) - ONE).is_zero():
            raise IdentityFailed("counit of the central element is not 1")
        return True

    def verify_graded_dims(self, max_degree=None):
        """Slice dimensions against the closed-form weight-lattice counts.

        Pure band slices must match the classical character dimension of
        the d-th symmetric-type power, and mixed slices must factor --
        the exchange straightening leaves no extra collapse.
        """
        max_degree = max_degree or self.max_degree
        report = {}
        for d in range(0, max_degree + 1):
            for nf in range(0, d + 1):
                nv = d - nf
                got = self.dim(nf, nv)
                want = self._weyl_slice(nf) * self._weyl_slice(nv)
                report[(nf, nv)] = got
                if got != want:
                    raise IdentityFailed(
                        f"slice ({nf}, {nv}) has dimension {got}, "
                        f"expected {want}")
        return report

    def _weyl_slice(self, d):
        lam = tuple(d * x for x in self.lam)
        return self.rs.weyl_dim(lam)

    def verify_central(self, max_degree=None):
        """c commutes with every word, in the pre-quotient algebra."""
        max_degree = max_degree or self.max_degree
        c = self.central_element()
        for d in range(1, max_degree - 1):
            for nf in range(0, d + 1):
                nv = d - nf
                ech = self.ideal_echelon(nf + 1, nv + 1)
                for w in self.words(nf, nv):
                    comm = {}
                    for cw, cv in c.items():
                        comm[cw + w] = cv
                        k2 = w + cw
                        comm[k2] = comm.get(k2, ZERO) - cv
                    if ech.residue({k: v for k, v in comm.items()
                                    if not v.is_zero()}):
                        raise CentralityFailed(
                            f"[c, {w}] is not in the relation ideal")
        return True

    def _quotient_rows(self, nf, nv):
        """Rows of w1 (c - 1) w2 spanning the quotient directions that
        connect bidegree (nf, nv) down to (nf - 1, nv - 1)."""
        rows = []
        counts = {}
        if nf - 1:
            counts["f"] = nf - 1
        if nv - 1:
            counts["v"] = nv - 1
        for lc, rc in _split_counts(counts):
            for u in words_of(lc, self.N):
                for v in words_of(rc, self.N):
                    row = {}
                    for k in range(self.N):
                        row[u + (("v", k), ("f", k)) + v] = ONE
                    key = u + v
                    row[key] = row.get(key, ZERO) - ONE
                    rows.append({w: x for w, x in row.items()
                                 if not x.is_zero()})
        return rows

    def verify_projection_identities(self):
        """sum_k z^{ik} z^{kj} = z^{ij} in the c = 1 quotient, exactly."""
        if self.max_degree < 4:
            raise DegreeLimit("projection identities live in degree 4")
        ech = Echelon()
        for row in ideal_slice_rows({"f": 2, "v": 2}, self.N,
                                    self._all_relations):
            ech.add(row)
        for row in ideal_slice_rows({"f": 1, "v": 1}, self.N,
                                    self._all_relations):
            ech.add(row)
        for row in self._quotient_rows(2, 2):
            ech.add(row)
        for i in range(self.N):
            for j in range(self.N):
                elem = {}
                for k in range(self.N):
                    w = self.z_word(i, k) + self.z_word(k, j)
                    elem[w] = elem.get(w, ZERO) + ONE
                zz = self.z_word(i, j)
                elem[zz] = elem.get(zz, ZERO) - ONE
                if ech.residue({w: v for w, v in elem.items()
                                if not v.is_zero()}):
                    raise ProjectionFailed(
                        f"projection identity fails at ({i}, {j})")
        return True

    # -- numeric star closure ------------------------------------------------

    def verify_star_relations(self, q0, tol=1e-9):
        """The relation ideal is star-closed, checked numerically.

        The star sends f^i to kappa_i v^i and v^i to f^i / kappa_i where
        kappa_i^2 is the dual-to-primal norm ratio, reverses words, and
        conjugates coefficients.  For c the kappa factors cancel exactly;
        for the quadratic families the starred relations are tested for
        membership in the numeric span of the matching ideal slice.
        """
        with mpmath.workdps(50):
            rs = self.rs
            if hasattr(q0, "numerator"):
                q0v = mpmath.mpf(q0.numerator) / mpmath.mpf(q0.denominator)
            else:
                q0v = mpmath.mpf(q0)
            t0 = mpmath.root(q0v, rs.m)
            kap = []
            for n, nd in zip(self.V.norms, dual_norms(self.V, self.V.norms)):
                kap.append(mpmath.sqrt(eval_mp(nd, t0).real
                                       / eval_mp(n, t0).real))

            def star_word(w):
                factor = mpmath.mpf(1)
                toks = []
                for kind, idx in reversed(w):
                    if kind == "f":
                        toks.append(("v", idx))
                        factor *= kap[idx]
                    else:
                        toks.append(("f", idx))
                        factor /= kap[idx]
                return tuple(toks), factor

            # c* = c holds with the kappa exponents cancelling exactly
            for w in self.central_element():
                toks, exps = [], {}
                for kind, idx in reversed(w):
                    toks.append(("v" if kind == "f" else "f", idx))
                    exps[idx] = exps.get(idx, 0) + (1 if kind == "f" else -1)
                if tuple(toks) != w or any(exps.values()):
                    raise StarMismatch("central element is not star-fixed")

            worst = mpmath.mpf(0)
            for name, target in (("ff", "vv"), ("vv", "ff"), ("vf", "vf")):
                prof = ({"f": 2} if target == "ff" else
                        {"v": 2} if target == "vv" else {"f": 1, "v": 1})
                cols = sorted(words_of(prof, self.N))
                colpos = {w: p for p, w in enumerate(cols)}
                span = []
                for row in ideal_slice_rows(prof, self.N,
                                            self._all_relations):
                    vec = [mpmath.mpc(0)] * len(cols)
                    for w, v in row.items():
                        vec[colpos[w]] += eval_mp(v, t0)
                    span.append(vec)
                for rel in self.relations[name]:
                    vec = [mpmath.mpc(0)] * len(cols)
                    for w, v in rel.items():
                        sw, factor = star_word(w)
                        vec[colpos[sw]] += mpmath.conj(eval_mp(v, t0)) * factor
                    worst = max(worst, _residual_norm(span, vec))
            if worst > tol:
                raise StarMismatch(
                    f"starred relations leave the ideal: residual "
                    f"{mpmath.nstr(worst)}")
            return float(worst)


def _residual_norm(span, vec):
    """Distance from vec to the column span, via normal equations."""
    if not span:
        return mpmath.sqrt(sum(abs(x) ** 2 for x in vec))
    A = mpmath.matrix(span).T
    b = mpmath.matrix(vec)
    G = A.H * A
    rhs = A.H * b
    # ridge-free solve; the Gram matrix of a spanning set can be singular,
    # so fall back to a tiny regularization when needed
    try:
        x = mpmath.lu_solve(G, rhs)
    except ZeroDivisionError:
        for r in range(G.rows):
            G[r, r] += mpmath.mpf("1e-40")
        x = mpmath.lu_solve(G, rhs)
    r = b - A * x
    return mpmath.sqrt(sum(abs(r[i]) ** 2 for i in range(r.rows)))


def build_coordinate_algebra(rs, s, max_degree=4, check_duals=False):
    from .braiding import build_family
    V, Vd, fam = build_family(rs, s, check=check_duals)
    return CoordinateAlgebra(V, Vd, fam, max_degree=max_degree)

"""Exact scalar arithmetic over the fraction field of Q(i)[t, t^-1].

Every symbolic quantity in this package lives in Q(i)(t) where t stands
for a fixed m-th root of the deformation parameter q.  A ``Poly`` is a
Laurent polynomial with Gaussian-rational coefficients, stored as integer
(re, im) pairs over one common positive denominator; a ``Scalar`` is a
reduced fraction num/den whose denominator is a monic honest polynomial
with nonzero constant term.  That normal form is unique, so equality is
structural and the text form round-trips exactly::

    parse(str(s)) == s

The text form of a polynomial is a ``+``-separated list of terms
``(a+bi) t^k`` in strictly decreasing powers of t, e.g.
``(1+0i) t^2 + (-1/2+1i)``; a fraction prints as ``(num)/(den)``.

Matrix helpers (Bareiss determinant, nullspace) work on plain lists of
lists of Scalars.  ``evaluate`` plugs in a rational q and either returns
exact Gaussian rationals (when q^(1/m) is rational) or interval-certified
mpmath values with a tracked error radius.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd

import mpmath

from .errors import (DivisionByZero, InternalConsistency, PoleAtSample,
                     ShapeError, UsageError)


# ---------------------------------------------------------------------------
# integer-level Laurent polynomials: dict {exp: (re, im)}, no zero values
# ---------------------------------------------------------------------------

def _zp_add(a, b):
    out = dict(a)
    for e, (x, y) in b.items():
        u, v = out.get(e, (0, 0))
        u += x
        v += y
        if u or v:
            out[e] = (u, v)
        elif e in out:
            del out[e]
    return out


def _zp_neg(a):
    return {e: (-x, -y) for e, (x, y) in a.items()}


def _zp_mul(a, b):
    if len(b) < len(a):
        a, b = b, a
    out = {}
    for e1, (x1, y1) in a.items():
        for e2, (x2, y2) in b.items():
            e = e1 + e2
            u, v = out.get(e, (0, 0))
            u += x1 * x2 - y1 * y2
            v += x1 * y2 + y1 * x2
            if u or v:
                out[e] = (u, v)
            elif e in out:
                del out[e]
    return out


def _zp_scale(a, c):
    # multiply by a Gaussian integer c = (x2, y2)
    x2, y2 = c
    if x2 == 0 and y2 == 0:
        return {}
    return {e: (x * x2 - y * y2, x * y2 + y * x2) for e, (x, y) in a.items()}


def _zp_scale_int(a, k):
    if k == 0:
        return {}
    return {e: (x * k, y * k) for e, (x, y) in a.items()}


def _zp_shift(a, k):
    if k == 0:
        return a
    return {e + k: c for e, c in a.items()}


def _zp_content(a):
    g = 0
    for x, y in a.values():
        g = gcd(g, gcd(abs(x), abs(y)))
        if g == 1:
            return 1
    return g or 1


def _zg_mul(c, d):
    x, y = c
    u, v = d
    return (x * u - y * v, x * v + y * u)


def _zg_pow(c, k):
    out = (1, 0)
    for _ in range(k):
        out = _zg_mul(out, c)
    return out


def _zg_divexact(c, d):
    # exact quotient of Gaussian integers (caller guarantees divisibility)
    x, y = c
    u, v = d
    n = u * u + v * v
    return ((x * u + y * v) // n, (y * u - x * v) // n)


def _zp_divexact_g(a, d):
    if d == (1, 0):
        return dict(a)
    return {e: _zg_divexact(c, d) for e, c in a.items()}


def _zp_prem(a, b):
    # canonical pseudo-remainder lc(b)^(deg a - deg b + 1) a mod b of
    # true (non-Laurent) integer polys, deg a >= deg b
    db = max(b)
    lb = b[db]
    r = dict(a)
    e = max(a) - db + 1
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r[dr]
        r = _zp_add(_zp_scale(r, lb), _zp_neg(_zp_scale(_zp_shift(b, dr - db), lr)))
        e -= 1
    if e > 0 and r:
        r = _zp_scale(r, _zg_pow(lb, e))
    return r


def _zp_gcd(a, b):
    # gcd of primitive true integer polys, up to a unit of Q(i), via the
    # subresultant remainder sequence (exact divisions keep coefficients
    # polynomially sized; the naive sequence blows up even at degree ~15)
    a = dict(a)
    b = dict(b)
    if max(a) < max(b):
        a, b = b, a
    g = (1, 0)
    h = (1, 0)
    while b:
        delta = max(a) - max(b)
        r = _zp_prem(a, b)
        a, b = b, r
        if not r:
            break
        b = _zp_divexact_g(r, _zg_mul(g, _zg_pow(h, delta)))
        g = a[max(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = _zg_divexact(_zg_pow(g, delta), _zg_pow(h, delta - 1))
    c = _zp_content(a)
    if c > 1:
        a = {e: (x // c, y // c) for e, (x, y) in a.items()}
    return a


class Poly:
    """Laurent polynomial over Q(i) with a common integer denominator."""

    __slots__ = ("c", "den", "_key")

    def __init__(self, c, den=1, reduced=False):
        if den == 0:
            raise DivisionByZero("polynomial with zero denominator")
        if den < 0:
            den = -den
            c = _zp_neg(c)
        if not reduced and den != 1 and c:
            g = gcd(_zp_content(c), den)
            if g > 1:
                den //= g
                c = {e: (x // g, y // g) for e, (x, y) in c.items()}
        if not c:
            den = 1
        self.c = c
        self.den = den
        self._key = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def const(cls, re_part=0, im_part=0):
        re_part = Fraction(re_part)
        im_part = Fraction(im_part)
        den = re_part.denominator * im_part.denominator // gcd(
            re_part.denominator, im_part.denominator)
        x = int(re_part * den)
        y = int(im_part * den)
        if x == 0 and y == 0:
            return cls({}, 1, reduced=True)
        return cls({0: (x, y)}, den)

    @classmethod
    def t_pow(cls, k):
        return cls({k: (1, 0)}, 1, reduced=True)

    @classmethod
    def from_coeffs(cls, coeffs):
        # coeffs: {exp: (Fraction-able re, Fraction-able im)}
        den = 1
        fr = {}
        for e, (x, y) in coeffs.items():
            x = Fraction(x)
            y = Fraction(y)
            fr[e] = (x, y)
            for d in (x.denominator, y.denominator):
                den = den * d // gcd(den, d)
        c = {}
        for e, (x, y) in fr.items():
            u = int(x * den)
            v = int(y * den)
            if u or v:
                c[e] = (u, v)
        return cls(c, den)

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return not self.c

    def deg(self):
        return max(self.c) if self.c else None

    def val(self):
        return min(self.c) if self.c else None

    def coeff(self, e):
        x, y = self.c.get(e, (0, 0))
        return (Fraction(x, self.den), Fraction(y, self.den))

    def key(self):
        if self._key is None:
            self._key = (self.den, tuple(sorted(self.c.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Poly) and self.den == other.den and self.c == other.c

    def __hash__(self):
        return hash(self.key())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        d1, d2 = self.den, other.den
        if d1 == d2:
            return Poly(_zp_add(self.c, other.c), d1)
        g = gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        return Poly(_zp_add(_zp_scale_int(self.c, m1), _zp_scale_int(other.c, m2)),
                    d1 * m1)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(_zp_neg(self.c), self.den, reduced=True)

    def __mul__(self, other):
        return Poly(_zp_mul(self.c, other.c), self.den * other.den)

    def shift(self, k):
        return Poly(_zp_shift(self.c, k), self.den, reduced=True)

    def conj(self):
        return Poly({e: (x, -y) for e, (x, y) in self.c.items()}, self.den,
                    reduced=True)

    def scale(self, re_part, im_part=0):
        f = Poly.const(re_part, im_part)
        return self * f

    def monic_lead(self):
        # leading coefficient as a Fraction pair
        d = self.deg()
        return self.coeff(d)

    def divexact(self, other):
        """Exact division in Q(i)[t, t^-1]; raises if the remainder is nonzero."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero():
            return Poly({}, 1, reduced=True)
        va, vb = self.val(), other.val()
        a = {e - va: (Fraction(x, self.den), Fraction(y, self.den))
             for e, (x, y) in self.c.items()}
        b = {e - vb: (Fraction(x, other.den), Fraction(y, other.den))
             for e, (x, y) in other.c.items()}
        db = max(b)
        lb = b[db]
        nb = lb[0] * lb[0] + lb[1] * lb[1]
        quo = {}
        while a:
            d = max(a)
            if d < db:
                raise InternalConsistency("inexact polynomial division")
            ar, ai = a[d]
            qr = (ar * lb[0] + ai * lb[1]) / nb
            qi = (ai * lb[0] - ar * lb[1]) / nb
            quo[d - db] = (qr, qi)
            for e, (br, bi) in b.items():
                x, y = a.get(e + d - db, (Fraction(0), Fraction(0)))
                x -= qr * br - qi * bi
                y -= qr * bi + qi * br
                if x or y:
                    a[e + d - db] = (x, y)
                elif e + d - db in a:
                    del a[e + d - db]
        return Poly.from_coeffs({e + va - vb: c for e, c in quo.items()})

    # -- output -----------------------------------------------------------

    def __str__(self):
        if not self.c:
            return "(0+0i)"
        parts = []
        for e in sorted(self.c, reverse=True):
            x, y = self.c[e]
            a = Fraction(x, self.den)
            b = Fraction(y, self.den)
            sb = f"+{b}i" if b >= 0 else f"{b}i"
            co = f"({a}{sb})"
            if e == 0:
                parts.append(co)
            elif e == 1:
                parts.append(f"{co} t")
            else:
                parts.append(f"{co} t^{e}")
        return " + ".join(parts)

    __repr__ = __str__


_P_ZERO = Poly({}, 1, reduced=True)
_P_ONE = Poly({0: (1, 0)}, 1, reduced=True)


def _poly_gcd(a: Poly, b: Poly) -> Poly:
    """gcd of two nonzero true polys in Q(i)[t], normalized monic."""
    ac = dict(a.c)
    bc = dict(b.c)
    for c in (ac, bc):
        g = _zp_content(c)
        if g > 1:
            for e, (x, y) in c.items():
                c[e] = (x // g, y // g)
    g = _zp_gcd(ac, bc)
    p = Poly(g, 1)
    lr, li = p.monic_lead()
    n = lr * lr + li * li
    return p.scale(lr / n, -li / n)


class Scalar:
    """Element of Q(i)(t) in reduced canonical form.

    num is Laurent; den is monic with nonzero constant term; the pair is
    coprime.  All arithmetic preserves the normal form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _P_ONE, reduced=False):
        if reduced:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise DivisionByZero("scalar with zero denominator")
        if num.is_zero():
            self.num = _P_ZERO
            self.den = _P_ONE
            return
        # shift all t-valuation out of the denominator
        vd = den.val()
        if vd:
            den = den.shift(-vd)
            num = num.shift(-vd)
        if den.c == _P_ONE.c and den.den == 1:
            self.num = num
            self.den = _P_ONE
            return
        vn = num.val()
        n0 = num.shift(-vn)
        g = _poly_gcd(n0, den)
        if g.deg() > 0:
            n0 = n0.divexact(g)
            den = den.divexact(g)
        lr, li = den.monic_lead()
        nn = lr * lr + li * li
        if (lr, li) != (Fraction(1), Fraction(0)):
            inv = (lr / nn, -li / nn)
            n0 = n0.scale(*inv)
            den = den.scale(*inv)
        self.num = n0.shift(vn)
        self.den = den

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_int(cls, k):
        return cls(Poly.const(k), _P_ONE, reduced=True)

    @classmethod
    def from_frac(cls, re_part, im_part=0):
        return cls(Poly.const(re_part, im_part), _P_ONE, reduced=True)

    @classmethod
    def t_pow(cls, k):
        return cls(Poly.t_pow(k), _P_ONE, reduced=True)

    @classmethod
    def i_unit(cls):
        return cls(Poly.const(0, 1), _P_ONE, reduced=True)

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == _P_ONE and self.den == _P_ONE

    def is_laurent(self):
        return self.den == _P_ONE

    def key(self):
        return (self.num.key(), self.den.key())

    def __eq__(self, other):
        if isinstance(other, int):
            other = Scalar.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return not self.num.is_zero()

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return Scalar.from_int(other)
        if isinstance(other, Fraction):
            return Scalar.from_frac(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            if self.den == _P_ONE:
                return Scalar(self.num + o.num, _P_ONE, reduced=True)
            return Scalar(self.num + o.num, self.den)
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == _P_ONE and o.den == _P_ONE:
            return Scalar(self.num * o.num, _P_ONE, reduced=True)
        return Scalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZero("inverting zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if k == 0:
            return ONE
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def conj(self):
        # complex conjugation, t treated as real
        return Scalar(self.num.conj(), self.den.conj(), reduced=True)

    # -- output -----------------------------------------------------------

    def __str__(self):
        if self.den == _P_ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return str(self)


ZERO = Scalar.from_int(0)
ONE = Scalar.from_int(1)
I = Scalar.i_unit()
T = Scalar.t_pow(1)


def normalize(s):
    """Return s in canonical reduced form; accepts a Scalar or its text form."""
    if isinstance(s, str):
        return parse(s)
    if isinstance(s, (int, Fraction)):
        return Scalar.from_frac(s)
    if not isinstance(s, Scalar):
        raise ShapeError(f"cannot normalize {type(s).__name__}")
    return Scalar(s.num, s.den)


# ---------------------------------------------------------------------------
# parsing the canonical text form
# ---------------------------------------------------------------------------

_TERM_RE = _re.compile(
    r"^\((-?\d+(?:/\d+)?)([+-]\d+(?:/\d+)?)i\)(?: t(?:\^(-?\d+))?)?$")


def _parse_poly(text):
    coeffs = {}
    for term in text.split(" + "):
        m = _TERM_RE.match(term.strip())
        if not m:
            raise ShapeError(f"cannot parse polynomial term {term!r}")
        a = Fraction(m.group(1))
        b = Fraction(m.group(2))
        if m.group(3) is not None:
            e = int(m.group(3))
        elif term.strip().endswith(" t"):
            e = 1
        else:
            e = 0
        if e in coeffs:
            raise ShapeError(f"duplicate exponent {e} in {text!r}")
        coeffs[e] = (a, b)
    return Poly.from_coeffs(coeffs)


def parse(text):
    """Parse the canonical text form back into a Scalar (exact round trip)."""
    text = text.strip()
    if text.startswith("(") and ")/(" in text:
        # try the (num)/(den) split at the matching outer paren
        depth = 0
        for pos, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    if pos + 1 < len(text) and text[pos + 1] == "/" and text.endswith(")"):
                        num = _parse_poly(text[1:pos])
                        den = _parse_poly(text[pos + 3:-1])
                        return Scalar(num, den)
                    break
    return Scalar(_parse_poly(text), _P_ONE)


# ---------------------------------------------------------------------------
# matrices: plain lists of lists of Scalars
# ---------------------------------------------------------------------------

def _shape(A):
    if not isinstance(A, (list, tuple)) or not A:
        raise ShapeError("matrix must be a nonempty list of rows")
    ncols = None
    for row in A:
        if not isinstance(row, (list, tuple)):
            raise ShapeError("matrix rows must be lists")
        if ncols is None:
            ncols = len(row)
        elif len(row) != ncols:
            raise ShapeError("ragged matrix")
    if ncols == 0:
        raise ShapeError("matrix with zero columns")
    return len(A), ncols


def nullspace(A):
    """Basis of the right kernel of A, via Gauss-Jordan over Q(i)(t).

    Each basis vector carries a 1 in its free coordinate, so the result is
    deterministic; an invertible matrix gives [].
    """
    m, n = _shape(A)
    rows = [list(r) for r in A]
    piv_cols = []
    r = 0
    for col in range(n):
        pr = next((k for k in range(r, m) if not rows[k][col].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for k in range(m):
            if k != r and not rows[k][col].is_zero():
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        piv_cols.append(col)
        r += 1
        if r == m:
            break
    basis = []
    for fc in range(n):
        if fc in piv_cols:
            continue
        vec = [ZERO] * n
        vec[fc] = ONE
        for i, pc in enumerate(piv_cols):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def determinant(A):
    """Exact determinant via fraction-free Bareiss elimination.

    Rows are cleared of denominators first, so the elimination runs on
    Laurent polynomials where every division is exact.
    """
    m, n = _shape(A)
    if m != n:
        raise ShapeError("determinant of a non-square matrix")
    divisor = _P_ONE
    M = []
    for row in A:
        fac = _P_ONE
        for x in row:
            if not isinstance(x, Scalar):
                raise ShapeError("matrix entries must be Scalars")
            if x.den != _P_ONE:
                fac = fac * x.den
        M.append([x.num * fac.divexact(x.den) if x.den != _P_ONE else x.num * fac
                  for x in row])
        divisor = divisor * fac
    sign = 1
    prev = _P_ONE
    for k in range(n - 1):
        if M[k][k].is_zero():
            pr = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if pr is None:
                return ZERO
            M[k], M[pr] = M[pr], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).divexact(prev)
            M[i][k] = _P_ZERO
        prev = M[k][k]
    det = M[n - 1][n - 1]
    if sign < 0:
        det = -det
    return Scalar(det, divisor)


def mat_mul(A, B):
    ma, na = _shape(A)
    mb, nb = _shape(B)
    if na != mb:
        raise ShapeError("matrix product shape mismatch")
    out = []
    for i in range(ma):
        row = []
        for j in range(nb):
            acc = ZERO
            for k in range(na):
                if not A[i][k].is_zero() and not B[k][j].is_zero():
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# evaluation at a numeric sample q0
# ---------------------------------------------------------------------------

class EvalResult:
    """Value of a Scalar at t = q0^(1/m).

    exact=True: re/im are Fractions and err == 0.  Otherwise re/im are
    mpmath floats (interval midpoints) and err bounds the absolute error
    of each part.
    """

    __slots__ = ("re", "im", "exact", "err")

    def __init__(self, re_part, im_part, exact, err):
        self.re = re_part
        self.im = im_part
        self.exact = exact
        self.err = err

    def __repr__(self):
        if self.exact:
            return f"EvalResult({self.re}, {self.im}, exact)"
        return f"EvalResult({self.re}, {self.im}, err<={self.err})"


def _nth_root_frac(fr: Fraction, n: int):
    # exact n-th root of a positive rational, or None
    def iroot(k):
        if k == 1:
            return 1
        lo, hi = 1, 1 << ((k.bit_length() + n - 1) // n + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** n < k:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** n == k else None
    a = iroot(fr.numerator)
    b = iroot(fr.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _poly_eval_frac(p: Poly, t0: Fraction):
    re_acc = Fraction(0)
    im_acc = Fraction(0)
    for e, (x, y) in p.c.items():
        w = t0 ** e
        re_acc += x * w
        im_acc += y * w
    return (re_acc / p.den, im_acc / p.den)


def evaluate(s: Scalar, q0, m: int = 1):
    """Evaluate s at t = q0^(1/m) for rational q0 in (0, 1].

    Returns an EvalResult: exact Gaussian rationals when the root is
    rational, otherwise interval-certified floats.  Raises PoleAtSample
    when the denominator vanishes there (or cannot be certified nonzero).
    """
    q0 = Fraction(q0)
    if not (0 < q0 <= 1):
        raise UsageError(f"sample q={q0} outside (0, 1]")
    if m < 1:
        raise UsageError("m must be a positive integer")
    t0 = _nth_root_frac(q0, m)
    if t0 is not None:
        dre, dim_ = _poly_eval_frac(s.den, t0)
        if dre == 0 and dim_ == 0:
            raise PoleAtSample(f"denominator vanishes at q={q0}")
        nre, nim = _poly_eval_frac(s.num, t0)
        nn = dre * dre + dim_ * dim_
        return EvalResult((nre * dre + nim * dim_) / nn,
                          (nim * dre - nre * dim_) / nn, True, Fraction(0))
    iv = mpmath.iv
    for dps in (40, 80, 160):
        with mpmath.workdps(dps):
            old = iv.prec
            iv.prec = mpmath.mp.prec
            try:
                tq = iv.mpf(q0.numerator) / iv.mpf(q0.denominator)
                tv = iv.exp(iv.log(tq) / m)

                def pv(p):
                    r_acc = iv.mpf(0)
                    i_acc = iv.mpf(0)
                    for e, (x, y) in p.c.items():
                        w = tv ** e
                        r_acc += x * w
                        i_acc += y * w
                    d = iv.mpf(p.den)
                    return r_acc / d, i_acc / d

                dre, dim_ = pv(s.den)
                nn = dre * dre + dim_ * dim_
                if 0 in nn:
                    continue
                nre, nim = pv(s.num)
                vre = (nre * dre + nim * dim_) / nn
                vim = (nim * dre - nre * dim_) / nn
                err = max(mpmath.mpf(vre.delta.b), mpmath.mpf(vim.delta.b))
                return EvalResult(mpmath.mpf(vre.mid.a), mpmath.mpf(vim.mid.a),
                                  False, err)
            finally:
                iv.prec = old
    raise PoleAtSample(
        f"denominator not certified nonzero at q={q0} (pole or too close to one)")


def eval_mp(s: Scalar, t0):
    """Fast non-certified evaluation at an mpmath real t0 (for numeric suites)."""
    def pv(p):
        acc = mpmath.mpc(0)
        for e, (x, y) in p.c.items():
            acc += mpmath.mpc(x, y) * t0 ** e
        return acc / p.den
    d = pv(s.den)
    if d == 0:
        raise PoleAtSample("denominator vanishes at sample")
    return pv(s.num) / d


def eval_frac(s: Scalar, t0: Fraction):
    """Exact evaluation at a rational t0 > 0, as a Gaussian-rational pair."""
    dre, dim_ = _poly_eval_frac(s.den, t0)
    if dre == 0 and dim_ == 0:
        raise PoleAtSample("denominator vanishes at sample")
    nre, nim = _poly_eval_frac(s.num, t0)
    nn = dre * dre + dim_ * dim_
    return ((nre * dre + nim * dim_) / nn, (nim * dre - nre * dim_) / nn)

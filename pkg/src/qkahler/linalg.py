"""Sparse exact row reduction over Q(i)(t).

Rows are dicts {column_key: Scalar}; column keys are totally ordered
hashables (tuples of ints, or tuples of tuples).  The Echelon class keeps
an online row-echelon form with unit pivots: feed rows in, then ask for
membership residues, a reduced row-echelon form, or a nullspace basis.
This one structure backs the intertwiner solves, the relation-ideal
slice membership tests, and the quadratic-constraint elimination.
"""

from __future__ import annotations

from .errors import InternalConsistency, ShapeError


def row_sub_scaled(row, s, prow):
    """row -= s * prow, in place, dropping exact zeros."""
    for c, v in prow.items():
        cur = row.get(c)
        nv = -(s * v) if cur is None else cur - s * v
        if nv.is_zero():
            row.pop(c, None)
        else:
            row[c] = nv


class Echelon:
    """Online row echelon form with unit pivots over the exact scalars."""

    def __init__(self):
        self.pivots = {}  # pivot column -> normalized row

    def _reduce(self, row):
        row = dict(row)
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                return row, c
            row_sub_scaled(row, row[c], prow)
        return {}, None

    def add(self, row):
        """Insert a row; returns its pivot column, or None if dependent."""
        red, c = self._reduce(row)
        if not red:
            return None
        inv = red[c].inverse()
        self.pivots[c] = {k: v * inv for k, v in red.items()}
        return c

    def residue(self, row):
        """The row reduced against the current pivots."""
        return self._reduce(row)[0]

    def contains(self, row):
        return not self._reduce(row)[0]

    def rank(self):
        return len(self.pivots)

    def rref(self):
        """Back-eliminate so every pivot row is clean of other pivot columns."""
        for p in sorted(self.pivots, reverse=True):
            prow = self.pivots[p]
            for p2 in sorted(self.pivots):
                if p2 >= p:
                    break
                row2 = self.pivots[p2]
                if p in row2:
                    row_sub_scaled(row2, row2[p], prow)

    def nullspace_basis(self, universe):
        """Kernel basis of the row span, over the given column universe.

        Each basis vector is a dict carrying 1 at its free column.  Call
        after feeding all rows; this performs the back-elimination pass.
        """
        self.rref()
        universe = sorted(universe)
        uset = set(universe)
        pivset = set(self.pivots)
        for c in pivset:
            if c not in uset:
                raise ShapeError("pivot column outside the declared universe")
        from .scalars import ONE
        basis = []
        for free in universe:
            if free in pivset:
                continue
            vec = {free: ONE}
            for p, prow in self.pivots.items():
                v = prow.get(free)
                if v is not None:
                    vec[p] = -v
            basis.append(vec)
        return basis


def dense_solve_unique(M, target):
    """Solve M c = target for the unique c; M columns must be independent.

    M is a list of rows (lists of Scalars), target a list of Scalars.
    Returns the solution list, or raises: ShapeError on shape problems,
    InternalConsistency when inconsistent, ValueError('underdetermined')
    when the solution is not unique.
    """
    from .scalars import ZERO, nullspace
    if not M or any(len(r) != len(M[0]) for r in M):
        raise ShapeError("bad coefficient matrix")
    ncols = len(M[0])
    aug = [list(r) + [-t] for r, t in zip(M, target)]
    ker = nullspace(aug)
    sols = [v for v in ker if not v[ncols].is_zero()]
    if not sols:
        raise InternalConsistency("linear system inconsistent")
    if len(ker) > 1:
        raise ValueError("underdetermined")
    v = sols[0]
    inv = v[ncols].inverse()
    return [x * inv for x in v[:ncols]]

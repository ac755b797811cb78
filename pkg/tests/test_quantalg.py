from fractions import Fraction

import pytest

from qkahler.errors import DegreeLimit, StarMismatch
from qkahler.quantalg import (build_coordinate_algebra, ideal_slice_rows,
                              words_of)
from qkahler.rootdata import build_root_system
from qkahler.scalars import ONE, Scalar


def tp(k):
    return Scalar.t_pow(k)


def test_word_enumeration():
    ws = words_of({"f": 1, "v": 1}, 2)
    assert len(ws) == 8
    assert (("f", 0), ("v", 1)) in ws and (("v", 1), ("f", 0)) in ws
    assert len(words_of({"f": 2}, 3)) == 9
    assert words_of({}, 5) == [()]


def test_a1_exchange_relations_frozen():
    A = build_coordinate_algebra(build_root_system("A", 1), 1)
    # v^0 f^0 = f^0 v^0
    assert A.normal_form((("v", 0), ("f", 0))) == {(("f", 0), ("v", 0)): ONE}
    # v^1 f^1 = (q^{-2} - 1) f^0 v^0 + f^1 v^1   (t = q^{1/2})
    nf = A.normal_form((("v", 1), ("f", 1)))
    assert nf == {(("f", 0), ("v", 0)): tp(-4) - ONE,
                  (("f", 1), ("v", 1)): ONE}
    # the cross terms pick up a plain q
    assert A.normal_form((("v", 0), ("f", 1))) == {(("f", 1), ("v", 0)): tp(2)}
    assert A.normal_form((("v", 1), ("f", 0))) == {(("f", 0), ("v", 1)): tp(2)}


def test_a1_f_band_is_quantum_plane():
    A = build_coordinate_algebra(build_root_system("A", 1), 1)
    ech = A.ideal_echelon(2, 0)
    assert ech.rank() == 1
    rel = {(("f", 0), ("f", 1)): ONE, (("f", 1), ("f", 0)): -tp(2)}
    assert ech.contains(rel)


def test_normal_form_agrees_with_slices():
    A = build_coordinate_algebra(build_root_system("A", 2), 1)
    for w in [(("v", 0), ("f", 2), ("v", 1)),
              (("v", 2), ("v", 0), ("f", 1)),
              (("f", 0), ("v", 1), ("f", 2))]:
        nf = A.normal_form(w)
        assert all(not (u[p][0] == "v" and u[p + 1][0] == "f")
                   for u in nf for p in range(len(u) - 1))
        diff = dict(nf)
        diff[w] = diff.get(w, ONE - ONE) - ONE
        prof = {}
        for kind, _ in w:
            prof[kind] = prof.get(kind, 0) + 1
        ech = A.ideal_echelon(prof.get("f", 0), prof.get("v", 0))
        assert ech.contains({u: c for u, c in diff.items() if not c.is_zero()})


@pytest.mark.parametrize("series,rank,dims", [
    ("A", 1, {(1, 0): 2, (2, 0): 3, (3, 0): 4, (4, 0): 5, (1, 1): 4,
              (2, 1): 6, (2, 2): 9}),
    ("A", 2, {(1, 0): 3, (2, 0): 6, (3, 0): 10, (4, 0): 15, (1, 1): 9,
              (2, 2): 36}),
])
def test_graded_dims_frozen(series, rank, dims):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    for (nf, nv), want in dims.items():
        assert A.dim(nf, nv) == want


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2)])
def test_graded_dims_against_weyl_oracle(series, rank):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    report = A.verify_graded_dims()
    assert report[(2, 2)] == A._weyl_slice(2) ** 2


def test_b2_quadric_dimension():
    # one quadric relation among the 25 ff products in rank-5
    A = build_coordinate_algebra(build_root_system("B", 2), 1, max_degree=2)
    assert A.dim(2, 0) == 14
    assert A.dim(1, 1) == 25


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2)])
def test_centrality(series, rank):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    assert A.verify_central() is True


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2)])
def test_projection_identities(series, rank):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    assert A.verify_projection_identities() is True


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2)])
def test_counit(series, rank):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    assert A.verify_counit() is True
    assert (A.counit({A.z_word(A.base, A.base): ONE}) - ONE).is_zero()
    assert A.counit({A.z_word(0, A.base): ONE}).is_zero() or A.base == 0


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2)])
def test_star_closure_numeric(series, rank):
    A = build_coordinate_algebra(build_root_system(series, rank), 1)
    dev = A.verify_star_relations(Fraction(1, 2), tol=1e-9)
    assert dev < 1e-9


def test_star_closure_detects_corruption():
    A = build_coordinate_algebra(build_root_system("A", 1), 1)
    A.relations["ff"] = [dict(r) for r in A.relations["ff"]]
    w = next(iter(A.relations["ff"][0]))
    A.relations["ff"][0][w] = A.relations["ff"][0][w] + tp(3)
    with pytest.raises(StarMismatch):
        A.verify_star_relations(Fraction(1, 2))


def test_degree_limit_guard():
    A = build_coordinate_algebra(build_root_system("A", 1), 1)
    with pytest.raises(DegreeLimit):
        A.dim(5, 0)
    B = build_coordinate_algebra(build_root_system("A", 1), 1, max_degree=2)
    with pytest.raises(DegreeLimit):
        B.verify_projection_identities()


def test_ideal_rows_respect_weights():
    # every spanning row is weight-homogeneous for wt(f^i) = wt_i,
    # wt(v^i) = -wt_i
    rs = build_root_system("A", 2)
    A = build_coordinate_algebra(rs, 1)

    def wt(word):
        acc = (0,) * rs.rank
        for kind, idx in word:
            mu = A.V.weights[idx]
            sgn = 1 if kind == "f" else -1
            acc = tuple(a + sgn * b for a, b in zip(acc, mu))
        return acc

    for row in ideal_slice_rows({"f": 1, "v": 1}, A.N, A._all_relations):
        wts = {wt(w) for w in row}
        assert len(wts) == 1

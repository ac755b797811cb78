from fractions import Fraction

import pytest

from qkahler.braiding import build_family
from qkahler.errors import PoleAtSample, RealityFailed
from qkahler.hkcalc import build_T
from qkahler.kahlercert import (build_phi_complex, compute_I1, det_value_at,
                                integrality_diagnostic, kappa_terms,
                                lefschetz_certificate, phi_kappa,
                                star_reality_check, verify_classical_limit)
from qkahler.rootdata import build_root_system, classical_flag_dim
from qkahler.scalars import I, ONE, ZERO, Scalar, parse


def tp(k):
    return Scalar.t_pow(k)


def complex_for(series, rank):
    rs = build_root_system(series, rank)
    V, Vd, fam = build_family(rs, 1)
    return rs, V, fam, build_phi_complex(fam, 1)


@pytest.mark.parametrize("series,rank,idx", [("A", 1, (0,)), ("A", 2, (0, 1)),
                                             ("B", 2, (1, 2, 3))])
def test_generator_index_set(series, rank, idx):
    rs = build_root_system(series, rank)
    V, Vd, fam = build_family(rs, 1)
    I1, M = compute_I1(rs, 1, V)
    assert I1 == idx
    assert M == classical_flag_dim(rs, 1)
    assert V.hw_index() not in I1


@pytest.mark.parametrize("series,rank,dims", [
    ("A", 1, (1, 2, 1)),
    ("A", 2, (1, 4, 6, 4, 1)),
    ("B", 2, (1, 6, 15, 20, 15, 6, 1)),
])
def test_dimension_gate(series, rank, dims):
    rs, V, fam, phi = complex_for(series, rank)
    assert phi.dims == dims
    assert phi.proof_grade
    assert len(phi.Q) == phi.M * (2 * phi.M + 1)


def test_relations_are_weight_homogeneous():
    rs, V, fam, phi = complex_for("B", 2)
    for row in phi.Q:
        wts = {phi._word_weight(w) for w in row}
        assert len(wts) == 1, row


def test_kappa_a1_frozen():
    rs, V, fam, phi = complex_for("A", 1)
    terms = kappa_terms(phi)
    assert terms == [{"i": 1, "q_power": "-1", "coeff": "(0+1i) t^-2"}]
    kap = phi_kappa(phi)
    assert set(kap) == {(0, 1)}
    assert (kap[(0, 1)] - (-I) * tp(-6)).is_zero()


def test_kappa_a2_pairings():
    rs, V, fam, phi = complex_for("A", 2)
    powers = sorted(t["q_power"] for t in kappa_terms(phi))
    assert powers == ["-2", "0"]


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2), ("B", 2)])
def test_kappa_reality_and_bidegree(series, rank):
    rs, V, fam, phi = complex_for(series, rank)
    kap = phi_kappa(phi)
    assert star_reality_check(phi, kap)
    assert {phi.bidegree(w) for w in kap} == {(1, 1)}


def test_reality_check_detects_corruption():
    rs, V, fam, phi = complex_for("A", 2)
    kap = phi_kappa(phi)
    word = next(iter(kap))
    kap[word] = kap[word] * I  # now real, and star negates it
    with pytest.raises(RealityFailed):
        star_reality_check(phi, kap)


@pytest.mark.parametrize("series,rank,squares", [("A", 1, True),
                                                 ("A", 2, True),
                                                 ("B", 2, False)])
def test_classical_limit(series, rank, squares):
    rs, V, fam, phi = complex_for(series, rank)
    report = verify_classical_limit(phi)
    assert report["anticommute_at_1"]
    assert report["squares_vanish"] is squares


def test_certificate_a1():
    rs, V, fam, phi = complex_for("A", 1)
    kap = phi_kappa(phi)
    cert = lefschetz_certificate(phi, kap, [Fraction(1, 2)])
    assert cert["verdict"] == "pass"
    assert cert["dims"] == [1, 2, 1]
    assert cert["I1"] == [1]
    row = cert["lefschetz"][0]
    assert row["det_poly"] == "(-1+0i) t^-6"
    # a unit Laurent monomial: never vanishes on (0, 1]
    det = parse(row["det_poly"])
    assert det.is_laurent() and len(det.num.c) == 1
    assert all(v["nonzero"] for v in row["values"])
    assert row["values"][0]["q"] == "1"


def test_certificate_a2_frozen_dets():
    rs, V, fam, phi = complex_for("A", 2)
    kap = phi_kappa(phi)
    cert = lefschetz_certificate(phi, kap, [Fraction(1, 2)])
    dets = [r["det_poly"] for r in cert["lefschetz"]]
    assert (parse(dets[0]) - (tp(-15) - Scalar.from_int(3) * tp(-21))).is_zero()
    assert (parse(dets[1]) - (Scalar.from_int(2) * tp(-42) - tp(-36))).is_zero()
    at_one = [r["values"][0] for r in cert["lefschetz"]]
    assert [v["value"]["re"] for v in at_one] == ["-2", "1"]
    assert all(v["nonzero"] for r in cert["lefschetz"] for v in r["values"])
    assert cert["integrality_diagnostic"]["all_integral"]


def test_certificate_b2():
    rs, V, fam, phi = complex_for("B", 2)
    kap = phi_kappa(phi)
    cert = lefschetz_certificate(phi, kap, [Fraction(1, 2)],
                                 closedness_witness={"idT1": True,
                                                     "idT2": True,
                                                     "del_delbar": True})
    assert cert["verdict"] == "pass"
    assert cert["M"] == 3 and len(cert["lefschetz"]) == 3
    at_one = [r["values"][0]["value"]["re"] for r in cert["lefschetz"]]
    assert at_one == ["6", "64", "-2"]
    assert cert["closedness_witness"] == {"idT1": True, "idT2": True,
                                          "del_delbar": True}
    assert cert["integrality_diagnostic"]["all_integral"]


def test_certificate_reuses_prebuilt_tensor():
    rs = build_root_system("A", 1)
    V, Vd, fam = build_family(rs, 1)
    T = build_T(fam)
    I1, M = compute_I1(rs, 1, V)
    phi = build_phi_complex(fam, 1, T=T, I1=I1)
    assert phi.dims == (1, 2, 1)


def test_wedge_power_matches_iterated_wedge():
    rs, V, fam, phi = complex_for("A", 2)
    kap = phi_kappa(phi)
    ktilde = {w: v * (-I) for w, v in kap.items()}
    sq = phi.wedge_power(ktilde, 2)
    for w in phi.basis(1):
        one_shot = phi.wedge(sq, {w: ONE})
        stepped = phi.wedge(ktilde, phi.wedge(ktilde, {w: ONE}))
        diff = dict(one_shot)
        for ww, v in stepped.items():
            diff[ww] = diff.get(ww, ZERO) - v
        assert all(x.is_zero() for x in diff.values())


def test_sample_verdict_detects_exact_zero():
    # t^2 - 1/2 vanishes exactly at t = sqrt(1/2), i.e. q = 1/2 with m = 2
    det = tp(2) - Scalar.from_frac(Fraction(1, 2))
    res = det_value_at(det, Fraction(1, 2), 2)
    assert res["nonzero"] is False
    res = det_value_at(det, Fraction(1, 3), 2)
    assert res["nonzero"] is True


def test_sample_verdict_reports_pole():
    den = tp(2) - Scalar.from_frac(Fraction(1, 2))
    with pytest.raises(PoleAtSample):
        det_value_at(den.inverse(), Fraction(1, 2), 2)


@pytest.mark.parametrize("series,rank,ncoeffs", [("A", 1, 1), ("A", 2, 7),
                                                  ("B", 2, 22)])
def test_integrality_diagnostic(series, rank, ncoeffs):
    rs, V, fam, phi = complex_for(series, rank)
    diag = integrality_diagnostic(phi)
    assert diag["checked"] == ncoeffs
    assert diag["all_integral"]

"""Release gate: one test per acceptance criterion, at the stated
tolerances and time budgets.  Run with `pytest -v` so each criterion
reports its own pass/fail line."""

import json
import re
import time
from fractions import Fraction

import pytest
from click.testing import CliRunner

from qkahler.braiding import (build_family, verify_appendix_duality,
                              verify_conjugation)
from qkahler.cli import main as cli_main
from qkahler.hkcalc import (build_T, build_calc_tensors, verify_del_delbar,
                            verify_idT1, verify_idT2,
                            verify_star_tensor_identities,
                            verify_tbraid_constant)
from qkahler.kahlercert import (build_phi_complex, lefschetz_certificate,
                                phi_kappa)
from qkahler.quantalg import CoordinateAlgebra
from qkahler.rootdata import build_root_system
from qkahler.scalars import Scalar, parse

Q_SAMPLES = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
TOL = 1e-9

_cache = {}


def family(series, rank):
    if (series, rank) not in _cache:
        rs = build_root_system(series, rank)
        V, Vd, fam = build_family(rs, 1)
        _cache[(series, rank)] = (rs, V, Vd, fam)
    return _cache[(series, rank)]


def budget(t0, seconds, label):
    dt = time.time() - t0
    print(f"{label}: {dt:.2f}s (budget {seconds}s)")
    assert dt <= seconds, f"{label} over budget: {dt:.2f}s > {seconds}s"


def test_criterion_1_braiding_duality_suite():
    t0 = time.time()
    for series, rank in (("A", 1), ("A", 2), ("B", 2)):
        rs, V, Vd, fam = family(series, rank)
        report = verify_appendix_duality(rs, 1)
        assert report["exact"] is True
        assert set(report["checks"]) >= {"dual-rels", "inverse-pairs",
                                         "double-dual", "braid-rel"}
    budget(t0, 120, "criterion 1")


def test_criterion_2_conjugation_suite():
    t0 = time.time()
    worst = 0.0
    for series, rank in (("A", 1), ("A", 2)):
        rs, V, Vd, fam = family(series, rank)
        ct = build_calc_tensors(fam, 1)
        for q0 in Q_SAMPLES:
            worst = max(worst, verify_conjugation(fam, q0, TOL))
            worst = max(worst, verify_star_tensor_identities(ct, q0, TOL))
    print(f"max conjugation deviation: {worst:.3e}")
    assert worst <= TOL
    budget(t0, 60, "criterion 2")


def test_criterion_3_trace_identity_suite():
    t0 = time.time()
    for series, rank in (("A", 1), ("A", 2)):
        rs, V, Vd, fam = family(series, rank)
        T = build_T(fam)
        verify_idT1(T, fam, mode="symbolic")
        verify_idT2(T, fam)
    rs, V, Vd, fam = family("B", 2)
    T = build_T(fam)
    verify_idT1(T, fam, mode="sampled", q_points=Q_SAMPLES)
    verify_idT2(T, fam)
    # the braid partial trace collapses to one nonzero constant
    for (series, rank), power in ((("A", 1), 3), (("A", 2), 8),
                                  (("B", 2), 8)):
        rs, V, Vd, fam = family(series, rank)
        c = verify_tbraid_constant(fam)
        assert not c.is_zero()
        assert (c - Scalar.t_pow(power)).is_zero()
    budget(t0, 600, "criterion 3")


def test_criterion_4_coordinate_algebra_suite():
    t0 = time.time()
    for series, rank in (("A", 1), ("A", 2)):
        rs, V, Vd, fam = family(series, rank)
        alg = CoordinateAlgebra(V, Vd, fam, max_degree=4)
        alg.verify_central()
        alg.verify_projection_identities()
        dev = alg.verify_star_relations(Fraction(1, 2), TOL)
        assert dev <= TOL
    budget(t0, 180, "criterion 4")


def test_criterion_5_bimodule_calculus_suite():
    t0 = time.time()
    for series, rank in (("A", 1), ("A", 2)):
        rs, V, Vd, fam = family(series, rank)
        alg = CoordinateAlgebra(V, Vd, fam, max_degree=4)
        ct = build_calc_tensors(fam, 1)
        verify_del_delbar(alg, ct, max_degree=4)
    budget(t0, 300, "criterion 5")


def test_criterion_6_complex_dimension_gate():
    t0 = time.time()
    expected = {("A", 1): (1, 2, 1),
                ("A", 2): (1, 4, 6, 4, 1),
                ("B", 2): (1, 6, 15, 20, 15, 6, 1)}
    for (series, rank), dims in expected.items():
        rs, V, Vd, fam = family(series, rank)
        phi = build_phi_complex(fam, 1)
        assert phi.dims == dims
    budget(t0, 300, "criterion 6")


def test_criterion_7_kahler_certificate():
    t0 = time.time()
    for series, rank in (("A", 1), ("A", 2)):
        rs, V, Vd, fam = family(series, rank)
        T = build_T(fam)
        alg = CoordinateAlgebra(V, Vd, fam, max_degree=4)
        ct = build_calc_tensors(fam, 1)
        witness = {"idT1": False, "idT2": False, "del_delbar": False}
        verify_idT1(T, fam, mode="symbolic")
        witness["idT1"] = True
        verify_idT2(T, fam)
        witness["idT2"] = True
        verify_del_delbar(alg, ct, max_degree=4)
        witness["del_delbar"] = True
        phi = build_phi_complex(fam, 1, T=T)
        kappa = phi_kappa(phi)
        cert = lefschetz_certificate(phi, kappa, [Fraction(1, 2)],
                                     closedness_witness=witness)
        assert cert["verdict"] == "pass"
        assert cert["reality"] is True
        assert cert["bidegree"] == [1, 1]
        assert cert["closedness_witness"] == {"idT1": True, "idT2": True,
                                              "del_delbar": True}
        for row in cert["lefschetz"]:
            assert row["det_is_laurent"]
            det = parse(row["det_poly"])
            assert not det.is_zero()
            qs = {v["q"] for v in row["values"]}
            assert {"1", "1/2"} <= qs
            assert all(v["nonzero"] for v in row["values"])
        if series == "A" and rank == 1:
            det = parse(cert["lefschetz"][0]["det_poly"])
            # a single unit monomial: nonvanishing on all of (0, 1]
            assert len(det.num.c) == 1 and det.num.den == 1
            (exp, coeff), = det.num.c.items()
            assert coeff in ((1, 0), (-1, 0), (0, 1), (0, -1))
            assert exp == -6  # t^-6 = (unit) * q^-1 at m = 2
    budget(t0, 180, "criterion 7")


def test_criterion_8_deterministic_reports():
    t0 = time.time()
    outs = []
    for jobs in ("1", "2", "4"):
        res = CliRunner().invoke(cli_main, ["--type", "A", "--rank", "1",
                                            "--node", "1", "--suites", "all",
                                            "--jobs", jobs])
        assert res.exit_code == 0, res.output
        outs.append(re.sub(r'"seconds": [0-9.eE+-]+', '"seconds": 0',
                           res.output))
    assert outs[0] == outs[1] == outs[2]
    json.loads(res.output)  # still well-formed
    budget(t0, 120, "criterion 8")

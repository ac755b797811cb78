import json
import re

from click.testing import CliRunner

from qkahler.cli import catalog_rows, main


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def strip_timings(text):
    return re.sub(r'"seconds": [0-9.eE+-]+', '"seconds": 0', text)


def test_catalog_pins():
    rows = {(r["series"], r["rank"], r["node"]): r for r in catalog_rows()}
    assert rows[("A", 1, 1)]["N"] == 2
    assert rows[("A", 1, 1)]["M"] == 1
    assert rows[("A", 1, 1)]["m"] == 2
    assert rows[("A", 2, 1)]["N"] == 3
    assert rows[("A", 2, 1)]["M"] == 2
    assert rows[("A", 2, 1)]["m"] == 3
    assert ("C", 3, 1) not in rows


def test_catalog_flag():
    res = invoke("--catalog")
    assert res.exit_code == 0
    assert "series" in res.output
    assert re.search(r"B\s+2\s+1\s+5\s+3\s+1", res.output)


def test_invalid_node_is_usage_error():
    res = invoke("--type", "A", "--rank", "2", "--node", "3")
    assert res.exit_code == 2


def test_bad_sample_point_is_usage_error():
    res = invoke("--type", "A", "--rank", "1", "--node", "1", "--q", "0")
    assert res.exit_code == 2
    res = invoke("--type", "A", "--rank", "1", "--node", "1", "--q", "x")
    assert res.exit_code == 2


def test_unknown_suite_is_usage_error():
    res = invoke("--type", "A", "--rank", "1", "--node", "1",
                 "--suites", "bogus")
    assert res.exit_code == 2


def test_missing_case_is_usage_error():
    assert invoke().exit_code == 2


def test_full_a1_run_passes():
    res = invoke("--type", "A", "--rank", "1", "--node", "1",
                 "--suites", "all", "--q", "1/2", "--mode", "symbolic")
    assert res.exit_code == 0, res.output
    report = json.loads(res.output)
    assert report["passed"] is True
    assert set(report["suites"]) == {"appendixA", "appendixB", "algebra",
                                     "calculus", "kahler"}
    cert = report["suites"]["kahler"]["certificate"]
    assert cert["verdict"] == "pass"
    assert cert["closedness_witness"] == {"idT1": True, "idT2": True,
                                          "del_delbar": True}
    assert cert["lefschetz"][0]["det_poly"] == "(-1+0i) t^-6"


def test_too_tight_tolerance_fails_with_exit_1():
    res = invoke("--type", "A", "--rank", "2", "--node", "1",
                 "--suites", "appendixA", "--tol", "1e-60")
    assert res.exit_code == 1
    report = json.loads(res.output)
    assert report["passed"] is False
    assert report["suites"]["appendixA"]["status"] == "fail"


def test_report_is_deterministic_across_jobs():
    outs = []
    for jobs in ("1", "3"):
        res = invoke("--type", "A", "--rank", "1", "--node", "1",
                     "--jobs", jobs)
        assert res.exit_code == 0
        outs.append(strip_timings(res.output))
    assert outs[0] == outs[1]


def test_csv_output(tmp_path):
    out = tmp_path / "report.csv"
    res = invoke("--type", "A", "--rank", "1", "--node", "1",
                 "--suites", "kahler", "--format", "csv",
                 "--out", str(out))
    assert res.exit_code == 0
    text = out.read_text()
    lines = text.splitlines()
    assert lines[0] == "suite,field,value"
    assert any(line.startswith("kahler,det_poly[k=0]") for line in lines)
    assert any("nonzero" in line for line in lines)


def test_sampled_mode_without_exact_root_is_usage_error():
    # m = 3 for this case, and 1/2 has no exact cube root
    res = invoke("--type", "A", "--rank", "2", "--node", "1",
                 "--mode", "sampled", "--q", "1/2", "--suites", "appendixB")
    assert res.exit_code == 2

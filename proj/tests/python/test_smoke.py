import json
import math

import pytest

import eigenbound as eb


def test_registry_lists_cases():
    ids = [c["id"] for c in eb.cases()]
    assert ids[:5] == ["ex41a", "ex41b", "ex41c", "ex45", "ex46"]
    ex45 = next(c for c in eb.cases() if c["id"] == "ex45")
    assert ex45["physics"] == "elasticity"
    assert ex45["preconditioners"] == ["Ctilde1", "Ctilde2"]


def test_run_case_brackets_and_writes(tmp_path):
    rep = eb.run_case("ex41a", n=11, precond="Atilde2", out=str(tmp_path))
    assert rep["pass"] and rep["bracketing_pass"]
    assert rep["dofs"] == 100
    assert rep["pcg"]["iterations"] == 13
    assert len(rep["files"]) == 4
    written = json.loads((tmp_path / "ex41a_n11_Atilde2_report.json").read_text())
    assert written["pcg"]["iterations"] == 13


def test_singular_case_uses_shifted_pairing():
    rep = eb.run_case("ex41b", n=7, run_pcg=False)
    assert rep["mode"] == "SINGULAR_SHIFT"
    assert rep["pass"]


def test_mesh_case_reads_bundled_file():
    rep = eb.run_case("ex41c", precond="Atilde1", run_pcg=False)
    assert rep["dofs"] == 400 and rep["pass"]


def test_gen_eig_small_matches_quadratic_formula():
    a = [[2.0, 1.0], [1.0, 3.0]]
    b = [[1.0, 0.0], [0.0, 2.0]]
    # det(a - t b) = 2 t^2 - 7 t + 5
    disc = math.sqrt(49 - 40)
    got = eb.gen_eig_small(a, b)
    assert got == pytest.approx([(7 - disc) / 4, (7 + disc) / 4], rel=1e-14)


def test_voigt_isotropic_plane_strain_entries():
    c = eb.voigt_isotropic(1.0, 0.2)
    lam = 0.2 / (1.2 * 0.6)
    mu = 1.0 / 2.4
    assert c[0][0] == pytest.approx(lam + 2 * mu)
    assert c[0][1] == pytest.approx(lam)
    assert c[2][2] == pytest.approx(mu)


def test_verify_bracketing_flags_violation():
    ok = eb.verify_bracketing([1.0, 1.0], [2.0, 2.0], [1.5, 1.7])
    assert ok["pass"]
    bad = eb.verify_bracketing([1.0, 1.0], [1.2, 2.0], [1.5, 1.7])
    assert not bad["pass"] and bad["failures"] == [1]


def test_errors_are_typed():
    with pytest.raises(eb.LookupError):
        eb.run_case("nosuch")
    with pytest.raises(eb.ParameterError):
        eb.run_case("ex41a", precond="Ctilde1")
    with pytest.raises(eb.Error):
        eb.mesh_info("/nonexistent/file.mesh")


def test_small_randomized_suites():
    props = eb.property_suite(seed=3, count=6)
    assert props["pass"] and props["trials"] == 6
    agree = eb.small_agreement(seed=3, count=50)
    assert agree["pass"] and agree["max_deviation"] <= 1e-10

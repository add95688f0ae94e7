import math

import pytest

import cpinv

ALPHA = "rotation,antipodal,identity"
BETA = "rotation,identity,antipodal"


def test_smith_normal_form_roundtrip():
    m = [[2, 4], [6, 8]]
    s = cpinv.smith_normal_form(m)
    assert s["D"] == [[2, 0], [0, 4]]

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]

    assert mul(mul(s["U"], m), s["V"]) == s["D"]


def test_big_integers_survive():
    big = 10**40
    assert cpinv.cokernel([[big]])["torsion"] == [big]


def test_cokernel_torsion():
    g = cpinv.cokernel([[0, 0, 0, 0], [0, 2, 0, 0], [0, 0, 0, 0], [0, 0, 0, 2]])
    assert g["free_rank"] == 2
    assert g["torsion"] == [2, 2]


def test_reference_invariants():
    a = cpinv.invariants([3, 6, 8], ALPHA, "alpha")
    assert a["k_theory"]["k0"]["free_rank"] == 4
    assert a["hp"] == (4, 4)
    assert a["odd_support"] == {1, 3, 9, 11}


def test_compare_verdicts():
    r = cpinv.compare([3, 6, 8], ALPHA, BETA)
    assert r["cstar_verdict"] == "indistinguishable-by-these-invariants"
    assert r["smooth_verdict"] == "distinguished"
    assert r["second"]["odd_support"] == {1, 3, 7, 9}


def test_rotation_on_even_sphere_rejected():
    with pytest.raises(ValueError):
        cpinv.invariants([3, 6, 8], "rotation,rotation,identity")


def test_degree_estimate():
    t = math.sqrt(2) - 1
    assert cpinv.estimate_degree("s6", t, samples=10000)["degree"] == -1
    assert cpinv.estimate_degree("s3", t, samples=10000)["degree"] == 1
    with pytest.raises(ValueError):
        cpinv.estimate_degree("s6", t, samples=10)


def test_birkhoff_and_coverage():
    t = math.sqrt(2) - 1
    r = cpinv.birkhoff_averages(t, observable="s6_first", horizon=100)
    assert all(abs(avg[1]) < 1e-12 for avg in r["averages"])
    c = cpinv.orbit_coverage((math.sqrt(5) - 1) / 2)
    assert c["coverage"] == 1.0


def test_run_cli():
    code, report, text, _ = cpinv.run("compare", "--a", ALPHA, "--b", BETA)
    assert code == 0
    assert report["schema"] == "cpinv.report/1"
    assert "smooth verdict: distinguished" in text
    code, report, _, error = cpinv.run("ktheory", "--a", "identity")
    assert code == 2
    assert report is None
    assert error

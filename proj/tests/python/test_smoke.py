"""Smoke tests for the ylab python bindings."""

import math

import pytest

import ylab


def test_sphere_constants():
    assert ylab.sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-13)
    assert ylab.sphere_volume(3) == pytest.approx(2 * math.pi**2, rel=1e-13)
    assert ylab.sphere_eigenvalue(2, 1) == 2.0
    assert ylab.sphere_multiplicity(2, 1) == 3
    assert ylab.aubin_constant(4) == pytest.approx(8 * math.pi * math.sqrt(6), rel=1e-13)
    assert ylab.critical_parameter(2) == 2.0


def test_family_invariants():
    f = ylab.Family(2, 2, 2.0)
    assert f.scalar_curvature == 6.0
    assert f.lambda1 == 2.0
    assert f.threshold == 2.0
    assert f.classification == "equality"
    assert f.eh_energy == pytest.approx(12 * math.sqrt(2) * math.pi, rel=1e-12)
    assert f.rho_blocks == pytest.approx((-1.0, 0.0))

    with pytest.raises(ValueError):
        ylab.Family(2, 2, 0.5)  # t >= 1


def test_classification_flip():
    labels = [ylab.Family(2, 2, t).classification for t in (1.5, 2.0, 2.5)]
    assert labels == ["holds", "equality", "violated"]


def test_scan():
    records = ylab.scan(2, 2, 1.0, 2.5, 16)
    assert len(records) == 16
    assert records[0]["classification"] == "einstein"
    assert records[-1]["classification"] == "violated"
    assert records[-1]["drop"] > 0


def test_static_check():
    rep = ylab.static_check(2, 2)
    assert rep["is_static"]
    assert rep["static_residual"] <= 1e-8
    assert rep["rayleigh"] == pytest.approx(2.0, abs=1e-10)
    assert rep["mean"] == pytest.approx(0.0, abs=1e-10)


def test_minimize_small():
    res = ylab.minimize_quotient(2, 2, 2.5, lmax=3, restarts=2, max_iters=80)
    assert res["estimate"] < res["energy"]
    assert res["estimate"] <= res["aubin"] * (1 + 1e-8)


def test_destabilizing_direction():
    cert = ylab.destabilizing_direction(2, 2, 2.5)
    assert cert["direction"] == "x1"
    assert cert["energy_drop"] > 0
    assert cert["energy_drop"] == pytest.approx(cert["predicted_drop"], rel=0.2)

import math

import numpy as np
import pytest

from modeltone.eig import (BracketError, HypothesisError, ShootError, bessel_first_zero, bessel_j, eigenvalue_for,
                           first_eigenvalue, gradient_bound_constant, shoot, wolverine_margin)
from modeltone.model import model_for_radius, solve_coefficient

from .oracles import BESSEL_FIRST_ZERO, GRADIENT_CONSTANT_DISC, KAPPA2_R1, euclidean_lambda1, interval_lambda1


# --- oracle -----------------------------------------------------------------

@pytest.mark.parametrize("nu", sorted(BESSEL_FIRST_ZERO))
def test_bessel_oracle(nu):
    assert bessel_first_zero(nu) == pytest.approx(BESSEL_FIRST_ZERO[nu], abs=1e-13)


def test_bessel_values():
    assert bessel_j(0, 1.0) == pytest.approx(0.7651976865579666, abs=1e-15)
    assert bessel_j(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1.0), abs=1e-15)
    with pytest.raises(ValueError):
        bessel_first_zero(-1.0)


# --- shooting -----------------------------------------------------------------

def test_shoot_flat_disc():
    m = model_for_radius("0", 1.0)
    res = shoot(m, 2, 1.0, 1.0)
    assert res.vR == pytest.approx(bessel_j(0, 1.0), abs=1e-12)
    assert res.zero_count == 0


def test_shoot_sphere_equator():
    m = model_for_radius("-1", math.pi / 2)
    res = shoot(m, 3, 3.0, math.pi / 2)
    assert abs(res.vR) < 1e-12
    assert shoot(m, 3, 3.1, math.pi / 2).zero_count == 1


def test_shoot_interval():
    res = shoot(None, 1, 4.0, math.pi)
    # v = cos(2 t)
    assert res.vR == pytest.approx(1.0, abs=1e-12)
    assert res.zero_count == 2


def test_shoot_checks():
    m = model_for_radius("-1", 3.0)
    with pytest.raises(ShootError):
        shoot(m, 2, 1.0, 3.5)
    with pytest.raises(ValueError):
        shoot(None, 2, 1.0, 1.0)
    with pytest.raises(ValueError):
        shoot(None, 1, -1.0, 1.0)
    coarse = solve_coefficient("0", 1.0, 0.01)
    with pytest.raises(ShootError):
        shoot(coarse, 2, 1.0, 1.0)
    sphere = model_for_radius("-1", 3.5)
    with pytest.raises(ShootError):
        shoot(sphere, 2, 1.0, 3.5)


# --- first eigenvalue ---------------------------------------------------------

@pytest.mark.parametrize("R", [0.3, 1.0, math.pi / 2, 4.0])
def test_interval(R):
    assert first_eigenvalue(None, 1, R).lambda1 == pytest.approx(interval_lambda1(R), rel=1e-9)


@pytest.mark.parametrize("kappa", [2, 3, 4, 5])
@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_euclidean(kappa, R):
    lam = eigenvalue_for("0", kappa, R, rel_tol=1e-12).lambda1
    assert lam == pytest.approx(euclidean_lambda1(kappa, R), rel=1e-11)


@pytest.mark.parametrize("kappa", [1, 2, 3, 4])
def test_hemisphere(kappa):
    lam = eigenvalue_for("-1", kappa, math.pi / 2, rel_tol=1e-12).lambda1
    assert lam == pytest.approx(kappa, rel=1e-10)


def test_constant_profile_ordering():
    lams = {G: eigenvalue_for(repr(G), 2, 1.0).lambda1 for G in KAPPA2_R1}
    for G, ref in KAPPA2_R1.items():
        assert lams[G] == pytest.approx(ref, abs=1e-5)
    assert lams[-1.0] < lams[0.0] < lams[1.0]


def test_eigenfunction_shape(tmp_path):
    sol = eigenvalue_for("1", 3, 2.0)
    assert sol.v[0] == 1.0 and sol.vprime[0] == 0.0
    assert np.all(sol.v[:-1] > 0)
    assert abs(sol.v[-1]) < 1e-7
    assert np.all(np.diff(sol.v) < 0)
    p = tmp_path / "v.csv"
    sol.to_csv(p)
    assert p.read_text().splitlines()[0] == "t,v,vprime"


def test_rel_tol_range():
    with pytest.raises(ValueError):
        first_eigenvalue(None, 1, 1.0, rel_tol=0.1)
    with pytest.raises(ValueError):
        first_eigenvalue(None, 1, 1.0, rel_tol=1e-16)


def test_bracket_failure():
    with pytest.raises(BracketError):
        first_eigenvalue(None, 1, 1e-7, steps=10)


def test_backend_agreement():
    from modeltone import kernels
    if "cython" not in kernels.backends():
        pytest.skip("compiled backend not built")
    lam_c = eigenvalue_for("-1/(1+r^2)", 3, 1.3).lambda1
    orig = kernels.rk4_radial, kernels.rk4_coefficient
    py = kernels.backends()["python"]
    try:
        kernels.rk4_radial, kernels.rk4_coefficient = py.rk4_radial, py.rk4_coefficient
        lam_p = eigenvalue_for("-1/(1+r^2)", 3, 1.3, steps=2000).lambda1
    finally:
        kernels.rk4_radial, kernels.rk4_coefficient = orig
    lam_c2 = eigenvalue_for("-1/(1+r^2)", 3, 1.3, steps=2000).lambda1
    assert lam_p == pytest.approx(lam_c2, rel=1e-13)
    assert lam_p == pytest.approx(lam_c, rel=1e-7)


# --- diagnostics --------------------------------------------------------------

def test_wolverine_margin():
    sphere = eigenvalue_for("-1", 3, math.pi / 2, rel_tol=1e-12)
    assert abs(wolverine_margin(sphere)) < 1e-8
    for G in ("0", "1", "-0.5"):
        sol = eigenvalue_for(G, 2, 1.0)
        assert wolverine_margin(sol) <= 1e-6 * sol.lambda1


def test_wolverine_requires_monotone_g():
    sol = eigenvalue_for("-1", 2, 2.0)
    with pytest.raises(HypothesisError):
        wolverine_margin(sol)


def test_gradient_constant():
    assert gradient_bound_constant(first_eigenvalue(None, 1, 2.0), 1.0) == pytest.approx(1 + math.pi / 4, rel=1e-12)
    disc = eigenvalue_for("0", 2, 2.0, rel_tol=1e-12)
    assert gradient_bound_constant(disc, 1.0) == pytest.approx(GRADIENT_CONSTANT_DISC, rel=1e-9)
    with pytest.raises(ValueError):
        gradient_bound_constant(disc, 0.7)


@pytest.mark.parametrize("kappa", [2, 3])
def test_scaling_non_dyadic(kappa):
    base = eigenvalue_for("-1 + r/(1+r^2)", kappa, 1.0).lambda1
    scaled = eigenvalue_for("(-1 + (r/3)/(1+(r/3)^2))/9", kappa, 3.0).lambda1
    assert scaled == pytest.approx(base / 9, rel=1e-8)


@pytest.mark.parametrize("R", [0.5, 2.0])
def test_shoot_interval_boundary(R):
    res = shoot(None, 1, interval_lambda1(R), R)
    assert abs(res.vR) < 1e-12
    assert res.zero_count in (0, 1)

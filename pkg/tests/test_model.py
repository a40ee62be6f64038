import math

import numpy as np
import pytest

from modeltone.model import (CurvatureProfile, GridTooLarge, admissibility, admissible_radius, model_for_radius,
                             solve_coefficient, sup_g_minus, tail_criterion)


@pytest.mark.parametrize("G,exact,dexact", [
    ("0", lambda r: r, lambda r: np.ones_like(r)),
    ("-1", np.sin, np.cos),
    ("1", np.sinh, np.cosh),
    ("-4", lambda r: np.sin(2 * r) / 2, lambda r: np.cos(2 * r)),
])
def test_closed_forms(G, exact, dexact):
    m = solve_coefficient(G, 3.0, 1e-3)
    assert np.max(np.abs(m.g - exact(m.grid))) < 1e-11
    assert np.max(np.abs(m.gprime - dexact(m.grid))) < 1e-11
    assert m.tol < 1e-10


def test_first_zero_and_monotonicity():
    m = solve_coefficient("-1", 4.0, 1e-3)
    assert m.R0 == pytest.approx(math.pi, abs=1e-9)
    assert m.Rmono == pytest.approx(math.pi / 2, abs=1e-9)
    assert m.Rmono <= m.R0
    flat = solve_coefficient("0", 4.0, 1e-3)
    assert math.isinf(flat.R0) and math.isinf(flat.Rmono)


def test_variable_profile_against_closed_form():
    # g = r / (1 + r^2) solves g'' = G g with this G
    G = "(2*r^2 - 6)/(1 + r^2)^2"
    m = solve_coefficient(G, 3.0, 5e-4)
    g = m.grid / (1 + m.grid ** 2)
    assert np.max(np.abs(m.g - g)) < 1e-9
    assert m.Rmono == pytest.approx(1.0, abs=1e-8)


def test_grid_even_and_readonly():
    m = solve_coefficient("0", 1.0, 0.3)
    assert (m.grid.size - 1) % 2 == 0
    assert m.h <= 0.3
    with pytest.raises(ValueError):
        m.g[0] = 1.0


def test_grid_cap(monkeypatch):
    monkeypatch.setenv("MODEL_TONE_MAX_GRID", "1000")
    with pytest.raises(GridTooLarge):
        solve_coefficient("0", 1.0, 1e-4)


def test_model_for_radius_resolution():
    m = model_for_radius("0", 2.0, steps=100)
    assert m.r_max == pytest.approx(2.0)
    assert m.h <= 2.0 / 400 + 1e-15


@pytest.mark.parametrize("G,R,expected", [
    ("-1", 1.0, 1.0),
    ("1", 3.0, 0.0),
    ("r - 1", 0.5, 1.0),
    ("-exp(-50*(r-0.37)^2)", 1.0, 1.0),
    ("-sin(3*r)^2", 2.0, 1.0),
])
def test_sup_g_minus(G, R, expected):
    assert sup_g_minus(G, R) == pytest.approx(expected, abs=1e-12)


def test_admissibility():
    assert admissibility("-1", math.pi / 2) == pytest.approx(math.pi, rel=1e-14)
    assert admissible_radius("-1", 10.0) == pytest.approx(math.pi / 2, rel=1e-8)
    assert admissible_radius("-4", 10.0) == pytest.approx(math.pi / 4, rel=1e-8)
    assert math.isinf(admissible_radius("0", 10.0))
    assert math.isinf(admissible_radius("1", 10.0))
    assert admissible_radius("-1", 1.0) == 1.0


def test_tail_criterion():
    assert tail_criterion(CurvatureProfile("0", 5.0)).holds
    one = tail_criterion(CurvatureProfile("-1", 1.0))
    assert one.holds and one.sup == pytest.approx(0.25, abs=1e-12)
    assert one.witness == pytest.approx(0.5, abs=1e-3)
    two = tail_criterion(CurvatureProfile("-1", 2.0))
    assert not two.holds and two.sup == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        tail_criterion(CurvatureProfile("-1"))


def test_csv(tmp_path):
    m = solve_coefficient("-1", 1.0, 0.25)
    p = tmp_path / "g.csv"
    m.to_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "r,g,gprime"
    assert len(lines) == m.grid.size + 1
    r, g, gp = map(float, lines[-1].split(","))
    assert g == m.g[-1] and gp == m.gprime[-1]


def test_bad_inputs():
    with pytest.raises(ValueError):
        solve_coefficient("0", -1.0, 0.1)
    with pytest.raises(ValueError):
        solve_coefficient("0", 1.0, 0.0)
    with pytest.raises(ValueError):
        CurvatureProfile("0", -1.0)

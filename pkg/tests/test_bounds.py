import math

import numpy as np
import pytest

from modeltone.bounds import (NonPositiveWarping, WarpedScenario, check_warping_condition, tone_bound_cone,
                              tone_bound_cylinder, tone_bound_euclidean, tone_bound_general, tone_bound_hyperbolic,
                              tone_bound_pseudo_hyperbolic, tone_bound_sphere)
from modeltone.eig import eigenvalue_for
from modeltone.model import model_for_radius

from .oracles import DISC_LAMBDA1, euclidean_lambda1


def test_warping_exp():
    w = check_warping_condition("exp(y)", (-math.inf, math.inf))
    assert w.holds and w.max_violation == 0.0


def test_warping_cosh():
    w = check_warping_condition("cosh(y)", (-1, 1))
    assert not w.holds
    assert w.max_violation == pytest.approx(1.0, abs=1e-10)


def test_warping_linear_and_constant():
    assert check_warping_condition("y", (0, 1)).holds
    w = check_warping_condition("1", (-math.inf, math.inf))
    assert w.holds and w.max_violation == 0.0
    assert check_warping_condition("sin(y)", (0, math.pi)).holds


def test_warping_nonpositive():
    with pytest.raises(NonPositiveWarping):
        check_warping_condition("y", (-1, 1))
    with pytest.raises(ValueError):
        check_warping_condition("y", (0, 1), samples=10)


def test_general_examples():
    rep = tone_bound_general(WarpedScenario(m=3, G="0", R=1.0, f="1"), 5.0)
    assert rep.bound == pytest.approx(5.0, rel=1e-14)
    assert rep.certified
    rep = tone_bound_general(WarpedScenario(m=2, G="0", R=1.0, f="exp(y)", base_interval=(-math.inf, 0.0)), 5.0)
    assert rep.bound == pytest.approx(3.0, rel=1e-12)
    rep = tone_bound_general(WarpedScenario(m=2, G="0", R=1.0, f="y", base_interval=(0.0, 2.0)), 6.0)
    assert rep.bound == pytest.approx(1.0, rel=1e-12)


def test_general_rejects_bad_warping():
    rep = tone_bound_general(WarpedScenario(m=3, G="0", R=1.0, f="cosh(y)", base_interval=(-1, 1)), 5.0)
    assert rep.warping_ok is False
    assert not rep.certified


def test_general_mode_b():
    sc = WarpedScenario(m=4, n=2, G="0", R=1.0, c1=2.0, c2=0.5)
    assert sc.mode == "b" and sc.kappa == 2
    rep = tone_bound_general(sc, 8.0)
    assert rep.bound == pytest.approx((8.0 - 4 * 0.25) / 4.0)
    assert tone_bound_general(sc, 0.5).bound is None


def test_cylinder_sphere_cap():
    m = model_for_radius("-1", math.pi / 2)
    rep = tone_bound_cylinder(4, m, math.pi / 2)
    assert rep.bound == pytest.approx(3.0, rel=1e-9)
    assert rep.certified and not rep.vacuous


def test_cylinder_inadmissible_radius():
    m = model_for_radius("-1", 2.0)
    rep = tone_bound_cylinder(3, m, 2.0)
    assert rep.radius_admissible is False and rep.gprime_positive is False
    assert not rep.certified


def test_euclidean():
    rep = tone_bound_euclidean(3, 1.0)
    assert rep.bound == pytest.approx(DISC_LAMBDA1, rel=1e-10)
    assert rep.bound == pytest.approx(euclidean_lambda1(2, 1.0), rel=1e-10)


def test_pseudo_hyperbolic_and_hyperbolic():
    rep = tone_bound_pseudo_hyperbolic(3, 1.0, 0.0, 2.0)
    assert rep.bound == pytest.approx(-1.0) and rep.vacuous
    assert not rep.certified
    h = tone_bound_hyperbolic(3, -1.0, 1.0)
    assert h.bound == pytest.approx(DISC_LAMBDA1 * math.e ** 2 - 3, rel=1e-10)
    with pytest.raises(ValueError):
        tone_bound_pseudo_hyperbolic(3, 0.0, 0.0, 2.0)


def test_cone():
    lam = eigenvalue_for("0", 1, math.pi / 4).lambda1
    assert tone_bound_cone(2, 1.0, lam).bound == pytest.approx(2.0, rel=1e-9)
    assert tone_bound_cone(2, 2.0, lam).bound == pytest.approx(0.5, rel=1e-9)
    cap = eigenvalue_for("-1", 2, math.pi / 2).lambda1
    rep = tone_bound_cone(3, 1.0, cap)
    assert rep.bound == pytest.approx(-1.0, rel=1e-9) and rep.vacuous
    assert tone_bound_cone(3, 2.0, 11.0).bound == pytest.approx(2.0)


def test_sphere_branches():
    lo = tone_bound_sphere(2, math.pi / 2, math.pi / 4)
    assert lo.details["branch"] == "r <= pi/2"
    hi = tone_bound_sphere(2, 3 * math.pi / 4, math.pi / 4)
    assert hi.details["branch"] == "r >= pi/2"
    assert hi.bound == pytest.approx(2.0, rel=1e-8)
    assert lo.bound == hi.bound
    below = tone_bound_sphere(2, math.pi / 4, math.pi / 4)
    assert below.bound == pytest.approx(2.0 * 2, rel=1e-8)
    assert hi.certified


@pytest.mark.parametrize("m,G,R", [(3, "0", 1.0), (4, "-1", 1.2), (3, "1", 0.7), (5, "-1/(1+r^2)", 1.0)])
def test_general_reproduces_specializations(m, G, R):
    mp = model_for_radius(G, R)
    lam = eigenvalue_for(G, m - 1, R, rel_tol=1e-12).lambda1
    cyl = tone_bound_cylinder(m, mp, R, 1e-12)
    assert tone_bound_general(WarpedScenario(m=m, G=G, R=R, f="1"), lam).bound == pytest.approx(cyl.bound, rel=1e-10)
    ph = tone_bound_pseudo_hyperbolic(m, 0.7, 0.3, lam)
    sc = WarpedScenario(m=m, G=G, R=R, f="exp(0.7*y)", base_interval=(-math.inf, 0.3))
    assert tone_bound_general(sc, lam).bound == pytest.approx(ph.bound, rel=1e-8)
    co = tone_bound_cone(m, 1.5, lam)
    sc = WarpedScenario(m=m, G=G, R=R, f="y", base_interval=(0.0, 1.5))
    assert tone_bound_general(sc, lam).bound == pytest.approx(co.bound, rel=1e-8)


def test_report_dict():
    d = tone_bound_euclidean(3, 1.0).to_dict()
    assert d["kind"] == "euclidean" and d["vacuous"] is False
    assert set(tone_bound_euclidean(3, 1.0).hypotheses()) == {"radius_admissible", "warping_ok", "gprime_positive"}


def test_bounds_nonincreasing_in_R():
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = int(rng.integers(2, 6))
        G = str(rng.choice(["0", "-1", "1", "-1/(1+r^2)"]))
        R1, R2 = sorted(rng.uniform(0.2, 1.5, 2))
        lam1 = eigenvalue_for(G, m - 1, R1).lambda1
        lam2 = eigenvalue_for(G, m - 1, R2).lambda1
        sc1 = WarpedScenario(m=m, G=G, R=R1, f="exp(y)", base_interval=(-math.inf, 0.5))
        sc2 = WarpedScenario(m=m, G=G, R=R2, f="exp(y)", base_interval=(-math.inf, 0.5))
        assert tone_bound_general(sc2, lam2).bound <= tone_bound_general(sc1, lam1).bound
        assert tone_bound_cylinder(m, model_for_radius(G, R2), R2).bound <= \
            tone_bound_cylinder(m, model_for_radius(G, R1), R1).bound


def test_pseudo_hyperbolic_interval_fibres():
    lam = eigenvalue_for("0", 1, math.pi / 2).lambda1
    assert tone_bound_pseudo_hyperbolic(2, 1.0, 0.0, lam).bound == pytest.approx(-1.0, abs=1e-9)
    lam = eigenvalue_for("0", 1, 1.0).lambda1
    assert tone_bound_pseudo_hyperbolic(2, 1.0, 0.0, lam).bound == pytest.approx((math.pi / 2) ** 2 - 2, rel=1e-9)

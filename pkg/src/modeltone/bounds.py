"""Fundamental-tone lower bounds for minimal submanifolds of N x_f Q.

Every calculator returns a :class:`BoundReport`.  Hypothesis failures never
raise: the value is still reported, with the failing flag set, so callers
can see both the number and why it is not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .dsl import DomainError, ScalarExpr, differentiate, evaluate, evaluate_array, parse, to_string
from .eig import eigenvalue_for, first_eigenvalue
from .model import (CurvatureProfile, ModelProfile, admissibility, admissible_radius, as_profile,
                    golden_section_min, model_for_radius)

CONSTANT_ONE = parse("1")

# phi(R) = 2 R sqrt(||G_-||) is compared with pi up to rounding
ADMISSIBLE_SLACK = 1e-12
WARPING_RTOL = 1e-12


class NonPositiveWarping(ValueError):
    pass


@dataclass(frozen=True)
class WarpedScenario:
    """Minimal immersion M^m -> N^n x_f Q^q with the fiber ball B_Q(o, R).

    ``f`` is a DSL expression on N = R (mode a).  For a general base, leave
    ``f`` unset and give ``c1 = inf f`` and ``c2 = sup |grad f|`` (mode b).
    """

    m: int
    G: CurvatureProfile
    R: float
    n: int = 1
    q: int | None = None
    f: ScalarExpr | None = None
    base_interval: tuple[float, float] = (-math.inf, math.inf)
    c1: float | None = None
    c2: float | None = None

    def __post_init__(self):
        if isinstance(self.f, str):
            object.__setattr__(self, "f", parse(self.f))
        object.__setattr__(self, "G", as_profile(self.G))
        if not (self.m > self.n >= 1):
            raise ValueError("need m > n >= 1")
        if not self.R > 0:
            raise ValueError("R must be positive")
        a, b = self.base_interval
        if not a < b:
            raise ValueError("base interval must satisfy alpha < beta")

    @property
    def kappa(self) -> int:
        return self.m - self.n

    @property
    def mode(self) -> str:
        return "b" if self.f is None and self.c1 is not None else "a"


@dataclass
class BoundReport:
    kind: str
    bound: float | None
    lambda1: float
    radius_admissible: bool | None = None
    warping_ok: bool | None = None
    gprime_positive: bool | None = None
    inputs: dict[str, Any] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.bound is None or not self.bound > 0

    @property
    def certified(self) -> bool:
        return bool(self.radius_admissible and self.warping_ok and self.gprime_positive)

    def hypotheses(self) -> dict[str, bool]:
        return {
            "radius_admissible": bool(self.radius_admissible),
            "warping_ok": bool(self.warping_ok),
            "gprime_positive": bool(self.gprime_positive),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "lambda1": self.lambda1,
            "vacuous": self.vacuous,
            "radius_admissible": self.radius_admissible,
            "warping_ok": self.warping_ok,
            "gprime_positive": self.gprime_positive,
            "inputs": self.inputs,
            **self.details,
        }


# --- hypotheses --------------------------------------------------------------

@dataclass(frozen=True)
class WarpingCheck:
    holds: bool
    max_violation: float
    argmax: float
    interval: tuple[float, float]


def _window(interval, width: float) -> tuple[float, float]:
    a, b = interval
    if math.isinf(a) and math.isinf(b):
        return -width, width
    if math.isinf(a):
        return b - width, b
    if math.isinf(b):
        return a, a + width
    return a, b


def check_warping_condition(f, interval, samples: int = 1000, window: float = 20.0) -> WarpingCheck:
    """Sample f f'' - (f')^2 on the open interval; the condition holds when it
    is <= 0 up to a relative rounding allowance of the largest f^2."""
    if isinstance(f, str):
        f = parse(f)
    if samples < 1000:
        raise ValueError("samples must be >= 1000")
    a, b = _window(interval, window)
    y = np.linspace(a, b, samples + 2)[1:-1]
    fy = evaluate_array(f, y)
    if np.any(fy <= 0):
        bad = float(y[np.argmax(fy <= 0)])
        raise NonPositiveWarping(f"warping function is not positive at y = {bad!r}")
    d1 = differentiate(f)
    d2 = differentiate(d1)
    q = fy * evaluate_array(d2, y) - evaluate_array(d1, y) ** 2
    k = int(np.argmax(q))
    scale = float(np.max(fy * fy))
    worst = float(q[k]) + 0.0
    return WarpingCheck(worst <= WARPING_RTOL * scale, worst, float(y[k]), (a, b))


def radius_flags(profile: CurvatureProfile, R: float, model: ModelProfile | None = None) -> dict[str, Any]:
    """radius_admissible, gprime_positive and the supporting numbers for radius R."""
    phi = admissibility(profile, R)
    if model is None or model.r_max < R:
        model = model_for_radius(profile, R, steps=2_500)
    adm = admissible_radius(profile, R)
    return {
        "radius_admissible": phi <= math.pi * (1 + ADMISSIBLE_SLACK),
        "gprime_positive": model.Rmono >= R * (1 - 1e-9),
        "admissible_radius": adm,
        "phi": phi,
        "Rmono": model.Rmono,
    }


def _apply_radius_flags(report: BoundReport, profile, R, model=None) -> BoundReport:
    flags = radius_flags(profile, R, model)
    report.radius_admissible = flags.pop("radius_admissible")
    report.gprime_positive = flags.pop("gprime_positive")
    report.details.update(flags)
    return report


# --- infimum over the base ---------------------------------------------------

def _try_eval(expr: ScalarExpr, y: float) -> float | None:
    try:
        return evaluate(expr, y)
    except DomainError:
        return None


@dataclass
class _Infimum:
    value: float
    argmin: float
    explored: tuple[float, float]
    limit_estimated: bool = False


def _infimum(integrand, valid, alpha, beta, samples, window, max_windows) -> _Infimum:
    """Infimum of ``integrand`` over (alpha, beta).

    Finite endpoints are included through the continuous extension when
    ``valid`` accepts them.  Each infinite side is explored window by window
    until three consecutive windows increase outward; a side still
    decreasing after ``max_windows`` is closed with its farthest value.
    """
    a, b = _window((alpha, beta), window)
    y = np.linspace(a, b, samples + 2)
    inner = y[1:-1]
    vals = integrand(inner)
    best_i = int(np.argmin(vals))
    best, arg = float(vals[best_i]), float(inner[best_i])
    if 0 < best_i < inner.size - 1:
        x = golden_section_min(lambda s: float(integrand(np.array([s]))[0]), inner[best_i - 1], inner[best_i + 1])
        v = float(integrand(np.array([x]))[0])
        if v < best:
            best, arg = v, x
    for end, infinite in ((a, math.isinf(alpha)), (b, math.isinf(beta))):
        if not infinite and valid(end):
            v = float(integrand(np.array([end]))[0])
            if v < best:
                best, arg = v, end
    explored = [a, b]
    limit_estimated = False
    for side, infinite in ((-1, math.isinf(alpha)), (1, math.isinf(beta))):
        if not infinite:
            continue
        edge = a if side < 0 else b
        monotone_run = 0
        for _ in range(max_windows):
            far = edge + side * window
            yy = np.linspace(edge, far, samples + 1)[1:]
            with np.errstate(all="ignore"):
                try:
                    vv = integrand(yy)
                except (DomainError, NonPositiveWarping):
                    break
            if not np.all(np.isfinite(vv)):
                break
            edge = far
            explored[0 if side < 0 else 1] = far
            lo = float(np.min(vv))
            if lo < best:
                i = int(np.argmin(vv))
                best, arg = lo, float(yy[i])
            if np.all(np.diff(vv) >= -1e-14 * np.max(np.abs(vv))) and lo >= best:
                monotone_run += 1
                if monotone_run == 3:
                    break
            else:
                monotone_run = 0
        else:
            limit_estimated = True
    return _Infimum(best, arg, tuple(explored), limit_estimated)


def tone_bound_general(scenario: WarpedScenario, lambda1: float, *, samples: int = 2000,
                       window: float = 10.0, max_windows: int = 20,
                       model: ModelProfile | None = None) -> BoundReport:
    """inf over the base of (lambda1 - m |grad f|^2) / f^2.

    ``lambda1`` is the first eigenvalue of B_g(R) in the (m - n)-dimensional
    model; it is passed in so the caller controls how it was computed.
    """
    sc = scenario
    inputs = {"m": sc.m, "n": sc.n, "q": sc.q, "R": sc.R, "G": to_string(sc.G.G), "mode": sc.mode}
    if sc.mode == "b":
        c1, c2 = float(sc.c1), float(sc.c2 if sc.c2 is not None else 0.0)
        if not c1 > 0 or c2 < 0:
            raise ValueError("mode (b) needs c1 > 0 and c2 >= 0")
        inputs.update(c1=c1, c2=c2)
        numerator = lambda1 - sc.m * c2 * c2
        # below this the scalar substitution does not bound the pointwise infimum
        bound = numerator / (c1 * c1) if numerator >= 0 else None
        rep = BoundReport("general", bound, lambda1, warping_ok=None, inputs=inputs,
                          details={"estimate": "scalar summary inf f > c1, sup |grad f| <= c2"})
        rep.warping_ok = True if sc.f is None else None
        rep.details["warping_note"] = "user-asserted for a general base"
        return _apply_radius_flags(rep, sc.G, sc.R, model)

    f = sc.f if sc.f is not None else CONSTANT_ONE
    df = differentiate(f)
    alpha, beta = sc.base_interval
    inputs.update(f=to_string(f), alpha=alpha, beta=beta)

    def integrand(y):
        fy = evaluate_array(f, y)
        if np.any(fy <= 0):
            raise NonPositiveWarping(f"warping function is not positive at y = {float(y[np.argmax(fy <= 0)])!r}")
        return (lambda1 - sc.m * evaluate_array(df, y) ** 2) / (fy * fy)

    def valid(y):
        v = _try_eval(f, y)
        return v is not None and v > 0 and _try_eval(df, y) is not None

    inf = _infimum(integrand, valid, alpha, beta, samples, window, max_windows)
    warp = check_warping_condition(f, inf.explored, samples=max(1000, samples))
    rep = BoundReport("general", inf.value, lambda1, warping_ok=warp.holds, inputs=inputs,
                      details={"argmin": inf.argmin, "explored_interval": list(inf.explored),
                               "limit_estimated": inf.limit_estimated,
                               "warping_max_violation": warp.max_violation,
                               "estimate": "pointwise infimum over the base"})
    return _apply_radius_flags(rep, sc.G, sc.R, model)


# --- corollaries -------------------------------------------------------------

def tone_bound_cylinder(m: int, model: ModelProfile, R: float, rel_tol: float = 1e-10) -> BoundReport:
    """Product N = R, f = 1: the bound is lambda_1 of B_g(R) in dimension m - 1."""
    if m < 2:
        raise ValueError("m must be >= 2")
    lam = first_eigenvalue(model if m > 2 else None, m - 1, R, rel_tol).lambda1
    rep = BoundReport("cylinder", lam, lam, warping_ok=True,
                      inputs={"m": m, "R": R, "G": to_string(model.profile.G)})
    return _apply_radius_flags(rep, model.profile, R, model)


def tone_bound_euclidean(m: int, R: float, rel_tol: float = 1e-10) -> BoundReport:
    model = model_for_radius(CurvatureProfile(parse("0")), R)
    rep = tone_bound_cylinder(m, model, R, rel_tol)
    rep.kind = "euclidean"
    return rep


def tone_bound_pseudo_hyperbolic(m: int, b: float, beta: float, lambda1: float, *,
                                 model: ModelProfile | None = None, R: float | None = None) -> BoundReport:
    """f(y) = e^{b y} over (alpha, beta): lambda1 e^{-2 b beta} - m b^2."""
    if not b > 0:
        raise ValueError("b must be positive")
    bound = lambda1 * math.exp(-2.0 * b * beta) - m * b * b
    rep = BoundReport("pseudo_hyperbolic", bound, lambda1, warping_ok=True,
                      inputs={"m": m, "b": b, "beta": beta})
    if model is not None and R is not None:
        rep.inputs.update(R=R, G=to_string(model.profile.G))
        _apply_radius_flags(rep, model.profile, R, model)
    return rep


def tone_bound_hyperbolic(m: int, beta: float, R: float, rel_tol: float = 1e-10) -> BoundReport:
    """Horoball slab of H^{q+1} = R x_{e^y} R^q: e^{-2 beta} (c_{m-1}/R)^2 - m."""
    model = model_for_radius(CurvatureProfile(parse("0")), R)
    lam = first_eigenvalue(model if m > 2 else None, m - 1, R, rel_tol).lambda1
    rep = tone_bound_pseudo_hyperbolic(m, 1.0, beta, lam, model=model, R=R)
    rep.kind = "hyperbolic"
    return rep


def tone_bound_cone(m: int, a: float, lambda1: float, *,
                    model: ModelProfile | None = None, R: float | None = None) -> BoundReport:
    """Cone (0, a) x_y Q: (lambda1 - m) / a^2."""
    if not a > 0:
        raise ValueError("a must be positive")
    rep = BoundReport("cone", (lambda1 - m) / (a * a), lambda1, warping_ok=True,
                      inputs={"m": m, "a": a})
    if model is not None and R is not None:
        rep.inputs.update(R=R, G=to_string(model.profile.G))
        _apply_radius_flags(rep, model.profile, R, model)
    return rep


def tone_bound_sphere(m: int, r: float, theta: float, rel_tol: float = 1e-10) -> BoundReport:
    """S^{q+1} = (0, pi) x_{sin y} S^q over (0, r) x B(theta)."""
    if not 0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    if not 0 < r < math.pi:
        raise ValueError("r must lie in (0, pi)")
    lam = eigenvalue_for("-1", m - 1, theta, rel_tol).lambda1
    if r <= math.pi / 2:
        bound = (lam - m) / math.sin(r) ** 2
        branch = "r <= pi/2"
    else:
        bound = lam - m
        branch = "r >= pi/2"
    rep = BoundReport("sphere", bound, lam, warping_ok=True,
                      inputs={"m": m, "r": r, "theta": theta}, details={"branch": branch})
    return _apply_radius_flags(rep, CurvatureProfile(parse("-1")), theta)

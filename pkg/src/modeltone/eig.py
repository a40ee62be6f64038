"""First Dirichlet eigenvalue of a model geodesic ball by shooting.

The radial eigenfunction solves

    v'' + (kappa - 1) (g'/g) v' + lambda v = 0,   v(0) = 1, v'(0) = 0,

and lambda_1 is the value of lambda whose first zero of v sits at t = R.
Integration starts at t = h from the regular series at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import ModelProfile, as_profile, model_for_radius, write_csv

DEFAULT_STEPS = 10_000
LAMBDA_MAX = 1e12


class ShootError(ValueError):
    pass


class BracketError(RuntimeError):
    pass


class HypothesisError(ValueError):
    """A computation was asked for outside the hypotheses that give it meaning."""


@dataclass(frozen=True)
class ShootResult:
    vR: float
    vprimeR: float
    zero_count: int


@dataclass(frozen=True, eq=False)
class EigenSolution:
    lambda1: float
    kappa: int
    R: float
    grid: np.ndarray
    v: np.ndarray
    vprime: np.ndarray
    model: ModelProfile | None = field(default=None, repr=False)

    def to_csv(self, path) -> None:
        write_csv(path, ("t", "v", "vprime"), (self.grid, self.v, self.vprime))


def log_derivative(model: ModelProfile, t: np.ndarray) -> np.ndarray:
    """g'/g at arbitrary points of (0, r_max], by cubic Hermite interpolation
    of g (with g') and g' (with g'' = G g) between model grid points."""
    hm = model.h
    t = np.asarray(t, dtype=float)
    i = np.clip(np.floor(t / hm).astype(np.intp), 0, model.grid.size - 2)
    s = (t - model.grid[i]) / hm
    s2 = s * s
    s3 = s2 * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = (s3 - 2 * s2 + s) * hm
    h01 = -2 * s3 + 3 * s2
    h11 = (s3 - s2) * hm
    g, gp = model.g, model.gprime
    gpp = model.G_grid * g
    gi = h00 * g[i] + h10 * gp[i] + h01 * g[i + 1] + h11 * gp[i + 1]
    gpi = h00 * gp[i] + h10 * gpp[i] + h01 * gp[i + 1] + h11 * gpp[i + 1]
    return gpi / gi


class _Shooter:
    """Tabulates g'/g once for a given (model, kappa, R) and shoots repeatedly."""

    def __init__(self, model: ModelProfile | None, kappa: int, R: float, steps: int = DEFAULT_STEPS):
        if int(kappa) != kappa or kappa < 1:
            raise ValueError("kappa must be an integer >= 1")
        if not R > 0:
            raise ValueError("R must be positive")
        self.kappa = int(kappa)
        self.R = float(R)
        self.n = int(steps) + int(steps) % 2
        self.h = self.R / self.n
        self.G0 = 0.0
        if self.kappa == 1:
            # the first-order term vanishes; g plays no role
            self.q_half = np.zeros(2 * self.n + 1)
            return
        if model is None:
            raise ValueError("a model is required for kappa >= 2")
        if R >= model.R0:
            raise ShootError(f"R = {R!r} is not below the first zero R0 = {model.R0!r} of g")
        if model.r_max < R * (1 - 1e-12):
            raise ShootError(f"model covers [0, {model.r_max!r}] but R = {R!r}")
        if model.h > self.h / 4 * (1 + 1e-9):
            raise ShootError(
                f"model spacing {model.h:.3g} must be at least 4x finer than the eigenfunction step {self.h:.3g}")
        t = np.linspace(0.0, self.R, 2 * self.n + 1)
        q = np.zeros_like(t)
        q[2:] = log_derivative(model, t[2:])
        self.q_half = q
        self.G0 = float(model.G_grid[0])

    def start(self, lam: float) -> tuple[float, float]:
        k = self.kappa
        h = self.h
        a = -lam / (2.0 * k)
        b = lam * (lam + 2.0 * (k - 1) * self.G0 / 3.0) / (8.0 * k * (k + 2))
        return 1.0 + a * h * h + b * h**4, 2.0 * a * h + 4.0 * b * h**3

    def run(self, lam: float, *, store: bool = False, stop_at_zero: bool = False):
        v1, w1 = self.start(lam)
        v_out = w_out = None
        if store:
            v_out = np.empty(self.n + 1)
            w_out = np.empty(self.n + 1)
            v_out[0], w_out[0] = 1.0, 0.0
            v_out[1], w_out[1] = v1, w1
        vR, wR, zeros, _ = kernels.rk4_radial(self.q_half, self.h, float(self.kappa - 1), float(lam),
                                              v1, w1, 1, self.n, v_out, w_out, stop_at_zero)
        if (v1 <= 0.0) and not stop_at_zero:
            zeros += 1
        if zeros * 10 > self.n:
            raise ShootError(f"{zeros} sign changes on {self.n} steps: grid too coarse for lambda = {lam!r}")
        return vR, wR, zeros, v_out, w_out

    def has_zero(self, lam: float) -> bool:
        v1, _ = self.start(lam)
        if v1 <= 0.0:
            return True
        return self.run(lam, stop_at_zero=True)[2] > 0

    def end_value(self, lam: float) -> float:
        return self.run(lam)[0]


def shoot(model: ModelProfile | None, kappa: int, lam: float, R: float,
          steps: int = DEFAULT_STEPS) -> ShootResult:
    """Integrate the radial equation to t = R; return v(R), v'(R) and the
    number of sign changes of v on (0, R]."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    vR, wR, zeros, _, _ = _Shooter(model, kappa, R, steps).run(lam)
    return ShootResult(float(vR), float(wR), int(zeros))


def first_eigenvalue(model: ModelProfile | None, kappa: int, R: float, rel_tol: float = 1e-8,
                     steps: int = DEFAULT_STEPS) -> EigenSolution:
    """lambda_1 of the ball of radius R in the kappa-dimensional model.

    Brackets by doubling from lambda = 1 until v acquires a zero on (0, R],
    bisects on that predicate (the first zero moves inward as lambda grows)
    down to ``rel_tol``, then polishes by regula falsi on v(R) inside the
    certified bracket.
    """
    if not 1e-14 < rel_tol < 1e-2:
        raise ValueError("rel_tol must lie in (1e-14, 1e-2)")
    sh = _Shooter(model, kappa, R, steps)
    lo, hi = 0.0, 1.0
    while not sh.has_zero(hi):
        lo, hi = hi, 2.0 * hi
        if hi > LAMBDA_MAX:
            raise BracketError(f"no eigenvalue below {LAMBDA_MAX:g}; degenerate model?")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if sh.has_zero(mid):
            hi = mid
        else:
            lo = mid
    lam = _polish(sh, lo, hi)
    vR, wR, _, v, w = sh.run(lam, store=True)
    grid = np.linspace(0.0, sh.R, sh.n + 1)
    return EigenSolution(float(lam), sh.kappa, sh.R, grid, v, w, model)


def _polish(sh: _Shooter, lo: float, hi: float, iters: int = 40) -> float:
    """Illinois regula falsi on v(R) within [lo, hi]."""
    flo = sh.end_value(lo)
    fhi = sh.end_value(hi)
    if not (flo > 0.0 > fhi):
        return 0.5 * (lo + hi)
    side = 0
    lam = 0.5 * (lo + hi)
    for _ in range(iters):
        lam = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < lam < hi:
            lam = 0.5 * (lo + hi)
        f = sh.end_value(lam)
        if f == 0.0 or hi - lo <= 4e-16 * hi:
            break
        if f > 0.0:
            lo, flo = lam, f
            if side == 1:
                fhi *= 0.5
            side = 1
        else:
            hi, fhi = lam, f
            if side == -1:
                flo *= 0.5
            side = -1
        if abs(f) < 1e-15:
            break
    return lam


def eigenvalue_for(G, kappa: int, R: float, rel_tol: float = 1e-8, steps: int = DEFAULT_STEPS) -> EigenSolution:
    """Convenience: build a model for profile G fine enough for radius R and solve."""
    model = None if kappa == 1 else model_for_radius(as_profile(G), R, steps)
    return first_eigenvalue(model, kappa, R, rel_tol, steps)


# --- Bessel oracle -----------------------------------------------------------
# Independent of the shooting solver: power series plus a scan and bisection.

def bessel_series_reduced(nu: float, x: float) -> float:
    """J_nu(x) / (x/2)^nu as a power series; same positive zeros as J_nu."""
    term = 1.0 / math.gamma(nu + 1.0)
    y = -0.25 * x * x
    terms = [term]
    k = 0
    while True:
        k += 1
        term *= y / (k * (k + nu))
        terms.append(term)
        if k > x and abs(term) < 1e-18:
            break
    return math.fsum(terms)


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) from its power series; intended for 0 <= x <= 12."""
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    return (0.5 * x) ** nu * bessel_series_reduced(nu, x)


def bessel_first_zero(nu: float, x_max: float = 12.0, scan: float = 0.1, tol: float = 1e-14) -> float:
    """First positive zero of J_nu for nu >= -1/2."""
    if nu < -0.5:
        raise ValueError("nu must be >= -1/2")
    a = scan
    fa = bessel_series_reduced(nu, a)
    while a < x_max:
        b = a + scan
        fb = bessel_series_reduced(nu, b)
        if fa == 0.0:
            return a
        if fa * fb <= 0.0:
            while b - a > tol:
                m = 0.5 * (a + b)
                fm = bessel_series_reduced(nu, m)
                if fa * fm <= 0.0:
                    b = m
                else:
                    a, fa = m, fm
            return 0.5 * (a + b)
        a, fa = b, fb
    raise ValueError(f"no zero of J_{nu} below {x_max}")


# --- eigenfunction diagnostics -------------------------------------------------

def wolverine_margin(sol: EigenSolution, model: ModelProfile | None = None) -> float:
    """max over t in (0, R] of kappa (g'/g) v' + lambda_1 v.

    Nonpositive whenever g' > 0 on [0, R) and lambda_1 >= kappa ||G_-||.
    """
    model = model if model is not None else sol.model
    if model is None:
        raise ValueError("a model is required")
    if model.Rmono < sol.R * (1 - 1e-9):
        raise HypothesisError(f"g' vanishes at {model.Rmono!r} before R = {sol.R!r}")
    t = sol.grid[1:]
    q = log_derivative(model, t)
    vals = sol.kappa * q * sol.vprime[1:] + sol.lambda1 * sol.v[1:]
    return float(np.max(vals))


def gradient_bound_constant(sol: EigenSolution, R_inner: float) -> float:
    """1 + sup over [0, R_inner] of |v'|/v, for the eigenfunction of the ball of radius 2 R_inner."""
    if not R_inner > 0:
        raise ValueError("R_inner must be positive")
    if abs(sol.R - 2.0 * R_inner) > 1e-12 * sol.R:
        raise ValueError(f"eigenfunction radius {sol.R!r} is not 2 * {R_inner!r}")
    mask = sol.grid <= R_inner * (1 + 1e-12)
    return float(1.0 + np.max(np.abs(sol.vprime[mask]) / sol.v[mask]))

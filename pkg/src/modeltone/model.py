"""Rotationally symmetric models: the coefficient ODE g'' = G g and the
curvature summaries used to decide whether a ball radius is admissible."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dsl import ScalarExpr, evaluate, evaluate_array, parse

DEFAULT_MAX_GRID = 10**7
SUP_SAMPLES = 10_000
TAIL_PANELS = 10_000


class GridTooLarge(ValueError):
    pass


def max_grid() -> int:
    return int(os.environ.get("MODEL_TONE_MAX_GRID", DEFAULT_MAX_GRID))


@dataclass(frozen=True)
class CurvatureProfile:
    """Comparison profile G; the model's radial curvature is -G.

    ``s0`` declares G_-(s) = 0 for s >= s0 and is only needed by
    :func:`tail_criterion`.
    """

    G: ScalarExpr
    s0: float | None = None

    def __post_init__(self):
        if isinstance(self.G, str):
            object.__setattr__(self, "G", parse(self.G))
        if self.s0 is not None and self.s0 < 0:
            raise ValueError("compact_support_radius must be non-negative")

    @classmethod
    def constant(cls, value: float) -> "CurvatureProfile":
        return cls(parse(repr(float(value))) if value >= 0 else parse(f"-{-float(value)!r}"))


def as_profile(G) -> CurvatureProfile:
    if isinstance(G, CurvatureProfile):
        return G
    if isinstance(G, (int, float)):
        return CurvatureProfile.constant(G)
    return CurvatureProfile(G)


@dataclass(frozen=True, eq=False)
class ModelProfile:
    grid: np.ndarray
    g: np.ndarray
    gprime: np.ndarray
    G_grid: np.ndarray
    R0: float
    Rmono: float
    step: float
    tol: float
    profile: CurvatureProfile = field(repr=False)

    @property
    def r_max(self) -> float:
        return float(self.grid[-1])

    @property
    def h(self) -> float:
        """Actual grid spacing (never larger than the nominal ``step``)."""
        return float(self.grid[1] - self.grid[0])

    def to_csv(self, path) -> None:
        write_csv(path, ("r", "g", "gprime"), (self.grid, self.g, self.gprime))


def write_csv(path, header, columns) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([format(float(x), ".17g") for x in row])


def _hermite(y0, d0, y1, d1, h, s):
    s2 = s * s
    s3 = s2 * s
    return ((2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0
            + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1)


def _first_crossing(r, y, dy, tol) -> float:
    """First zero of y after r[0], refined by bisection on the cubic Hermite
    interpolant; +inf when y stays positive."""
    hits = np.nonzero(y[1:] <= 0.0)[0]
    if hits.size == 0:
        return math.inf
    i = int(hits[0]) + 1
    a, b = r[i - 1], r[i]
    h = b - a
    y0, d0, y1, d1 = y[i - 1], dy[i - 1], y[i], dy[i]
    lo, hi = 0.0, 1.0
    while (hi - lo) * h > tol:
        mid = 0.5 * (lo + hi)
        if _hermite(y0, d0, y1, d1, h, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return float(a + 0.5 * (lo + hi) * h)


def _integrate(G_half: np.ndarray, h: float, n: int, scale: float = 1.0):
    G0 = G_half[0]
    # one-sided estimate of G'(0) for the r^4 series term
    G1 = (-3.0 * G_half[0] + 4.0 * G_half[1] - G_half[2]) / h
    g = np.empty(n + 1)
    gp = np.empty(n + 1)
    g[0] = 0.0
    gp[0] = scale
    g[1] = scale * (h + G0 * h**3 / 6.0 + G1 * h**4 / 12.0)
    gp[1] = scale * (1.0 + G0 * h**2 / 2.0 + G1 * h**3 / 3.0)
    kernels.rk4_coefficient(np.ascontiguousarray(G_half), h, g, gp, 1)
    return g, gp


def solve_coefficient(profile, r_max: float, step: float, *, estimate_error: bool = True) -> ModelProfile:
    """Solve g'' = G g, g(0) = 0, g'(0) = 1 on [0, r_max] with fixed-step RK4.

    The grid has an even number of intervals no wider than ``step``.  ``tol``
    is a Richardson estimate from a second pass at twice the spacing.
    """
    profile = as_profile(profile)
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    if not step > 0:
        raise ValueError("step must be positive")
    n = max(4, math.ceil(r_max / step * (1 - 1e-12)))
    n += n % 2
    if n + 1 > max_grid():
        raise GridTooLarge(f"{n + 1} grid points exceed the cap of {max_grid()} (MODEL_TONE_MAX_GRID)")
    h = r_max / n
    r_half = np.linspace(0.0, r_max, 2 * n + 1)
    G_half = evaluate_array(profile.G, r_half)
    g, gp = _integrate(G_half, h, n)
    tol = 0.0
    if estimate_error:
        gc, _ = _integrate(G_half[::2], 2 * h, n // 2)
        tol = float(np.max(np.abs(g[::2] - gc)) / 15.0)
    grid = r_half[::2].copy()
    G_grid = G_half[::2].copy()
    R0 = _first_crossing(grid, g, gp, step * 1e-6)
    Rmono = _first_crossing(grid, gp, G_grid * g, step * 1e-6)
    for a in (grid, g, gp, G_grid):
        a.setflags(write=False)
    return ModelProfile(grid, g, gp, G_grid, R0, Rmono, float(step), tol, profile)


def model_for_radius(profile, R: float, steps: int = 10_000, refine: int = 4) -> ModelProfile:
    """Model covering [0, R] fine enough for an eigenfunction grid of ``steps`` intervals."""
    return solve_coefficient(profile, R, R / (refine * steps), estimate_error=False)


def sup_g_minus(profile, R: float, samples: int = SUP_SAMPLES) -> float:
    """sup of G_- = max(0, -G) over [0, R].

    Dense sampling followed by golden-section refinement of the largest
    interior local maxima.
    """
    profile = as_profile(profile)
    if not R > 0:
        raise ValueError("R must be positive")
    r = np.linspace(0.0, R, samples + 1)
    neg = -evaluate_array(profile.G, r)
    best = float(np.max(neg))
    mid, left, right = neg[1:-1], neg[:-2], neg[2:]
    peak = (mid >= left) & (mid >= right) & ((mid > left) | (mid > right))
    inner = np.nonzero(peak)[0] + 1
    if inner.size:
        top = inner[np.argsort(neg[inner])[-5:]]
        G = profile.G
        for i in top:
            x = golden_section_min(lambda s: evaluate(G, s), r[i - 1], r[i + 1])
            best = max(best, -evaluate(G, x))
    return max(0.0, best)


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, a: float, b: float, tol: float = 1e-13) -> float:
    """Minimiser of a unimodal f on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol * max(1.0, abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def admissibility(profile, R: float, samples: int = SUP_SAMPLES) -> float:
    """phi(R) = 2 R sqrt(||G_-||_{[0,R)}); the radius is admissible iff phi(R) <= pi."""
    return 2.0 * R * math.sqrt(sup_g_minus(profile, R, samples))


def admissible_radius(profile, r_cap: float, samples: int = SUP_SAMPLES, rel_tol: float = 1e-8) -> float:
    """Largest R <= r_cap with 2 R sqrt(||G_-||_{[0,R)}) <= pi, or +inf if G_- vanishes on [0, r_cap]."""
    profile = as_profile(profile)
    if not r_cap > 0:
        raise ValueError("r_cap must be positive")
    s_cap = sup_g_minus(profile, r_cap, samples)
    if s_cap == 0.0:
        return math.inf
    if 2.0 * r_cap * math.sqrt(s_cap) <= math.pi:
        return float(r_cap)
    # phi is nondecreasing in R, so bisect on phi(R) = pi
    lo, hi = 0.0, float(r_cap)
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if admissibility(profile, mid, samples) <= math.pi:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class TailResult:
    holds: bool
    sup: float
    witness: float


# Simpson quadrature of a constant tail hits 1/4 only up to rounding.
TAIL_SLACK = 1e-12


def tail_criterion(profile, panels: int = TAIL_PANELS) -> TailResult:
    """Check sup_{0 < t <= s0} t * int_t^{s0} G_-(s) ds <= 1/4."""
    profile = as_profile(profile)
    s0 = profile.s0
    if s0 is None:
        raise ValueError("tail_criterion needs a compact_support_radius s0")
    if s0 == 0.0:
        return TailResult(True, 0.0, 0.0)
    x = np.linspace(0.0, s0, 2 * panels + 1)
    gm = np.maximum(0.0, -evaluate_array(profile.G, x))
    h = s0 / (2 * panels)
    pieces = h / 3.0 * (gm[:-2:2] + 4.0 * gm[1:-1:2] + gm[2::2])
    tails = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    t = x[::2]
    prod = t * tails
    k = int(np.argmax(prod[1:])) + 1
    sup = float(prod[k]) + 0.0  # normalise -0.0
    return TailResult(sup <= 0.25 + TAIL_SLACK, sup, float(t[k]))

"""Exhaustion-indexed lower bounds for lambda*(M \\ K_j) and discreteness verdicts.

The bottom of the essential spectrum is the limit of lambda*(M \\ K_j) over
any exhaustion, so a lower-bound sequence that diverges certifies purely
discrete spectrum.  A finite computation can only report trend evidence;
the verdict rule below is that evidence, stated explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .dsl import ScalarExpr, evaluate_array, parse, to_string
from .eig import eigenvalue_for, gradient_bound_constant
from .model import as_profile, write_csv

DISCRETE = "DISCRETE"
INCONCLUSIVE = "INCONCLUSIVE"
GROWTH_FACTOR = 1e3
CAUCHY_TOL = 1e-6


@dataclass
class DiscretenessReport:
    indices: list[int]
    lower_bounds: list[float]
    verdict: str
    parameters: dict[str, Any] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"verdict": self.verdict, "indices": self.indices, "lower_bounds": self.lower_bounds,
                "parameters": self.parameters, **self.details}

    def to_csv(self, path) -> None:
        write_csv(path, ("j", "lower_bound"), (self.indices, self.lower_bounds))


def _first_positive(values) -> float | None:
    for v in values:
        if v > 0:
            return float(v)
    return None


def _final_quarter(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return values[len(values) - max(2, len(values) // 4):]


def verdict(values: Sequence[float], reference: float | None = None) -> str:
    """DISCRETE iff the final quarter is strictly increasing and the last value
    exceeds 10^3 times the reference (default: the first positive value)."""
    if len(values) < 2:
        return INCONCLUSIVE
    ref = _first_positive(values)
    if ref is None:
        return INCONCLUSIVE
    if reference is not None:
        ref = max(ref, reference)
    tail = _final_quarter(values)
    if np.all(np.diff(tail) > 0) and values[-1] > GROWTH_FACTOR * ref:
        return DISCRETE
    return INCONCLUSIVE


@dataclass(frozen=True)
class PerssonLimit:
    verdict: str
    liminf_estimate: float
    converged: bool


def persson_limit(bounds: Sequence[float]) -> PerssonLimit:
    """Verdict plus an estimate of lim lambda*(M \\ K_j).

    Each term is already a lower bound for the bottom of the essential
    spectrum, so the last one is reported; ``converged`` says whether the
    final quarter is Cauchy within 1e-6.
    """
    if len(bounds) < 8:
        raise ValueError("need at least 8 terms")
    v = verdict(bounds)
    if v == DISCRETE:
        return PerssonLimit(v, math.inf, False)
    tail = _final_quarter(bounds)
    converged = float(np.max(tail) - np.min(tail)) <= CAUCHY_TOL * max(1.0, abs(float(tail[-1])))
    return PerssonLimit(v, float(bounds[-1]), converged)


def default_z_seq(count: int = 24) -> list[float]:
    return [2.0 ** -j for j in range(1, count + 1)]


def graph_discreteness(q: int, R: float, Hz, z_seq: Sequence[float] | None = None,
                       rel_tol: float = 1e-12) -> DiscretenessReport:
    """Graph hypersurfaces of H^{q+1} over a relatively compact W at infinity.

    lower_bound(j) = [lambda_1(B(2R)) - q C(R) Hz(z_j) z_j^2 - q z_j^2] / z_j^2,
    with the Euclidean (q-1)-ball of radius 2R and C(R) = 1 + sup_{B(R)} |v'|/v.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if not R > 0:
        raise ValueError("R must be positive")
    if isinstance(Hz, str):
        Hz = parse(Hz)
    z = np.asarray(default_z_seq() if z_seq is None else z_seq, dtype=float)
    if np.any(z <= 0) or np.any(np.diff(z) >= 0):
        raise ValueError("z_seq must be positive and strictly decreasing")
    sol = eigenvalue_for("0", q - 1, 2.0 * R, rel_tol)
    lam = sol.lambda1
    C = gradient_bound_constant(sol, R)
    h = evaluate_array(Hz, z)
    if np.any(h < 0):
        raise ValueError("Hz must be non-negative")
    z2 = z * z
    lower = (lam - q * C * h * z2 - q * z2) / z2
    decay = h * z2
    peak = float(np.max(np.abs(decay)))
    tail = _final_quarter(decay)
    hyp = peak == 0.0 or (bool(np.all(np.diff(tail) <= 0)) and abs(float(decay[-1])) <= 1e-3 * peak)
    lower_list = [float(x) for x in lower]
    v = verdict(lower_list)
    return DiscretenessReport(
        indices=list(range(1, len(z) + 1)),
        lower_bounds=lower_list,
        verdict=v,
        parameters={"q": q, "R": R, "Hz": to_string(Hz), "z_seq": [float(x) for x in z]},
        details={"lambda1": lam, "C_R": C, "hypothesis_z2Hz_to_zero": hyp,
                 "z2Hz": [float(x) for x in decay]},
    )


def _reference_envelope(A: np.ndarray, B: np.ndarray, H: float) -> float | None:
    """Largest first-positive value of A - h B over h in [0, H].

    Using this as the growth reference keeps verdicts monotone in H: a larger
    H lowers every term and never lowers the reference.
    """
    candidates = [0.0]
    for a, b in zip(A, B):
        if b > 0 and a > 0 and a / b <= H:
            candidates.append(a / b)
    best = None
    for h in candidates:
        fp = _first_positive(A - h * B)
        if fp is not None and (best is None or fp > best):
            best = fp
    return best


def nonproper_discreteness(m: int, n: int, c1: float, c2: float, H_sup: float, C_grad: float,
                           G, j_max: int, rel_tol: float = 1e-12) -> DiscretenessReport:
    """Strongly non-proper immersions with limit set in N x {o}.

    lower_bound(j) = (lambda_1(B_g(2/j)) - m c2^2) / c1^2 - m H_sup C_grad j,
    lambda_1 taken in the (m - n)-dimensional model.  Radii at or beyond the
    first zero of g are skipped and listed.
    """
    if not (m > n >= 1):
        raise ValueError("need m > n >= 1")
    if not c1 > 0:
        raise ValueError("c1 must be positive")
    if c2 < 0 or H_sup < 0:
        raise ValueError("c2 and H_sup must be non-negative")
    if not C_grad > 0:
        raise ValueError("C_grad must be positive")
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    profile = as_profile(G)
    kappa = m - n
    idx, lams, skipped = [], [], []
    R0 = math.inf
    if kappa > 1:
        from .model import solve_coefficient
        R0 = solve_coefficient(profile, 2.0, 2.0 / 40_000, estimate_error=False).R0
    for j in range(1, j_max + 1):
        R = 2.0 / j
        if R >= R0:
            skipped.append(j)
            continue
        lams.append(eigenvalue_for(profile, kappa, R, rel_tol).lambda1)
        idx.append(j)
    js = np.asarray(idx, dtype=float)
    lam = np.asarray(lams)
    A = (lam - m * c2 * c2) / (c1 * c1)
    B = m * C_grad * js
    lower = A - H_sup * B
    ref = _reference_envelope(A, B, H_sup) if H_sup > 0 else None
    lower_list = [float(x) for x in lower]
    v = verdict(lower_list, ref) if lower_list else INCONCLUSIVE
    fit_mask = js >= 8 if np.count_nonzero(js >= 8) >= 2 else np.ones_like(js, dtype=bool)
    jf = js[fit_mask]
    fit = float(np.sum(lam[fit_mask] * jf**2) / np.sum(jf**4)) if jf.size else math.nan
    negative = [j for j, b in zip(idx, lower_list) if b <= 0]
    return DiscretenessReport(
        indices=idx,
        lower_bounds=lower_list,
        verdict=v,
        parameters={"m": m, "n": n, "c1": c1, "c2": c2, "H_sup": H_sup, "C_grad": C_grad,
                    "G": to_string(profile.G), "j_max": j_max},
        details={"lambda1": [float(x) for x in lam], "j2_fit_constant": fit,
                 "last_nonpositive_index": negative[-1] if negative else None,
                 "skipped_indices": skipped, "growth_reference": ref},
    )

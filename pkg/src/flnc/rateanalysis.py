"""Saturating-exponential fits to optimal-rate-versus-blocklength curves.

The optimal rate climbs like rho*(N) = c - a exp(-bN) before flattening
toward its asymptote, so the interesting region (N up to about 100) is
summarized by the fitted slope ab exp(-bN) and its average over a
blocklength interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

B_LO = 1e-4
B_HI = 1.0
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExpFit:
    """Parameters of rho*(N) = c - a exp(-bN)."""

    a: float
    b: float
    c: float
    residual: float  # root-mean-square misfit over the input points
    degenerate: bool = False

    def predict(self, N):
        return self.c - self.a * np.exp(-self.b * np.asarray(N, dtype=float))


@dataclass(frozen=True)
class SlopeSummary:
    theta: float
    endpoints: tuple[float, float]


def _solve_linear(ns: np.ndarray, rhos: np.ndarray, b: float):
    """Best (c, a) for fixed b, plus the summed squared error."""
    basis = np.column_stack([np.ones_like(ns), -np.exp(-b * ns)])
    coef, *_ = np.linalg.lstsq(basis, rhos, rcond=None)
    resid = rhos - basis @ coef
    return float(coef[0]), float(coef[1]), float(resid @ resid)


def fit_saturating_exp(points: Sequence[tuple[float, float]]) -> ExpFit:
    """Least-squares fit of rho*(N) = c - a exp(-bN).

    The decay rate b is found by golden-section search on [1e-4, 1] with
    (c, a) solved linearly at each b, so the whole fit is deterministic.
    Constant data (or data with no positive-amplitude saturating shape)
    comes back flagged degenerate.
    """
    pts = [(float(n), float(r)) for n, r in points]
    if len(pts) < 4:
        raise ValueError(f"need at least 4 points to fit, got {len(pts)}")
    ns = np.array([p[0] for p in pts])
    rhos = np.array([p[1] for p in pts])
    if np.any(np.diff(ns) <= 0):
        raise ValueError("blocklengths must be strictly increasing")
    if float(np.ptp(rhos)) < 1e-12:
        mean = float(rhos.mean())
        return ExpFit(a=0.0, b=B_LO, c=mean, residual=0.0, degenerate=True)

    def sse(b: float) -> float:
        return _solve_linear(ns, rhos, b)[2]

    lo, hi = B_LO, B_HI
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = sse(x1), sse(x2)
    for _ in range(200):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = sse(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = sse(x2)
        if hi - lo < 1e-13:
            break
    b = 0.5 * (lo + hi)
    candidates = [b, B_LO, B_HI]
    b = min(candidates, key=sse)
    c, a, err = _solve_linear(ns, rhos, b)
    rms = math.sqrt(err / len(pts))
    degenerate = a <= 0.0 or b <= B_LO * (1 + 1e-6) or b >= B_HI * (1 - 1e-9)
    return ExpFit(a=a, b=b, c=c, residual=rms, degenerate=degenerate)


def slope_at(fit: ExpFit, N: float) -> float:
    """Instantaneous rate gain d(rho*)/dN at blocklength N."""
    return fit.a * fit.b * math.exp(-fit.b * N)


def average_slope(fit: ExpFit, N1: float, N2: float) -> SlopeSummary:
    """Mean rate gain per slot of blocklength over [N1, N2]."""
    if not N1 < N2:
        raise ValueError(f"need N1 < N2, got ({N1}, {N2})")
    theta = (fit.a * math.exp(-fit.b * N1) - fit.a * math.exp(-fit.b * N2)) / (N2 - N1)
    return SlopeSummary(theta=theta, endpoints=(float(N1), float(N2)))

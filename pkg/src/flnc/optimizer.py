"""Binary search for the highest coding rate under a loss-rate target.

Works on any rate-to-loss evaluator that is non-decreasing in the rate,
which the Gaussian bound argument guarantees for the analytic path and
which holds empirically for the simulated schemes. Evaluations are
memoized within a search so a noisy evaluator at least sees one
consistent function; with a truly monotone evaluator the result equals a
linear scan while spending only O(log |Psi|) evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from . import montecarlo
from .analytic import plr_rlnc
from .gf import GfField
from .network import LineNetwork
from .schemes import DEFAULT_FIELD, CodeSpec, Scheme


@dataclass(frozen=True)
class RateSet:
    """Ascending candidate rates K/N, all valid for the scheme at N."""

    scheme: Scheme
    N: int
    ks: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        prev = 0
        for k in self.ks:
            if not (0 < k <= self.N):
                raise ValueError(f"K={k} outside (0, {self.N}]")
            if k <= prev:
                raise ValueError("candidate K values must be strictly increasing")
            prev = k

    @property
    def rhos(self) -> tuple[float, ...]:
        return tuple(k / self.N for k in self.ks)

    def __len__(self) -> int:
        return len(self.ks)

    @classmethod
    def for_scheme(cls, scheme: Scheme, N: int) -> "RateSet":
        """Every rate whose K satisfies the scheme's shape constraints.

        For SWNC the K here is the encoder window w_e, so the same evenness
        constraints as SNC-S apply.
        """
        if scheme in (Scheme.SNC_S, Scheme.SWNC):
            ks = tuple(k for k in range(2, N + 1, 2) if (N - k) % 2 == 0)
        else:
            ks = tuple(range(1, N + 1))
        return cls(scheme=scheme, N=N, ks=ks)


@dataclass(frozen=True)
class RateSearchResult:
    """Outcome of one rate search; empty fields mean no feasible rate."""

    rho_star: float | None
    K_star: int | None
    achieved_plr: float | None
    evaluations: int

    @property
    def feasible(self) -> bool:
        return self.rho_star is not None


def optimal_rate(
    evaluator: Callable[[float], float], psi: RateSet, target: float
) -> RateSearchResult:
    """Largest rate in `psi` whose evaluated loss is at most `target`.

    Under a non-decreasing evaluator the feasible rates form a prefix of
    `psi`, so the last feasible index is found by bisection. The distinct
    evaluation count never exceeds ceil(log2 |psi|) + 1.
    """
    if not (0.0 <= target <= 1.0):
        raise ValueError(f"target must lie in [0, 1], got {target}")
    n = len(psi)
    if n == 0:
        return RateSearchResult(None, None, None, 0)
    rhos = psi.rhos
    cache: dict[int, float] = {}

    def value(i: int) -> float:
        if i not in cache:
            cache[i] = float(evaluator(rhos[i]))
        return cache[i]

    lo, hi = 0, n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if value(mid) <= target:
            lo = mid
        else:
            hi = mid - 1
    if value(lo) <= target:
        return RateSearchResult(
            rho_star=rhos[lo],
            K_star=psi.ks[lo],
            achieved_plr=cache[lo],
            evaluations=len(cache),
        )
    return RateSearchResult(None, None, None, len(cache))


def make_evaluator(
    scheme: Scheme,
    N: int,
    net: LineNetwork,
    *,
    field: GfField = DEFAULT_FIELD,
    method: str = "auto",
    trials: int = 2000,
    seed: int = 0,
    groups: int = montecarlo.DEFAULT_GROUPS,
    warmup_groups: int = montecarlo.DEFAULT_WARMUP_GROUPS,
    infinite_field: bool = False,
) -> Callable[[float], float]:
    """Rate-to-loss function for one (scheme, N, network) slice.

    method="analytic" is exact and only exists for RLNC; "montecarlo"
    simulates with a fixed (seed, trials) so each rate evaluates
    deterministically; "auto" picks analytic for RLNC and simulation
    otherwise. The rate is mapped back to K = ceil(N * rho).
    """
    if method not in ("auto", "analytic", "montecarlo"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" and scheme is not Scheme.RLNC:
        raise ValueError(f"no closed-form loss rate for {scheme.value}; use montecarlo")
    use_analytic = scheme is Scheme.RLNC and method in ("auto", "analytic")

    def evaluate(rho: float) -> float:
        K = math.ceil(N * rho - 1e-9)
        spec = CodeSpec(scheme=scheme, K=K, N=N, field=field)
        if use_analytic:
            return plr_rlnc(spec, net, infinite_field=infinite_field)
        statistic = "generation" if scheme is Scheme.RLNC else "packet"
        est = montecarlo.estimate_plr(
            spec,
            net,
            trials,
            seed,
            statistic=statistic,
            groups=groups,
            warmup_groups=warmup_groups,
        )
        return est.mean

    return evaluate


@dataclass(frozen=True)
class RatePoint:
    N: int
    target: float
    result: RateSearchResult


def optimal_rate_curve(
    scheme: Scheme,
    net: LineNetwork,
    targets: Sequence[float],
    N_list: Sequence[int],
    **evaluator_kwargs,
) -> list[RatePoint]:
    """Rate search at every (target, N) pair, N-major within each target."""
    points = []
    for target in targets:
        for N in N_list:
            evaluator = make_evaluator(scheme, N, net, **evaluator_kwargs)
            psi = RateSet.for_scheme(scheme, N)
            points.append(
                RatePoint(N=N, target=target, result=optimal_rate(evaluator, psi, target))
            )
    return points

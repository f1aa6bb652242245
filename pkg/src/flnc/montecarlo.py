"""Monte Carlo loss-rate estimation for any scheme.

Trials are numbered substreams of one counter-based seed, so estimates
are deterministic for a given (seed, trials) and independent of execution
order. The primary statistic is the fraction of information packets left
undecoded; the all-or-nothing per-block statistic is exposed as well
because full-block coding fails whole generations at a time, which makes
the per-packet confidence interval misleadingly tight there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .network import LineNetwork
from .schemes import CodeSpec, Scheme, _schedule_arrays

DEFAULT_TRIALS = 100_000
DEFAULT_GROUPS = 12
DEFAULT_WARMUP_GROUPS = 2


@dataclass(frozen=True)
class PlrEstimate:
    """Estimated loss probability with a 95% normal-approximation CI."""

    mean: float
    trials: int
    packets_observed: int
    ci_halfwidth: float

    @classmethod
    def from_counts(cls, failed: int, observed: int, trials: int) -> "PlrEstimate":
        mean = failed / observed if observed else 0.0
        ci = 1.96 * math.sqrt(mean * (1.0 - mean) / observed) if observed else 0.0
        return cls(mean=mean, trials=trials, packets_observed=observed, ci_halfwidth=ci)


def _decoded_counts(
    spec: CodeSpec,
    net: LineNetwork,
    trials: int,
    seed: int,
    groups: int,
    warmup_groups: int,
) -> tuple[np.ndarray, int]:
    """Per-unit decoded counts and the offered packets per unit.

    A unit is one generation for block schemes, one post-warm-up group for
    the sliding-window scheme.
    """
    fld = spec.field
    deltas = np.asarray(net.erasure_probs, dtype=np.float64)
    if spec.scheme is Scheme.SWNC:
        if groups <= warmup_groups:
            raise ValueError(
                f"need more than warmup_groups={warmup_groups} groups, got {groups}"
            )
        counts = _kernels.mc_swnc(
            spec.K_s,
            spec.n_c,
            net.hops,
            deltas,
            groups,
            spec.w_d,
            fld.exp,
            fld.log,
            fld.q,
            seed,
            trials,
        )
        return np.asarray(counts)[:, warmup_groups:].ravel(), spec.K_s
    sys_a, lo_a, hi_a = _schedule_arrays(spec)
    counts = _kernels.mc_block(
        sys_a,
        lo_a,
        hi_a,
        spec.K,
        net.hops,
        deltas,
        spec.scheme is Scheme.RLNC,
        fld.exp,
        fld.log,
        fld.q,
        seed,
        trials,
    )
    return np.asarray(counts), spec.K


def estimate_plr(
    spec: CodeSpec,
    net: LineNetwork,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    *,
    statistic: str = "packet",
    groups: int = DEFAULT_GROUPS,
    warmup_groups: int = DEFAULT_WARMUP_GROUPS,
) -> PlrEstimate:
    """Estimate the loss rate of `spec` over `net`.

    statistic="packet" averages undecoded information packets (the loss
    rate proper); statistic="generation" counts a unit as failed unless
    every packet in it decoded. The smallest resolvable loss rate is about
    10 / (trials * K); tighter targets need the analytic path.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if statistic not in ("packet", "generation"):
        raise ValueError(f"unknown statistic {statistic!r}")
    counts, offered = _decoded_counts(spec, net, trials, seed, groups, warmup_groups)
    units = counts.shape[0]
    if statistic == "packet":
        failed = int(units) * offered - int(counts.sum())
        return PlrEstimate.from_counts(failed, units * offered, trials)
    failed = int(np.count_nonzero(counts != offered))
    return PlrEstimate.from_counts(failed, units, trials)


def estimate_plr_curve(
    specs: Sequence[CodeSpec],
    net: LineNetwork,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    **kwargs,
) -> list[tuple[float, PlrEstimate]]:
    """Loss rate per rate point of a K sweep at fixed scheme and N.

    Erasure draws depend only on (seed, trial, link, slot), never on K, so
    every point in the sweep sees the same loss patterns and the empirical
    curve inherits the monotonicity of the underlying schemes.
    """
    specs = list(specs)
    if not specs:
        return []
    first = specs[0]
    for s in specs[1:]:
        if s.scheme is not first.scheme or s.N != first.N or s.field != first.field:
            raise ValueError("sweep must vary K only (same scheme, N, field)")
    return [(s.rho, estimate_plr(s, net, trials, seed, **kwargs)) for s in specs]

"""Closed-form loss rates and bounds for block random linear coding.

Covers the exact block-loss formula for a line of erasure links (finite
field or the infinite-field limit), a normal-approximation bound pair on
it, and the continuous-in-rate Gaussian upper bound that drives the rate
search's monotonicity assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import binom as _binom

from .network import LineNetwork
from .schemes import CodeSpec, Scheme


def binom_pmf(n: int, trials: int, p: float) -> float:
    """P[Binomial(trials, p) = n]."""
    if not (0 <= n <= trials):
        raise ValueError(f"n must lie in [0, {trials}], got {n}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(_binom.pmf(n, trials, p))


def full_rank_probability(K: int, n: int, q: float) -> float:
    """P that a K x n matrix with i.i.d. uniform GF(q) entries has rank K.

    Zero for n < K; for q = math.inf the limit value 1 is returned.
    """
    if K < 0 or n < 0:
        raise ValueError("dimensions must be nonnegative")
    if K == 0:
        return 1.0
    if n < K:
        return 0.0
    if math.isinf(q):
        return 1.0
    logq = math.log(q)
    acc = 0.0
    for j in range(K):
        acc += math.log1p(-math.exp((j - n) * logq))
    return math.exp(acc)


def plr_rlnc(spec: CodeSpec, net: LineNetwork, infinite_field: bool = False) -> float:
    """Exact packet loss rate of full-block random coding on a line.

    Per link, the block decodes when the binomially-many received packets
    contain K independent combinations; the chain succeeds only if every
    link does. With `infinite_field` the rank factor is 1.
    """
    if spec.scheme is not Scheme.RLNC:
        raise ValueError("plr_rlnc applies to the RLNC scheme")
    K, N = spec.K, spec.N
    q = math.inf if infinite_field else float(spec.field.q)
    prod = 1.0
    for delta in net.erasure_probs:
        p = 1.0 - delta
        if infinite_field:
            link_ok = float(_binom.sf(K - 1, N, p))
        else:
            link_ok = 0.0
            for n in range(K, N + 1):
                link_ok += full_rank_probability(K, n, q) * float(_binom.pmf(n, N, p))
        link_ok = min(max(link_ok, 0.0), 1.0)
        prod *= link_ok
    return 1.0 - prod


def entropy_H(x: float, p: float) -> float:
    """KL divergence between Bernoulli(x) and Bernoulli(p) in nats."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must lie strictly inside (0, 1), got {p}")
    acc = 0.0
    if x > 0.0:
        acc += x * math.log(x / p)
    if x < 1.0:
        acc += (1.0 - x) * math.log((1.0 - x) / (1.0 - p))
    return acc


def std_normal_cdf(y: float) -> float:
    return 0.5 * math.erfc(-y / math.sqrt(2.0))


def zubkov_C(m: float, trials: int, p: float) -> float:
    """Normal-approximation value for the binomial CDF at m successes.

    Evaluates phi(sgn(m/trials - p) * sqrt(2 * trials * H(m/trials, p))),
    with sgn(0) taken as 0 so the central point gives exactly 0.5.
    """
    if not (0 <= m <= trials):
        raise ValueError(f"m must lie in [0, {trials}], got {m}")
    x = m / trials
    return _normal_tail_value(x, trials, p)


def _normal_tail_value(x: float, trials: int, p: float) -> float:
    # phi(sgn(x-p) sqrt(2 trials H(x,p))) extended by continuity to
    # p in {0, 1}, where the divergence blows up unless x sits on p.
    if x == p:
        return 0.5
    if p >= 1.0:
        return 0.0  # x < p, infinitely deep left tail
    if p <= 0.0:
        return 1.0  # x > p, infinitely deep right tail
    sgn = math.copysign(1.0, x - p)
    return std_normal_cdf(sgn * math.sqrt(2.0 * trials * entropy_H(x, p)))


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise ValueError(
                f"bounds must satisfy 0 <= lower <= upper <= 1, "
                f"got ({self.lower}, {self.upper})"
            )


def plr_rlnc_bounds(spec: CodeSpec, net: LineNetwork) -> BoundPair:
    """Bound pair around the infinite-field block loss rate.

    Each link's decode probability is sandwiched between the normal
    approximations of the binomial CDF at K-1 and at K received packets.
    """
    if spec.scheme is not Scheme.RLNC:
        raise ValueError("plr_rlnc_bounds applies to the RLNC scheme")
    K, N = spec.K, spec.N
    lo_prod = 1.0
    hi_prod = 1.0
    for delta in net.erasure_probs:
        p = 1.0 - delta
        lo_prod *= 1.0 - zubkov_C(K - 1, N, p)
        hi_prod *= 1.0 - zubkov_C(K, N, p)
    return BoundPair(lower=1.0 - lo_prod, upper=1.0 - hi_prod)


def plr_gaussian_upper(rho: float, trials: int, net: LineNetwork) -> float:
    """Continuous-in-rate upper-bound loss rate at blocklength `trials`.

    Non-decreasing in rho, which is what justifies binary search for the
    largest rate under a loss target.
    """
    if not (0.0 < rho <= 1.0):
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    prod = 1.0
    for delta in net.erasure_probs:
        prod *= 1.0 - _normal_tail_value(rho, trials, 1.0 - delta)
    return 1.0 - prod

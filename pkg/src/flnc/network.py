"""Line-network topology and the deterministic erasure process.

Randomness is counter-based: each draw is a pure function of
(seed, purpose, trial, position), so any draw can be replayed in isolation
and trials can run in any order or in parallel without changing results.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels

MAX_SEED = 1 << 63  # keep seeds inside int64 for the compiled kernels


@dataclass(frozen=True)
class LineNetwork:
    """Source -> relay -> ... -> destination chain of erasure links."""

    erasure_probs: tuple[float, ...]

    def __init__(self, erasure_probs):
        probs = tuple(float(p) for p in erasure_probs)
        if len(probs) == 0:
            raise ValueError("a line network needs at least one link")
        for p in probs:
            if not (0.0 <= p < 1.0):
                raise ValueError(f"erasure probability {p} outside [0, 1)")
        object.__setattr__(self, "erasure_probs", probs)

    @property
    def hops(self) -> int:
        return len(self.erasure_probs)

    @property
    def relay_count(self) -> int:
        return len(self.erasure_probs) - 1

    @classmethod
    def uniform(cls, delta: float, hops: int) -> "LineNetwork":
        if hops < 1:
            raise ValueError("hops must be at least 1")
        return cls((delta,) * hops)


def min_cut(net: LineNetwork) -> float:
    """Capacity of the worst link, in packets per slot."""
    return 1.0 - max(net.erasure_probs)


@dataclass(frozen=True)
class RngStream:
    """Addressable randomness source: a seed plus a trial index."""

    seed: int
    trial: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < MAX_SEED):
            raise ValueError(f"seed must lie in [0, 2^63), got {self.seed}")
        if int(self.trial) < 0:
            raise ValueError("trial index must be nonnegative")

    def with_trial(self, trial: int) -> "RngStream":
        return RngStream(self.seed, trial)


def erase(net: LineNetwork, link: int, slot: int, stream: RngStream) -> bool:
    """True when the packet sent on `link` during `slot` is lost.

    Draws depend only on (seed, trial, link, slot), never on the coding
    scheme or rate, so rate sweeps see identical erasure patterns.
    """
    if not (0 <= link < net.hops):
        raise ValueError(f"link index {link} out of range for {net.hops} hops")
    if slot < 0:
        raise ValueError("slot must be nonnegative")
    u = _kernels._u01(stream.seed, _kernels.R_ERASE + link, stream.trial, slot)
    return u < net.erasure_probs[link]

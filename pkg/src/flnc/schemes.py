"""Coding schemes for a line network: schedules and reference simulators.

Four schemes share one pipeline model. Slots tick at the source; a packet
sent in a slot traverses every surviving link within that slot
(cut-through). Relays buffer what arrives. On a block scheme, a relay that
receives nothing this slot substitutes a fresh random combination of its
buffer; an RLNC relay re-encodes every slot regardless. The sliding-window
scheme streams groups of packets through a bounded encoder window and a
bounded decoder window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .gf import GfField
from .linalg import GfMatrix
from .network import LineNetwork, RngStream

DEFAULT_FIELD = GfField(8)


class Scheme(enum.Enum):
    RLNC = "RLNC"
    SNC = "SNC"
    SNC_S = "SNC-S"
    SWNC = "SWNC"

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        norm = str(text).strip().upper().replace("_", "-")
        for s in cls:
            if s.value == norm:
                return s
        valid = ", ".join(s.value for s in cls)
        raise ValueError(f"unknown scheme {text!r}; expected one of: {valid}")


class Slot(NamedTuple):
    """One transmission: either a systematic packet or a coded span."""

    kind: str  # "systematic" | "coded"
    index: int | None  # packet sequence number for systematic slots
    span: tuple[int, int]  # half-open range of packets the slot can involve


@dataclass(frozen=True)
class CodeSpec:
    """Scheme plus block geometry.

    K and N are information packets and transmitted slots per block. For
    SWNC a "block" is one group: K packets plus N - K coded slots, with an
    encoder window two groups wide and a decoder window of w_d packets
    (default the encoder window width 2K).
    """

    scheme: Scheme
    K: int
    N: int
    field: GfField = dc_field(default_factory=lambda: DEFAULT_FIELD)
    w_d: int | None = None

    def __post_init__(self):
        if not isinstance(self.scheme, Scheme):
            raise ValueError("scheme must be a Scheme value")
        if self.K < 1:
            raise ValueError(f"K must be at least 1, got {self.K}")
        if self.N < self.K:
            raise ValueError(f"N must be at least K ({self.K}), got {self.N}")
        if self.scheme in (Scheme.SNC_S, Scheme.SWNC):
            what = "K" if self.scheme is Scheme.SNC_S else "encoder window K"
            if self.K % 2:
                raise ValueError(
                    f"{what} must be even for {self.scheme.value}, got {self.K}"
                )
            if (self.N - self.K) % 2:
                raise ValueError(
                    f"N - K must be even for {self.scheme.value} "
                    f"(two equal coded chunks), got N={self.N} K={self.K}"
                )
        if self.scheme is Scheme.SWNC:
            wd = self.w_d if self.w_d is not None else self.K
            if wd < self.K:
                raise ValueError(
                    f"decoder window w_d must cover the encoder window "
                    f"(at least {self.K}), got {wd}"
                )
            if wd % (self.K // 2):
                raise ValueError(
                    f"decoder window w_d must be a multiple of the group "
                    f"size {self.K // 2}, got {wd}"
                )
            object.__setattr__(self, "w_d", wd)
        elif self.w_d is not None:
            raise ValueError("w_d only applies to the SWNC scheme")

    @property
    def rho(self) -> float:
        return self.K / self.N

    @property
    def n_c(self) -> int:
        """Coded slots per chunk: per half-block for SNC-S, per group for SWNC."""
        if self.scheme in (Scheme.SNC_S, Scheme.SWNC):
            return (self.N - self.K) // 2
        return self.N - self.K

    @property
    def w_e(self) -> int:
        """Encoder window in packets; for SWNC this is K itself."""
        if self.scheme is not Scheme.SWNC:
            raise ValueError("encoder window only applies to the SWNC scheme")
        return self.K

    @property
    def K_s(self) -> int:
        """Packets per SWNC group: half the encoder window."""
        if self.scheme is not Scheme.SWNC:
            raise ValueError("group size only applies to the SWNC scheme")
        return self.K // 2


def swnc_window(spec: CodeSpec, group: int) -> tuple[int, int]:
    """Encoder window / re-encode span during 1-based group `group`."""
    if spec.scheme is not Scheme.SWNC:
        raise ValueError("window only applies to the SWNC scheme")
    if group < 1:
        raise ValueError("group numbering starts at 1")
    ks = spec.K_s
    lo = (group - 2) * ks if group >= 2 else 0
    return lo, group * ks


def transmit_schedule(spec: CodeSpec, group: int = 1) -> list[Slot]:
    """Slot sequence for one block, or for one SWNC group."""
    K, N = spec.K, spec.N
    if spec.scheme is Scheme.RLNC:
        return [Slot("coded", None, (0, K)) for _ in range(N)]
    if spec.scheme is Scheme.SNC:
        slots = [Slot("systematic", i, (i, i + 1)) for i in range(K)]
        slots += [Slot("coded", None, (0, K)) for _ in range(N - K)]
        return slots
    if spec.scheme is Scheme.SNC_S:
        h = K // 2
        nc = spec.n_c
        slots = [Slot("systematic", i, (i, i + 1)) for i in range(h)]
        slots += [Slot("coded", None, (0, h)) for _ in range(nc)]
        slots += [Slot("systematic", i, (i, i + 1)) for i in range(h, K)]
        slots += [Slot("coded", None, (0, K)) for _ in range(nc)]
        return slots
    lo, hi = swnc_window(spec, group)
    ks = spec.K_s
    base = (group - 1) * ks
    slots = [Slot("systematic", base + i, (base + i, base + i + 1)) for i in range(ks)]
    slots += [Slot("coded", None, (lo, hi)) for _ in range(spec.n_c)]
    return slots


def _schedule_arrays(spec: CodeSpec):
    slots = transmit_schedule(spec)
    n = len(slots)
    sys_a = np.empty(n, dtype=np.int64)
    lo_a = np.empty(n, dtype=np.int64)
    hi_a = np.empty(n, dtype=np.int64)
    for t, s in enumerate(slots):
        sys_a[t] = s.index if s.kind == "systematic" else -1
        lo_a[t], hi_a[t] = s.span
    return sys_a, lo_a, hi_a


def build_generator(spec: CodeSpec, stream: RngStream) -> GfMatrix:
    """K x N generator the source applies over one block.

    Column t holds the coefficients sent in slot t, drawn from the same
    counter RNG the simulator uses. SWNC sources are per group; see
    swnc_coded_generator.
    """
    if spec.scheme is Scheme.SWNC:
        raise ValueError("use swnc_coded_generator for the sliding-window scheme")
    fld = spec.field
    data = np.zeros((spec.K, spec.N), dtype=np.int64)
    for t, s in enumerate(transmit_schedule(spec)):
        if s.kind == "systematic":
            data[s.index, t] = 1
        else:
            for j in range(*s.span):
                data[j, t] = _kernels._coef(
                    stream.seed, _kernels.R_SRC, stream.trial, t, j, fld.q
                )
    return GfMatrix(fld, data)


def swnc_coded_generator(spec: CodeSpec, stream: RngStream, group: int = 1) -> GfMatrix:
    """Coefficients of one group's coded slots over its window span.

    Rows index the window packets (sequence numbers lo..hi-1 from
    swnc_window), columns the group's n_c coded slots.
    """
    lo, hi = swnc_window(spec, group)
    fld = spec.field
    ks = spec.K_s
    spg = ks + spec.n_c
    data = np.zeros((hi - lo, spec.n_c), dtype=np.int64)
    for c in range(spec.n_c):
        gslot = (group - 1) * spg + ks + c
        for j in range(hi - lo):
            data[j, c] = _kernels._coef(
                stream.seed, _kernels.R_SRC, stream.trial, gslot, j, fld.q
            )
    return GfMatrix(fld, data)


@dataclass(frozen=True)
class DeliveryReport:
    """Per-block (or per-group) decoding outcome at the destination."""

    block_id: int
    offered: int
    decoded_flags: np.ndarray

    @property
    def decoded_count(self) -> int:
        return int(np.count_nonzero(self.decoded_flags))

    @property
    def complete(self) -> bool:
        return self.decoded_count == self.offered


def run_generation(spec: CodeSpec, net: LineNetwork, stream: RngStream) -> DeliveryReport:
    """Push one block through the network; report which packets decoded."""
    if spec.scheme is Scheme.SWNC:
        raise ValueError("use run_stream_swnc for the sliding-window scheme")
    sys_a, lo_a, hi_a = _schedule_arrays(spec)
    fld = spec.field
    K, N, hops = spec.K, spec.N, net.hops
    deltas = np.asarray(net.erasure_probs, dtype=np.float64)
    bufs = np.zeros((hops - 1, N, K), dtype=np.int64)
    arrived = np.zeros((hops - 1, N), dtype=np.uint8)
    rows = np.zeros((K, K), dtype=np.int64)
    pivs = np.zeros(K, dtype=np.int64)
    decoded = np.zeros(K, dtype=np.uint8)
    packet = np.zeros(K, dtype=np.int64)
    _kernels.sim_block(
        sys_a,
        lo_a,
        hi_a,
        K,
        hops,
        deltas,
        spec.scheme is Scheme.RLNC,
        fld.exp,
        fld.log,
        fld.q,
        stream.seed,
        stream.trial,
        bufs,
        arrived,
        rows,
        pivs,
        decoded,
        packet,
    )
    return DeliveryReport(
        block_id=stream.trial, offered=K, decoded_flags=decoded.astype(bool)
    )


def run_stream_swnc(
    spec: CodeSpec, net: LineNetwork, groups: int, stream: RngStream
) -> list[DeliveryReport]:
    """Stream `groups` groups through the network; one report per group.

    A packet's decoded flag freezes when it leaves the decoder window (or
    when the stream ends); there is no end-of-stream flush beyond that.
    """
    if spec.scheme is not Scheme.SWNC:
        raise ValueError("run_stream_swnc requires the SWNC scheme")
    if groups < 1:
        raise ValueError("groups must be at least 1")
    fld = spec.field
    Ks, n_c, w_d, hops = spec.K_s, spec.n_c, spec.w_d, net.hops
    we = 2 * Ks
    spg = Ks + n_c
    deltas = np.asarray(net.erasure_probs, dtype=np.float64)
    buf_vec = np.zeros((hops - 1, groups * spg, we), dtype=np.int64)
    buf_lo = np.zeros((hops - 1, groups * spg), dtype=np.int64)
    buf_hi = np.zeros((hops - 1, groups * spg), dtype=np.int64)
    arrived = np.zeros((hops - 1, groups * spg), dtype=np.uint8)
    rows = np.zeros((w_d, w_d), dtype=np.int64)
    pivs = np.zeros(w_d, dtype=np.int64)
    decoded_win = np.zeros(w_d, dtype=np.uint8)
    flags = np.zeros(groups * Ks, dtype=np.uint8)
    packet = np.zeros(we, dtype=np.int64)
    rowbuf = np.zeros(w_d, dtype=np.int64)
    _kernels.sim_swnc(
        Ks,
        n_c,
        hops,
        deltas,
        groups,
        w_d,
        fld.exp,
        fld.log,
        fld.q,
        stream.seed,
        stream.trial,
        buf_vec,
        buf_lo,
        buf_hi,
        arrived,
        rows,
        pivs,
        decoded_win,
        flags,
        packet,
        rowbuf,
    )
    return [
        DeliveryReport(
            block_id=g,
            offered=Ks,
            decoded_flags=flags[g * Ks : (g + 1) * Ks].astype(bool),
        )
        for g in range(groups)
    ]

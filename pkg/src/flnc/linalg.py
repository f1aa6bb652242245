"""Matrices over GF(2^m) and a progressive Gauss-Jordan decoder.

The decoder ingests coefficient rows one at a time, keeps them in reduced
row-echelon form, and tracks which unknowns are already pinned down to a
single value. Ingest work happens in the compiled kernels; `project` is
plain Python because it only runs at window boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .gf import GfField


@dataclass
class GfMatrix:
    """Dense matrix with int64 entries restricted to [0, q)."""

    field: GfField
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError("matrix data must be 2-D")
        if arr.size and (arr.min() < 0 or arr.max() >= self.field.q):
            raise ValueError("matrix entry out of field range")
        self.data = arr.astype(np.int64)

    @property
    def shape(self):
        return self.data.shape

    @classmethod
    def zeros(cls, fld: GfField, rows: int, cols: int) -> "GfMatrix":
        return cls(fld, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, fld: GfField, n: int) -> "GfMatrix":
        return cls(fld, np.eye(n, dtype=np.int64))

    @classmethod
    def random(cls, fld: GfField, rows: int, cols: int, rng: np.random.Generator) -> "GfMatrix":
        return cls(fld, rng.integers(0, fld.q, size=(rows, cols), dtype=np.int64))

    def rank(self) -> int:
        if self.data.size == 0:
            return 0
        return int(_kernels.gf_rank(self.data.copy(), self.field.exp, self.field.log))

    def stack(self, other: "GfMatrix") -> "GfMatrix":
        if other.field != self.field:
            raise ValueError("field mismatch")
        return GfMatrix(self.field, np.vstack([self.data, other.data]))


def rank(matrix: GfMatrix) -> int:
    return matrix.rank()


@dataclass
class IngestOutcome:
    innovative: bool
    newly_decoded: list[int] = field(default_factory=list)


class ProgressiveDecoder:
    """Rank/decodability tracker for one set of unknowns.

    Rows are coefficient vectors of received packets. An unknown counts as
    decoded once the reduced system pins it to a unit row.
    """

    def __init__(self, unknown_count: int, fld: GfField):
        if unknown_count < 0:
            raise ValueError("unknown_count must be nonnegative")
        self.field = fld
        self._U = unknown_count
        self._rows = np.zeros((max(unknown_count, 1), max(unknown_count, 1)), dtype=np.int64)
        self._pivs = np.zeros(max(unknown_count, 1), dtype=np.int64)
        self._decoded = np.zeros(max(unknown_count, 1), dtype=np.uint8)
        self._nrows = 0

    @property
    def unknown_count(self) -> int:
        return self._U

    @property
    def rank(self) -> int:
        return self._nrows

    @property
    def decoded_mask(self) -> np.ndarray:
        return self._decoded[: self._U].astype(bool)

    @property
    def decoded_count(self) -> int:
        return int(self._decoded[: self._U].sum())

    @property
    def is_complete(self) -> bool:
        return self._nrows == self._U

    def reduced_rows(self) -> np.ndarray:
        """Copy of the stored RREF rows (rank x unknown_count)."""
        return self._rows[: self._nrows, : self._U].copy()

    def pivots(self) -> np.ndarray:
        return self._pivs[: self._nrows].copy()

    def ingest(self, coeff_row: Sequence[int] | np.ndarray) -> IngestOutcome:
        row = np.asarray(coeff_row)
        if row.ndim != 1 or row.shape[0] != self._U:
            raise ValueError(f"coefficient row must have length {self._U}")
        if row.size and (row.min() < 0 or row.max() >= self.field.q):
            raise ValueError("coefficient out of field range")
        if self._U == 0:
            return IngestOutcome(innovative=False)
        before = self._decoded[: self._U].copy()
        # the kernel reduces in place; never touch the caller's buffer
        work = np.array(row, dtype=np.int64, copy=True)
        new_n = int(
            _kernels.gf_ingest(
                self._rows,
                self._pivs,
                self._nrows,
                work,
                self._decoded,
                self.field.exp,
                self.field.log,
            )
        )
        innovative = new_n > self._nrows
        self._nrows = new_n
        newly = np.nonzero(self._decoded[: self._U] & ~before)[0]
        return IngestOutcome(innovative=innovative, newly_decoded=[int(i) for i in newly])

    def project(self, drop: Iterable[int]) -> "ProgressiveDecoder":
        """New decoder over the unknowns not in `drop`.

        Kept unknowns stay in ascending original order. Stored rows that
        involve a dropped unknown whose value is still open carry no usable
        information about the survivors and are discarded; everything else
        is re-reduced over the remaining columns.
        """
        drop_set = set(int(d) for d in drop)
        for d in drop_set:
            if not (0 <= d < self._U):
                raise ValueError(f"unknown index {d} out of range")
        keep = [i for i in range(self._U) if i not in drop_set]
        out = ProgressiveDecoder(len(keep), self.field)
        if not keep:
            return out
        drop_list = sorted(drop_set)
        undecoded_drop = [d for d in drop_list if not self._decoded[d]]
        for i in range(self._nrows):
            r = self._rows[i, : self._U]
            if any(r[d] != 0 for d in undecoded_drop):
                continue
            proj = r[keep]
            if proj.any():
                out.ingest(proj)
        return out

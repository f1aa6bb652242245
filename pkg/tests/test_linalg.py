"""Matrix rank and progressive decoder tests.

The oracle is a naive fraction-free Gaussian elimination written with
nothing but scalar field ops, plus a from-scratch unit-row scan for
decodability, both independent of the library's kernels.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flnc.analytic import full_rank_probability
from flnc.gf import GfField
from flnc.linalg import GfMatrix, ProgressiveDecoder, rank

GF2 = GfField(1)
GF16 = GfField(4)
GF256 = GfField(8)


def oracle_rank(rows, fld):
    """Fraction-free elimination: eliminate with cross-multiples, no inv."""
    mat = [list(map(int, r)) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        lead = mat[r][col]
        for i in range(r + 1, nrows):
            if mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [
                    fld.add(fld.mul(lead, mat[i][k]), fld.mul(f, mat[r][k]))
                    for k in range(ncols)
                ]
        r += 1
        if r == nrows:
            break
    return r


def oracle_solve_units(rows, fld, ncols):
    """Decoded set by full Gauss-Jordan from scratch: indices i with e_i
    in the row space, computed by complete reduction then unit-row scan."""
    mat = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        ilead = fld.inv(mat[r][col])
        mat[r] = [fld.mul(ilead, v) for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [fld.add(mat[i][k], fld.mul(f, mat[r][k])) for k in range(ncols)]
        r += 1
        if r == len(mat):
            break
    decoded = set()
    for row in mat:
        nz = [k for k, v in enumerate(row) if v != 0]
        if len(nz) == 1:
            decoded.add(nz[0])
    return decoded, r


class TestRank:
    def test_identity(self):
        for k in (1, 3, 7):
            assert GfMatrix.identity(GF256, k).rank() == k

    def test_duplicate_rows_gf2(self):
        m = GfMatrix(GF2, [[1, 1], [1, 1]])
        assert m.rank() == 1
        assert rank(m) == 1

    def test_zero_matrix(self):
        assert GfMatrix.zeros(GF256, 3, 5).rank() == 0

    def test_against_oracle_random(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            data = rng.integers(0, 256, (8, 10))
            m = GfMatrix(GF256, data)
            assert m.rank() == oracle_rank(data, GF256)

    def test_against_oracle_other_fields(self):
        rng = np.random.default_rng(4)
        for fld in (GF2, GF16):
            for _ in range(300):
                r, c = rng.integers(1, 9, 2)
                data = rng.integers(0, fld.q, (r, c))
                assert GfMatrix(fld, data).rank() == oracle_rank(data, fld)

    def test_entry_validation(self):
        with pytest.raises(ValueError, match="range"):
            GfMatrix(GF16, [[17, 0]])
        with pytest.raises(ValueError, match="2-D"):
            GfMatrix(GF16, [1, 2, 3])


class TestIngest:
    def test_unit_vector(self):
        d = ProgressiveDecoder(6, GF256)
        out = d.ingest([0, 0, 0, 1, 0, 0])
        assert out.innovative
        assert out.newly_decoded == [3]
        assert d.rank == 1
        assert list(d.decoded_mask) == [False, False, False, True, False, False]

    def test_duplicate_row(self):
        d = ProgressiveDecoder(4, GF256)
        row = [1, 2, 3, 4]
        assert d.ingest(row).innovative
        out = d.ingest(row)
        assert not out.innovative
        assert out.newly_decoded == []
        assert d.rank == 1

    def test_rank2_sequence_gf2(self):
        d = ProgressiveDecoder(2, GF2)
        d.ingest([1, 0])
        out = d.ingest([1, 1])
        assert out.innovative
        assert d.decoded_count == 2
        assert d.is_complete

    def test_dimension_mismatch(self):
        d = ProgressiveDecoder(3, GF256)
        with pytest.raises(ValueError, match="length 3"):
            d.ingest([1, 2])

    def test_range_check(self):
        d = ProgressiveDecoder(2, GF16)
        with pytest.raises(ValueError, match="range"):
            d.ingest([16, 0])

    def test_zero_row_not_innovative(self):
        d = ProgressiveDecoder(3, GF256)
        assert not d.ingest([0, 0, 0]).innovative
        assert d.rank == 0

    def test_caller_row_not_mutated(self):
        d = ProgressiveDecoder(3, GF256)
        d.ingest([1, 2, 3])
        row = np.array([1, 2, 3], dtype=np.int64)
        d.ingest(row)
        assert list(row) == [1, 2, 3]


class TestDecoderInvariants:
    @pytest.mark.parametrize("fld", [GF2, GF16, GF256], ids=["q2", "q16", "q256"])
    def test_rank_matches_matrix_rank(self, fld):
        rng = np.random.default_rng(11)
        for _ in range(150):
            K = int(rng.integers(1, 13))
            nrows = int(rng.integers(0, 2 * K + 1))
            rows = rng.integers(0, fld.q, (nrows, K))
            d = ProgressiveDecoder(K, fld)
            for r in rows:
                d.ingest(r)
            if nrows:
                assert d.rank == oracle_rank(rows, fld)
            else:
                assert d.rank == 0

    def test_decoded_matches_oracle_units(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            K = int(rng.integers(2, 9))
            nrows = int(rng.integers(1, K + 3))
            # sparse-ish rows make partial decoding actually happen
            rows = (rng.integers(0, 16, (nrows, K)) * (rng.random((nrows, K)) < 0.5)).astype(int)
            d = ProgressiveDecoder(K, GF16)
            for r in rows:
                d.ingest(r)
            want_decoded, want_rank = oracle_solve_units(rows, GF16, K)
            assert d.rank == want_rank
            assert set(np.nonzero(d.decoded_mask)[0]) == want_decoded

    def test_newly_decoded_disjoint_union_bounded(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            K = int(rng.integers(1, 10))
            d = ProgressiveDecoder(K, GF256)
            seen = set()
            for _ in range(K + 4):
                row = rng.integers(0, 256, K) * (rng.random(K) < 0.4)
                out = d.ingest(row.astype(int))
                new = set(out.newly_decoded)
                assert not (new & seen)
                seen |= new
            assert len(seen) <= K
            assert seen == set(np.nonzero(d.decoded_mask)[0])

    def test_full_rank_means_all_decoded(self):
        rng = np.random.default_rng(14)
        d = ProgressiveDecoder(5, GF256)
        while not d.is_complete:
            d.ingest(rng.integers(0, 256, 5))
        assert d.decoded_count == 5

    def test_decoded_mask_iff_unit_rows(self):
        rng = np.random.default_rng(15)
        for _ in range(100):
            K = int(rng.integers(2, 8))
            d = ProgressiveDecoder(K, GF16)
            for _ in range(K):
                d.ingest((rng.integers(0, 16, K) * (rng.random(K) < 0.6)).astype(int))
            stored = d.reduced_rows()
            unit_pivots = set()
            for row in stored:
                nz = np.nonzero(row)[0]
                if len(nz) == 1 and row[nz[0]] == 1:
                    unit_pivots.add(int(nz[0]))
            assert set(np.nonzero(d.decoded_mask)[0]) == unit_pivots


class TestRankDistribution:
    def test_full_rank_probability_matches(self):
        # empirical P(rank = K) for random K x n over GF(2^8) vs the
        # closed-form product, within 3 standard errors
        rng = np.random.default_rng(21)
        trials = 100_000
        for K, n in [(4, 4), (4, 5), (8, 8), (8, 10)]:
            mats = rng.integers(0, 256, (trials, K, n), dtype=np.int64)
            from flnc._kernels import gf_rank_many

            ranks = gf_rank_many(mats, GF256.exp, GF256.log)
            phat = float(np.mean(np.asarray(ranks) == K))
            p = full_rank_probability(K, n, 256.0)
            se = max(np.sqrt(p * (1 - p) / trials), 1e-9)
            assert abs(phat - p) <= 3 * se + 1e-12, (K, n, phat, p)


class TestProject:
    def _random_decoder(self, rng, K=6, fld=GF16):
        d = ProgressiveDecoder(K, fld)
        raw = []
        for _ in range(int(rng.integers(2, K + 3))):
            row = (rng.integers(0, fld.q, K) * (rng.random(K) < 0.6)).astype(int)
            raw.append(row)
            d.ingest(row)
        return d

    def test_drop_empty_is_identity(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            d = self._random_decoder(rng)
            p = d.project([])
            assert p.unknown_count == d.unknown_count
            assert p.rank == d.rank
            assert np.array_equal(p.decoded_mask, d.decoded_mask)
            a = sorted(map(tuple, d.reduced_rows().tolist()))
            b = sorted(map(tuple, p.reduced_rows().tolist()))
            assert a == b

    def test_drop_all(self):
        rng = np.random.default_rng(32)
        d = self._random_decoder(rng)
        p = d.project(range(6))
        assert p.unknown_count == 0
        assert p.rank == 0

    def test_out_of_range_drop(self):
        d = ProgressiveDecoder(3, GF16)
        with pytest.raises(ValueError, match="out of range"):
            d.project([3])

    def test_rebuild_oracle(self):
        # project vs independent re-elimination of the surviving equations
        rng = np.random.default_rng(33)
        for _ in range(300):
            K = 6
            d = self._random_decoder(rng, K=K)
            drop = sorted(rng.choice(K, size=2, replace=False).tolist())
            keep = [i for i in range(K) if i not in drop]
            stored = d.reduced_rows()
            decoded = d.decoded_mask
            survivors = []
            for row in stored:
                if any(row[j] != 0 and not decoded[j] for j in drop):
                    continue
                proj = [int(row[j]) for j in keep]
                if any(proj):
                    survivors.append(proj)
            want_decoded, want_rank = oracle_solve_units(survivors, GF16, len(keep))
            p = d.project(drop)
            assert p.unknown_count == len(keep)
            assert p.rank == want_rank
            assert set(np.nonzero(p.decoded_mask)[0]) == want_decoded

    def test_decoded_survivors_stay_decoded(self):
        d = ProgressiveDecoder(4, GF16)
        d.ingest([1, 0, 0, 0])
        d.ingest([0, 0, 3, 7])
        p = d.project([1])
        # unknown 0 was decoded and survives (as new index 0)
        assert p.decoded_mask[0]
        assert p.rank == 2

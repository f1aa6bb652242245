"""Coding scheme specs, schedules, generators, and end-to-end generation runs."""

import numpy as np
import pytest

from flnc.analytic import full_rank_probability
from flnc.gf import GfField
from flnc.linalg import ProgressiveDecoder
from flnc.montecarlo import _decoded_counts
from flnc.network import LineNetwork, RngStream, erase
from flnc.schemes import (
    CodeSpec,
    Scheme,
    Slot,
    build_generator,
    run_generation,
    run_stream_swnc,
    swnc_coded_generator,
    swnc_window,
    transmit_schedule,
)

GF2 = GfField(1)
GF256 = GfField(8)
GF64K = GfField(16)


class TestScheme:
    def test_parse(self):
        assert Scheme.parse("rlnc") is Scheme.RLNC
        assert Scheme.parse("snc-s") is Scheme.SNC_S
        assert Scheme.parse("SNC_S") is Scheme.SNC_S
        assert Scheme.parse("swnc") is Scheme.SWNC

    def test_parse_unknown(self):
        with pytest.raises(ValueError, match="scheme"):
            Scheme.parse("fountain")


class TestCodeSpec:
    def test_basic(self):
        spec = CodeSpec(Scheme.RLNC, K=3, N=4)
        assert spec.rho == pytest.approx(0.75)
        assert spec.n_c == 1

    def test_validation(self):
        with pytest.raises(ValueError, match="K"):
            CodeSpec(Scheme.RLNC, K=0, N=4)
        with pytest.raises(ValueError, match="N"):
            CodeSpec(Scheme.RLNC, K=5, N=4)

    def test_stage_parity(self):
        with pytest.raises(ValueError, match="even"):
            CodeSpec(Scheme.SNC_S, K=3, N=5)
        with pytest.raises(ValueError, match="even"):
            CodeSpec(Scheme.SNC_S, K=4, N=7)
        spec = CodeSpec(Scheme.SNC_S, K=4, N=6)
        assert spec.n_c == 1

    def test_swnc_parity_and_window(self):
        with pytest.raises(ValueError, match="even"):
            CodeSpec(Scheme.SWNC, K=3, N=5)
        with pytest.raises(ValueError, match="even"):
            CodeSpec(Scheme.SWNC, K=4, N=7)
        spec = CodeSpec(Scheme.SWNC, K=4, N=6)
        assert spec.w_e == 4
        assert spec.K_s == 2
        assert spec.n_c == 1
        assert spec.w_d == 4  # defaults to the encoder window

    def test_swnc_decoder_window_rules(self):
        with pytest.raises(ValueError, match="w_d"):
            CodeSpec(Scheme.SWNC, K=4, N=6, w_d=2)
        with pytest.raises(ValueError, match="w_d"):
            CodeSpec(Scheme.SWNC, K=4, N=6, w_d=5)
        spec = CodeSpec(Scheme.SWNC, K=4, N=6, w_d=6)
        assert spec.w_d == 6

    def test_w_d_only_for_swnc(self):
        with pytest.raises(ValueError, match="w_d"):
            CodeSpec(Scheme.SNC, K=4, N=6, w_d=4)

    def test_n_c_by_scheme(self):
        assert CodeSpec(Scheme.RLNC, K=4, N=6).n_c == 2
        assert CodeSpec(Scheme.SNC, K=4, N=6).n_c == 2
        assert CodeSpec(Scheme.SNC_S, K=4, N=6).n_c == 1
        assert CodeSpec(Scheme.SWNC, K=4, N=6).n_c == 1


class TestSchedule:
    def test_rlnc_all_coded(self):
        spec = CodeSpec(Scheme.RLNC, K=3, N=5)
        slots = transmit_schedule(spec)
        assert len(slots) == 5
        assert all(s == Slot("coded", None, (0, 3)) for s in slots)

    def test_snc_systematic_prefix(self):
        spec = CodeSpec(Scheme.SNC, K=3, N=5)
        slots = transmit_schedule(spec)
        assert [s.kind for s in slots] == ["systematic"] * 3 + ["coded"] * 2
        assert [s.index for s in slots[:3]] == [0, 1, 2]
        assert slots[3].span == (0, 3)

    def test_snc_s_two_stages(self):
        spec = CodeSpec(Scheme.SNC_S, K=4, N=6)
        slots = transmit_schedule(spec)
        want = [
            Slot("systematic", 0, (0, 1)),
            Slot("systematic", 1, (1, 2)),
            Slot("coded", None, (0, 2)),
            Slot("systematic", 2, (2, 3)),
            Slot("systematic", 3, (3, 4)),
            Slot("coded", None, (0, 4)),
        ]
        assert slots == want

    def test_swnc_group_schedule(self):
        spec = CodeSpec(Scheme.SWNC, K=4, N=6)
        # the first group only has its own packets; afterwards the span
        # covers the previous group plus the current one
        assert swnc_window(spec, 1) == (0, 2)
        assert swnc_window(spec, 2) == (0, 4)
        assert swnc_window(spec, 3) == (2, 6)
        g1 = transmit_schedule(spec, group=1)
        assert g1 == [
            Slot("systematic", 0, (0, 1)),
            Slot("systematic", 1, (1, 2)),
            Slot("coded", None, (0, 2)),
        ]
        g3 = transmit_schedule(spec, group=3)
        assert g3 == [
            Slot("systematic", 4, (4, 5)),
            Slot("systematic", 5, (5, 6)),
            Slot("coded", None, (2, 6)),
        ]

    def test_slot_counts(self):
        for scheme, K, N in [
            (Scheme.RLNC, 5, 9),
            (Scheme.SNC, 5, 9),
            (Scheme.SNC_S, 6, 10),
        ]:
            assert len(transmit_schedule(CodeSpec(scheme, K=K, N=N))) == N
        spec = CodeSpec(Scheme.SWNC, K=6, N=10)
        assert len(transmit_schedule(spec)) == spec.N // 2


class TestGenerator:
    def test_snc_identity_prefix(self):
        spec = CodeSpec(Scheme.SNC, K=3, N=5, field=GF256)
        g = build_generator(spec, RngStream(5))
        assert np.array_equal(g.data[:, :3], np.eye(3, dtype=np.int64))
        # coded columns drawn from the whole block
        assert g.data[:, 3:].min() >= 0 and g.data[:, 3:].max() < 256

    def test_snc_s_stage_one_support(self):
        spec = CodeSpec(Scheme.SNC_S, K=4, N=6, field=GF256)
        g = build_generator(spec, RngStream(5))
        # layout: e0 e1 c1 e2 e3 c2, with c1 supported on the first two rows
        assert np.array_equal(g.data[:, 0], [1, 0, 0, 0])
        assert np.array_equal(g.data[:, 1], [0, 1, 0, 0])
        assert g.data[2, 2] == 0 and g.data[3, 2] == 0
        assert np.array_equal(g.data[:, 3], [0, 0, 1, 0])
        assert np.array_equal(g.data[:, 4], [0, 0, 0, 1])

    def test_rlnc_gf2_tiny(self):
        spec = CodeSpec(Scheme.RLNC, K=1, N=1, field=GF2)
        g = build_generator(spec, RngStream(0))
        assert g.data.shape == (1, 1)
        assert g.data[0, 0] in (0, 1)

    def test_deterministic(self):
        spec = CodeSpec(Scheme.RLNC, K=4, N=6, field=GF256)
        a = build_generator(spec, RngStream(9, trial=3))
        b = build_generator(spec, RngStream(9, trial=3))
        c = build_generator(spec, RngStream(9, trial=4))
        assert np.array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)

    def test_swnc_refused(self):
        spec = CodeSpec(Scheme.SWNC, K=4, N=6)
        with pytest.raises(ValueError, match="sliding-window"):
            build_generator(spec, RngStream(0))

    def test_swnc_coded_generator_shape(self):
        spec = CodeSpec(Scheme.SWNC, K=4, N=8, field=GF256)
        g = swnc_coded_generator(spec, RngStream(1), group=2)
        lo, hi = swnc_window(spec, 2)
        assert g.data.shape == (hi - lo, spec.n_c)


class TestSingleHopOracle:
    """Rebuild the destination by hand for a relay-free network.

    With one link there is no relay logic: the destination sees exactly
    the generator columns whose slots survive the erasure draws. Feeding
    those columns to a fresh ProgressiveDecoder must reproduce
    run_generation's flags bit for bit.
    """

    @pytest.mark.parametrize(
        "scheme,K,N",
        [(Scheme.RLNC, 4, 6), (Scheme.SNC, 4, 6), (Scheme.SNC_S, 4, 6)],
    )
    def test_matches_run_generation(self, scheme, K, N):
        spec = CodeSpec(scheme, K=K, N=N, field=GF256)
        net = LineNetwork([0.3])
        for trial in range(200):
            stream = RngStream(77, trial=trial)
            g = build_generator(spec, stream)
            dec = ProgressiveDecoder(K, GF256)
            for t in range(N):
                if not erase(net, 0, t, stream):
                    dec.ingest(g.data[:, t])
            rep = run_generation(spec, net, stream)
            assert rep.offered == K
            assert np.array_equal(rep.decoded_flags, dec.decoded_mask), trial


class TestRunGeneration:
    def test_decoded_count_bounded(self):
        net = LineNetwork([0.2, 0.2])
        for scheme in (Scheme.RLNC, Scheme.SNC, Scheme.SNC_S):
            spec = CodeSpec(scheme, K=4, N=6, field=GF256)
            for trial in range(50):
                rep = run_generation(spec, net, RngStream(3, trial=trial))
                assert 0 <= rep.decoded_count <= rep.offered

    def test_lossless_systematic_schemes_complete(self):
        net = LineNetwork([0.0, 0.0])
        for scheme in (Scheme.SNC, Scheme.SNC_S):
            spec = CodeSpec(scheme, K=4, N=6, field=GF256)
            for trial in range(20):
                assert run_generation(spec, net, RngStream(1, trial=trial)).complete

    def test_swnc_rejected(self):
        spec = CodeSpec(Scheme.SWNC, K=4, N=6)
        with pytest.raises(ValueError, match="sliding-window"):
            run_generation(spec, LineNetwork([0.1]), RngStream(0))

    def test_rlnc_lossless_full_rank_rate(self):
        # over a clean link an RLNC block decodes iff the K x K random
        # matrix is invertible; partial decodes are O(q^-(K-1)) and lost
        # in the noise
        spec = CodeSpec(Scheme.RLNC, K=8, N=8, field=GF256)
        net = LineNetwork([0.0])
        trials = 100_000
        counts, offered = _decoded_counts(spec, net, trials, seed=5, groups=0, warmup_groups=0)
        frac = np.asarray(counts, dtype=np.float64) / offered
        p = full_rank_probability(8, 8, 256.0)
        se = frac.std() / np.sqrt(trials)
        assert abs(frac.mean() - p) <= 3 * se + 1e-9

    def test_rlnc_lossy_generation_success(self):
        # K=3, N=4, delta=0.2, huge field: block decodes iff at least 3
        # of 4 slots arrive, so success ~ 0.8192 less O(2^-16) fuzz
        spec = CodeSpec(Scheme.RLNC, K=3, N=4, field=GF64K)
        net = LineNetwork([0.2])
        trials = 100_000
        counts, offered = _decoded_counts(spec, net, trials, seed=6, groups=0, warmup_groups=0)
        ok = np.asarray(counts) == offered
        p = 0.8**4 + 4 * 0.2 * 0.8**3
        se = np.sqrt(p * (1 - p) / trials)
        assert abs(ok.mean() - p) <= 3 * se + 1e-3


class TestSwnc:
    def test_single_group_equals_snc(self):
        # one group never slides the window, so the run must match the
        # block scheme with the same per-group shape, bit for bit
        swnc = CodeSpec(Scheme.SWNC, K=4, N=6, field=GF256)
        snc = CodeSpec(Scheme.SNC, K=2, N=3, field=GF256)
        for net in (LineNetwork([0.3]), LineNetwork([0.2, 0.4])):
            for trial in range(300):
                stream = RngStream(50, trial=trial)
                reps = run_stream_swnc(swnc, net, 1, stream)
                assert len(reps) == 1
                blk = run_generation(snc, net, stream)
                assert np.array_equal(reps[0].decoded_flags, blk.decoded_flags)

    def test_lossless_all_groups_complete(self):
        for w_d in (4, 8):
            spec = CodeSpec(Scheme.SWNC, K=4, N=6, field=GF256, w_d=w_d)
            net = LineNetwork([0.0, 0.0])
            reps = run_stream_swnc(spec, net, 6, RngStream(2))
            assert len(reps) == 6
            assert all(r.complete for r in reps)
            assert all(r.offered == spec.K_s for r in reps)

    def test_group_count_validation(self):
        spec = CodeSpec(Scheme.SWNC, K=4, N=6)
        with pytest.raises(ValueError, match="groups"):
            run_stream_swnc(spec, LineNetwork([0.1]), 0, RngStream(0))

    def test_wrong_scheme_rejected(self):
        spec = CodeSpec(Scheme.SNC, K=4, N=6)
        with pytest.raises(ValueError, match="SWNC"):
            run_stream_swnc(spec, LineNetwork([0.1]), 2, RngStream(0))

    def test_wider_decoder_window_never_hurts(self):
        # same seeds, same traffic; a longer decoder memory can only add
        # decoding opportunities, trial by trial in aggregate
        net = LineNetwork([0.25, 0.25])
        trials = 400
        totals = {}
        for w_d in (4, 8):
            spec = CodeSpec(Scheme.SWNC, K=4, N=6, field=GF256, w_d=w_d)
            tot = 0
            for trial in range(trials):
                reps = run_stream_swnc(spec, net, 8, RngStream(9, trial=trial))
                tot += sum(r.decoded_count for r in reps)
            totals[w_d] = tot
        assert totals[8] >= totals[4]


class TestErasureDominance:
    def test_mean_decoded_monotone_in_delta(self):
        # common random numbers: same seed, higher erasure rate, the mean
        # decoded count must not improve
        for scheme in (Scheme.RLNC, Scheme.SNC, Scheme.SNC_S):
            spec = CodeSpec(scheme, K=4, N=6, field=GF256)
            means = []
            for delta in (0.1, 0.25):
                counts, _ = _decoded_counts(
                    spec, LineNetwork.uniform(delta, 2), 3000, seed=8, groups=0, warmup_groups=0
                )
                means.append(np.asarray(counts).mean())
            assert means[0] >= means[1]

"""Hot numeric kernels shared by the simulators and the decoder.

Every function here is written in nopython-compatible Python and compiled
with numba's @njit when available. Setting the environment variable
FLNC_NO_NUMBA=1 (before import) selects the pure-Python fallback path,
which produces bit-identical results, just slower.
"""

import os

import numpy as np

try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("FLNC_NO_NUMBA", "") not in (
    "1",
    "true",
    "yes",
)


def _maybe_jit(func):
    if USE_NUMBA:
        return _njit(cache=True)(func)
    return func


# ---------------------------------------------------------------------------
# Counter-based RNG.
#
# Every random draw in the simulators is a pure function of
# (seed, role, trial, slot, index), so results do not depend on execution
# order or thread count. The hash is a splitmix64-finalizer chain. Two
# implementations keep exact parity: uint64 arithmetic under numba, masked
# Python integers otherwise (numpy uint64 *scalars* warn on overflow).

# Role constants: erasure draws must not depend on K so that rate sweeps
# share erasure patterns (common random numbers).
R_SRC = 1  # source coding coefficients
R_ERASE = 1 << 16  # + link index
R_RELAY = 1 << 17  # + link index

_MASK64 = (1 << 64) - 1
_GOLD_I = 0x9E3779B97F4A7C15
_M1_I = 0xBF58476D1CE4E5B9
_M2_I = 0x94D049BB133111EB


def _py_mix(z):
    z = int(z) & _MASK64
    z = ((z ^ (z >> 30)) * _M1_I) & _MASK64
    z = ((z ^ (z >> 27)) * _M2_I) & _MASK64
    return z ^ (z >> 31)


def _py_hash5(seed, r, a, b, c):
    h = _py_mix((int(seed) + _GOLD_I + int(r)) & _MASK64)
    h = _py_mix((h + _GOLD_I + int(a)) & _MASK64)
    h = _py_mix((h + _GOLD_I + int(b)) & _MASK64)
    return _py_mix((h + _GOLD_I + int(c)) & _MASK64)


def _py_u01(seed, r, a, b):
    return (_py_hash5(seed, r, a, b, 0) >> 11) * 2.0**-53


def _py_coef(seed, r, a, b, j, q):
    return _py_hash5(seed, r, a, b, j) % int(q)


if USE_NUMBA:
    _GOLD = np.uint64(_GOLD_I)
    _M1 = np.uint64(_M1_I)
    _M2 = np.uint64(_M2_I)
    _S30 = np.uint64(30)
    _S27 = np.uint64(27)
    _S31 = np.uint64(31)
    _S11 = np.uint64(11)
    _INV53 = 2.0**-53

    @_njit(cache=True)
    def _mix(z):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)

    @_njit(cache=True)
    def _hash5(seed, r, a, b, c):
        h = _mix(np.uint64(seed) + _GOLD + np.uint64(r))
        h = _mix(h + _GOLD + np.uint64(a))
        h = _mix(h + _GOLD + np.uint64(b))
        return _mix(h + _GOLD + np.uint64(c))

    @_njit(cache=True)
    def _u01(seed, r, a, b):
        return np.float64(_hash5(seed, r, a, b, 0) >> _S11) * _INV53

    @_njit(cache=True)
    def _coef(seed, r, a, b, j, q):
        return np.int64(_hash5(seed, r, a, b, j) % np.uint64(q))

else:
    _u01 = _py_u01
    _coef = _py_coef


# ---------------------------------------------------------------------------
# GF(2^m) elimination kernels. Field elements are int64 scalars; exp_t is
# the doubled antilog table (length 2(q-1)) and log_t the log table
# (length q, log_t[0] unused). qm1 below is always q-1.


def _kernel_gf_ingest(rows, pivs, nrows, row, decoded, exp_t, log_t):
    # Gauss-Jordan ingest: reduce `row` (mutated in place) against the
    # stored reduced rows, store it if innovative, keep full RREF
    # discipline, refresh decoded flags. Returns the new row count.
    U = row.shape[0]
    qm1 = log_t.shape[0] - 1
    for i in range(nrows):
        p = pivs[i]
        c = row[p]
        if c != 0:
            lc = log_t[c]
            for k in range(p, U):
                v = rows[i, k]
                if v != 0:
                    row[k] ^= exp_t[log_t[v] + lc]
    p = -1
    for k in range(U):
        if row[k] != 0:
            p = k
            break
    if p < 0:
        return nrows
    lead = row[p]
    if lead != 1:
        il = qm1 - log_t[lead]
        for k in range(p, U):
            v = row[k]
            if v != 0:
                row[k] = exp_t[log_t[v] + il]
    for i in range(nrows):
        c = rows[i, p]
        if c != 0:
            lc = log_t[c]
            for k in range(p, U):
                v = row[k]
                if v != 0:
                    rows[i, k] ^= exp_t[log_t[v] + lc]
    for k in range(U):
        rows[nrows, k] = row[k]
    pivs[nrows] = p
    nrows += 1
    for i in range(nrows):
        nz = 0
        for k in range(pivs[i], U):
            if rows[i, k] != 0:
                nz += 1
                if nz > 1:
                    break
        if nz == 1:
            decoded[pivs[i]] = 1
    return nrows


gf_ingest = _maybe_jit(_kernel_gf_ingest)


def _kernel_gf_rank(mat, exp_t, log_t):
    # Forward elimination; `mat` is scratch and gets mutated.
    r, c = mat.shape
    qm1 = log_t.shape[0] - 1
    rank = 0
    for col in range(c):
        sel = -1
        for i in range(rank, r):
            if mat[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != rank:
            for k in range(c):
                tmp = mat[sel, k]
                mat[sel, k] = mat[rank, k]
                mat[rank, k] = tmp
        llead = log_t[mat[rank, col]]
        for i in range(rank + 1, r):
            v = mat[i, col]
            if v != 0:
                lf = log_t[v] + (qm1 - llead)
                if lf >= qm1:
                    lf -= qm1
                for k in range(col, c):
                    w = mat[rank, k]
                    if w != 0:
                        mat[i, k] ^= exp_t[log_t[w] + lf]
        rank += 1
        if rank == r:
            break
    return rank


gf_rank = _maybe_jit(_kernel_gf_rank)


def _kernel_gf_rank_many(mats, exp_t, log_t):
    n = mats.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        out[i] = gf_rank(mats[i].copy(), exp_t, log_t)
    return out


gf_rank_many = _maybe_jit(_kernel_gf_rank_many)


# ---------------------------------------------------------------------------
# Block-scheme simulator (RLNC, SNC, SNC-S): one generation over the line
# network, node by node. Every node buffers the whole generation before
# its own N transmit slots, so successive links see independent erasure
# and recombination randomness. Packets are coefficient vectors over the
# K generation unknowns.


def _kernel_sim_block(
    slot_sys,
    slot_lo,
    slot_hi,
    K,
    hops,
    deltas,
    rlnc_relay,
    exp_t,
    log_t,
    q,
    seed,
    trial,
    bufs,
    arrived,
    rows,
    pivs,
    decoded,
    packet,
):
    N = slot_sys.shape[0]
    nrelay = hops - 1
    for i in range(nrelay):
        for t in range(N):
            arrived[i, t] = 0
    nrows = 0
    for k in range(K):
        decoded[k] = 0
    for link in range(hops):
        snd = link - 1
        for t in range(N):
            have = True
            if link == 0:
                si = slot_sys[t]
                for k in range(K):
                    packet[k] = 0
                if si >= 0:
                    packet[si] = 1
                else:
                    for j in range(slot_lo[t], slot_hi[t]):
                        packet[j] = _coef(seed, R_SRC, trial, t, j, q)
            elif rlnc_relay or arrived[snd, t] == 0:
                # fresh random combination of everything the sender
                # received; an empty buffer wastes the slot
                for k in range(K):
                    packet[k] = 0
                have = False
                bi = 0
                for tp in range(N):
                    if arrived[snd, tp] != 0:
                        have = True
                        c = _coef(seed, R_RELAY + snd, trial, t, bi, q)
                        if c != 0:
                            lc = log_t[c]
                            for k in range(K):
                                v = bufs[snd, tp, k]
                                if v != 0:
                                    packet[k] ^= exp_t[log_t[v] + lc]
                        bi += 1
            else:
                for k in range(K):
                    packet[k] = bufs[snd, t, k]
            if not have:
                continue
            if _u01(seed, R_ERASE + link, trial, t) < deltas[link]:
                continue
            if link == nrelay:
                nrows = gf_ingest(rows, pivs, nrows, packet, decoded, exp_t, log_t)
            else:
                for k in range(K):
                    bufs[link, t, k] = packet[k]
                arrived[link, t] = 1
    cnt = 0
    for k in range(K):
        cnt += decoded[k]
    return cnt


sim_block = _maybe_jit(_kernel_sim_block)


def _kernel_mc_block(
    slot_sys, slot_lo, slot_hi, K, hops, deltas, rlnc_relay, exp_t, log_t, q, seed, trials
):
    N = slot_sys.shape[0]
    out = np.empty(trials, np.int64)
    bufs = np.empty((hops - 1, N, K), np.int64)
    arrived = np.empty((hops - 1, N), np.uint8)
    rows = np.empty((K, K), np.int64)
    pivs = np.empty(K, np.int64)
    decoded = np.empty(K, np.uint8)
    packet = np.empty(K, np.int64)
    for trial in range(trials):
        out[trial] = sim_block(
            slot_sys,
            slot_lo,
            slot_hi,
            K,
            hops,
            deltas,
            rlnc_relay,
            exp_t,
            log_t,
            q,
            seed,
            trial,
            bufs,
            arrived,
            rows,
            pivs,
            decoded,
            packet,
        )
    return out


mc_block = _maybe_jit(_kernel_mc_block)


# ---------------------------------------------------------------------------
# Sliding-window simulator (SWNC). A stream of `groups` groups of
# K_s = w_e/2 information packets each, relayed group by group: a node
# finishes receiving a group before its own transmit slots for it. Every
# in-flight packet has coefficient support inside one encoder-window
# range, so packets are carried as (vec over at most w_e coords, base
# seq, range tag), stored per stream slot.


def _kernel_sim_swnc(
    Ks,
    n_c,
    hops,
    deltas,
    groups,
    w_d,
    exp_t,
    log_t,
    q,
    seed,
    trial,
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
):
    we = 2 * Ks
    spg = Ks + n_c
    total = groups * Ks
    win_groups = w_d // Ks
    nrelay = hops - 1
    for i in range(nrelay):
        for t in range(groups * spg):
            arrived[i, t] = 0
    nrows = 0
    win_lo = 0
    for k in range(w_d):
        decoded_win[k] = 0
    for k in range(total):
        flags[k] = 0
    for g in range(groups):
        # encoder window / re-encode range for this group
        glo = (g - 1) * Ks if g >= 1 else 0
        ghi = (g + 1) * Ks
        for link in range(hops):
            snd = link - 1
            if link == nrelay:
                # the destination slides its decoding window forward in
                # whole groups before taking this group in
                new_lo = (g + 1 - win_groups) * Ks
                if new_lo > win_lo:
                    drop = new_lo - win_lo
                    for k in range(drop):
                        flags[win_lo + k] = decoded_win[k]
                    w = 0
                    for i in range(nrows):
                        keep = True
                        for k in range(drop):
                            if rows[i, k] != 0:
                                keep = False
                                break
                        if keep:
                            for k in range(w_d - drop):
                                rows[w, k] = rows[i, k + drop]
                            for k in range(w_d - drop, w_d):
                                rows[w, k] = 0
                            pivs[w] = pivs[i] - drop
                            w += 1
                    nrows = w
                    for k in range(w_d - drop):
                        decoded_win[k] = decoded_win[k + drop]
                    for k in range(w_d - drop, w_d):
                        decoded_win[k] = 0
                    win_lo = new_lo
            for s in range(spg):
                gslot = g * spg + s
                have = True
                if link == 0:
                    for k in range(we):
                        packet[k] = 0
                    if s < Ks:
                        plo = g * Ks + s
                        phi = plo + 1
                        packet[0] = 1
                    else:
                        plo = glo
                        phi = ghi
                        for j in range(phi - plo):
                            packet[j] = _coef(seed, R_SRC, trial, gslot, j, q)
                elif arrived[snd, gslot] != 0:
                    plo = buf_lo[snd, gslot]
                    phi = buf_hi[snd, gslot]
                    for k in range(we):
                        packet[k] = 0
                    for k in range(phi - plo):
                        packet[k] = buf_vec[snd, gslot, k]
                else:
                    # substitute a combination of buffered packets whose
                    # range tag fits inside this group's re-encode range
                    for k in range(we):
                        packet[k] = 0
                    found = False
                    bi = 0
                    for tp in range((g + 1) * spg):
                        if arrived[snd, tp] != 0:
                            if buf_lo[snd, tp] >= glo and buf_hi[snd, tp] <= ghi:
                                found = True
                                c = _coef(seed, R_RELAY + snd, trial, gslot, bi, q)
                                if c != 0:
                                    lc = log_t[c]
                                    off = buf_lo[snd, tp] - glo
                                    for k in range(buf_hi[snd, tp] - buf_lo[snd, tp]):
                                        v = buf_vec[snd, tp, k]
                                        if v != 0:
                                            packet[off + k] ^= exp_t[log_t[v] + lc]
                            bi += 1
                    if found:
                        plo = glo
                        phi = ghi
                    else:
                        have = False
                if not have:
                    continue
                if _u01(seed, R_ERASE + link, trial, gslot) < deltas[link]:
                    continue
                if link == nrelay:
                    for k in range(w_d):
                        rowbuf[k] = 0
                    off = plo - win_lo
                    for j in range(phi - plo):
                        rowbuf[off + j] = packet[j]
                    nrows = gf_ingest(
                        rows, pivs, nrows, rowbuf, decoded_win, exp_t, log_t
                    )
                else:
                    for k in range(phi - plo):
                        buf_vec[link, gslot, k] = packet[k]
                    buf_lo[link, gslot] = plo
                    buf_hi[link, gslot] = phi
                    arrived[link, gslot] = 1
    for k in range(win_lo, total):
        flags[k] = decoded_win[k - win_lo]
    return nrows


sim_swnc = _maybe_jit(_kernel_sim_swnc)


def _kernel_mc_swnc(Ks, n_c, hops, deltas, groups, w_d, exp_t, log_t, q, seed, trials):
    we = 2 * Ks
    spg = Ks + n_c
    total = groups * Ks
    out = np.empty((trials, groups), np.int64)
    buf_vec = np.empty((hops - 1, groups * spg, we), np.int64)
    buf_lo = np.empty((hops - 1, groups * spg), np.int64)
    buf_hi = np.empty((hops - 1, groups * spg), np.int64)
    arrived = np.empty((hops - 1, groups * spg), np.uint8)
    rows = np.empty((w_d, w_d), np.int64)
    pivs = np.empty(w_d, np.int64)
    decoded_win = np.empty(w_d, np.uint8)
    flags = np.empty(total, np.uint8)
    packet = np.empty(we, np.int64)
    rowbuf = np.empty(w_d, np.int64)
    for trial in range(trials):
        sim_swnc(
            Ks,
            n_c,
            hops,
            deltas,
            groups,
            w_d,
            exp_t,
            log_t,
            q,
            seed,
            trial,
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
        for g in range(groups):
            cnt = 0
            for k in range(g * Ks, (g + 1) * Ks):
                cnt += flags[k]
            out[trial, g] = cnt
    return out


mc_swnc = _maybe_jit(_kernel_mc_swnc)

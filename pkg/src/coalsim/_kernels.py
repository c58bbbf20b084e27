"""Compiled kernels for lineage tracing and coloured reductions.

Everything here is numba-jitted and deliberately free of Python objects:
callers in lineages/paths/seedbank validate arguments, derive keys and
convert laws and colour specs to the flat numeric codes used below.

Site coordinates: a site is (t, island), encoded as code = t * n_islands +
island.  With one island the code equals t and the island draw is skipped,
so the multi-island tracer restricted to n_islands = 1 reproduces the base
tracer draw for draw.  Jumps are clamped at cutoff + window + 2: any jump
that large retires the lineage regardless of its exact size, so the clamp
never biases a statistic and keeps every code inside int64.
"""

import numpy as np
from numba import njit, int32, int64, uint64, float64

from .rng import (
    GOLDEN,
    KIND_COLOUR,
    KIND_LINEAGE,
    KIND_OVERLAP,
    KIND_PAIR,
    derive_key,
    stream64,
    to_unit,
)

EMPTY = np.int64(-(2 ** 62))

LAW_PURE = 0
LAW_LOG_PERTURBED = 1

COLOUR_RADEMACHER = 0
COLOUR_UNIFORM = 1
COLOUR_TWO_POINT = 2


@njit(float64(float64, float64, float64), inline="always", cache=True)
def _tail_logp(n, alpha, beta):
    return n ** (-alpha) * (np.log(np.e + n) / np.log(np.e + 1.0)) ** (-beta)


@njit(int64(float64, int64, float64, float64, float64, int64),
      inline="always", cache=True)
def _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp):
    if law_code == LAW_PURE:
        x = u ** (-inv_alpha)
        if x >= float64(clamp):
            return clamp
        return int64(x)
    if _tail_logp(2.0, alpha, beta) < u:
        return int64(1)
    hi = int64(2)
    while _tail_logp(float64(hi + 1), alpha, beta) >= u:
        if hi >= clamp:
            return clamp
        hi = hi * int64(2)
    lo = hi // int64(2)
    # invariant: tail(lo + 1) >= u > tail(hi + 1)
    while hi - lo > 1:
        mid = (lo + hi) // int64(2)
        if _tail_logp(float64(mid + 1), alpha, beta) >= u:
            lo = mid
        else:
            hi = mid
    return hi


@njit(float64(float64, int64, float64, float64, float64),
      inline="always", cache=True)
def _colour_value(u, colour_code, c1, c2, c3):
    if colour_code == COLOUR_RADEMACHER:
        if u < c1:
            return 2.0 * (1.0 - c1)
        return -2.0 * c1
    if colour_code == COLOUR_UNIFORM:
        return c1 * (2.0 * u - 1.0)
    if u < c3:
        return c1
    return c2


@njit(int64(uint64, int64, int64), inline="always", cache=True)
def _island_draw(key, code, n_islands):
    isl = int64(to_unit(stream64(key, uint64(2 * code + 1))) * float64(n_islands))
    if isl >= n_islands:
        isl = n_islands - 1
    return isl


@njit(cache=True)
def trace_window(lineage_key, n, n_islands, window_islands, law_code,
                 inv_alpha, alpha, beta, m_cut):
    """Ancestral components of window sites (t, k), t = 1..n, k < window_islands.

    window_islands is 1 for the base window (island 0 only) or n_islands for
    the full multi-island window; the window order is v = (t-1)*window_islands
    + k, so the single-island case reduces draw for draw to the base tracer.
    Lookdown order: each window site's lineage is traced until it lands on a
    site some earlier lineage visited (union) or falls below -m_cut (its
    component stays open).  Returns (component label per site, number of
    components, total jump draws).  Labels are union-find roots chosen as
    the smallest window index in the component.
    """
    nw = int64(n) * int64(window_islands)
    cap = int64(4096)
    while cap < 4 * nw:
        cap *= 2
    mask = cap - 1
    hkey = np.full(cap, EMPTY, dtype=np.int64)
    hval = np.zeros(cap, dtype=np.int32)
    used = int64(0)

    parent = np.arange(nw, dtype=np.int32)
    size = np.ones(nw, dtype=np.int32)
    n_components = int64(0)
    steps = int64(0)
    clamp = m_cut + int64(n) + int64(2)

    for v in range(nw):
        t = int64(v // window_islands + 1)
        isl = int64(v % window_islands)
        code = t * n_islands + isl
        # register the site itself (fresh: window sites are traced once)
        idx = int64(uint64(code) * GOLDEN & uint64(mask))
        while hkey[idx] != EMPTY:
            idx = (idx + 1) & mask
        hkey[idx] = code
        hval[idx] = int32(v)
        used += 1

        while True:
            u = to_unit(stream64(lineage_key, uint64(2 * code)))
            r = _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp)
            steps += 1
            if n_islands > 1:
                isl = _island_draw(lineage_key, code, n_islands)
            t = t - r
            if t < -m_cut:
                n_components += 1
                break
            code = t * n_islands + isl
            idx = int64(uint64(code) * GOLDEN & uint64(mask))
            found = int64(-1)
            while hkey[idx] != EMPTY:
                if hkey[idx] == code:
                    found = int64(hval[idx])
                    break
                idx = (idx + 1) & mask
            if found >= 0:
                a = int32(v)
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = int32(found)
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a != b:
                    # union by size, ties to the smaller window index
                    if size[a] < size[b] or (size[a] == size[b] and b < a):
                        a, b = b, a
                    parent[b] = a
                    size[a] += size[b]
                break
            hkey[idx] = code
            hval[idx] = int32(v)
            used += 1
            if 2 * used > cap:
                ncap = cap * 2
                nmask = ncap - 1
                nhkey = np.full(ncap, EMPTY, dtype=np.int64)
                nhval = np.zeros(ncap, dtype=np.int32)
                for i in range(cap):
                    if hkey[i] != EMPTY:
                        j = int64(uint64(hkey[i]) * GOLDEN & uint64(nmask))
                        while nhkey[j] != EMPTY:
                            j = (j + 1) & nmask
                        nhkey[j] = hkey[i]
                        nhval[j] = hval[i]
                hkey = nhkey
                hval = nhval
                cap = ncap
                mask = nmask

    comp = np.empty(nw, dtype=np.int32)
    for v in range(nw):
        a = int32(v)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        comp[v] = a
    return comp, n_components, steps


@njit(cache=True)
def batch_component_stats(master, reps, n, n_islands, window_islands,
                          law_code, inv_alpha, alpha, beta, m_cut):
    """Per-replica component size sums: S2, S3, S4, component count, steps."""
    nw = n * window_islands
    s2 = np.zeros(reps, dtype=np.float64)
    s3 = np.zeros(reps, dtype=np.float64)
    s4 = np.zeros(reps, dtype=np.float64)
    ncomp = np.zeros(reps, dtype=np.int64)
    steps_total = int64(0)
    counts = np.zeros(nw, dtype=np.int64)
    for r in range(reps):
        lk = derive_key(uint64(master), uint64(KIND_LINEAGE), uint64(r))
        comp, nc, st = trace_window(lk, n, n_islands, window_islands,
                                    law_code, inv_alpha, alpha, beta, m_cut)
        steps_total += st
        ncomp[r] = nc
        counts[:] = 0
        for v in range(nw):
            counts[comp[v]] += 1
        a2 = 0.0
        a3 = 0.0
        a4 = 0.0
        for c in range(nw):
            if counts[c] > 0:
                x = float64(counts[c])
                a2 += x * x
                a3 += x * x * x
                a4 += x * x * x * x
        s2[r] = a2
        s3[r] = a3
        s4[r] = a4
    return s2, s3, s4, ncomp, steps_total


@njit(cache=True)
def batch_colour_sums(master, reps, n, n_islands, law_code, inv_alpha, alpha,
                      beta, m_cut, colour_code, c1, c2, c3, cuts):
    """Coloured window sums S_t at the given prefix lengths, per replica.

    cuts must be increasing site counts in [1, n]; sums[r, j] is the sum of
    component colours over window sites 1..cuts[j] in replica r.
    """
    k = len(cuts)
    sums = np.zeros((reps, k), dtype=np.float64)
    ncomp = np.zeros(reps, dtype=np.int64)
    steps_total = int64(0)
    ycache = np.zeros(n, dtype=np.float64)
    seen = np.zeros(n, dtype=np.uint8)
    for r in range(reps):
        lk = derive_key(uint64(master), uint64(KIND_LINEAGE), uint64(r))
        ck = derive_key(uint64(master), uint64(KIND_COLOUR), uint64(r))
        comp, nc, st = trace_window(lk, n, n_islands, int64(1), law_code,
                                    inv_alpha, alpha, beta, m_cut)
        steps_total += st
        ncomp[r] = nc
        seen[:] = 0
        acc = 0.0
        ptr = 0
        for v in range(n):
            root = comp[v]
            if seen[root] == 0:
                u = to_unit(stream64(ck, uint64(root)))
                ycache[root] = _colour_value(u, colour_code, c1, c2, c3)
                seen[root] = 1
            acc += ycache[root]
            while ptr < k and cuts[ptr] == v + 1:
                sums[r, ptr] = acc
                ptr += 1
    return sums, ncomp, steps_total


@njit(cache=True)
def batch_weighted_stats(master, reps, n, n_islands, law_code, inv_alpha,
                         alpha, beta, m_cut, colour_code, c1, c2, c3, weights):
    """Component-weighted sums for smooth-test factors, per replica.

    weights has shape (n, w).  For each weight column a, with per-component
    totals A_c = sum of a over the component's window sites and
    Abs_c = sum of |a|, returns

      t1[r, col] = sum_c Y_c^2 A_c^2
      t2[r, col] = sum_c |Y_c|^3 Abs_c A_c^2
      sw[r, col] = sum_c Y_c A_c  (the weighted window sum)
    """
    w = weights.shape[1]
    t1 = np.zeros((reps, w), dtype=np.float64)
    t2 = np.zeros((reps, w), dtype=np.float64)
    sw = np.zeros((reps, w), dtype=np.float64)
    ncomp = np.zeros(reps, dtype=np.int64)
    acc = np.zeros((n, w), dtype=np.float64)
    acc_abs = np.zeros((n, w), dtype=np.float64)
    seen = np.zeros(n, dtype=np.uint8)
    for r in range(reps):
        lk = derive_key(uint64(master), uint64(KIND_LINEAGE), uint64(r))
        ck = derive_key(uint64(master), uint64(KIND_COLOUR), uint64(r))
        comp, nc, st = trace_window(lk, n, n_islands, int64(1), law_code,
                                    inv_alpha, alpha, beta, m_cut)
        ncomp[r] = nc
        seen[:] = 0
        for v in range(n):
            root = comp[v]
            if seen[root] == 0:
                seen[root] = 1
                for col in range(w):
                    acc[root, col] = 0.0
                    acc_abs[root, col] = 0.0
            for col in range(w):
                acc[root, col] += weights[v, col]
                acc_abs[root, col] += abs(weights[v, col])
        for c in range(n):
            if seen[c] == 1:
                u = to_unit(stream64(ck, uint64(c)))
                y = _colour_value(u, colour_code, c1, c2, c3)
                ay = abs(y)
                for col in range(w):
                    a_tot = acc[c, col]
                    t1[r, col] += y * y * a_tot * a_tot
                    t2[r, col] += ay * ay * ay * acc_abs[c, col] * a_tot * a_tot
                    sw[r, col] += y * a_tot
    return t1, t2, sw, ncomp


@njit(cache=True)
def batch_quadruple_products(master, reps, n, n_islands, law_code, inv_alpha,
                             alpha, beta, m_cut, colour_code, c1, c2, c3,
                             quads):
    """Colour products, pair indicators and joint-coalescence flags.

    quads holds 0-based window indices (i, j, k, l), shape (Q, 4).  Returns,
    per replica and quadruple: x = Y_i Y_j, y = Y_k Y_l, the indicators of
    i ~ j and k ~ l, and a flag for all four sites sharing one component.
    """
    nq = quads.shape[0]
    x_out = np.zeros((reps, nq), dtype=np.float64)
    y_out = np.zeros((reps, nq), dtype=np.float64)
    ind_x = np.zeros((reps, nq), dtype=np.uint8)
    ind_y = np.zeros((reps, nq), dtype=np.uint8)
    all4 = np.zeros((reps, nq), dtype=np.uint8)
    ycache = np.zeros(n, dtype=np.float64)
    seen = np.zeros(n, dtype=np.uint8)
    for r in range(reps):
        lk = derive_key(uint64(master), uint64(KIND_LINEAGE), uint64(r))
        ck = derive_key(uint64(master), uint64(KIND_COLOUR), uint64(r))
        comp, nc, st = trace_window(lk, n, n_islands, int64(1), law_code,
                                    inv_alpha, alpha, beta, m_cut)
        seen[:] = 0
        for qi in range(nq):
            for half in range(2):
                p = 1.0
                for leg in range(2):
                    root = comp[quads[qi, 2 * half + leg]]
                    if seen[root] == 0:
                        u = to_unit(stream64(ck, uint64(root)))
                        ycache[root] = _colour_value(u, colour_code, c1, c2, c3)
                        seen[root] = 1
                    p *= ycache[root]
                if half == 0:
                    x_out[r, qi] = p
                else:
                    y_out[r, qi] = p
            if comp[quads[qi, 0]] == comp[quads[qi, 1]]:
                ind_x[r, qi] = 1
            if comp[quads[qi, 2]] == comp[quads[qi, 3]]:
                ind_y[r, qi] = 1
            r0 = comp[quads[qi, 0]]
            if (comp[quads[qi, 1]] == r0 and comp[quads[qi, 2]] == r0
                    and comp[quads[qi, 3]] == r0):
                all4[r, qi] = 1
    return x_out, y_out, ind_x, ind_y, all4


@njit(cache=True)
def pair_first_meet(master, reps, gap, n_islands, island_a, island_b,
                    law_code, inv_alpha, alpha, beta, m_cut):
    """First common ancestral site of sites (0, island_a) and (gap, island_b).

    Leapfrog tracing: only the walker with the higher site code advances,
    with the draw keyed to the site it leaves, so the pair meets exactly
    when the codes collide.  Returns per replica: met flag, meeting depth
    (-t of the common site, -1 if not met above the cutoff), and total
    steps.
    """
    met = np.zeros(reps, dtype=np.uint8)
    depth = np.full(reps, -1, dtype=np.int64)
    steps_total = int64(0)
    clamp = m_cut + gap + int64(2)
    for r in range(reps):
        lk = derive_key(uint64(master), uint64(KIND_PAIR), uint64(r))
        t_a = int64(0)
        i_a = int64(island_a)
        t_b = int64(gap)
        i_b = int64(island_b)
        code_a = t_a * n_islands + i_a
        code_b = t_b * n_islands + i_b
        while code_a != code_b:
            if code_a > code_b:
                mover_t, mover_i, mover_code = t_a, i_a, code_a
            else:
                mover_t, mover_i, mover_code = t_b, i_b, code_b
            u = to_unit(stream64(lk, uint64(2 * mover_code)))
            jump = _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp)
            steps_total += 1
            if n_islands > 1:
                mover_i = _island_draw(lk, mover_code, n_islands)
            mover_t = mover_t - jump
            if code_a > code_b:
                t_a, i_a = mover_t, mover_i
                code_a = t_a * n_islands + i_a
            else:
                t_b, i_b = mover_t, mover_i
                code_b = t_b * n_islands + i_b
            if (t_a if t_a < t_b else t_b) < -m_cut:
                break
        if code_a == code_b and t_a >= -m_cut:
            met[r] = 1
            depth[r] = -t_a
    return met, depth, steps_total


@njit(cache=True)
def decoupled_overlap_counts(master, reps, gap, n_islands, island_a, island_b,
                             law_code, inv_alpha, alpha, beta, depth_cut):
    """Shared-site counts of two independent walks, restricted to [-depth, 0].

    Walk A starts at (0, island_a), walk B at (gap, island_b); the walks use
    separate counter streams (no site keying), so they are independent
    copies.  The count of common sites with time in [-depth_cut, 0] has mean
    sum_{m=0..depth_cut} q_m q_{m+gap} for one island, with an extra 1/N
    factor per term at N islands (except the fixed starting islands at m=0).
    """
    out = np.zeros(reps, dtype=np.int64)
    clamp = depth_cut + gap + int64(2)
    for r in range(reps):
        rk = derive_key(uint64(master), uint64(KIND_OVERLAP), uint64(r))
        key_a = stream64(rk, uint64(0))
        key_b = stream64(rk, uint64(1))

        sites = np.empty(256, dtype=np.int64)
        n_sites = int64(0)
        pos = int64(0)
        isl = int64(island_a)
        ctr = uint64(0)
        while pos >= -depth_cut:
            if n_sites >= len(sites):
                grown = np.empty(2 * len(sites), dtype=np.int64)
                grown[:n_sites] = sites[:n_sites]
                sites = grown
            sites[n_sites] = pos * n_islands + isl
            n_sites += 1
            u = to_unit(stream64(key_a, ctr))
            ctr += uint64(1)
            if n_islands > 1:
                ui = to_unit(stream64(key_a, ctr))
                ctr += uint64(1)
                isl = int64(ui * float64(n_islands))
                if isl >= n_islands:
                    isl = n_islands - 1
            pos -= _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp)

        cap = int64(256)
        while cap < 4 * n_sites:
            cap *= 2
        mask = cap - 1
        hkey = np.full(cap, EMPTY, dtype=np.int64)
        for i in range(n_sites):
            idx = int64(uint64(sites[i]) * GOLDEN & uint64(mask))
            while hkey[idx] != EMPTY:
                idx = (idx + 1) & mask
            hkey[idx] = sites[i]

        hits = int64(0)
        pos = int64(gap)
        isl = int64(island_b)
        ctr = uint64(0)
        while pos >= -depth_cut:
            if pos <= 0:
                code = pos * n_islands + isl
                idx = int64(uint64(code) * GOLDEN & uint64(mask))
                while hkey[idx] != EMPTY:
                    if hkey[idx] == code:
                        hits += 1
                        break
                    idx = (idx + 1) & mask
            u = to_unit(stream64(key_b, ctr))
            ctr += uint64(1)
            if n_islands > 1:
                ui = to_unit(stream64(key_b, ctr))
                ctr += uint64(1)
                isl = int64(ui * float64(n_islands))
                if isl >= n_islands:
                    isl = n_islands - 1
            pos -= _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp)
        out[r] = hits
    return out


@njit(cache=True)
def window_jump_fields(lineage_key, t_lo, t_hi, island, n_islands, law_code,
                       inv_alpha, alpha, beta):
    """Jump size and island redraw at sites (t, island), t in [t_lo, t_hi).

    Replays the same keyed draws the tracers use, for edge listings.
    """
    m = t_hi - t_lo
    jumps = np.zeros(m, dtype=np.int64)
    islands = np.zeros(m, dtype=np.int64)
    clamp = int64(2) ** 61
    for i in range(m):
        t = t_lo + i
        code = t * n_islands + island
        u = to_unit(stream64(lineage_key, uint64(2 * code)))
        jumps[i] = _sample_jump(u, law_code, inv_alpha, alpha, beta, clamp)
        if n_islands > 1:
            islands[i] = _island_draw(lineage_key, code, n_islands)
    return jumps, islands

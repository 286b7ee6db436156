"""Compiled replay and Metropolis loop used by :mod:`shuttleqec.anneal`.

Gate arrays are sorted by step; ``step_ptr[t]`` is the index of the first
gate of the t-th step (0-based) and ``step_ptr[-1] == len(grow)``.  A mover
value of 0 means the row bit moves, 1 the column bit.  Semantics match
:func:`shuttleqec.shuttle.shuttle_transform` exactly; the test-suite checks
this against the pure-Python replay.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def replay_from(t0, line_t0, step_ptr, grow, gcol, movers, s_out, line, pos, slot, start, snap, record):
    """Replay steps ``t0..`` starting from the layout ``line_t0``.

    Writes separations of gates in those steps into ``s_out``; ``line`` ends
    as the final layout.  With ``record`` set, ``snap[t]`` receives the layout
    at the start of every step ``t >= t0`` and ``snap[-1]`` the final one.
    ``line``, ``pos``, ``slot`` and ``start`` are scratch arrays of length
    ``n_bits``; ``slot`` must hold -1 everywhere on entry and is left so.
    """
    nb = line_t0.shape[0]
    for p in range(nb):
        line[p] = line_t0[p]
        pos[line_t0[p]] = p
    nsteps = step_ptr.shape[0] - 1
    for t in range(t0, nsteps):
        if record:
            snap[t, :] = line
        lo = step_ptr[t]
        hi = step_ptr[t + 1]
        for g in range(lo, hi):
            if movers[g] == 0:
                slot[pos[gcol[g]]] = g
            else:
                slot[pos[grow[g]]] = g
        # serialization order = ascending stationary position at step start
        k = 0
        for p in range(nb):
            if slot[p] >= 0:
                start[k] = slot[p]
                slot[p] = -1
                k += 1
        for q in range(hi - lo):
            g = start[q]
            if movers[g] == 0:
                m = grow[g]
                st = gcol[g]
            else:
                m = gcol[g]
                st = grow[g]
            pm = pos[m]
            ps = pos[st]
            if pm < ps:
                s_out[g] = ps - pm - 1
                for p in range(pm, ps - 1):
                    b = line[p + 1]
                    line[p] = b
                    pos[b] = p
                line[ps - 1] = m
                pos[m] = ps - 1
            else:
                s_out[g] = pm - ps - 1
                for p in range(pm, ps + 1, -1):
                    b = line[p - 1]
                    line[p] = b
                    pos[b] = p
                line[ps + 1] = m
                pos[m] = ps + 1
    if record:
        snap[nsteps, :] = line


@njit(cache=True, nogil=True)
def replay(line0, step_ptr, grow, gcol, movers, s_out, line, pos, slot, start):
    """Full replay from the initial layout ``line0``."""
    dummy = np.empty((1, 1), np.int64)
    replay_from(0, line0, step_ptr, grow, gcol, movers, s_out, line, pos, slot, start, dummy, False)


@njit(cache=True, nogil=True)
def objective(s):
    """(max separation, gates at max, sum of squares)."""
    mx = -1
    j = 0
    ss = 0
    for g in range(s.shape[0]):
        v = s[g]
        ss += v * v
        if v > mx:
            mx = v
            j = 1
        elif v == mx:
            j += 1
    return mx, j, ss


@njit(cache=True, nogil=True)
def _better(m1, j1, ss1, m2, j2, ss2):
    """Lexicographic (max, j, rms) comparison: is 1 strictly better than 2?"""
    if m1 != m2:
        return m1 < m2
    if j1 != j2:
        return j1 < j2
    return ss1 < ss2


@njit(cache=True, nogil=True)
def cost(m0, j0, ss0, m1, j1, ss1, ngates):
    d = float(j1 * m1 - j0 * m0)
    if d != 0.0:
        return d
    return np.sqrt(ss1 / ngates) - np.sqrt(ss0 / ngates)


@njit(cache=True, nogil=True)
def first_steps(step_ptr, grow, gcol, nb):
    """Index of the first step touching each bit (number of steps if never)."""
    nsteps = step_ptr.shape[0] - 1
    first = np.full(nb, nsteps, np.int64)
    for t in range(nsteps - 1, -1, -1):
        for g in range(step_ptr[t], step_ptr[t + 1]):
            first[grow[g]] = t
            first[gcol[g]] = t
    return first


@njit(cache=True, nogil=True)
def step_of(step_ptr, ng):
    out = np.empty(ng, np.int64)
    for t in range(step_ptr.shape[0] - 1):
        for g in range(step_ptr[t], step_ptr[t + 1]):
            out[g] = t
    return out


@njit(cache=True, nogil=True)
def anneal_loop(line0, lo_anc, n_anc, step_ptr, grow, gcol, movers0,
                t0, cooling, steps_per_t, levels, cycles, reheat, move_mix, seed, verify):
    """Metropolis annealing over ancilla order and mover choices.

    A move only changes the network from some step on (the flipped gate's
    step, or the first step using either swapped bit), so trial evaluation
    replays from that step using stored per-step layouts of the current
    state.  With ``verify`` set every trial is also replayed in full and a
    mismatch raises.

    Returns best initial line, best movers, trace rows
    ``(cycle, T, max, j, sumsq, best_max, best_j, best_sumsq)`` per
    temperature level, and counters ``[proposed, accepted, uphill_proposed,
    uphill_accepted]``.
    """
    np.random.seed(seed)
    ng = grow.shape[0]
    nb = line0.shape[0]
    nsteps = step_ptr.shape[0] - 1
    first = first_steps(step_ptr, grow, gcol, nb)
    gstep = step_of(step_ptr, ng)

    cur_line = line0.copy()
    cur_mov = movers0.copy()
    s_cur = np.empty(ng, np.int64)
    s_try = np.empty(ng, np.int64)
    s_full = np.empty(ng, np.int64)
    line = np.empty(nb, np.int64)
    pos = np.empty(nb, np.int64)
    slot = np.full(nb, -1, np.int64)
    start = np.empty(nb, np.int64)
    snap = np.empty((nsteps + 1, nb), np.int64)
    snap_try = np.empty((nsteps + 1, nb), np.int64)
    seed_line = np.empty(nb, np.int64)
    replay_from(0, cur_line, step_ptr, grow, gcol, cur_mov, s_cur, line, pos, slot, start, snap, True)
    s_try[:] = s_cur
    cm, cj, css = objective(s_cur)
    best_line = cur_line.copy()
    best_mov = cur_mov.copy()
    bm, bj, bss = cm, cj, css
    trace = np.empty((cycles * levels, 8), np.float64)
    counts = np.zeros(4, np.int64)
    T = t0
    row = 0
    pa = 0
    pb = 0
    x = 0
    y = 0
    g = 0
    for cyc in range(cycles):
        for lev in range(levels):
            for it in range(steps_per_t):
                order_move = n_anc >= 2 and np.random.random() < move_mix
                if order_move:
                    a = np.random.randint(0, n_anc)
                    b = np.random.randint(0, n_anc - 1)
                    if b >= a:
                        b += 1
                    pa = lo_anc + a
                    pb = lo_anc + b
                    x = cur_line[pa]
                    y = cur_line[pb]
                    cur_line[pa] = y
                    cur_line[pb] = x
                    ts = min(first[x], first[y])
                    # before ts the two bits are idle, so only their labels swap
                    seed_line[:] = snap[ts]
                    for p in range(nb):
                        if seed_line[p] == x:
                            seed_line[p] = y
                        elif seed_line[p] == y:
                            seed_line[p] = x
                else:
                    g = np.random.randint(0, ng)
                    cur_mov[g] = 1 - cur_mov[g]
                    ts = gstep[g]
                    seed_line[:] = snap[ts]
                if ts < nsteps:
                    replay_from(ts, seed_line, step_ptr, grow, gcol, cur_mov, s_try, line, pos, slot, start, snap_try, True)
                nm, nj, nss = objective(s_try)
                if verify:
                    replay(cur_line, step_ptr, grow, gcol, cur_mov, s_full, line, pos, slot, start)
                    for q in range(ng):
                        if s_full[q] != s_try[q]:
                            raise ValueError("incremental replay disagrees with full replay")
                c = cost(cm, cj, css, nm, nj, nss, ng)
                counts[0] += 1
                if c > 0.0:
                    counts[2] += 1
                accept = c <= 0.0
                if not accept and T > 0.0:
                    accept = np.random.random() < np.exp(-c / T)
                lo_g = step_ptr[ts] if ts < nsteps else ng
                if accept:
                    counts[1] += 1
                    if c > 0.0:
                        counts[3] += 1
                    cm, cj, css = nm, nj, nss
                    for q in range(lo_g, ng):
                        s_cur[q] = s_try[q]
                    if order_move:
                        for t in range(ts):
                            for p in range(nb):
                                if snap[t, p] == x:
                                    snap[t, p] = y
                                elif snap[t, p] == y:
                                    snap[t, p] = x
                    if ts < nsteps:
                        snap[ts:] = snap_try[ts:]
                    else:
                        snap[nsteps] = seed_line
                    if _better(cm, cj, css, bm, bj, bss):
                        bm, bj, bss = cm, cj, css
                        best_line[:] = cur_line
                        best_mov[:] = cur_mov
                else:
                    for q in range(lo_g, ng):
                        s_try[q] = s_cur[q]
                    if order_move:
                        cur_line[pa] = x
                        cur_line[pb] = y
                    else:
                        cur_mov[g] = 1 - cur_mov[g]
            trace[row, 0] = cyc
            trace[row, 1] = T
            trace[row, 2] = cm
            trace[row, 3] = cj
            trace[row, 4] = css
            trace[row, 5] = bm
            trace[row, 6] = bj
            trace[row, 7] = bss
            row += 1
            T *= cooling
        T *= reheat
    return best_line, best_mov, trace, counts

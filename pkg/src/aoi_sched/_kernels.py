"""Numeric kernels for the descent-based verification oracle.

Everything here works on plain float64 arrays and scalars, so the same
source compiles under numba and runs unchanged as ordinary Python.  The
backend is chosen at import time from the AOI_SCHED_BACKEND environment
variable:

    auto (default)  compile with numba when it is importable
    numba           require numba, fail loudly otherwise
    python          skip compilation, run the pure-Python/numpy path

Both backends execute identical operations in identical order (no fastmath),
so their outputs are bit-for-bit equal.

Constraint modes are passed as integer codes; for each mode the feasible set
is the simplex slice {y >= 0, sum(y) = T} cut by per-index chain constraints
linking y_k to y_{k-1}:

    MODE_CONSTANT        y_k >= cpar                    (k = 1..N)
    MODE_INVERSE_AGE     y_k >= alpha * y_{k-1}
    MODE_PROPORTIONAL    y_k >= cpar - alpha * y_{k-1}
"""

from __future__ import annotations

import os

import numpy as np

MODE_CONSTANT = 0
MODE_INVERSE_AGE = 1
MODE_PROPORTIONAL = 2

_ENV_FLAG = "AOI_SCHED_BACKEND"


def _want_numba() -> bool:
    choice = os.environ.get(_ENV_FLAG, "auto").strip().lower()
    if choice in ("python", "numpy"):
        return False
    if choice == "numba":
        import numba  # noqa: F401  deliberate hard failure when missing

        return True
    if choice in ("", "auto"):
        try:
            import numba  # noqa: F401

            return True
        except ImportError:
            return False
    raise ValueError(f"unrecognized {_ENV_FLAG}={choice!r}; use numba, python, or auto")


USING_NUMBA = _want_numba()
BACKEND = "numba" if USING_NUMBA else "python"


def _objective(y, n_upd, mode, cpar, alpha):
    # total age of y with processing times recovered by the tight rule
    tot = 0.0
    for i in range(n_upd + 1):
        v = y[i]
        tot += 0.5 * v * v
        if i < n_upd:
            if mode == MODE_CONSTANT:
                tot += cpar * v
            elif mode == MODE_INVERSE_AGE:
                tot += alpha * v * v
            else:
                tot += v * max(0.0, cpar - alpha * v)
    return tot


def _chain_slack(y, k, mode, cpar, alpha):
    # how far constraint k sits from its bound (nonnegative when satisfied)
    if mode == MODE_CONSTANT:
        return y[k] - cpar
    if mode == MODE_INVERSE_AGE:
        return y[k] - alpha * y[k - 1]
    return y[k] + alpha * y[k - 1] - cpar


def _chain_direction(d, k, mode, alpha):
    # rate of change of constraint k's slack along direction d
    if mode == MODE_CONSTANT:
        return d[k]
    if mode == MODE_INVERSE_AGE:
        return d[k] - alpha * d[k - 1]
    return d[k] + alpha * d[k - 1]


def _move_interval(y, d, n, mode, cpar, alpha):
    # largest step range [lo, hi] keeping y + t*d inside every constraint
    lo, hi = -np.inf, np.inf
    for k in range(n):
        if d[k] > 0.0:
            lo = max(lo, -y[k] / d[k])
        elif d[k] < 0.0:
            hi = min(hi, y[k] / (-d[k]))
    for k in range(1, n):
        s = _chain_slack(y, k, mode, cpar, alpha)
        g = _chain_direction(d, k, mode, alpha)
        if g > 0.0:
            lo = max(lo, -s / g)
        elif g < 0.0:
            hi = min(hi, s / (-g))
    lo = min(lo, 0.0)
    hi = max(hi, 0.0)
    return lo, hi


def _touched_eval(y, d, idx, m, t, n_upd, mode, cpar, alpha):
    # objective restricted to the m coordinates listed in idx, at step t
    tot = 0.0
    for k in range(m):
        i = idx[k]
        v = y[i] + t * d[i]
        tot += 0.5 * v * v
        if i < n_upd:
            if mode == MODE_CONSTANT:
                tot += cpar * v
            elif mode == MODE_INVERSE_AGE:
                tot += alpha * v * v
            else:
                tot += v * max(0.0, cpar - alpha * v)
    return tot


def _line_search(y, d, idx, m, lo, hi, n_upd, mode, cpar, alpha, ttol):
    # ternary search on the convex 1-D restriction, then exact endpoint
    # candidates so constraints can land precisely on their bounds
    a, b = lo, hi
    while b - a > ttol:
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if _touched_eval(y, d, idx, m, m1, n_upd, mode, cpar, alpha) <= _touched_eval(
            y, d, idx, m, m2, n_upd, mode, cpar, alpha
        ):
            b = m2
        else:
            a = m1
    best_t = 0.0
    best_h = _touched_eval(y, d, idx, m, 0.0, n_upd, mode, cpar, alpha)
    tm = 0.5 * (a + b)
    for t in (tm, lo, hi):
        hv = _touched_eval(y, d, idx, m, t, n_upd, mode, cpar, alpha)
        if hv < best_h:
            best_t = t
            best_h = hv
    return best_t, best_h


def _descend(y, T, n_upd, mode, cpar, alpha, tol, max_moves):
    """Sweep improving transfers over y in place until none helps.

    Each sweep tries every pairwise mass transfer (sum-preserving, clipped
    to the feasible interval, step chosen by line search).  For the coupled
    modes it additionally tries block transfers along tight chain windows:
    when the constraints linking y_a..y_b are all tight, mass can only move
    through that window in the chain's own ratio, so the direction seeds
    d_a = 1 and propagates d_k = +/-alpha * d_{k-1}, with any coordinate
    outside the window absorbing the balance.  Pairwise moves alone stall
    on such windows.

    Returns (moves_used, converged).
    """
    n = n_upd + 1
    scale = max(1.0, T)
    ttol = 1e-13 * scale
    eps = 1e-7 * scale
    d = np.zeros(n)
    idx = np.zeros(n, dtype=np.int64)
    moves = 0
    while moves < max_moves:
        best_drop = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    d[k] = 0.0
                d[i] = -1.0
                d[j] = 1.0
                lo, hi = _move_interval(y, d, n, mode, cpar, alpha)
                if hi - lo <= ttol:
                    continue
                idx[0] = i
                idx[1] = j
                h0 = _touched_eval(y, d, idx, 2, 0.0, n_upd, mode, cpar, alpha)
                t, hbest = _line_search(
                    y, d, idx, 2, lo, hi, n_upd, mode, cpar, alpha, ttol
                )
                moves += 1
                if hbest < h0:
                    y[i] += t * d[i]
                    y[j] += t * d[j]
                    best_drop = max(best_drop, h0 - hbest)
        if mode != MODE_CONSTANT:
            for a0 in range(n - 1):
                b0 = a0
                while b0 + 1 < n:
                    if _chain_slack(y, b0 + 1, mode, cpar, alpha) > eps:
                        break
                    b0 += 1
                    for j in range(n):
                        if a0 <= j <= b0:
                            continue
                        for k in range(n):
                            d[k] = 0.0
                        d[a0] = 1.0
                        blk = 1.0
                        for w in range(a0 + 1, b0 + 1):
                            if mode == MODE_INVERSE_AGE:
                                d[w] = alpha * d[w - 1]
                            else:
                                d[w] = -alpha * d[w - 1]
                            blk += d[w]
                        d[j] = -blk
                        lo, hi = _move_interval(y, d, n, mode, cpar, alpha)
                        if hi - lo <= ttol:
                            continue
                        m = 0
                        for w in range(a0, b0 + 1):
                            idx[m] = w
                            m += 1
                        idx[m] = j
                        m += 1
                        h0 = _touched_eval(y, d, idx, m, 0.0, n_upd, mode, cpar, alpha)
                        t, hbest = _line_search(
                            y, d, idx, m, lo, hi, n_upd, mode, cpar, alpha, ttol
                        )
                        moves += 1
                        if hbest < h0:
                            for w in range(m):
                                y[idx[w]] += t * d[idx[w]]
                            best_drop = max(best_drop, h0 - hbest)
        # keep the horizon sum exact; drift per sweep is a few ulp
        acc = 0.0
        for k in range(n):
            acc += y[k]
        y[n - 1] += T - acc
        if best_drop <= tol:
            return moves, True
    return moves, False


def _tight_chain(n_upd, mode, cpar, alpha):
    # schedule with every waiting gap at zero: the minimal-sum feasible point
    z = np.zeros(n_upd + 1)
    for i in range(1, n_upd + 1):
        if mode == MODE_CONSTANT:
            z[i] = cpar
        elif mode == MODE_INVERSE_AGE:
            z[i] = alpha * z[i - 1]
        else:
            z[i] = max(0.0, cpar - alpha * z[i - 1])
    return z


def _repair_start(draw, T, n_upd, mode, cpar, alpha):
    # forward-clamp the draw onto the chain bounds, then blend with the
    # tight chain; the feasible set is convex, so the blend stays inside
    z = _tight_chain(n_upd, mode, cpar, alpha)
    w = draw.copy()
    for i in range(1, n_upd + 1):
        if mode == MODE_CONSTANT:
            lb = cpar
        elif mode == MODE_INVERSE_AGE:
            lb = alpha * w[i - 1]
        else:
            lb = max(0.0, cpar - alpha * w[i - 1])
        if w[i] < lb:
            w[i] = lb
    sw = w.sum()
    sz = z.sum()
    if sw <= sz:
        return z
    g = (T - sz) / (sw - sz)
    return z + g * (w - z)


def solve_from_starts(starts, T, mode, cpar, alpha, tol, max_moves):
    """Run the descent from each start row; return the best result.

    Returns (best_y, best_objective, converged_count).  Ties in objective
    keep the earliest start, so output is independent of evaluation order.
    """
    n = starts.shape[1]
    n_upd = n - 1
    best_obj = np.inf
    best_y = np.zeros(n)
    converged = 0
    for r in range(starts.shape[0]):
        y = _repair_start(starts[r], T, n_upd, mode, cpar, alpha)
        _, ok = _descend(y, T, n_upd, mode, cpar, alpha, tol, max_moves)
        if ok:
            converged += 1
        obj = _objective(y, n_upd, mode, cpar, alpha)
        if obj < best_obj:
            best_obj = obj
            for k in range(n):
                best_y[k] = y[k]
    return best_y, best_obj, converged


if USING_NUMBA:
    from numba import njit

    _jit = njit(cache=True)
    _objective = _jit(_objective)
    _chain_slack = _jit(_chain_slack)
    _chain_direction = _jit(_chain_direction)
    _move_interval = _jit(_move_interval)
    _touched_eval = _jit(_touched_eval)
    _line_search = _jit(_line_search)
    _descend = _jit(_descend)
    _tight_chain = _jit(_tight_chain)
    _repair_start = _jit(_repair_start)
    solve_from_starts = _jit(solve_from_starts)

"""Compiled inner loops.

Everything here is a pure function of its array arguments.  Parallel loops
write each output slot from exactly one iteration, so results do not depend
on the number of threads numba uses.
"""

from __future__ import annotations

import math
import threading

import numba as nb
import numpy as np

# Thread scheduling never changes results here; skip the TBB layer, which
# warns on older system TBB builds.
nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

# log k and k^-sigma are tabulated up to this many terms; beyond it the same
# expressions are evaluated inline, so the table never changes a result.
TABLE_MAX = 1 << 22

_tables: dict[float, tuple[np.ndarray, np.ndarray]] = {}
_tables_lock = threading.Lock()


@nb.njit(cache=True)
def _term_log(k):
    return math.log(k)


@nb.njit(cache=True)
def _term_amp(sigma, lk):
    return math.exp(-sigma * lk)


@nb.njit(cache=True)
def _fill_table(sigma, size):
    logk = np.empty(size)
    amp = np.empty(size)
    for j in range(size):
        lk = _term_log(j + 1)
        logk[j] = lk
        amp[j] = _term_amp(sigma, lk)
    return logk, amp


def power_table(sigma: float, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log k, k**-sigma)`` for ``k = 1..size`` (size capped at TABLE_MAX)."""
    size = int(min(max(size, 1), TABLE_MAX))
    with _tables_lock:
        cached = _tables.get(sigma)
        if cached is not None and cached[0].size >= size:
            return cached
        # grow geometrically so repeated slightly-larger requests stay cheap
        if cached is not None:
            size = min(max(size, 2 * cached[0].size), TABLE_MAX)
        table = _fill_table(float(sigma), size)
        _tables[sigma] = table
        return table


@nb.njit(parallel=True, cache=True)
def _dirichlet_sums(sigma, ts, counts, logk, amp):
    n_out = ts.size
    out_re = np.empty(n_out)
    out_im = np.empty(n_out)
    tab = logk.size
    for i in nb.prange(n_out):
        t = ts[i]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for j in range(counts[i]):
            if j < tab:
                lk = logk[j]
                a = amp[j]
            else:
                lk = _term_log(j + 1)
                a = _term_amp(sigma, lk)
            ph = t * lk
            vr = a * math.cos(ph)
            vi = -(a * math.sin(ph))
            # Neumaier compensated accumulation, real and imaginary parts
            s = sr + vr
            if abs(sr) >= abs(vr):
                cr += (sr - s) + vr
            else:
                cr += (vr - s) + sr
            sr = s
            s = si + vi
            if abs(si) >= abs(vi):
                ci += (si - s) + vi
            else:
                ci += (vi - s) + si
            si = s
        out_re[i] = sr + cr
        out_im[i] = si + ci
    return out_re, out_im


def dirichlet_sums(sigma: float, ts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """``sum_{k <= counts[i]} k**-(sigma + i*ts[i])`` for every i, ascending k."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    if ts.size == 0:
        return np.empty(0, dtype=np.complex128)
    logk, amp = power_table(float(sigma), int(counts.max()))
    re, im = _dirichlet_sums(float(sigma), ts, counts, logk, amp)
    return re + 1j * im


@nb.njit(cache=True)
def _min_max_double_sum(n, m, sigma, x):
    # sum_{k,l<=x} (kl)^-sigma (min/max)^n l^-(m-n), arranged as
    # sum_k k^-(m-n)-2sigma (1 + V_k + W_k) with scaled suffix sums
    # V_k = sum_{l>k} (k/l)^(m+sigma), W_k = sum_{l>k} (k/l)^(n+sigma).
    pv = m + sigma
    pw = n + sigma
    q = (m - n) + 2.0 * sigma
    v = 0.0
    w = 0.0
    acc = 0.0
    comp = 0.0
    for k in range(x, 0, -1):
        term = math.exp(-q * math.log(k)) * (1.0 + v + w)
        s = acc + term
        if abs(acc) >= abs(term):
            comp += (acc - s) + term
        else:
            comp += (term - s) + acc
        acc = s
        if k > 1:
            lr = math.log1p(-1.0 / k)  # log((k-1)/k)
            v = math.exp(pv * lr) * (1.0 + v)
            w = math.exp(pw * lr) * (1.0 + w)
    return acc + comp


def min_max_double_sum(n: int, m: int, sigma: float, x: int) -> float:
    return float(_min_max_double_sum(int(n), int(m), float(sigma), int(x)))


def set_workers(workers: int | None) -> None:
    """Set numba's thread count; ``None`` leaves the default (all cores)."""
    if workers is not None:
        nb.set_num_threads(max(1, min(int(workers), nb.config.NUMBA_NUM_THREADS)))

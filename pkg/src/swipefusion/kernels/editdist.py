"""Edit-distance DPs of one input string against every word of a vocabulary.

Words arrive as a padded (V, L) int8 code matrix plus lengths so a whole
vocabulary is scored in one call.
"""
import numpy as np

from .._accel import njit, pick

FAR = np.iinfo(np.int64).max // 4


@njit
def _spatial_numba(codes, lens, inp, sub, log_omit, log_stray, log_end, lo, hi):
    V = codes.shape[0]
    m = inp.shape[0]
    out = np.empty(V)
    prev = np.empty(m + 1)
    cur = np.empty(m + 1)
    for v in range(V):
        n = lens[v]
        if n < lo or n > hi:
            out[v] = -np.inf
            continue
        prev[0] = 0.0
        for j in range(1, m + 1):
            prev[j] = prev[j - 1] + log_stray
        for i in range(1, n + 1):
            ci = codes[v, i - 1]
            cur[0] = prev[0] + (log_end if m == 0 else log_omit)
            for j in range(1, m + 1):
                best = prev[j] + (log_end if j == m else log_omit)
                b = cur[j - 1] + log_stray
                if b > best:
                    best = b
                b = prev[j - 1] + sub[ci, inp[j - 1]]
                if b > best:
                    best = b
                cur[j] = best
            for j in range(m + 1):
                prev[j] = cur[j]
        out[v] = prev[m]
    return out


def _spatial_numpy(codes, lens, inp, sub, log_omit, log_stray, log_end, lo, hi):
    full = np.full(len(lens), -np.inf)
    sel = np.flatnonzero((lens >= lo) & (lens <= hi))
    if len(sel):
        full[sel] = _spatial_rows(codes[sel], lens[sel], inp, sub, log_omit, log_stray, log_end)
    return full


def _spatial_rows(codes, lens, inp, sub, log_omit, log_stray, log_end):
    V = codes.shape[0]
    L = int(lens.max())
    m = len(inp)
    out = np.empty(V)
    prev = np.empty((m + 1, V))
    prev[0] = 0.0
    for j in range(1, m + 1):
        prev[j] = prev[j - 1] + log_stray
    done = lens == 0
    out[done] = prev[m][done]
    for i in range(1, L + 1):
        ci = codes[:, i - 1]
        cur = np.empty_like(prev)
        cur[0] = prev[0] + (log_end if m == 0 else log_omit)
        for j in range(1, m + 1):
            best = prev[j] + (log_end if j == m else log_omit)
            best = np.maximum(best, cur[j - 1] + log_stray)
            cur[j] = np.maximum(best, prev[j - 1] + sub[ci, inp[j - 1]])
        prev = cur
        hit = lens == i
        out[hit] = prev[m][hit]
    return out


@njit
def _lev_numba(codes, lens, inp, lo, hi):
    V = codes.shape[0]
    m = inp.shape[0]
    out = np.empty(V, dtype=np.int64)
    prev = np.empty(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for v in range(V):
        n = lens[v]
        if n < lo or n > hi:
            out[v] = FAR
            continue
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            ci = codes[v, i - 1]
            cur[0] = i
            for j in range(1, m + 1):
                best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                d = prev[j - 1] + (0 if ci == inp[j - 1] else 1)
                if d < best:
                    best = d
                cur[j] = best
            for j in range(m + 1):
                prev[j] = cur[j]
        out[v] = prev[m]
    return out


def _lev_numpy(codes, lens, inp, lo, hi):
    full = np.full(len(lens), FAR, dtype=np.int64)
    sel = np.flatnonzero((lens >= lo) & (lens <= hi))
    if len(sel):
        full[sel] = _lev_rows(codes[sel], lens[sel], inp)
    return full


def _lev_rows(codes, lens, inp):
    V = codes.shape[0]
    L = int(lens.max())
    m = len(inp)
    out = np.empty(V, dtype=np.int64)
    prev = np.repeat(np.arange(m + 1, dtype=np.int64)[:, None], V, axis=1)
    out[lens == 0] = m
    for i in range(1, L + 1):
        ci = codes[:, i - 1]
        cur = np.empty_like(prev)
        cur[0] = i
        for j in range(1, m + 1):
            best = np.minimum(prev[j] + 1, cur[j - 1] + 1)
            cur[j] = np.minimum(best, prev[j - 1] + (ci != inp[j - 1]))
        prev = cur
        hit = lens == i
        out[hit] = prev[m][hit]
    return out


_spatial = pick(_spatial_numba, _spatial_numpy)
_lev = pick(_lev_numba, _lev_numpy)


_NO_LIMIT = np.iinfo(np.int64).max


def spatial_logprob_batch(codes, lens, inp, sub, log_omit, log_stray, free_end=True, min_len=0, max_len=None):
    """Best alignment log-probability of ``inp`` (typed) against each word (intended).

    Intended characters left over after the whole input is consumed cost
    nothing when ``free_end`` is set, ``log_omit`` otherwise.  Words outside
    [min_len, max_len] are skipped and get -inf.
    """
    return _spatial(np.ascontiguousarray(codes, dtype=np.int8), np.asarray(lens, dtype=np.int64),
                    np.asarray(inp, dtype=np.int8), np.asarray(sub, dtype=np.float64),
                    float(log_omit), float(log_stray), 0.0 if free_end else float(log_omit),
                    int(min_len), _NO_LIMIT if max_len is None else int(max_len))


def levenshtein_batch(codes, lens, inp, min_len=0, max_len=None):
    """Unit-cost edit distance of ``inp`` to every word; words outside [min_len, max_len] get ``FAR``."""
    return _lev(np.ascontiguousarray(codes, dtype=np.int8), np.asarray(lens, dtype=np.int64),
                np.asarray(inp, dtype=np.int8), int(min_len), _NO_LIMIT if max_len is None else int(max_len))

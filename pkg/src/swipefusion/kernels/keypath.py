"""N-best key sequences fitted to a resampled trajectory.

A hypothesis is a polyline through key centers with vertices pinned to
sample indices; samples between two vertices are matched to evenly spaced
points on the segment joining them.  Vertices live on a sparse set of
allowed (sample, key) states.  The DP keeps, for every state, the ``B``
cheapest *distinct* letter strings, so the final list is the exact B-best
set of distinct strings.

Strings are carried as base-27 integers (letter code + 1 per digit), which
caps hypotheses at 12 letters.
"""
import numpy as np

from .._accel import njit, pick

BASE = 27
HASH_LIMIT = BASE ** 12


def segment_costs(points, centers, st_i, st_k):
    """(S, S) squared residual of fitting samples (i_a, i_b] to the segment from state a's key to b's.

    States are (sample index ``st_i``, key index ``st_k`` into ``centers``);
    entries with i_b <= i_a are +inf.
    """
    p = np.asarray(points, dtype=float)
    c = np.asarray(centers, dtype=float)
    n = len(p)
    idx = np.arange(n, dtype=float)
    zero = np.zeros((1, 2))
    S1 = np.concatenate([zero, np.cumsum(p, axis=0)])
    Ss = np.concatenate([zero, np.cumsum(p * idx[:, None], axis=0)])
    S2 = np.concatenate([[0.0], np.cumsum((p * p).sum(axis=1))])

    i0 = np.asarray(st_i)[:, None]
    i1 = np.asarray(st_i)[None, :]
    valid = i1 > i0
    L = np.where(valid, i1 - i0, 1).astype(float)
    hi = np.where(valid, i1, i0) + 1
    s1 = S1[hi] - S1[i0 + 1]
    ss = Ss[hi] - Ss[i0 + 1] - i0[..., None] * s1
    s2 = S2[hi] - S2[i0 + 1]
    sum_t = (L + 1) / 2
    sum_t2 = (L + 1) * (2 * L + 1) / (6 * L)

    a = c[np.asarray(st_k)][:, None, :]
    d = c[np.asarray(st_k)][None, :, :] - a
    term1 = s2 - 2 * (a * s1).sum(-1) + L * (a * a).sum(-1)
    term2 = ((ss / L[..., None]) * d).sum(-1) - sum_t * (a * d).sum(-1)
    term3 = sum_t2 * (d * d).sum(-1)
    out = np.maximum(term1 - 2 * term2 + term3, 0.0)
    out[~valid] = np.inf
    return out


@njit
def _insert(costs, hashes, cnt, B, c, h):
    """Insert (c, h) into a list kept sorted by (cost, hash) with unique hashes; returns new count."""
    if cnt == B:
        wc = costs[B - 1]
        wh = hashes[B - 1]
        if c > wc or (c == wc and h >= wh):
            return cnt
    for r in range(cnt):
        if hashes[r] == h:
            if costs[r] <= c:
                return cnt
            for q in range(r, cnt - 1):
                costs[q] = costs[q + 1]
                hashes[q] = hashes[q + 1]
            cnt -= 1
            break
    pos = cnt
    while pos > 0 and (costs[pos - 1] > c or (costs[pos - 1] == c and hashes[pos - 1] > h)):
        pos -= 1
    last = cnt if cnt < B else B - 1
    for q in range(last, pos, -1):
        costs[q] = costs[q - 1]
        hashes[q] = hashes[q - 1]
    costs[pos] = c
    hashes[pos] = h
    return cnt + 1 if cnt < B else B


@njit
def _nbest_numba(seg, start, codes, final, penalty, B):
    S = seg.shape[0]
    cost = np.full((S, B), np.inf)
    hsh = np.zeros((S, B), dtype=np.int64)
    cnt = np.zeros(S, dtype=np.int64)
    for b in range(S):
        if np.isfinite(start[b]):
            cost[b, 0] = start[b] + penalty
            hsh[b, 0] = codes[b] + 1
            cnt[b] = 1
        grow = codes[b] + 1
        for a in range(S):
            s = seg[a, b]
            if cnt[a] == 0 or not np.isfinite(s):
                continue
            if codes[a] == codes[b]:
                for r in range(cnt[a]):
                    cnt[b] = _insert(cost[b], hsh[b], cnt[b], B, cost[a, r] + s + 0.0, hsh[a, r])
            else:
                for r in range(cnt[a]):
                    h0 = hsh[a, r]
                    if h0 >= HASH_LIMIT:
                        continue
                    cnt[b] = _insert(cost[b], hsh[b], cnt[b], B, cost[a, r] + s + penalty, h0 * BASE + grow)
    fc = np.full(B, np.inf)
    fh = np.zeros(B, dtype=np.int64)
    fn = 0
    for b in range(S):
        if final[b]:
            for r in range(cnt[b]):
                fn = _insert(fc, fh, fn, B, cost[b, r], hsh[b, r])
    return fc[:fn], fh[:fn]


def _top_distinct(c, h, B):
    ok = np.isfinite(c)
    c, h = c[ok], h[ok]
    order = np.lexsort((h, c))
    c, h = c[order], h[order]
    _, first = np.unique(h, return_index=True)
    keep = np.sort(first)[:B]
    return c[keep], h[keep]


def _nbest_numpy(seg, start, codes, final, penalty, B):
    S = seg.shape[0]
    cost = np.full((S, B), np.inf)
    hsh = np.zeros((S, B), dtype=np.int64)
    for b in range(S):
        src = np.flatnonzero(np.isfinite(seg[:, b]) & np.isfinite(cost[:, 0]))
        stay = codes[src] == codes[b]
        c = cost[src] + seg[src, b][:, None] + np.where(stay, 0.0, penalty)[:, None]
        h = hsh[src]
        too_long = ~stay[:, None] & (h >= HASH_LIMIT)
        h = np.where(stay[:, None], h, np.where(too_long, 0, h) * BASE + codes[b] + 1)
        c = np.where(too_long, np.inf, c)
        if np.isfinite(start[b]):
            c = np.concatenate([[start[b] + penalty], c.ravel()])
            h = np.concatenate([[codes[b] + 1], h.ravel()])
        tc, th = _top_distinct(np.ravel(c), np.ravel(h), B)
        cost[b, :len(tc)] = tc
        hsh[b, :len(th)] = th
    return _top_distinct(cost[final].ravel(), hsh[final].ravel(), B)


_nbest = pick(_nbest_numba, _nbest_numpy)


def keypath_nbest(seg, start, codes, final, penalty, B):
    """B cheapest distinct key strings as (costs, base-27 hashes), ascending by (cost, hash).

    ``seg`` is the (S, S) transition cost between states sorted by sample
    index, ``start`` the cost of opening a path at each state (inf if not
    allowed), ``codes`` each state's letter code and ``final`` marks states
    on the last sample.
    """
    return _nbest(np.ascontiguousarray(seg, dtype=np.float64), np.asarray(start, dtype=np.float64),
                  np.asarray(codes, dtype=np.int64), np.asarray(final, dtype=np.bool_),
                  float(penalty), int(B))


def decode_hash(h, alphabet):
    out = []
    h = int(h)
    while h:
        h, d = divmod(h, BASE)
        out.append(alphabet[d - 1])
    return "".join(reversed(out))

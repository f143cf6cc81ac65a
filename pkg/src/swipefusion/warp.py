"""Piecewise warp of trajectories between keyboard layouts.

Anchors are the centers of keys present in both layouts plus six border
points three key sizes outside the letter region.  Source anchors are
grouped into rows, each row is extended to the left/right border column,
and consecutive rows are zipped into cells.  Matched pairs of intervals
give quadrilateral cells mapped bilinearly; unmatched intervals give
triangles mapped affinely.  Both maps are linear along shared edges, so the
warp is continuous.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .layout import KeyboardLayout, LayoutError
from .trajectory import Trajectory

BORDER_NAMES = ("TL", "ML", "BL", "TR", "MR", "BR")
BORDER_DISTANCE = 3.0
_EPS = 1e-9


class WarpError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    """Quad corners ordered (u0, u1, l1, l0) or a triangle of three corners."""

    src: np.ndarray
    dst: np.ndarray

    @property
    def is_quad(self):
        return len(self.src) == 4


@dataclass(frozen=True)
class AnchorSet:
    src: np.ndarray
    dst: np.ndarray
    names: tuple
    cells: tuple = field(repr=False)

    @property
    def pairs(self):
        return list(zip(map(tuple, self.src), map(tuple, self.dst)))

    def __len__(self):
        return len(self.names)

    @property
    def is_identity(self):
        return bool(np.array_equal(self.src, self.dst))


def border_anchors(layout: KeyboardLayout, distance=BORDER_DISTANCE) -> dict:
    x0, y0, x1, y1 = layout.bounds
    dx, dy = distance * layout.key_width, distance * layout.key_height
    ym = (y0 + y1) / 2
    return {
        "TL": (x0 - dx, y0 - dy), "ML": (x0 - dx, ym), "BL": (x0 - dx, y1 + dy),
        "TR": (x1 + dx, y0 - dy), "MR": (x1 + dx, ym), "BR": (x1 + dx, y1 + dy),
    }


def build_anchor_set(source: KeyboardLayout, dest: KeyboardLayout) -> AnchorSet:
    shared = [k.label for k in source.keys if k.label in dest]
    if not shared:
        raise LayoutError(f"layouts {source.name!r} and {dest.name!r} share no keys")
    sb, db = border_anchors(source), border_anchors(dest)
    names = tuple(shared) + BORDER_NAMES
    src = np.array([source[c].center for c in shared] + [sb[n] for n in BORDER_NAMES], dtype=float)
    dst = np.array([dest[c].center for c in shared] + [db[n] for n in BORDER_NAMES], dtype=float)
    cells = _build_cells(src, dst, row_tol=0.5 * source.key_height, names=names)
    return AnchorSet(src, dst, names, cells)


def _rows(src, row_tol):
    order = np.lexsort((src[:, 0], src[:, 1]))
    rows, cur, start_y = [], [], None
    for i in order:
        if cur and src[i, 1] - start_y > row_tol:
            rows.append(cur)
            cur = []
        if not cur:
            start_y = src[i, 1]
        cur.append(int(i))
    rows.append(cur)
    return [sorted(r, key=lambda i: src[i, 0]) for r in rows]


def _border_point(y, col_src, col_dst):
    """Point on a border column at height ``y``; destination interpolated along the column."""
    ys = col_src[:, 1]
    f = np.interp(y, ys, np.arange(len(ys)))
    k = min(int(np.floor(f)), len(ys) - 2)
    w = f - k
    s = np.array([col_src[0, 0], y])
    d = (1 - w) * col_dst[k] + w * col_dst[k + 1]
    return s, d


def _build_cells(src, dst, row_tol, names):
    idx = {n: i for i, n in enumerate(names)}
    left = [idx[n] for n in ("TL", "ML", "BL")]
    right = [idx[n] for n in ("TR", "MR", "BR")]
    x_left, x_right = src[left[0], 0], src[right[0], 0]
    lcol = (src[left], dst[left])
    rcol = (src[right], dst[right])

    rows = []
    for r in _rows(src, row_tol):
        ps = [src[i] for i in r]
        pd = [dst[i] for i in r]
        if ps[0][0] > x_left + _EPS:
            s, d = _border_point(ps[0][1], *lcol)
            ps.insert(0, s)
            pd.insert(0, d)
        if ps[-1][0] < x_right - _EPS:
            s, d = _border_point(ps[-1][1], *rcol)
            ps.append(s)
            pd.append(d)
        rows.append((np.array(ps), np.array(pd)))

    cells = []
    for (us, ud), (ls, ld) in zip(rows, rows[1:]):
        j = m = 0
        while j < len(us) - 1 or m < len(ls) - 1:
            opts = []
            if j < len(us) - 1 and m < len(ls) - 1:
                opts.append((abs(us[j + 1, 0] - ls[m + 1, 0]), 0, "quad"))
            if j < len(us) - 1:
                opts.append((abs(us[j + 1, 0] - ls[m, 0]), 1, "upper"))
            if m < len(ls) - 1:
                opts.append((abs(us[j, 0] - ls[m + 1, 0]), 2, "lower"))
            _, _, kind = min(opts, key=lambda o: (o[0] - (_EPS if o[2] == "quad" else 0), o[1]))
            if kind == "quad":
                cells.append(Cell(np.array([us[j], us[j + 1], ls[m + 1], ls[m]]),
                                  np.array([ud[j], ud[j + 1], ld[m + 1], ld[m]])))
                j += 1
                m += 1
            elif kind == "upper":
                cells.append(Cell(np.array([us[j], us[j + 1], ls[m]]), np.array([ud[j], ud[j + 1], ld[m]])))
                j += 1
            else:
                cells.append(Cell(np.array([us[j], ls[m + 1], ls[m]]), np.array([ud[j], ld[m + 1], ld[m]])))
                m += 1
    return tuple(cells)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _triangle_weights(cell_src, p):
    a, b, c = cell_src
    det = _cross(b - a, c - a)
    wb = _cross(p - a, c - a) / det
    wc = _cross(b - a, p - a) / det
    return np.stack([1 - wb - wc, wb, wc], axis=-1)


def _inverse_bilinear(cell_src, p):
    """(s, t) with p = bilinear(s, t) over corners (p00, p10, p11, p01); NaN where unsolvable."""
    p00, p10, p11, p01 = cell_src
    e, f, g = p10 - p00, p01 - p00, p00 - p10 + p11 - p01
    h = p - p00
    k2 = _cross(g, f)
    k1 = _cross(e, f) + _cross(h, g)
    k0 = _cross(h, e)
    if abs(k2) < 1e-12:
        t = np.where(np.abs(k1) > 0, -k0 / np.where(k1 == 0, 1, k1), np.nan)
        ts = [t]
    else:
        disc = k1 * k1 - 4 * k0 * k2
        root = np.sqrt(np.where(disc >= 0, disc, np.nan))
        ts = [(-k1 - root) / (2 * k2), (-k1 + root) / (2 * k2)]
    best_s = np.full(len(p), np.nan)
    best_t = np.full(len(p), np.nan)
    for t in ts:
        dx, dy = e[0] + g[0] * t, e[1] + g[1] * t
        use_x = np.abs(dx) >= np.abs(dy)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(use_x, (h[:, 0] - f[0] * t) / dx, (h[:, 1] - f[1] * t) / dy)
        ok = (np.isnan(best_t) & (s >= -_EPS) & (s <= 1 + _EPS) & (t >= -_EPS) & (t <= 1 + _EPS))
        best_s = np.where(ok, s, best_s)
        best_t = np.where(ok, t, best_t)
    return best_s, best_t


def _bilinear_weights(s, t):
    return np.stack([(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t], axis=-1)


def warp_points(points, anchors: AnchorSet) -> np.ndarray:
    """Map (n, 2) points through the anchor grid; raises WarpError naming the first uncovered index."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if anchors.is_identity:
        # still enforce coverage so identity and non-identity behave alike
        _locate(pts, anchors)
        return pts.copy()
    out = np.full_like(pts, np.nan)
    done = np.zeros(len(pts), dtype=bool)
    for cell in anchors.cells:
        todo = np.flatnonzero(~done)
        if not len(todo):
            break
        q = pts[todo]
        if cell.is_quad:
            s, t = _inverse_bilinear(cell.src, q)
            ok = ~np.isnan(s)
            w = _bilinear_weights(np.nan_to_num(s), np.nan_to_num(t))
        else:
            w = _triangle_weights(cell.src, q)
            ok = np.all(w >= -_EPS, axis=1)
        if not ok.any():
            continue
        disp = cell.dst - cell.src
        out[todo[ok]] = q[ok] + w[ok] @ disp
        done[todo[ok]] = True
    if not done.all():
        bad = int(np.flatnonzero(~done)[0])
        raise WarpError(f"sample {bad} at {tuple(pts[bad])} lies outside the anchor grid")
    return out


def _locate(pts, anchors):
    done = np.zeros(len(pts), dtype=bool)
    for cell in anchors.cells:
        if cell.is_quad:
            s, _ = _inverse_bilinear(cell.src, pts)
            done |= ~np.isnan(s)
        else:
            done |= np.all(_triangle_weights(cell.src, pts) >= -_EPS, axis=1)
    if not done.all():
        bad = int(np.flatnonzero(~done)[0])
        raise WarpError(f"sample {bad} at {tuple(pts[bad])} lies outside the anchor grid")


def warp_trajectory(traj: Trajectory, anchors: AnchorSet) -> Trajectory:
    if anchors.is_identity:
        _locate(traj.xy, anchors)
        return traj
    return traj.with_xy(warp_points(traj.xy, anchors))

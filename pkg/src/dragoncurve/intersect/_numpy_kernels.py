"""Vectorized pair tests.  Must stay arithmetically identical to ``_numba_kernels``."""

from __future__ import annotations

import numpy as np

NONE, CROSSING, TOUCH, OVERLAP = 0, 1, 2, 3

# Pairs materialized per vectorized batch.
CHUNK = 1 << 21


def _psd(px, py, ax, ay, bx, by):
    ux = bx - ax
    uy = by - ay
    t = ((px - ax) * ux + (py - ay) * uy) / (ux * ux + uy * uy)
    t = np.minimum(np.maximum(t, 0.0), 1.0)
    qx = ax + t * ux - px
    qy = ay + t * uy - py
    return np.sqrt(qx * qx + qy * qy)


def classify(ax, ay, bx, by, cx, cy, dx, dy, eps, adjacent):
    """Elementwise classification of segment pairs ``[a, b]``, ``[c, d]``."""
    code = np.zeros(ax.shape, dtype=np.int8)
    box = ~(
        (np.minimum(ax, bx) > np.maximum(cx, dx) + eps)
        | (np.minimum(cx, dx) > np.maximum(ax, bx) + eps)
        | (np.minimum(ay, by) > np.maximum(cy, dy) + eps)
        | (np.minimum(cy, dy) > np.maximum(ay, by) + eps)
    )
    if not box.any():
        return code

    adj = box & adjacent
    if adj.any():
        k = np.nonzero(adj)[0]
        fold = (_psd(dx[k], dy[k], ax[k], ay[k], bx[k], by[k]) <= eps[k]) | (
            _psd(ax[k], ay[k], cx[k], cy[k], dx[k], dy[k]) <= eps[k]
        )
        code[k[fold]] = OVERLAP

    k = np.nonzero(box & ~adjacent)[0]
    if len(k) == 0:
        return code
    ax, ay, bx, by = ax[k], ay[k], bx[k], by[k]
    cx, cy, dx, dy = cx[k], cy[k], dx[k], dy[k]
    e = eps[k]
    ux = bx - ax
    uy = by - ay
    vx = dx - cx
    vy = dy - cy
    lu = np.sqrt(ux * ux + uy * uy)
    lv = np.sqrt(vx * vx + vy * vy)
    o1 = (ux * (cy - ay) - uy * (cx - ax)) / lu
    o2 = (ux * (dy - ay) - uy * (dx - ax)) / lu
    o3 = (vx * (ay - cy) - vy * (ax - cx)) / lv
    o4 = (vx * (by - cy) - vy * (bx - cx)) / lv
    crossing = (((o1 > e) & (o2 < -e)) | ((o1 < -e) & (o2 > e))) & (((o3 > e) & (o4 < -e)) | ((o3 < -e) & (o4 > e)))
    dmin = np.minimum(
        np.minimum(_psd(ax, ay, cx, cy, dx, dy), _psd(bx, by, cx, cy, dx, dy)),
        np.minimum(_psd(cx, cy, ax, ay, bx, by), _psd(dx, dy, ax, ay, bx, by)),
    )
    contact = ~crossing & (dmin <= e)
    tc = ((cx - ax) * ux + (cy - ay) * uy) / lu
    td = ((dx - ax) * ux + (dy - ay) * uy) / lu
    lo = np.maximum(0.0, np.minimum(tc, td))
    hi = np.minimum(lu, np.maximum(tc, td))
    overlap = contact & (np.abs(o1) <= e) & (np.abs(o2) <= e) & (hi - lo > e)
    sub = np.zeros(len(k), dtype=np.int8)
    sub[contact] = TOUCH
    sub[overlap] = OVERLAP
    sub[crossing] = CROSSING
    code[k] = sub
    return code


def _test_pairs(xs, ys, lengths, tol, split, i, j):
    if split >= 0:
        keep = (i < split) & (split <= j)
        i, j = i[keep], j[keep]
        adjacent = np.zeros(len(i), dtype=bool)
    else:
        adjacent = j == i + 1
    eps = tol * np.maximum(lengths[i], lengths[j])
    code = classify(xs[i], ys[i], xs[i + 1], ys[i + 1], xs[j], ys[j], xs[j + 1], ys[j + 1], eps, adjacent)
    hit = code != NONE
    return i[hit], j[hit], code[hit]


def _collect(parts):
    if not parts:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int8)
    return tuple(np.concatenate(col) for col in zip(*parts))


def brute_pairs(xs, ys, lengths, tol, split):
    n = len(xs) - 1
    parts = []
    start = 0
    while start < n:
        # Rows start..stop-1 contribute about (n - start) pairs each.
        stop = start + 1
        total = n - start - 1
        while stop < n and total + (n - stop - 1) <= CHUNK:
            total += n - stop - 1
            stop += 1
        rows = np.arange(start, stop)
        counts = n - rows - 1
        i = np.repeat(rows, counts)
        offsets = np.arange(len(i)) - np.repeat(np.cumsum(counts) - counts, counts)
        j = i + 1 + offsets
        if len(i):
            parts.append(_test_pairs(xs, ys, lengths, tol, split, i, j))
        start = stop
    return _collect(parts)


def sweep_pairs(xs, ys, lengths, tol, split, order, xmin, xmax, window):
    """Sorted sweep: each segment is tested against later-sorted segments starting before its right end."""
    n = len(order)
    xmin_s = xmin[order]
    reach = xmax[order] + window
    end = np.searchsorted(xmin_s, reach, side="right")
    counts = np.maximum(end - np.arange(n) - 1, 0)
    parts = []
    start = 0
    while start < n:
        csum = np.cumsum(counts[start:])
        stop = start + max(1, int(np.searchsorted(csum, CHUNK, side="right")))
        rows = np.arange(start, stop)
        c = counts[start:stop]
        a = np.repeat(rows, c)
        b = a + 1 + (np.arange(len(a)) - np.repeat(np.cumsum(c) - c, c))
        if len(a):
            s, t = order[a], order[b]
            parts.append(_test_pairs(xs, ys, lengths, tol, split, np.minimum(s, t), np.maximum(s, t)))
        start = stop
    return _collect(parts)

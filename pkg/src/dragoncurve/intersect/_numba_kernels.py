"""Compiled pair loops.  Must stay arithmetically identical to ``_numpy_kernels``."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NONE, CROSSING, TOUCH, OVERLAP = 0, 1, 2, 3


@njit(cache=True)
def _psd(px, py, ax, ay, bx, by):
    ux = bx - ax
    uy = by - ay
    t = ((px - ax) * ux + (py - ay) * uy) / (ux * ux + uy * uy)
    t = min(max(t, 0.0), 1.0)
    qx = ax + t * ux - px
    qy = ay + t * uy - py
    return math.sqrt(qx * qx + qy * qy)


@njit(cache=True)
def classify(ax, ay, bx, by, cx, cy, dx, dy, eps, adjacent):
    if min(ax, bx) > max(cx, dx) + eps or min(cx, dx) > max(ax, bx) + eps:
        return NONE
    if min(ay, by) > max(cy, dy) + eps or min(cy, dy) > max(ay, by) + eps:
        return NONE
    if adjacent:
        # Consecutive segments share b == c; anything beyond that is a fold-back.
        if _psd(dx, dy, ax, ay, bx, by) <= eps or _psd(ax, ay, cx, cy, dx, dy) <= eps:
            return OVERLAP
        return NONE
    ux = bx - ax
    uy = by - ay
    vx = dx - cx
    vy = dy - cy
    lu = math.sqrt(ux * ux + uy * uy)
    lv = math.sqrt(vx * vx + vy * vy)
    o1 = (ux * (cy - ay) - uy * (cx - ax)) / lu
    o2 = (ux * (dy - ay) - uy * (dx - ax)) / lu
    o3 = (vx * (ay - cy) - vy * (ax - cx)) / lv
    o4 = (vx * (by - cy) - vy * (bx - cx)) / lv
    if ((o1 > eps and o2 < -eps) or (o1 < -eps and o2 > eps)) and (
        (o3 > eps and o4 < -eps) or (o3 < -eps and o4 > eps)
    ):
        return CROSSING
    dmin = min(
        min(_psd(ax, ay, cx, cy, dx, dy), _psd(bx, by, cx, cy, dx, dy)),
        min(_psd(cx, cy, ax, ay, bx, by), _psd(dx, dy, ax, ay, bx, by)),
    )
    if dmin > eps:
        return NONE
    if abs(o1) <= eps and abs(o2) <= eps:
        tc = ((cx - ax) * ux + (cy - ay) * uy) / lu
        td = ((dx - ax) * ux + (dy - ay) * uy) / lu
        lo = max(0.0, min(tc, td))
        hi = min(lu, max(tc, td))
        if hi - lo > eps:
            return OVERLAP
    return TOUCH


@njit(cache=True)
def _push(buf_i, buf_j, buf_c, count, i, j, code):
    if count == buf_i.shape[0]:
        new_i = np.empty(2 * count, np.int64)
        new_j = np.empty(2 * count, np.int64)
        new_c = np.empty(2 * count, np.int8)
        new_i[:count] = buf_i
        new_j[:count] = buf_j
        new_c[:count] = buf_c
        buf_i, buf_j, buf_c = new_i, new_j, new_c
    buf_i[count] = i
    buf_j[count] = j
    buf_c[count] = code
    return buf_i, buf_j, buf_c, count + 1


@njit(cache=True)
def _boxes(xs, ys):
    n = xs.shape[0] - 1
    box = np.empty((4, n))
    for i in range(n):
        box[0, i] = min(xs[i], xs[i + 1])
        box[1, i] = max(xs[i], xs[i + 1])
        box[2, i] = min(ys[i], ys[i + 1])
        box[3, i] = max(ys[i], ys[i + 1])
    return box


@njit(cache=True)
def brute_pairs(xs, ys, lengths, tol, split):
    n = xs.shape[0] - 1
    box = _boxes(xs, ys)
    buf_i = np.empty(64, np.int64)
    buf_j = np.empty(64, np.int64)
    buf_c = np.empty(64, np.int8)
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            # Split rule and grown-box early exit written inline: a call here
            # blocks loop optimization and costs ~10x on the all-pairs loop.
            if split >= 0:
                if not (i < split <= j):
                    continue
                adjacent = False
            else:
                adjacent = j == i + 1
            eps = tol * max(lengths[i], lengths[j])
            if box[0, i] > box[1, j] + eps or box[0, j] > box[1, i] + eps:
                continue
            if box[2, i] > box[3, j] + eps or box[2, j] > box[3, i] + eps:
                continue
            code = classify(xs[i], ys[i], xs[i + 1], ys[i + 1], xs[j], ys[j], xs[j + 1], ys[j + 1], eps, adjacent)
            if code != NONE:
                buf_i, buf_j, buf_c, count = _push(buf_i, buf_j, buf_c, count, i, j, code)
    return buf_i[:count], buf_j[:count], buf_c[:count]


@njit(cache=True)
def sweep_pairs(xs, ys, lengths, tol, split, order, xmin, xmax, window):
    """Sweep over segments sorted by left end; ``window`` pads the active x-range."""
    n = order.shape[0]
    box = _boxes(xs, ys)
    buf_i = np.empty(64, np.int64)
    buf_j = np.empty(64, np.int64)
    buf_c = np.empty(64, np.int8)
    count = 0
    for a in range(n):
        s = order[a]
        reach = xmax[s] + window
        for b in range(a + 1, n):
            t = order[b]
            if xmin[t] > reach:
                break
            i = min(s, t)
            j = max(s, t)
            # Split rule and grown-box early exit written inline: a call here
            # blocks loop optimization and costs ~10x on the all-pairs loop.
            if split >= 0:
                if not (i < split <= j):
                    continue
                adjacent = False
            else:
                adjacent = j == i + 1
            eps = tol * max(lengths[i], lengths[j])
            if box[0, i] > box[1, j] + eps or box[0, j] > box[1, i] + eps:
                continue
            if box[2, i] > box[3, j] + eps or box[2, j] > box[3, i] + eps:
                continue
            code = classify(xs[i], ys[i], xs[i + 1], ys[i + 1], xs[j], ys[j], xs[j + 1], ys[j + 1], eps, adjacent)
            if code != NONE:
                buf_i, buf_j, buf_c, count = _push(buf_i, buf_j, buf_c, count, i, j, code)
    return buf_i[:count], buf_j[:count], buf_c[:count]

"""Planar geometry primitives: signed areas, containment, clipping.

All coordinates are metres in a projected plane. Rings are lists of
(x, y) vertex pairs without a repeated closing vertex.
"""

from __future__ import annotations

import math


def signed_area(ring) -> float:
    """Shoelace signed area; positive for counter-clockwise rings."""
    n = len(ring)
    acc = 0.0
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def ring_area(ring) -> float:
    return abs(signed_area(ring))


def centroid(ring):
    """Area-weighted centroid of a simple ring."""
    a = signed_area(ring)
    if abs(a) < 1e-30:
        xs = [p[0] for p in ring]
        ys = [p[1] for p in ring]
        return (sum(xs) / len(ring), sum(ys) / len(ring))
    cx = cy = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    return (cx / (6.0 * a), cy / (6.0 * a))


def point_in_ring(p, ring) -> bool:
    """Even-odd ray-casting test; points on the boundary count as inside."""
    x, y = p
    inside = False
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        if _on_segment(p, (x0, y0), (x1, y1)):
            return True
        if (y0 > y) != (y1 > y):
            t = (y - y0) / (y1 - y0)
            if x < x0 + t * (x1 - x0):
                inside = not inside
    return inside


def _on_segment(p, a, b, eps=1e-9) -> bool:
    px, py = p
    ax, ay = a
    bx, by = b
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    seg_len = math.hypot(bx - ax, by - ay)
    if seg_len == 0.0:
        return math.hypot(px - ax, py - ay) <= eps
    if abs(cross) / seg_len > eps:
        return False
    dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay)
    return -eps * seg_len <= dot <= seg_len * seg_len + eps * seg_len


def point_in_convex(p, poly, eps=1e-9) -> bool:
    """Containment in a convex CCW polygon, boundary inclusive."""
    x, y = p
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) < -eps:
            return False
    return True


def segments_properly_intersect(a, b, c, d) -> bool:
    """True if segments ab and cd share at least one point."""
    d1 = _orient(c, d, a)
    d2 = _orient(c, d, b)
    d3 = _orient(a, b, c)
    d4 = _orient(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _in_box(a, c, d):
        return True
    if d2 == 0 and _in_box(b, c, d):
        return True
    if d3 == 0 and _in_box(c, a, b):
        return True
    if d4 == 0 and _in_box(d, a, b):
        return True
    return False


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_box(p, a, b) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def ring_self_intersects(ring) -> bool:
    """Check a closed ring for improper (crossing or overlapping) edges.

    Adjacent edges sharing a single endpoint are allowed; anything else
    that touches is an intersection. O(n^2), fine at input sizes here.
    """
    n = len(ring)
    if n < 3:
        return True
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        if a == b:
            return True
        for j in range(i + 1, n):
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # edges share one endpoint; collinear doubling-back overlaps
                if j == i + 1:
                    tail, joint, head = a, b, d
                else:
                    tail, joint, head = b, a, c
                if _orient(tail, joint, head) == 0:
                    dot = ((head[0] - joint[0]) * (joint[0] - tail[0])
                           + (head[1] - joint[1]) * (joint[1] - tail[1]))
                    if dot < 0:
                        return True
                continue
            if segments_properly_intersect(a, b, c, d):
                return True
    return False


def clip_ring_convex(ring, convex_clip):
    """Sutherland-Hodgman clip of an arbitrary ring against a convex CCW polygon.

    Returns the clipped vertex list (possibly empty). The subject ring may
    be in either orientation; output orientation follows the input.
    """
    output = list(ring)
    n = len(convex_clip)
    for i in range(n):
        if not output:
            return []
        cp0 = convex_clip[i]
        cp1 = convex_clip[(i + 1) % n]
        subject = output
        output = []
        for j in range(len(subject)):
            cur = subject[j]
            prev = subject[j - 1]
            cur_in = _orient(cp0, cp1, cur) >= 0
            prev_in = _orient(cp0, cp1, prev) >= 0
            if cur_in:
                if not prev_in:
                    output.append(_line_intersection(prev, cur, cp0, cp1))
                output.append(cur)
            elif prev_in:
                output.append(_line_intersection(prev, cur, cp0, cp1))
    return output


def _line_intersection(a, b, c, d):
    x1, y1 = a
    x2, y2 = b
    x3, y3 = c
    x4, y4 = d
    denom = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    t = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / denom
    return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))


def clipped_signed_area(ring, convex_clip) -> float:
    """Signed area of ring ∩ convex_clip, sign following the ring orientation."""
    clipped = clip_ring_convex(ring, convex_clip)
    if len(clipped) < 3:
        return 0.0
    area = signed_area(clipped)
    # Sutherland-Hodgman preserves orientation of the subject ring
    return area

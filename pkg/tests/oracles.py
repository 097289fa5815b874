"""Independent reference implementations used to pin the engine.

Nothing here imports the code paths under test beyond plain data types:
area checks use Monte-Carlo sampling or shapely (a different geometry
stack), reachability uses hand-rolled BFS, clustering uses the exact
dynamic program, and tile counting uses nearest-centre lattice assignment.
"""

from __future__ import annotations

import math

import numpy as np
import shapely
from shapely.geometry import LineString, Point, Polygon

SQRT3 = math.sqrt(3.0)


# --- hex tiling --------------------------------------------------------------

def lattice_tile_count(bbox, max_width, step=1.0):
    """Distinct tiles hit when assigning a lattice of bbox points to the
    nearest hexagon centre. Lattice points sit at cell centres (offset
    step/2) to stay clear of boundary degeneracies."""
    minx, miny, maxx, maxy = bbox
    radius = max_width / 2.0
    xs = np.arange(minx + step / 2.0, maxx, step)
    ys = np.arange(miny + step / 2.0, maxy, step)
    # candidate centres over a generous axial range
    r_lo = math.floor((miny - maxy) / (1.5 * radius)) - 3
    r_hi = math.ceil((maxy - miny) / (1.5 * radius)) + 3
    centres = []
    axials = []
    for r in range(r_lo, r_hi + 1):
        q_lo = math.floor((minx - maxx) / (SQRT3 * radius) - r / 2.0) - 3
        q_hi = math.ceil((maxx - minx) / (SQRT3 * radius) - r / 2.0) + 3
        for q in range(q_lo, q_hi + 1):
            centres.append((minx + SQRT3 * radius * (q + r / 2.0),
                            miny + 1.5 * radius * r))
            axials.append((q, r))
    from scipy.spatial import cKDTree
    tree = cKDTree(np.asarray(centres))
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    _d, idx = tree.query(pts)
    return len({axials[i] for i in idx})


# --- geometry ----------------------------------------------------------------

def shapely_flood_fraction(poly_ring, flood_polygons):
    """area(poly ∩ flood)/area(poly) via shapely."""
    poly = Polygon(poly_ring)
    covered = 0.0
    for outer, holes in flood_polygons:
        covered += poly.intersection(Polygon(outer, holes)).area
    return covered / poly.area


def monte_carlo_flood_fraction(poly_ring, flood_polygons, n=10 ** 6, seed=0):
    """Fraction of random samples in poly that land inside the flood.

    Samples on a jittered grid over the bounding box (stratified Monte
    Carlo), which keeps the estimator unbiased while shrinking the noise
    well below the plain-uniform sigma for the same n."""
    rng = np.random.default_rng(seed)
    poly = Polygon(poly_ring)
    minx, miny, maxx, maxy = poly.bounds
    flood = [Polygon(outer, holes) for outer, holes in flood_polygons]
    side = int(math.isqrt(n))
    i, j = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    xs = minx + (i.ravel() + rng.random(side * side)) * (maxx - minx) / side
    ys = miny + (j.ravel() + rng.random(side * side)) * (maxy - miny) / side
    in_poly = shapely.contains_xy(poly, xs, ys)
    if not in_poly.any():
        return 0.0
    xs, ys = xs[in_poly], ys[in_poly]
    in_flood = np.zeros(len(xs), dtype=bool)
    for f in flood:
        in_flood |= shapely.contains_xy(f, xs, ys)
    return in_flood.sum() / in_poly.sum()


def shapely_point_in_flood(pt, flood_polygons):
    p = Point(pt)
    return any(Polygon(outer, holes).covers(p) for outer, holes in flood_polygons)


def shapely_segment_hits_flood(polyline, flood_polygons):
    line = LineString(polyline)
    return any(line.intersects(Polygon(outer, holes))
               for outer, holes in flood_polygons)


# --- graphs ------------------------------------------------------------------

def bfs_reachable(adjacency, start):
    """Plain BFS over {node: [neighbours]}."""
    seen = {start}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        for nxt in adjacency.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def pairwise_accessibility(adjacency, tile_nodes, destination_nodes):
    """Per-tile flag: some node in the tile reaches some destination (BFS
    per pair, the slow-but-obvious route)."""
    out = {}
    for tid, nodes in tile_nodes.items():
        ok = False
        for n in nodes:
            reach = bfs_reachable(adjacency, n)
            if any(d in reach for d in destination_nodes):
                ok = True
                break
        out[tid] = ok
    return out


# --- statistics --------------------------------------------------------------

def nearest_rank_percentile(values, p):
    """Value at ceil(p*n) of the sorted sample."""
    v = sorted(values)
    k = max(1, min(len(v), math.ceil(p * len(v))))
    return v[k - 1]


def weighted_score(posterior, weights):
    """Spreadsheet-style criticality: plain sum of products."""
    total = 0.0
    for w, p in zip(weights, posterior):
        total += w * p
    return total


# --- optimal 1-D k-means -----------------------------------------------------

def optimal_1d_kmeans(values, k):
    """Exact 1-D k-means via dynamic programming over sorted order.

    Returns (assignments aligned with input order, cluster means ascending,
    total within-cluster sum of squares). Clusters are contiguous in sorted
    order, which is optimal in 1-D.
    """
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    xs = [values[i] for i in order]
    prefix = [0.0] * (n + 1)
    prefix_sq = [0.0] * (n + 1)
    for i, x in enumerate(xs):
        prefix[i + 1] = prefix[i] + x
        prefix_sq[i + 1] = prefix_sq[i] + x * x

    def cost(i, j):  # inclusive sorted-index range
        m = j - i + 1
        s = prefix[j + 1] - prefix[i]
        return prefix_sq[j + 1] - prefix_sq[i] - s * s / m

    INF = float("inf")
    dp = [[INF] * n for _ in range(k + 1)]
    back = [[0] * n for _ in range(k + 1)]
    for j in range(n):
        dp[1][j] = cost(0, j)
    for c in range(2, k + 1):
        for j in range(c - 1, n):
            for t in range(c - 2, j):
                val = dp[c - 1][t] + cost(t + 1, j)
                if val < dp[c][j]:
                    dp[c][j] = val
                    back[c][j] = t
    # recover boundaries
    bounds = []
    j = n - 1
    for c in range(k, 1, -1):
        t = back[c][j]
        bounds.append(t)
        j = t
    bounds = sorted(bounds)
    starts = [0] + [b + 1 for b in bounds]
    ends = bounds + [n - 1]
    assign_sorted = [0] * n
    means = []
    for ci, (s, e) in enumerate(zip(starts, ends)):
        for i in range(s, e + 1):
            assign_sorted[i] = ci
        means.append((prefix[e + 1] - prefix[s]) / (e - s + 1))
    assignments = [0] * n
    for sorted_pos, original_idx in enumerate(order):
        assignments[original_idx] = assign_sorted[sorted_pos]
    total = dp[k][n - 1]
    return assignments, means, total

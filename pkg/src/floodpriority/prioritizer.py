"""Criticality scoring and category assignment.

Each tile's posterior over (None, Low, Medium, High) collapses to one
scalar, the weighted sum of state probabilities. Zero-score tiles are
Safe; the rest are split into k one-dimensional clusters (Lloyd with
deterministic quantile initialisation), ordered by centroid into
HighPriority / Priority / Exposed.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError

SAFE_EPS = 1e-12
MAX_LLOYD_ITERATIONS = 1000


@dataclass(frozen=True)
class WeightVector:
    w_none: float = 0.0
    w_low: float = 0.33
    w_medium: float = 0.66
    w_high: float = 1.0

    def __post_init__(self):
        if not (self.w_none <= self.w_low <= self.w_medium <= self.w_high):
            raise ValidationError(
                f"weights must be non-decreasing, got {self.as_tuple()}")

    def as_tuple(self):
        return (self.w_none, self.w_low, self.w_medium, self.w_high)


class PriorityCategory(str, Enum):
    HIGH_PRIORITY = "HighPriority"
    PRIORITY = "Priority"
    EXPOSED = "Exposed"
    SAFE = "Safe"

    @property
    def rank(self) -> int:
        order = [PriorityCategory.SAFE, PriorityCategory.EXPOSED,
                 PriorityCategory.PRIORITY, PriorityCategory.HIGH_PRIORITY]
        return order.index(self)


NONSAFE_BY_CENTROID_DESC = (PriorityCategory.HIGH_PRIORITY,
                            PriorityCategory.PRIORITY,
                            PriorityCategory.EXPOSED)


@dataclass(frozen=True)
class PriorityMap:
    entries: dict  # tile id -> (posterior, pdc, PriorityCategory)
    centroids: tuple
    weights: WeightVector
    threshold_meta: dict

    def counts(self) -> dict:
        out = {c.value: 0 for c in PriorityCategory}
        for _post, _score, cat in self.entries.values():
            out[cat.value] += 1
        return out


def pdc(posterior, weights: WeightVector) -> float:
    """Weighted criticality of a normalised posterior."""
    w = weights.as_tuple()
    return sum(wi * pi for wi, pi in zip(w, posterior))


def _quantile_init(sorted_values, k):
    n = len(sorted_values)
    centroids = []
    for j in range(k):
        q = (2 * j + 1) / (2 * k)  # 1/6, 3/6, 5/6 for k = 3
        idx = min(n - 1, max(0, math.ceil(q * n) - 1))  # nearest rank
        centroids.append(sorted_values[idx])
    return centroids


def _lloyd(values, k):
    """1-D Lloyd iterations from quantile init; assignment ties go to the
    higher-centroid cluster. Returns (assignments, centroids) with clusters
    indexed by ascending centroid."""
    sorted_vals = sorted(values)
    centroids = _quantile_init(sorted_vals, k)
    assign = [0] * len(values)
    for _ in range(MAX_LLOYD_ITERATIONS):
        new_assign = []
        for v in values:
            best = 0
            best_d = None
            for j, c in enumerate(centroids):
                d = abs(v - c)
                # ties break toward the higher cluster (conservative)
                if best_d is None or d < best_d or (d == best_d and c > centroids[best]):
                    best, best_d = j, d
            new_assign.append(best)
        new_centroids = []
        for j in range(k):
            members = [v for v, a in zip(values, new_assign) if a == j]
            new_centroids.append(sum(members) / len(members) if members else centroids[j])
        if new_assign == assign and new_centroids == centroids:
            break
        assign, centroids = new_assign, new_centroids
    # normalise cluster index to ascending-centroid order
    order = sorted(range(k), key=lambda j: centroids[j])
    remap = {old: new for new, old in enumerate(order)}
    return [remap[a] for a in assign], [centroids[j] for j in order]


def categorize(pdcs: dict, k: int = 3):
    """Assign a PriorityCategory per tile id.

    Returns (categories dict, centroids tuple descending, meta dict).
    """
    safe = {tid for tid, v in pdcs.items() if v <= SAFE_EPS}
    nonsafe = [(tid, v) for tid, v in pdcs.items() if v > SAFE_EPS]
    categories = {tid: PriorityCategory.SAFE for tid in safe}
    meta = {"k": k, "method": "lloyd-quantile-init"}
    if not nonsafe:
        return categories, (), meta

    distinct = sorted({v for _tid, v in nonsafe}, reverse=True)
    if len(distinct) < k:
        # rank rule: largest distinct value(s) get the most critical label
        meta["method"] = "rank-degenerate"
        for tid, v in nonsafe:
            categories[tid] = NONSAFE_BY_CENTROID_DESC[distinct.index(v)]
        return categories, tuple(distinct), meta

    values = [v for _tid, v in nonsafe]
    assign, centroids_asc = _lloyd(values, k)
    # cluster index ascending -> category: highest centroid = HighPriority
    for (tid, _v), a in zip(nonsafe, assign):
        categories[tid] = NONSAFE_BY_CENTROID_DESC[k - 1 - a]
    return categories, tuple(reversed(centroids_asc)), meta


def build_priority_map(grid, posteriors: dict, weights: WeightVector,
                       k: int = 3, threshold_meta=None) -> PriorityMap:
    """Score and categorise one posterior per grid tile."""
    missing = [t.id for t in grid.tiles if t.id not in posteriors]
    if missing:
        raise ValidationError(f"missing posterior for tile {missing[0]!r}")
    pdcs = {t.id: pdc(posteriors[t.id], weights) for t in grid.tiles}
    categories, centroids, meta = categorize(pdcs, k=k)
    entries = {t.id: (tuple(posteriors[t.id]), pdcs[t.id], categories[t.id])
               for t in grid.tiles}
    meta = dict(meta)
    if threshold_meta:
        meta["density_thresholds"] = threshold_meta
    return PriorityMap(entries=entries, centroids=centroids,
                       weights=weights, threshold_meta=meta)

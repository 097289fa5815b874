"""The four GIS models that turn geodata into per-tile evidence.

Per tile: exposed-building density class (hard), exposed care facility
presence (hard), unflooded fraction of the tile plus its 1-ring
neighbourhood (soft), and road reachability of an evacuation destination
(hard).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
import math

import networkx as nx

from .geo_ingest import DestinationSet, FloodLayer, RoadNetwork
from .geometry import clipped_signed_area, ring_area, segments_properly_intersect
from .hexgrid import HexGrid, locate, neighbors


class DensityClass(IntEnum):
    NONE = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @property
    def label(self) -> str:
        return ("None", "Low", "Medium", "High")[int(self)]


@dataclass(frozen=True)
class DensityThresholds:
    p_med_count: int | None  # counts above this are Medium (75th percentile)
    p_high_count: int | None  # counts above this are High (90th percentile)
    percentile_method: str = "nearest-rank"


@dataclass(frozen=True)
class EvidenceBundle:
    tile_id: str
    density: DensityClass
    facility_exposed: bool
    immediate_unexposed: float  # P(immediate unexposed area accessible)
    remote_accessible: bool
    exposed_building_count: int


def exposed_building_counts(grid: HexGrid, buildings, flood: FloodLayer) -> dict:
    """Count buildings per tile whose centroid lies in both tile and flood."""
    counts = {t.id: 0 for t in grid.tiles}
    if flood.is_empty():
        return counts
    for _bid, pt in buildings.buildings:
        tid = locate(grid, pt)
        if tid is None:
            continue
        if flood.contains(pt):
            counts[tid] += 1
    return counts


def nearest_rank(sorted_values, p):
    """Value at ceil(p*n) in a sorted sample (1-based nearest-rank)."""
    n = len(sorted_values)
    k = math.ceil(p * n)
    k = min(max(k, 1), n)
    return sorted_values[k - 1]


def classify_density(counts: dict, p_med=0.75, p_high=0.90):
    """Band tile counts: zero -> NONE, then Low/Medium/High split at the
    nearest-rank percentiles of the exposed (count >= 1) tiles only."""
    exposed = sorted(c for c in counts.values() if c >= 1)
    if not exposed:
        thresholds = DensityThresholds(p_med_count=None, p_high_count=None)
        return {tid: DensityClass.NONE for tid in counts}, thresholds
    med_cut = nearest_rank(exposed, p_med)
    high_cut = nearest_rank(exposed, p_high)
    thresholds = DensityThresholds(p_med_count=med_cut, p_high_count=high_cut)
    classes = {}
    for tid, c in counts.items():
        if c == 0:
            classes[tid] = DensityClass.NONE
        elif c <= med_cut:
            classes[tid] = DensityClass.LOW
        elif c <= high_cut:
            classes[tid] = DensityClass.MEDIUM
        else:
            classes[tid] = DensityClass.HIGH
    return classes, thresholds


def facility_presence(grid: HexGrid, facilities, flood: FloodLayer) -> dict:
    """True where at least one care facility point is inside tile and flood."""
    present = {t.id: False for t in grid.tiles}
    if flood.is_empty():
        return present
    for _fid, pt in facilities.facilities:
        tid = locate(grid, pt)
        if tid is not None and flood.contains(pt):
            present[tid] = True
    return present


def flood_fraction(poly, flood: FloodLayer) -> float:
    """area(poly ∩ flood) / area(poly) for a convex CCW polygon.

    Each flood ring is clipped against the polygon; holes subtract.
    """
    poly_area = ring_area(poly)
    if poly_area <= 0 or flood.is_empty():
        return 0.0
    covered = 0.0
    for fp in flood.polygons:
        covered += abs(clipped_signed_area(fp.outer, poly))
        for hole in fp.holes:
            covered -= abs(clipped_signed_area(hole, poly))
    return min(max(covered / poly_area, 0.0), 1.0)


def immediate_unexposed_fraction(grid: HexGrid, flood: FloodLayer, tile_id: str) -> float:
    """Unflooded share of the tile plus its 1-ring neighbours."""
    ids = [tile_id] + neighbors(grid, tile_id)
    total = 0.0
    flooded = 0.0
    for tid in ids:
        poly = grid.get(tid).polygon
        a = ring_area(poly)
        total += a
        flooded += flood_fraction(poly, flood) * a
    return min(max(1.0 - flooded / total, 0.0), 1.0)


def _polyline_intersects_flood(polyline, flood: FloodLayer) -> bool:
    """A polyline overlaps the flood iff a vertex lies inside or a segment
    crosses a flood ring edge."""
    for pt in polyline:
        if flood.contains(pt):
            return True
    for i in range(len(polyline) - 1):
        a, b = polyline[i], polyline[i + 1]
        for fp in flood.polygons:
            for ring in (fp.outer, *fp.holes):
                n = len(ring)
                for j in range(n):
                    if segments_properly_intersect(a, b, ring[j], ring[(j + 1) % n]):
                        return True
    return False


def residual_road_graph(net: RoadNetwork, flood: FloodLayer) -> nx.Graph:
    """Road graph after removing flooded segments and flooded nodes."""
    g = nx.Graph()
    for nid, pt in net.nodes.items():
        if not flood.contains(pt):
            g.add_node(nid, point=pt)
    for _sid, n_from, n_to, polyline in net.segments:
        if n_from not in g or n_to not in g:
            continue
        if flood.is_empty() or not _polyline_intersects_flood(polyline, flood):
            g.add_edge(n_from, n_to)
    return g


def remote_accessibility(grid: HexGrid, net: RoadNetwork, flood: FloodLayer,
                         dests: DestinationSet) -> dict:
    """True where some unflooded node in the tile reaches a destination in
    the residual road graph; tiles with no residual node are inaccessible."""
    g = residual_road_graph(net, flood)
    component = {}
    for k, comp in enumerate(nx.connected_components(g)):
        for nid in comp:
            component[nid] = k
    dest_components = {component[d[2]] for d in dests.destinations if d[2] in component}
    accessible = {t.id: False for t in grid.tiles}
    for nid in g.nodes:
        tid = locate(grid, g.nodes[nid]["point"])
        if tid is not None and component[nid] in dest_components:
            accessible[tid] = True
    return accessible


def build_evidence(grid: HexGrid, buildings, facilities, net, flood: FloodLayer,
                   dests: DestinationSet, p_med=0.75, p_high=0.90):
    """Run all four GIS models; returns ({tile_id: EvidenceBundle}, thresholds)."""
    counts = exposed_building_counts(grid, buildings, flood)
    classes, thresholds = classify_density(counts, p_med, p_high)
    facility = facility_presence(grid, facilities, flood)
    remote = remote_accessibility(grid, net, flood, dests)
    bundles = {}
    for t in grid.tiles:
        bundles[t.id] = EvidenceBundle(
            tile_id=t.id,
            density=classes[t.id],
            facility_exposed=facility[t.id],
            immediate_unexposed=immediate_unexposed_fraction(grid, flood, t.id),
            remote_accessible=remote[t.id],
            exposed_building_count=counts[t.id],
        )
    return bundles, thresholds

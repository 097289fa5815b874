"""Loaders for the GeoJSON inputs: flood extent, buildings, facilities, roads.

All inputs must share one projected metric CRS; this module only checks
consistency of the declared label (reprojection is out of scope). Invalid
geometry is rejected, never repaired.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ValidationError
from .geometry import centroid, point_in_ring, ring_area, ring_self_intersects


@dataclass(frozen=True)
class FloodPolygon:
    outer: tuple
    holes: tuple = ()


@dataclass(frozen=True)
class FloodLayer:
    polygons: tuple[FloodPolygon, ...]
    version_tag: str = ""

    def area(self) -> float:
        total = 0.0
        for poly in self.polygons:
            total += ring_area(poly.outer)
            for hole in poly.holes:
                total -= ring_area(hole)
        return total

    def contains(self, p) -> bool:
        for poly in self.polygons:
            if point_in_ring(p, poly.outer):
                if any(point_in_ring(p, h) and not _on_ring_boundary(p, h)
                       for h in poly.holes):
                    continue
                return True
        return False

    def is_empty(self) -> bool:
        return not self.polygons


def _on_ring_boundary(p, ring) -> bool:
    from .geometry import _on_segment
    n = len(ring)
    return any(_on_segment(p, ring[i], ring[(i + 1) % n]) for i in range(n))


@dataclass(frozen=True)
class BuildingSet:
    buildings: tuple  # (id, (x, y))


@dataclass(frozen=True)
class FacilitySet:
    facilities: tuple  # (id, (x, y))


@dataclass(frozen=True)
class RoadNetwork:
    nodes: dict  # node id -> (x, y)
    segments: tuple  # (segment id, node_from, node_to, polyline)


@dataclass(frozen=True)
class DestinationSet:
    destinations: tuple  # (label, (x, y), snapped node id)


def _read_geojson(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"geodata file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"cannot parse {path}: {exc}") from None
    if doc.get("type") != "FeatureCollection":
        raise ValidationError(f"{path}: expected a FeatureCollection")
    return doc


def check_crs_label(path, expected: str):
    """All inputs must declare the same CRS label as the scenario config
    (or none at all); no reprojection is performed."""
    doc = _read_geojson(path)
    declared = ((doc.get("crs") or {}).get("properties") or {}).get("name")
    if declared is not None and declared != expected:
        raise ValidationError(
            f"{path}: CRS label {declared!r} does not match scenario CRS {expected!r}")


def _validate_ring(coords, where):
    if len(coords) < 4 or coords[0] != coords[-1]:
        raise ValidationError(f"{where}: ring must be closed with >= 3 distinct vertices")
    ring = tuple((float(x), float(y)) for x, y in coords[:-1])
    if ring_self_intersects(ring):
        raise ValidationError(f"{where}: self-intersecting ring")
    return ring


def _polygon_from_coords(coords, where):
    outer = _validate_ring(coords[0], where)
    holes = []
    for k, hole_coords in enumerate(coords[1:], start=1):
        hole = _validate_ring(hole_coords, f"{where} hole {k}")
        if not all(point_in_ring(v, outer) for v in hole):
            raise ValidationError(f"{where} hole {k}: hole not inside outer ring")
        holes.append(hole)
    return FloodPolygon(outer=outer, holes=tuple(holes))


def load_flood_layer(path, version_tag="") -> FloodLayer:
    """Load a Polygon/MultiPolygon flood extent layer. Empty layer = no flooding."""
    doc = _read_geojson(path)
    polygons = []
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        where = f"{path} feature {i}"
        if gtype == "Polygon":
            polygons.append(_polygon_from_coords(geom["coordinates"], where))
        elif gtype == "MultiPolygon":
            for j, poly_coords in enumerate(geom["coordinates"]):
                polygons.append(_polygon_from_coords(poly_coords, f"{where} polygon {j}"))
        else:
            raise ValidationError(f"{where}: expected Polygon/MultiPolygon, got {gtype}")
    return FloodLayer(polygons=tuple(polygons), version_tag=version_tag)


def _load_points(path, kind):
    """Shared loader for buildings and facilities: points pass through,
    polygons collapse to centroids."""
    doc = _read_geojson(path)
    out = []
    seen = set()
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        where = f"{path} feature {i}"
        if gtype == "Point":
            x, y = geom["coordinates"]
            pt = (float(x), float(y))
        elif gtype == "Polygon":
            ring = _validate_ring(geom["coordinates"][0], where)
            pt = centroid(ring)
        else:
            raise ValidationError(f"{where}: expected Point/Polygon, got {gtype}")
        fid = feature.get("id", feature.get("properties", {}).get("id"))
        fid = str(fid) if fid is not None else f"{kind}-{i}"
        if fid in seen:
            raise ValidationError(f"{path}: duplicate feature id {fid!r}")
        seen.add(fid)
        out.append((fid, pt))
    return tuple(out)


def load_buildings(path) -> BuildingSet:
    return BuildingSet(buildings=_load_points(path, "building"))


def load_facilities(path) -> FacilitySet:
    return FacilitySet(facilities=_load_points(path, "facility"))


def load_road_network(path) -> RoadNetwork:
    """Load road topology: Point features carry `node_id`, LineString features
    carry `node_from`/`node_to`. All segments are bidirectional."""
    doc = _read_geojson(path)
    nodes = {}
    raw_segments = []
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        props = feature.get("properties") or {}
        where = f"{path} feature {i}"
        if gtype == "Point":
            nid = props.get("node_id")
            if nid is None:
                raise ValidationError(f"{where}: road node missing node_id")
            nid = int(nid)
            if nid in nodes:
                raise ValidationError(f"{where}: duplicate node_id {nid}")
            x, y = geom["coordinates"]
            nodes[nid] = (float(x), float(y))
        elif gtype == "LineString":
            if props.get("node_from") is None or props.get("node_to") is None:
                raise ValidationError(f"{where}: road segment missing node_from/node_to")
            polyline = tuple((float(x), float(y)) for x, y in geom["coordinates"])
            sid = str(props.get("id", f"segment-{i}"))
            raw_segments.append((sid, int(props["node_from"]), int(props["node_to"]), polyline))
        else:
            raise ValidationError(f"{where}: expected Point/LineString, got {gtype}")
    segments = []
    for sid, n_from, n_to, polyline in raw_segments:
        for endpoint, ref in ((polyline[0], n_from), (polyline[-1], n_to)):
            if ref not in nodes:
                raise ValidationError(f"segment {sid!r} references missing node {ref}")
            nx, ny = nodes[ref]
            if math.hypot(endpoint[0] - nx, endpoint[1] - ny) > 1e-6:
                raise ValidationError(
                    f"segment {sid!r}: polyline endpoint {endpoint} does not "
                    f"coincide with node {ref} at {(nx, ny)}")
        segments.append((sid, n_from, n_to, polyline))
    return RoadNetwork(nodes=nodes, segments=tuple(segments))


def snap_destinations(net: RoadNetwork, flood: FloodLayer, points, max_snap) -> DestinationSet:
    """Snap labelled evacuation destinations to the nearest unflooded road node."""
    if not points:
        raise ValidationError("at least one destination point is required")
    destinations = []
    for label, p in points:
        best = None
        best_d = None
        for nid in sorted(net.nodes):
            xy = net.nodes[nid]
            d = math.hypot(p[0] - xy[0], p[1] - xy[1])
            if best_d is None or d < best_d:
                best, best_d = nid, d
        if best is None or best_d > max_snap:
            raise ValidationError(
                f"destination {label!r}: no road node within {max_snap} m")
        if flood.contains(net.nodes[best]):
            raise ValidationError(
                f"destination {label!r}: nearest road node {best} is flooded")
        destinations.append((label, tuple(p), best))
    return DestinationSet(destinations=tuple(destinations))

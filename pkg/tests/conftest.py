"""Shared fixtures: a deterministic synthetic city with a road grid,
buildings, care facilities, a flood band, and a growing flood sequence."""

from __future__ import annotations

import json

import numpy as np
import pytest
import yaml

BBOX = (0.0, 0.0, 3000.0, 3000.0)
MAX_WIDTH = 420.0


def feature_collection(features, crs=None):
    doc = {"type": "FeatureCollection", "features": features}
    if crs:
        doc["crs"] = {"type": "name", "properties": {"name": crs}}
    return doc


def point_feature(xy, props=None, fid=None):
    f = {"type": "Feature", "geometry": {"type": "Point", "coordinates": list(xy)},
         "properties": props or {}}
    if fid is not None:
        f["id"] = fid
    return f


def polygon_feature(ring, holes=(), props=None):
    coords = [list(map(list, ring)) + [list(ring[0])]]
    for hole in holes:
        coords.append(list(map(list, hole)) + [list(hole[0])])
    return {"type": "Feature", "geometry": {"type": "Polygon", "coordinates": coords},
            "properties": props or {}}


def line_feature(points, node_from, node_to, sid=None):
    props = {"node_from": node_from, "node_to": node_to}
    if sid is not None:
        props["id"] = sid
    return {"type": "Feature",
            "geometry": {"type": "LineString", "coordinates": list(map(list, points))},
            "properties": props}


def rect_ring(minx, miny, maxx, maxy):
    return [(minx, miny), (maxx, miny), (maxx, maxy), (minx, maxy)]


def flood_band(x_extent):
    """West-side flood band reaching x_extent metres east, with a bite."""
    return rect_ring(-200.0, -200.0, x_extent, 3200.0)


CRS = "local-metric-test"


def road_grid_features(spacing=500.0, n=7):
    """n x n road grid over the bbox; node ids row-major."""
    features = []
    for j in range(n):
        for i in range(n):
            nid = j * n + i
            features.append(point_feature((i * spacing, j * spacing),
                                          {"node_id": nid}))
    sid = 0
    for j in range(n):
        for i in range(n):
            nid = j * n + i
            if i + 1 < n:
                features.append(line_feature(
                    [(i * spacing, j * spacing), ((i + 1) * spacing, j * spacing)],
                    nid, nid + 1, f"h{sid}"))
                sid += 1
            if j + 1 < n:
                features.append(line_feature(
                    [(i * spacing, j * spacing), (i * spacing, (j + 1) * spacing)],
                    nid, nid + n, f"v{sid}"))
                sid += 1
    return features


def building_features(count=420, seed=7):
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0, 3000, count)
    ys = rng.uniform(0, 3000, count)
    return [point_feature((float(x), float(y))) for x, y in zip(xs, ys)]


def facility_features():
    # one deep inside the flood band, one outside it
    return [point_feature((300.0, 1500.0), fid="care-west"),
            point_feature((2800.0, 2800.0), fid="care-east")]


def write_city(tmp_path, flood_extent=1200.0):
    """Write all GeoJSON inputs plus a scenario config; returns config path."""
    paths = {}
    docs = {
        "flood": feature_collection([polygon_feature(flood_band(flood_extent))], CRS),
        "buildings": feature_collection(building_features(), CRS),
        "facilities": feature_collection(facility_features(), CRS),
        "roads": feature_collection(road_grid_features(), CRS),
    }
    for name, doc in docs.items():
        p = tmp_path / f"{name}.geojson"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    config = {
        "crs": CRS,
        "bbox": list(BBOX),
        "max_width": MAX_WIDTH,
        "inputs": paths,
        "destinations": [{"label": "east-gate", "x": 3000.0, "y": 1500.0},
                         {"label": "north-east", "x": 3000.0, "y": 3000.0}],
        "max_snap": 600.0,
        "weights": [0.0, 0.33, 0.66, 1.0],
        "k": 3,
        "percentiles": [0.75, 0.90],
    }
    cfg_path = tmp_path / "scenario.yaml"
    cfg_path.write_text(yaml.safe_dump(config))
    return cfg_path


@pytest.fixture(scope="session")
def city_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("city")
    write_city(d)
    return d


@pytest.fixture(scope="session")
def city_config_path(city_dir):
    return str(city_dir / "scenario.yaml")


@pytest.fixture(scope="session")
def flood_sequence(tmp_path_factory):
    """Five growing flood snapshots (each a superset of the previous)."""
    d = tmp_path_factory.mktemp("flood_seq")
    paths = []
    for k, extent in enumerate([400.0, 900.0, 1400.0, 2000.0, 2600.0]):
        doc = feature_collection([polygon_feature(flood_band(extent))], CRS)
        p = d / f"flood_{k}.geojson"
        p.write_text(json.dumps(doc))
        paths.append(str(p))
    return paths

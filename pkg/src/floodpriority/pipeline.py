"""Scenario orchestration and versioned persistence.

One directory per scenario, one immutable subdirectory per version:

    <root>/<scenario_id>/scenario.json        resolved config
    <root>/<scenario_id>/v0001/priomap.geojson
    <root>/<scenario_id>/v0001/state.json     per-tile evidence + posteriors
    <root>/<scenario_id>/v0001/manifest.json  version, hashes, timings, counts

Versions are written into a temp directory and atomically renamed, so a
reader during a write sees the previous complete version. Writes are
serialised per scenario; reads never take the lock.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field

import yaml

from . import bayesnet, evidence, geo_ingest, hexgrid, prioritizer
from .errors import NotFoundError, StageError, ValidationError
from .evidence import DensityClass
from .prioritizer import WeightVector


@dataclass(frozen=True)
class ScenarioConfig:
    crs: str
    bbox: tuple
    max_width: float
    flood_path: str
    buildings_path: str
    facilities_path: str
    roads_path: str
    destinations: tuple  # (label, (x, y))
    max_snap: float
    weights: WeightVector = field(default_factory=WeightVector)
    k: int = 3
    cpt_config: str | None = None
    percentiles: tuple = (0.75, 0.90)
    scenario_id: str | None = None

    def __post_init__(self):
        p_med, p_high = self.percentiles
        if not (0.0 < p_med < p_high < 1.0):
            raise ValidationError(
                f"percentile levels must be strictly increasing in (0,1), got {self.percentiles}")


def load_config(path) -> ScenarioConfig:
    """Read the YAML scenario config; relative paths resolve against it."""
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    try:
        inputs = doc["inputs"]
        cfg = ScenarioConfig(
            crs=str(doc["crs"]),
            bbox=tuple(float(v) for v in doc["bbox"]),
            max_width=float(doc["max_width"]),
            flood_path=resolve(inputs["flood"]),
            buildings_path=resolve(inputs["buildings"]),
            facilities_path=resolve(inputs["facilities"]),
            roads_path=resolve(inputs["roads"]),
            destinations=tuple((str(d["label"]), (float(d["x"]), float(d["y"])))
                               for d in doc["destinations"]),
            max_snap=float(doc.get("max_snap", 500.0)),
            weights=WeightVector(*[float(w) for w in doc.get("weights", (0, 0.33, 0.66, 1))]),
            k=int(doc.get("k", 3)),
            cpt_config=resolve(doc["cpt_config"]) if doc.get("cpt_config") else None,
            percentiles=tuple(float(p) for p in doc.get("percentiles", (0.75, 0.90))),
            scenario_id=doc.get("scenario_id"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"config {path}: missing/invalid key: {exc}") from None
    for p in (cfg.flood_path, cfg.buildings_path, cfg.facilities_path, cfg.roads_path):
        if not os.path.exists(p):
            raise ValidationError(f"config {path}: input file does not exist: {p}")
    return cfg


def config_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "crs": cfg.crs,
        "bbox": list(cfg.bbox),
        "max_width": cfg.max_width,
        "inputs": {"flood": cfg.flood_path, "buildings": cfg.buildings_path,
                   "facilities": cfg.facilities_path, "roads": cfg.roads_path},
        "destinations": [{"label": l, "x": x, "y": y} for l, (x, y) in cfg.destinations],
        "max_snap": cfg.max_snap,
        "weights": list(cfg.weights.as_tuple()),
        "k": cfg.k,
        "cpt_config": cfg.cpt_config,
        "percentiles": list(cfg.percentiles),
        "scenario_id": cfg.scenario_id,
    }


def config_from_dict(doc: dict) -> ScenarioConfig:
    return ScenarioConfig(
        crs=doc["crs"],
        bbox=tuple(doc["bbox"]),
        max_width=doc["max_width"],
        flood_path=doc["inputs"]["flood"],
        buildings_path=doc["inputs"]["buildings"],
        facilities_path=doc["inputs"]["facilities"],
        roads_path=doc["inputs"]["roads"],
        destinations=tuple((d["label"], (d["x"], d["y"])) for d in doc["destinations"]),
        max_snap=doc["max_snap"],
        weights=WeightVector(*doc["weights"]),
        k=doc["k"],
        cpt_config=doc.get("cpt_config"),
        percentiles=tuple(doc["percentiles"]),
        scenario_id=doc.get("scenario_id"),
    )


def _canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _file_tag(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _evidence_to_bn(bundle: evidence.EvidenceBundle) -> dict:
    p = bundle.immediate_unexposed
    return {
        bayesnet.NODE_DENSITY: bayesnet.hard(bundle.density.label),
        bayesnet.NODE_FACILITY: bayesnet.hard(
            "Present" if bundle.facility_exposed else "Not present"),
        bayesnet.NODE_IMMEDIATE: bayesnet.soft((p, 1.0 - p)),
        bayesnet.NODE_REMOTE: bayesnet.hard(
            "True" if bundle.remote_accessible else "False"),
    }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValidationError, NotFoundError) as exc:
        raise StageError(name, exc) from exc


class ScenarioStore:
    """Filesystem-backed scenario registry with per-scenario write locks."""

    def __init__(self, root):
        self.root = str(root)
        os.makedirs(self.root, exist_ok=True)
        self._locks = {}
        self._locks_guard = threading.Lock()

    def _lock(self, scenario_id):
        with self._locks_guard:
            return self._locks.setdefault(scenario_id, threading.Lock())

    # -- paths ---------------------------------------------------------------

    def _scenario_dir(self, scenario_id, must_exist=True):
        d = os.path.join(self.root, scenario_id)
        if must_exist and not os.path.isdir(d):
            raise NotFoundError(f"unknown scenario {scenario_id!r}")
        return d

    def _version_dir(self, scenario_id, version):
        d = os.path.join(self._scenario_dir(scenario_id), f"v{version:04d}")
        if not os.path.isdir(d):
            raise NotFoundError(f"scenario {scenario_id!r} has no version {version}")
        return d

    def versions(self, scenario_id) -> list:
        d = self._scenario_dir(scenario_id)
        out = []
        for name in sorted(os.listdir(d)):
            m = re.fullmatch(r"v(\d{4})", name)
            if m and os.path.isdir(os.path.join(d, name)):
                out.append(int(m.group(1)))
        return out

    def scenario_ids(self) -> list:
        return sorted(n for n in os.listdir(self.root)
                      if os.path.isdir(os.path.join(self.root, n)))

    def latest_version(self, scenario_id) -> int:
        versions = self.versions(scenario_id)
        if not versions:
            raise NotFoundError(f"scenario {scenario_id!r} has no versions")
        return versions[-1]

    def _next_scenario_id(self) -> str:
        existing = {n for n in os.listdir(self.root)}
        i = 1
        while f"s{i:04d}" in existing:
            i += 1
        return f"s{i:04d}"

    # -- pipeline ------------------------------------------------------------

    def _compute(self, cfg: ScenarioConfig, flood_path, weights: WeightVector):
        """Full pipeline: ingest -> evidence -> inference -> prioritisation."""
        timings = {}

        t0 = time.perf_counter()
        for p in (flood_path, cfg.buildings_path, cfg.facilities_path, cfg.roads_path):
            _stage("ingest", geo_ingest.check_crs_label, p, cfg.crs)
        flood = _stage("ingest", geo_ingest.load_flood_layer, flood_path,
                       version_tag=_file_tag(flood_path))
        buildings = _stage("ingest", geo_ingest.load_buildings, cfg.buildings_path)
        facilities = _stage("ingest", geo_ingest.load_facilities, cfg.facilities_path)
        roads = _stage("ingest", geo_ingest.load_road_network, cfg.roads_path)
        timings["ingest"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        grid = _stage("grid", hexgrid.build_grid, cfg.bbox, cfg.max_width)
        dests = _stage("grid", geo_ingest.snap_destinations, roads, flood,
                       cfg.destinations, cfg.max_snap)
        timings["grid"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        bundles, thresholds = _stage(
            "evidence", evidence.build_evidence, grid, buildings, facilities,
            roads, flood, dests, p_med=cfg.percentiles[0], p_high=cfg.percentiles[1])
        timings["evidence"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        net = _stage("inference", bayesnet.build_risk_network, cfg.cpt_config)
        posteriors = {}
        cache = {}
        for tid, bundle in bundles.items():
            sig = (bundle.density, bundle.facility_exposed,
                   bundle.remote_accessible, bundle.immediate_unexposed)
            if sig not in cache:
                cache[sig] = _stage("inference", bayesnet.infer, net,
                                    _evidence_to_bn(bundle))
            posteriors[tid] = cache[sig]
        timings["inference"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        thresh_meta = {"p_med_count": thresholds.p_med_count,
                       "p_high_count": thresholds.p_high_count,
                       "percentile_method": thresholds.percentile_method,
                       "levels": list(cfg.percentiles)}
        pmap = _stage("prioritize", prioritizer.build_priority_map, grid,
                      posteriors, weights, k=cfg.k, threshold_meta=thresh_meta)
        timings["prioritize"] = time.perf_counter() - t0

        return grid, flood, bundles, posteriors, pmap, thresh_meta, timings

    # -- persistence ---------------------------------------------------------

    def _write_version(self, scenario_id, version, cfg, grid, flood_tag,
                       bundles, posteriors, pmap, thresh_meta, timings):
        sdir = self._scenario_dir(scenario_id)
        final = os.path.join(sdir, f"v{version:04d}")
        tmp = os.path.join(sdir, f".tmp-v{version:04d}")
        if os.path.exists(final):
            raise ValidationError(f"version {version} already exists (immutable)")
        os.makedirs(tmp, exist_ok=True)

        geojson = priomap_geojson(scenario_id, version, grid, pmap, flood_tag)
        with open(os.path.join(tmp, "priomap.geojson"), "w") as fh:
            fh.write(_canonical_json(geojson))

        state = {
            "tiles": {
                tid: {
                    "evidence": {
                        "density": b.density.label,
                        "facility_exposed": b.facility_exposed,
                        "immediate_unexposed": b.immediate_unexposed,
                        "remote_accessible": b.remote_accessible,
                        "exposed_count": b.exposed_building_count,
                    },
                    "posterior": list(posteriors[tid]),
                    "pdc": pmap.entries[tid][1],
                    "category": pmap.entries[tid][2].value,
                } for tid, b in bundles.items()
            },
            "thresholds": thresh_meta,
            "weights": list(pmap.weights.as_tuple()),
            "flood_version_tag": flood_tag,
        }
        with open(os.path.join(tmp, "state.json"), "w") as fh:
            fh.write(_canonical_json(state))

        manifest = {
            "scenario_id": scenario_id,
            "version": version,
            "flood_version_tag": flood_tag,
            "config_hash": hashlib.sha256(
                _canonical_json(config_to_dict(cfg)).encode()).hexdigest(),
            "weights": list(pmap.weights.as_tuple()),
            "centroids": list(pmap.centroids),
            "counts": pmap.counts(),
            "timings": timings,
            "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        with open(os.path.join(tmp, "manifest.json"), "w") as fh:
            fh.write(json.dumps(manifest, sort_keys=True, indent=1))

        os.rename(tmp, final)
        return manifest

    # -- public operations ----------------------------------------------------

    def run_scenario(self, cfg: ScenarioConfig) -> dict:
        """Run the full pipeline and persist the result as a new scenario, v1."""
        scenario_id = cfg.scenario_id or self._next_scenario_id()
        sdir = os.path.join(self.root, scenario_id)
        if os.path.exists(sdir):
            raise ValidationError(f"scenario {scenario_id!r} already exists")
        grid, flood, bundles, posteriors, pmap, thresh_meta, timings = \
            self._compute(cfg, cfg.flood_path, cfg.weights)
        with self._lock(scenario_id):
            os.makedirs(sdir)
            with open(os.path.join(sdir, "scenario.json"), "w") as fh:
                fh.write(json.dumps(config_to_dict(cfg), sort_keys=True, indent=1))
            return self._write_version(
                scenario_id, 1, cfg, grid, flood.version_tag, bundles,
                posteriors, pmap, thresh_meta, timings)

    def _load_config(self, scenario_id) -> ScenarioConfig:
        sdir = self._scenario_dir(scenario_id)
        with open(os.path.join(sdir, "scenario.json")) as fh:
            return config_from_dict(json.load(fh))

    def update_flood(self, scenario_id, flood_path) -> dict:
        """Recompute everything against a new flood snapshot; next version."""
        cfg = self._load_config(scenario_id)
        if not os.path.exists(flood_path):
            raise ValidationError(f"flood file does not exist: {flood_path}")
        grid, flood, bundles, posteriors, pmap, thresh_meta, timings = \
            self._compute(cfg, flood_path, cfg.weights)
        with self._lock(scenario_id):
            version = self.latest_version(scenario_id) + 1
            return self._write_version(
                scenario_id, version, cfg, grid, flood.version_tag, bundles,
                posteriors, pmap, thresh_meta, timings)

    def update_weights(self, scenario_id, weights: WeightVector) -> dict:
        """Re-score stored posteriors only; no GIS or inference recompute."""
        cfg = self._load_config(scenario_id)
        with self._lock(scenario_id):
            latest = self.latest_version(scenario_id)
            state = self._read_state(scenario_id, latest)
            t0 = time.perf_counter()
            grid = hexgrid.build_grid(cfg.bbox, cfg.max_width)
            posteriors = {tid: tuple(t["posterior"])
                          for tid, t in state["tiles"].items()}
            bundles = _bundles_from_state(state)
            pmap = prioritizer.build_priority_map(
                grid, posteriors, weights, k=cfg.k,
                threshold_meta=state["thresholds"])
            timings = {"prioritize": time.perf_counter() - t0}
            return self._write_version(
                scenario_id, latest + 1, cfg, grid, state["flood_version_tag"],
                bundles, posteriors, pmap, state["thresholds"], timings)

    # -- read views ------------------------------------------------------------

    def _read_state(self, scenario_id, version) -> dict:
        with open(os.path.join(self._version_dir(scenario_id, version),
                               "state.json")) as fh:
            return json.load(fh)

    def _read_manifest(self, scenario_id, version) -> dict:
        with open(os.path.join(self._version_dir(scenario_id, version),
                               "manifest.json")) as fh:
            return json.load(fh)

    def get_priomap(self, scenario_id, version=None) -> dict:
        version = version or self.latest_version(scenario_id)
        with open(os.path.join(self._version_dir(scenario_id, version),
                               "priomap.geojson")) as fh:
            return json.load(fh)

    def get_priomap_bytes(self, scenario_id, version=None) -> bytes:
        version = version or self.latest_version(scenario_id)
        with open(os.path.join(self._version_dir(scenario_id, version),
                               "priomap.geojson"), "rb") as fh:
            return fh.read()

    def get_tile_detail(self, scenario_id, tile_id, version=None) -> dict:
        version = version or self.latest_version(scenario_id)
        state = self._read_state(scenario_id, version)
        tile = state["tiles"].get(tile_id)
        if tile is None:
            raise NotFoundError(f"unknown tile {tile_id!r} in scenario {scenario_id!r}")
        return {"scenario_id": scenario_id, "version": version,
                "tile_id": tile_id, **tile}

    def get_summary(self, scenario_id, version=None) -> dict:
        version = version or self.latest_version(scenario_id)
        manifest = self._read_manifest(scenario_id, version)
        return {"scenario_id": scenario_id, "version": version,
                "counts": manifest["counts"],
                "centroids": manifest["centroids"],
                "weights": manifest["weights"],
                "flood_version_tag": manifest["flood_version_tag"],
                "thresholds": self._read_state(scenario_id, version)["thresholds"]}


def _bundles_from_state(state) -> dict:
    labels = {"None": DensityClass.NONE, "Low": DensityClass.LOW,
              "Medium": DensityClass.MEDIUM, "High": DensityClass.HIGH}
    out = {}
    for tid, t in state["tiles"].items():
        ev = t["evidence"]
        out[tid] = evidence.EvidenceBundle(
            tile_id=tid,
            density=labels[ev["density"]],
            facility_exposed=ev["facility_exposed"],
            immediate_unexposed=ev["immediate_unexposed"],
            remote_accessible=ev["remote_accessible"],
            exposed_building_count=ev["exposed_count"],
        )
    return out


def priomap_geojson(scenario_id, version, grid, pmap, flood_tag) -> dict:
    """Output document: one feature per tile plus run metadata as foreign
    members."""
    features = []
    for tile in grid.tiles:
        posterior, score, cat = pmap.entries[tile.id]
        ring = [[x, y] for x, y in tile.polygon]
        ring.append(ring[0])
        features.append({
            "type": "Feature",
            "id": tile.id,
            "geometry": {"type": "Polygon", "coordinates": [ring]},
            "properties": {
                "tile_id": tile.id,
                "category": cat.value,
                "pdc": score,
                "p_none": posterior[0],
                "p_low": posterior[1],
                "p_medium": posterior[2],
                "p_high": posterior[3],
            },
        })
    return {
        "type": "FeatureCollection",
        "features": features,
        "scenario_id": scenario_id,
        "version": version,
        "flood_version_tag": flood_tag,
        "weights": list(pmap.weights.as_tuple()),
        "centroids": list(pmap.centroids),
        "counts": pmap.counts(),
        "meta": pmap.threshold_meta,
    }


def evidence_geojson(grid, bundles) -> dict:
    """Optional per-tile evidence dump."""
    features = []
    for tile in grid.tiles:
        b = bundles[tile.id]
        ring = [[x, y] for x, y in tile.polygon]
        ring.append(ring[0])
        features.append({
            "type": "Feature",
            "id": tile.id,
            "geometry": {"type": "Polygon", "coordinates": [ring]},
            "properties": {
                "density": b.density.label,
                "facility_exposed": b.facility_exposed,
                "immediate_unexposed": b.immediate_unexposed,
                "remote_accessible": b.remote_accessible,
                "exposed_count": b.exposed_building_count,
            },
        })
    return {"type": "FeatureCollection", "features": features}

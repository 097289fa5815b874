"""Acceptance suite: the published behaviour guarantees of the engine.

Each test is one criterion, checked against an independent oracle or a
closed-form value, with an explicit runtime budget. Run with -v for one
pass/fail line per criterion.
"""

import time

import numpy as np
import yaml

from conftest import BBOX, write_city
from oracles import (monte_carlo_flood_fraction, optimal_1d_kmeans,
                     pairwise_accessibility, weighted_score)

from floodpriority import bayesnet as bn
from floodpriority.evidence import flood_fraction, remote_accessibility
from floodpriority.geo_ingest import (DestinationSet, FloodLayer, FloodPolygon,
                                      RoadNetwork)
from floodpriority.geometry import ring_area
from floodpriority.hexgrid import build_grid, locate
from floodpriority.pipeline import ScenarioStore, load_config
from floodpriority.prioritizer import WeightVector, categorize, pdc


def report(label, started):
    print(f"PASS {label} ({time.perf_counter() - started:.2f}s)")


# --- 1: hexagon tile area at the published cell size --------------------------

def test_01_hex_tile_area_matches_published_value():
    t0 = time.perf_counter()
    grid = build_grid(BBOX, 420.0)
    interior = grid.get(locate(grid, (1500.0, 1500.0)))
    area = ring_area(interior.polygon)
    assert abs(area - 114551.0) / 114551.0 < 0.005
    assert abs(area / 1e6 - 0.1146) / 0.1146 < 0.005
    assert time.perf_counter() - t0 < 1.0
    report("tile area at 420 m width within 0.5% of 114551 m2", t0)


# --- 2: criticality score is the exact weighted sum ---------------------------

def test_02_criticality_score_exactness():
    t0 = time.perf_counter()
    w = WeightVector()
    assert pdc((0.0, 0.0, 1.0, 0.0), w) == 0.66
    assert pdc((0.0, 0.0, 0.0, 1.0), w) == 1.0
    rng = np.random.default_rng(42)
    for _ in range(1000):
        post = tuple(rng.dirichlet(np.ones(4)))
        weights = tuple(sorted(rng.uniform(0, 2, 4)))
        wv = WeightVector(*weights)
        assert abs(pdc(post, wv) - weighted_score(post, weights)) <= 1e-12
    assert time.perf_counter() - t0 < 1.0
    report("criticality score exact vs spreadsheet oracle (1000 draws, 1e-12)", t0)


# --- 3: deterministic combination of the two escape-route signals -------------

def test_03_deterministic_accessibility_rules():
    t0 = time.perf_counter()
    rows = bn.accessibility_rows()
    expected_state = {("True", "True"): "True", ("False", "False"): "False",
                      ("True", "False"): "Limited", ("False", "True"): "Limited"}
    assert set(rows) == set(expected_state)
    net = bn.build_risk_network()
    for parents, state in expected_state.items():
        row = rows[parents]
        assert row == tuple(1.0 if s == state else 0.0 for s in bn.ACCESS_STATES)
        # and the same probability-1 outcome through the assembled network
        joint = bn.enumerate_joint(net, {
            bn.NODE_REMOTE: bn.hard(parents[0]),
            bn.NODE_IMMEDIATE: bn.hard(parents[1]),
        })
        posterior = bn.posterior_from_joint(net, joint, node_name=bn.NODE_ACCESS)
        assert posterior == tuple(1.0 if s == state else 0.0
                                  for s in bn.ACCESS_STATES)
    assert time.perf_counter() - t0 < 1.0
    report("escape-route combination table is fully deterministic", t0)


# --- 4: exact inference agrees with brute-force enumeration -------------------

def test_04_inference_matches_enumeration():
    t0 = time.perf_counter()
    net = bn.build_risk_network()
    rng = np.random.default_rng(4)
    for _ in range(500):
        ev = {}
        if rng.random() < 0.9:
            if rng.random() < 0.5:
                ev[bn.NODE_DENSITY] = bn.hard(str(rng.choice(bn.DENSITY_STATES)))
            else:
                ev[bn.NODE_DENSITY] = bn.soft(tuple(rng.dirichlet(np.ones(4))))
        if rng.random() < 0.9:
            ev[bn.NODE_FACILITY] = bn.hard(str(rng.choice(bn.FACILITY_STATES)))
        if rng.random() < 0.9:
            p = float(rng.random())
            ev[bn.NODE_IMMEDIATE] = bn.soft((p, 1.0 - p))
        if rng.random() < 0.9:
            ev[bn.NODE_REMOTE] = bn.hard(str(rng.choice(bn.BOOL_STATES)))
        fast = bn.infer(net, ev)
        slow = bn.posterior_from_joint(net, bn.enumerate_joint(net, ev))
        assert max(abs(a - b) for a, b in zip(fast, slow)) <= 1e-12
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report("inference == brute-force enumeration (500 bundles, 1e-12)", t0)


# --- 5: risk table validator accepts the default, rejects corruptions ---------

def test_05_risk_table_validator():
    t0 = time.perf_counter()
    default = bn.generate_risk_rows()
    assert bn.validate_risk_table(default) == []

    broken = dict(default)
    broken[("True", "Low", "Present")] = (0.0, 0.0, 0.5, 0.5)
    kinds = {v["kind"] for v in bn.validate_risk_table(broken)}
    assert kinds == {"facility_override"}

    broken = dict(default)
    broken[("True", "High", "Not present")] = (0.20, 0.55, 0.20, 0.05)
    kinds = {v["kind"] for v in bn.validate_risk_table(broken)}
    assert "density_dominance" in kinds

    broken = dict(default)
    broken[("Limited", "Medium", "Not present")] = (0.4, 0.4, 0.4, 0.4)
    kinds = {v["kind"] for v in bn.validate_risk_table(broken)}
    assert kinds == {"non_stochastic"}

    assert time.perf_counter() - t0 < 1.0
    report("risk-table validator: default clean, 3 corruptions classified", t0)


# --- 6: reachability via components equals per-pair BFS -----------------------

def test_06_accessibility_equals_bfs_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    grid = build_grid((0.0, 0.0, 2000.0, 2000.0), 400.0)
    for trial in range(50):
        n = int(rng.integers(5, 51))
        pts = {i: (float(rng.uniform(0, 2000)), float(rng.uniform(0, 2000)))
               for i in range(n)}
        segments = []
        for i in range(n):
            for j in rng.choice(n, size=2, replace=False):
                j = int(j)
                if j != i:
                    segments.append((f"s{len(segments)}", i, j, (pts[i], pts[j])))
        net = RoadNetwork(nodes=pts, segments=tuple(segments))
        x0, y0 = rng.uniform(-200, 1500, 2)
        flood = FloodLayer(polygons=(FloodPolygon(outer=(
            (x0, y0), (x0 + rng.uniform(100, 900), y0),
            (x0 + rng.uniform(100, 900), y0 + rng.uniform(100, 900)),
            (x0, y0 + rng.uniform(100, 900)))),))
        dest = int(rng.integers(0, n))
        dests = DestinationSet(destinations=(("d", pts[dest], dest),))
        acc = remote_accessibility(grid, net, flood, dests)

        adj = {}
        for nid, pt in pts.items():
            if not flood.contains(pt):
                adj[nid] = []
        for _sid, a, b, line in net.segments:
            if a in adj and b in adj:
                from floodpriority.evidence import _polyline_intersects_flood
                if flood.is_empty() or not _polyline_intersects_flood(line, flood):
                    adj[a].append(b)
                    adj[b].append(a)
        tile_nodes = {}
        for nid in adj:
            tid = locate(grid, pts[nid])
            if tid is not None:
                tile_nodes.setdefault(tid, []).append(nid)
        oracle = pairwise_accessibility(adj, tile_nodes, [dest] if dest in adj else [])
        for tid in acc:
            assert acc[tid] == oracle.get(tid, False), f"trial {trial} tile {tid}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report("component reachability == per-pair BFS (50 random graphs)", t0)


# --- 7: flooded-share computation vs Monte-Carlo ------------------------------

def test_07_flood_fraction_vs_monte_carlo():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    for trial in range(100):
        # random hexagon tile
        cx, cy = rng.uniform(200, 1800, 2)
        radius = float(rng.uniform(50, 400))
        hexagon = tuple(
            (cx + radius * np.sin(k * np.pi / 3), cy + radius * np.cos(k * np.pi / 3))
            for k in range(6))
        hexagon = tuple((float(x), float(y)) for x, y in reversed(hexagon))
        # random flood: one or two rectangles, sometimes with a hole
        polys = []
        for _ in range(int(rng.integers(1, 3))):
            x0, y0 = rng.uniform(0, 1600, 2)
            w, h = rng.uniform(100, 900, 2)
            outer = ((x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h))
            holes = ()
            if rng.random() < 0.4:
                hx, hy = x0 + w / 4, y0 + h / 4
                holes = (((hx, hy), (hx, hy + h / 3), (hx + w / 3, hy + h / 3),
                          (hx + w / 3, hy)),)
            polys.append(FloodPolygon(outer=outer, holes=holes))
        flood = FloodLayer(polygons=tuple(polys))
        got = flood_fraction(hexagon, flood)
        mc = monte_carlo_flood_fraction(
            hexagon, [(p.outer, [list(h) for h in p.holes]) for p in polys],
            n=10 ** 6, seed=trial)
        assert abs(got - mc) <= 1e-3, f"trial {trial}: {got} vs {mc}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    report("flooded share within 1e-3 of 1e6-sample Monte-Carlo (100 pairs)", t0)


# --- 8: category clustering equals the exact dynamic program ------------------

def test_08_clustering_equals_dynamic_program():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    for trial in range(100):
        n = int(rng.integers(6, 201))
        while True:
            centers = np.sort(rng.uniform(0.05, 1.0, 3))
            if np.min(np.diff(centers)) > 0.2:
                break
        sizes = [n // 3, n // 3, n - 2 * (n // 3)]
        values = []
        for c, s in zip(centers, sizes):
            values.extend(np.clip(c + rng.normal(0, 0.03, s), 1e-6, 1.0))
        rng.shuffle(values)
        values = [float(v) for v in values]
        pdcs = {f"t{i}": v for i, v in enumerate(values)}
        cats, _cents, meta = categorize(pdcs)
        assert meta["method"] == "lloyd-quantile-init"
        # partition equality with the exact optimum
        assign, _means, _cost = optimal_1d_kmeans(values, 3)
        got, want = {}, {}
        for i in range(n):
            got.setdefault(cats[f"t{i}"], set()).add(i)
        for i, a in enumerate(assign):
            want.setdefault(a, set()).add(i)
        assert sorted(map(sorted, got.values())) == \
            sorted(map(sorted, want.values())), f"trial {trial}"
        # contiguity: categories are intervals of the sorted values
        by_cat = {}
        for i, v in enumerate(values):
            by_cat.setdefault(cats[f"t{i}"], []).append(v)
        ranked = sorted(by_cat, key=lambda c: c.rank, reverse=True)
        for hi, lo in zip(ranked, ranked[1:]):
            assert min(by_cat[hi]) >= max(by_cat[lo])
        assert max(by_cat[ranked[-1]]) > 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report("Lloyd categorisation == optimal 1-D clustering (100 vectors)", t0)


# --- 9: full-distribution scoring on the small motivating layout --------------

def test_09_small_grid_full_distribution_ordering():
    t0 = time.perf_counter()
    # generic network: 3-state density (hard), 2-state hazard (soft),
    # 3-state target, with a monotone conditional table
    table = {
        ("Low", "True"): (0.2, 0.0, 0.8),
        ("Medium", "True"): (0.0, 0.2, 0.8),
        ("High", "True"): (0.0, 0.0, 1.0),
        ("Low", "False"): (0.9, 0.08, 0.02),
        ("Medium", "False"): (0.5, 0.3, 0.2),
        ("High", "False"): (0.2, 0.3, 0.5),
    }

    def cdf_dominates(hi, lo):
        c_hi = c_lo = 0.0
        for k in range(2):
            c_hi += hi[k]
            c_lo += lo[k]
            if c_hi > c_lo + 1e-12:
                return False
        return True

    # the table is monotone in both parents before we rely on it
    for hazard in ("True", "False"):
        assert cdf_dominates(table[("Medium", hazard)], table[("Low", hazard)])
        assert cdf_dominates(table[("High", hazard)], table[("Medium", hazard)])
    for density in ("Low", "Medium", "High"):
        assert cdf_dominates(table[(density, "True")], table[(density, "False")])

    net = bn.build_network({
        "nodes": [
            {"name": "density", "states": ("Low", "Medium", "High")},
            {"name": "hazard", "states": ("True", "False")},
            {"name": "risk", "states": ("Low", "Medium", "High"),
             "parents": ("density", "hazard")},
        ],
        "tables": {
            "density": {(): (1 / 3, 1 / 3, 1 / 3)},
            "hazard": {(): (0.5, 0.5)},
            "risk": table,
        },
        "target": "risk",
    })

    # 5x5 layout: one fully hazarded high-density cell, two cells that agree
    # on P(High) but split the residual mass differently, and filler cells
    rng = np.random.default_rng(9)
    cells = {}
    cells[(0, 1)] = ("High", 1.0)    # the stand-out cell
    cells[(2, 4)] = ("Low", 1.0)     # residual mass on Low
    cells[(3, 4)] = ("Medium", 1.0)  # residual mass on Medium
    densities = ("Low", "Medium", "High")
    for i in range(5):
        for j in range(5):
            if (i, j) not in cells:
                cells[(i, j)] = (str(rng.choice(densities)),
                                 float(rng.uniform(0.0, 0.95)))

    weights = (0.0, 0.5, 1.0)
    scores = {}
    for cell, (density, hazard_p) in cells.items():
        posterior = bn.infer(net, {
            "density": bn.hard(density),
            "hazard": bn.soft((hazard_p, 1.0 - hazard_p)),
        })
        scores[cell] = weighted_score(posterior, weights)

    top = scores[(0, 1)]
    assert all(top > s for cell, s in scores.items() if cell != (0, 1))

    p_low = bn.infer(net, {"density": bn.hard("Low"), "hazard": bn.soft((1.0, 0.0))})
    p_med = bn.infer(net, {"density": bn.hard("Medium"), "hazard": bn.soft((1.0, 0.0))})
    assert p_low[2] == p_med[2]               # same mass on the top state
    assert scores[(3, 4)] > scores[(2, 4)]    # Medium residual outranks Low
    assert time.perf_counter() - t0 < 5.0
    report("5x5 layout: stand-out cell maximal, residual split ordered", t0)


# --- 10: determinism and short-path equivalence --------------------------------

def test_10_determinism_and_path_equivalence(tmp_path, city_config_path):
    t0 = time.perf_counter()
    cfg = load_config(city_config_path)
    store_a = ScenarioStore(tmp_path / "a")
    store_b = ScenarioStore(tmp_path / "b")
    ma = store_a.run_scenario(cfg)
    mb = store_b.run_scenario(cfg)
    assert store_a.get_priomap_bytes(ma["scenario_id"]) == \
        store_b.get_priomap_bytes(mb["scenario_id"])

    w2 = WeightVector(0.0, 0.60, 0.66, 1.0)
    m2 = store_a.update_weights(ma["scenario_id"], w2)
    short = store_a.get_priomap(ma["scenario_id"], m2["version"])

    doc = yaml.safe_load(open(city_config_path))
    doc["weights"] = list(w2.as_tuple())
    p = tmp_path / "reweighted.yaml"
    p.write_text(yaml.safe_dump(doc))
    store_c = ScenarioStore(tmp_path / "c")
    mc_ = store_c.run_scenario(load_config(str(p)))
    full = store_c.get_priomap(mc_["scenario_id"])

    short_props = {f["id"]: f["properties"] for f in short["features"]}
    full_props = {f["id"]: f["properties"] for f in full["features"]}
    assert short_props == full_props
    assert short["counts"] == full["counts"]
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report("byte-identical reruns; reweighting == from-scratch rerun", t0)


# --- 11: growing flood never relaxes the evidence ------------------------------

def test_11_flood_growth_monotonicity(tmp_path, flood_sequence):
    t0 = time.perf_counter()
    cfg_path = write_city(tmp_path, flood_extent=400.0)
    store = ScenarioStore(tmp_path / "store")
    manifest = store.run_scenario(load_config(str(cfg_path)))
    sid = manifest["scenario_id"]
    for p in flood_sequence[1:]:
        store.update_flood(sid, p)
    prev_state, prev_safe = None, None
    for v in store.versions(sid):
        state = store._read_state(sid, v)
        safe = store._read_manifest(sid, v)["counts"]["Safe"]
        if prev_state is not None:
            for tid, t in state["tiles"].items():
                pt = prev_state["tiles"][tid]
                assert t["evidence"]["immediate_unexposed"] <= \
                    pt["evidence"]["immediate_unexposed"] + 1e-12
                if not pt["evidence"]["remote_accessible"]:
                    assert not t["evidence"]["remote_accessible"]
            assert safe <= prev_safe
        prev_state, prev_safe = state, safe
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    report("5-step flood growth: evidence and Safe count monotone", t0)

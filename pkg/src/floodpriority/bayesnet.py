"""Generic discrete Bayesian network with exact inference.

Every node carries a conditional table; root nodes hold their prior as the
single row keyed by the empty parent combination. Hard evidence conditions
a node on one state; soft evidence (allowed on roots only) replaces the
root's prior with the supplied distribution, which is exact for roots.

Also builds the concrete flood-risk network: four root nodes feeding two
conditional nodes, with a generated deterministic accessibility table and
a configurable 96-entry risk table checked by a monotonicity validator.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

ROW_SUM_TOL = 1e-9

# fixed state vocabularies of the flood-risk network
RISK_STATES = ("None", "Low", "Medium", "High")
DENSITY_STATES = ("None", "Low", "Medium", "High")
ACCESS_STATES = ("True", "Limited", "False")  # severity-increasing order
BOOL_STATES = ("True", "False")
FACILITY_STATES = ("Present", "Not present")

NODE_REMOTE = "remote_access"
NODE_IMMEDIATE = "immediate_access"
NODE_ACCESS = "unexposed_access"
NODE_DENSITY = "exposed_density"
NODE_FACILITY = "care_facility"
NODE_RISK = "assistance_risk"

# D-2 style generator defaults: base risk vector per density, then a mass
# shift toward High per step of accessibility severity
DEFAULT_CPT_PARAMS = {
    "base": {
        "Low": (0.20, 0.55, 0.20, 0.05),
        "Medium": (0.05, 0.30, 0.45, 0.20),
        "High": (0.00, 0.10, 0.40, 0.50),
    },
    "shift_fraction": 0.3,
    "shifts": {"True": 0, "Limited": 1, "False": 2},
}


def hard(state):
    return ("hard", state)


def soft(vector):
    return ("soft", tuple(float(v) for v in vector))


@dataclass(frozen=True)
class NodeSpec:
    name: str
    states: tuple
    parents: tuple = ()

    def __post_init__(self):
        if len(self.states) < 2:
            raise ValidationError(f"node {self.name!r} needs >= 2 states")
        if len(set(self.states)) != len(self.states):
            raise ValidationError(f"node {self.name!r} has duplicate state labels")


@dataclass(frozen=True)
class ConditionalTable:
    child: str
    rows: dict  # parent-state tuple -> probability tuple over child states


class DiscreteNetwork:
    def __init__(self, nodes, tables, target):
        self.nodes = {n.name: n for n in nodes}
        self.tables = tables
        self.target = target
        self.order = self._toposort()
        self._validate()

    def _toposort(self):
        remaining = dict(self.nodes)
        done = []
        done_set = set()
        while remaining:
            progress = False
            for name in list(remaining):
                node = remaining[name]
                for p in node.parents:
                    if p not in self.nodes:
                        raise ValidationError(
                            f"node {name!r} references unknown parent {p!r}")
                if all(p in done_set for p in node.parents):
                    done.append(name)
                    done_set.add(name)
                    del remaining[name]
                    progress = True
            if not progress:
                raise ValidationError(
                    f"cycle detected among nodes {sorted(remaining)}")
        return done

    def _validate(self):
        if self.target not in self.nodes:
            raise ValidationError(f"unknown target node {self.target!r}")
        for name, node in self.nodes.items():
            table = self.tables.get(name)
            if table is None:
                raise ValidationError(f"node {name!r} has no table/prior")
            expected = list(itertools.product(
                *(self.nodes[p].states for p in node.parents)))
            if set(table.rows) != set(expected):
                raise ValidationError(
                    f"table for {name!r} does not cover all parent combinations "
                    f"({len(table.rows)} rows, expected {len(expected)})")
            for key, row in table.rows.items():
                if len(row) != len(node.states):
                    raise ValidationError(
                        f"table for {name!r}, row {key}: wrong length")
                if any(v < 0 for v in row):
                    raise ValidationError(
                        f"table for {name!r}, row {key}: negative probability")
                if abs(sum(row) - 1.0) > ROW_SUM_TOL:
                    raise ValidationError(
                        f"table for {name!r}, row {key}: probabilities sum to "
                        f"{sum(row)!r}, not 1")

    def roots(self):
        return [n for n in self.order if not self.nodes[n].parents]


def build_network(spec) -> DiscreteNetwork:
    """Build and validate a network from a plain description.

    spec: {"nodes": [{"name", "states", "parents"?}],
           "tables": {name: {parent-state tuple: prob vector}},
           "target": name}
    Root priors go into "tables" keyed by the empty tuple.
    """
    nodes = [NodeSpec(name=n["name"], states=tuple(n["states"]),
                      parents=tuple(n.get("parents", ())))
             for n in spec["nodes"]]
    tables = {}
    for name, rows in spec["tables"].items():
        tables[name] = ConditionalTable(
            child=name,
            rows={tuple(k) if isinstance(k, (list, tuple)) else (k,) if k != () else ():
                  tuple(float(v) for v in row) for k, row in rows.items()})
    return DiscreteNetwork(nodes, tables, spec["target"])


def _check_evidence(net: DiscreteNetwork, evidence):
    roots = set(net.roots())
    for name, entry in evidence.items():
        if name not in net.nodes:
            raise ValidationError(f"evidence on unknown node {name!r}")
        kind, value = entry
        states = net.nodes[name].states
        if kind == "hard":
            if value not in states:
                raise ValidationError(
                    f"unknown state {value!r} for node {name!r}")
        elif kind == "soft":
            if name not in roots:
                raise ValidationError(
                    f"soft evidence only allowed on root nodes, not {name!r}")
            if len(value) != len(states):
                raise ValidationError(
                    f"soft evidence for {name!r}: wrong vector length")
            if any(v < 0 for v in value) or abs(sum(value) - 1.0) > ROW_SUM_TOL:
                raise ValidationError(
                    f"soft evidence for {name!r} is not a distribution")
        else:
            raise ValidationError(f"unknown evidence kind {kind!r}")


def _factors(net: DiscreteNetwork, evidence):
    """One factor per node as (variable names, ndarray), evidence applied."""
    factors = []
    for name in net.order:
        node = net.nodes[name]
        variables = list(node.parents) + [name]
        shape = [len(net.nodes[v].states) for v in variables]
        arr = np.empty(shape)
        table = net.tables[name]
        for key, row in table.rows.items():
            idx = tuple(net.nodes[p].states.index(s) for p, s in zip(node.parents, key))
            arr[idx] = row
        entry = evidence.get(name)
        if entry is not None and entry[0] == "soft":
            arr = np.asarray(entry[1], dtype=float)  # root prior replacement
        factors.append((variables, np.asarray(arr, dtype=float)))
    # hard evidence: zero out non-matching states
    for name, entry in evidence.items():
        if entry[0] != "hard":
            continue
        k = net.nodes[name].states.index(entry[1])
        mask = np.zeros(len(net.nodes[name].states))
        mask[k] = 1.0
        factors.append(([name], mask))
    return factors


def _multiply(f1, f2):
    vars1, a1 = f1
    vars2, a2 = f2
    out_vars = list(vars1) + [v for v in vars2 if v not in vars1]
    ax1 = a1.reshape(a1.shape + (1,) * (len(out_vars) - len(vars1)))
    # transpose/reshape f2 into out_vars axes
    shape2 = [a2.shape[vars2.index(v)] if v in vars2 else 1 for v in out_vars]
    order = [vars2.index(v) for v in out_vars if v in vars2]
    a2t = np.transpose(a2, order).reshape(shape2)
    return (out_vars, ax1 * a2t)


def _sum_out(factor, var):
    variables, arr = factor
    i = variables.index(var)
    return ([v for v in variables if v != var], arr.sum(axis=i))


def infer(net: DiscreteNetwork, evidence) -> tuple:
    """Exact posterior of the target node by variable elimination."""
    _check_evidence(net, evidence)
    factors = _factors(net, evidence)
    for name in net.order:
        if name == net.target:
            continue
        related = [f for f in factors if name in f[0]]
        rest = [f for f in factors if name not in f[0]]
        if not related:
            continue
        merged = related[0]
        for f in related[1:]:
            merged = _multiply(merged, f)
        factors = rest + [_sum_out(merged, name)]
    result = factors[0]
    for f in factors[1:]:
        result = _multiply(result, f)
    variables, arr = result
    if variables != [net.target]:
        order = [variables.index(net.target)]
        arr = np.transpose(arr, order + [i for i in range(arr.ndim) if i not in order])
        arr = arr.reshape(arr.shape[0], -1).sum(axis=1)
    total = arr.sum()
    if total <= 0:
        raise ValidationError("evidence has zero probability under the network")
    return tuple(float(v) for v in arr / total)


def enumerate_joint(net: DiscreteNetwork, evidence, size_cap=4096):
    """Brute-force joint distribution (reference oracle).

    Returns {assignment tuple (state per net.order) -> probability}. With
    hard evidence the inconsistent assignments carry weight 0 and the
    table is left unnormalised.
    """
    _check_evidence(net, evidence)
    sizes = [len(net.nodes[n].states) for n in net.order]
    total = 1
    for s in sizes:
        total *= s
    if total > size_cap:
        raise ValidationError(f"joint of size {total} exceeds cap {size_cap}")
    joint = {}
    for assignment in itertools.product(*(net.nodes[n].states for n in net.order)):
        by_name = dict(zip(net.order, assignment))
        p = 1.0
        for name in net.order:
            node = net.nodes[name]
            entry = evidence.get(name)
            if entry is not None and entry[0] == "soft":
                row = entry[1]
            else:
                key = tuple(by_name[par] for par in node.parents)
                row = net.tables[name].rows[key]
            p *= row[node.states.index(by_name[name])]
            if entry is not None and entry[0] == "hard" and by_name[name] != entry[1]:
                p = 0.0
            if p == 0.0:
                break
        joint[assignment] = p
    return joint


def posterior_from_joint(net: DiscreteNetwork, joint, node_name=None) -> tuple:
    """Marginalise the joint onto one node and normalise."""
    node_name = node_name or net.target
    i = net.order.index(node_name)
    states = net.nodes[node_name].states
    sums = dict.fromkeys(states, 0.0)
    for assignment, p in joint.items():
        sums[assignment[i]] += p
    total = sum(sums.values())
    if total <= 0:
        raise ValidationError("evidence has zero probability under the network")
    return tuple(sums[s] / total for s in states)


# --- flood-risk network -----------------------------------------------------

def _shift_toward_high(vector, fraction):
    """Move `fraction` of each state's mass one step toward the last state."""
    v = list(vector)
    out = [0.0] * len(v)
    for i, p in enumerate(v):
        if i == len(v) - 1:
            out[i] += p
        else:
            out[i] += (1.0 - fraction) * p
            out[i + 1] += fraction * p
    return tuple(out)


def generate_risk_rows(params=None) -> dict:
    """Generate the 24-row (96-value) risk table from compact parameters."""
    params = params or DEFAULT_CPT_PARAMS
    base = params["base"]
    fraction = params["shift_fraction"]
    shifts = params["shifts"]
    rows = {}
    for access in ACCESS_STATES:
        for density in DENSITY_STATES:
            for facility in FACILITY_STATES:
                if facility == "Present":
                    row = (0.0, 0.0, 0.0, 1.0)
                elif density == "None":
                    row = (1.0, 0.0, 0.0, 0.0)
                else:
                    row = tuple(float(x) for x in base[density])
                    for _ in range(int(shifts[access])):
                        row = _shift_toward_high(row, fraction)
                rows[(access, density, facility)] = row
    return rows


def accessibility_rows() -> dict:
    """Deterministic table: both parents True -> True, both False -> False,
    exactly one True -> Limited."""
    rows = {}
    for remote in BOOL_STATES:
        for imm in BOOL_STATES:
            truths = (remote == "True") + (imm == "True")
            state = {2: "True", 1: "Limited", 0: "False"}[truths]
            rows[(remote, imm)] = tuple(
                1.0 if s == state else 0.0 for s in ACCESS_STATES)
    return rows


def validate_risk_table(rows) -> list:
    """Check the risk table against the shipped monotonicity contract.

    Returns a list of violations, each {"kind", "row", "detail"}; kinds:
      non_stochastic        row is not a probability vector
      facility_override     facility Present row must put mass 1 on High
      none_override         density None (facility absent) must put mass 1 on None
      density_dominance     risk must not decrease with density severity
      accessibility_dominance  risk must not decrease with accessibility severity
    """
    violations = []

    def add(kind, row, detail):
        violations.append({"kind": kind, "row": row, "detail": detail})

    expected_keys = set(itertools.product(ACCESS_STATES, DENSITY_STATES, FACILITY_STATES))
    if set(rows) != expected_keys:
        add("coverage", None, f"expected {len(expected_keys)} rows, got {len(rows)}")
        return violations

    for key, row in sorted(rows.items()):
        if len(row) != 4 or any(v < 0 for v in row) or abs(sum(row) - 1.0) > ROW_SUM_TOL:
            add("non_stochastic", key, f"row {tuple(row)} is not a distribution")
    if violations:
        return violations

    for access in ACCESS_STATES:
        for density in DENSITY_STATES:
            key = (access, density, "Present")
            if abs(rows[key][3] - 1.0) > ROW_SUM_TOL:
                add("facility_override", key,
                    "facility Present must force risk High with probability 1")
        key = (access, "None", "Not present")
        if abs(rows[key][0] - 1.0) > ROW_SUM_TOL:
            add("none_override", key,
                "no exposed buildings must force risk None with probability 1")

    def dominates(hi, lo, tol=1e-12):
        """First-order stochastic dominance of hi over lo, toward High."""
        cdf_hi = cdf_lo = 0.0
        for k in range(3):
            cdf_hi += hi[k]
            cdf_lo += lo[k]
            if cdf_hi > cdf_lo + tol:
                return False
        return True

    for access in ACCESS_STATES:
        for lo_d, hi_d in zip(DENSITY_STATES, DENSITY_STATES[1:]):
            lo = rows[(access, lo_d, "Not present")]
            hi = rows[(access, hi_d, "Not present")]
            if not dominates(hi, lo):
                add("density_dominance", (access, hi_d, "Not present"),
                    f"row does not dominate density {lo_d}")
    for density in DENSITY_STATES:
        for lo_a, hi_a in zip(ACCESS_STATES, ACCESS_STATES[1:]):
            lo = rows[(lo_a, density, "Not present")]
            hi = rows[(hi_a, density, "Not present")]
            if not dominates(hi, lo):
                add("accessibility_dominance", (hi_a, density, "Not present"),
                    f"row does not dominate accessibility {lo_a}")
    return violations


def build_risk_network(cpt_config_path=None) -> DiscreteNetwork:
    """The concrete six-node network with validated risk table.

    Root priors are uniform placeholders; the pipeline always supplies
    evidence for all four roots.
    """
    if cpt_config_path is None:
        risk_rows = generate_risk_rows()
    else:
        risk_rows = load_cpt_config(cpt_config_path)
    violations = validate_risk_table(risk_rows)
    if violations:
        lines = "; ".join(f"{v['kind']} at {v['row']}" for v in violations[:10])
        raise ValidationError(f"risk table fails validation: {lines}")

    nodes = [
        NodeSpec(NODE_REMOTE, BOOL_STATES),
        NodeSpec(NODE_IMMEDIATE, BOOL_STATES),
        NodeSpec(NODE_ACCESS, ACCESS_STATES, (NODE_REMOTE, NODE_IMMEDIATE)),
        NodeSpec(NODE_DENSITY, DENSITY_STATES),
        NodeSpec(NODE_FACILITY, FACILITY_STATES),
        NodeSpec(NODE_RISK, RISK_STATES, (NODE_ACCESS, NODE_DENSITY, NODE_FACILITY)),
    ]
    tables = {
        NODE_REMOTE: ConditionalTable(NODE_REMOTE, {(): (0.5, 0.5)}),
        NODE_IMMEDIATE: ConditionalTable(NODE_IMMEDIATE, {(): (0.5, 0.5)}),
        NODE_DENSITY: ConditionalTable(NODE_DENSITY, {(): (0.25, 0.25, 0.25, 0.25)}),
        NODE_FACILITY: ConditionalTable(NODE_FACILITY, {(): (0.5, 0.5)}),
        NODE_ACCESS: ConditionalTable(NODE_ACCESS, accessibility_rows()),
        NODE_RISK: ConditionalTable(NODE_RISK, risk_rows),
    }
    return DiscreteNetwork(nodes, tables, NODE_RISK)


# --- cpt config file --------------------------------------------------------

def save_cpt_config(path, rows=None, params=None):
    """Write either explicit rows or generator parameters; json round-trips
    floats bit-exactly."""
    if (rows is None) == (params is None):
        raise ValidationError("pass exactly one of rows/params")
    if params is not None:
        doc = {"mode": "generator",
               "params": {"base": {k: list(v) for k, v in params["base"].items()},
                          "shift_fraction": params["shift_fraction"],
                          "shifts": dict(params["shifts"])}}
    else:
        doc = {"mode": "explicit",
               "rows": [{"access": a, "density": d, "facility": f,
                         "p": list(rows[(a, d, f)])}
                        for a, d, f in sorted(rows)]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)


def load_cpt_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read cpt config {path}: {exc}") from None
    mode = doc.get("mode")
    if mode == "generator":
        p = doc["params"]
        params = {"base": {k: tuple(v) for k, v in p["base"].items()},
                  "shift_fraction": float(p["shift_fraction"]),
                  "shifts": {k: int(v) for k, v in p["shifts"].items()}}
        return generate_risk_rows(params)
    if mode == "explicit":
        rows = {}
        for r in doc["rows"]:
            rows[(r["access"], r["density"], r["facility"])] = tuple(
                float(v) for v in r["p"])
        return rows
    raise ValidationError(f"cpt config {path}: unknown mode {mode!r}")

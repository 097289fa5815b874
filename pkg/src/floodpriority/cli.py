"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 not found, 4 internal error.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import NotFoundError, StageError, ValidationError
from .pipeline import ScenarioStore, load_config
from .prioritizer import WeightVector


def _store(root):
    return ScenarioStore(root)


def _fail(exc):
    cause = exc.cause if isinstance(exc, StageError) else exc
    click.echo(f"error: {exc}", err=True)
    if isinstance(cause, ValidationError):
        sys.exit(2)
    if isinstance(cause, NotFoundError):
        sys.exit(3)
    sys.exit(4)


@click.group()
@click.option("--store", "store_root", default="scenarios",
              show_default=True, help="Scenario storage directory.")
@click.pass_context
def main(ctx, store_root):
    """Flood-response area prioritisation engine."""
    ctx.obj = store_root


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.pass_obj
def run(store_root, config_path):
    """Run a full scenario from a config file."""
    try:
        cfg = load_config(config_path)
        manifest = _store(store_root).run_scenario(cfg)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        _fail(exc)
    click.echo(json.dumps({"scenario_id": manifest["scenario_id"],
                           "version": manifest["version"],
                           "counts": manifest["counts"]}))


@main.command("update-flood")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--flood", "flood_path", required=True, type=click.Path())
@click.pass_obj
def update_flood(store_root, scenario_id, flood_path):
    """Re-run the pipeline against a new flood snapshot."""
    try:
        manifest = _store(store_root).update_flood(scenario_id, flood_path)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(json.dumps({"scenario_id": scenario_id,
                           "version": manifest["version"],
                           "counts": manifest["counts"]}))


@main.command("update-weights")
@click.option("--scenario", "scenario_id", required=True)
@click.option("--weights", "weights_csv", required=True,
              help="Comma-separated w_none,w_low,w_medium,w_high.")
@click.pass_obj
def update_weights(store_root, scenario_id, weights_csv):
    """Re-score stored posteriors with new weights (no GIS/BN recompute)."""
    try:
        parts = [float(v) for v in weights_csv.split(",")]
        if len(parts) != 4:
            raise ValidationError("--weights needs exactly 4 values")
        manifest = _store(store_root).update_weights(scenario_id, WeightVector(*parts))
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(json.dumps({"scenario_id": scenario_id,
                           "version": manifest["version"],
                           "counts": manifest["counts"]}))


@main.command()
@click.option("--scenario", "scenario_id", required=True)
@click.option("--version", "version", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_obj
def export(store_root, scenario_id, version, out_path):
    """Write a version's priority map GeoJSON to a file."""
    try:
        data = _store(store_root).get_priomap_bytes(scenario_id, version)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    with open(out_path, "wb") as fh:
        fh.write(data)
    click.echo(out_path)


@main.command()
@click.option("--scenario", "scenario_id", required=True)
@click.option("--version", "version", type=int, default=None)
@click.pass_obj
def summary(store_root, scenario_id, version):
    """Per-category counts, thresholds, and cluster centroids."""
    try:
        doc = _store(store_root).get_summary(scenario_id, version)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    click.echo(json.dumps(doc, indent=1, sort_keys=True))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.pass_obj
def serve(store_root, host, port):
    """Start the HTTP API (and map console, if built)."""
    import uvicorn

    from .api import create_app
    uvicorn.run(create_app(store_root), host=host, port=port)


if __name__ == "__main__":
    main()

"""Flood-response area prioritisation engine.

Pipeline: hexagonal tiling of the study area, GeoJSON ingest of flood /
buildings / care facilities / roads, four per-tile GIS evidence models,
exact discrete Bayesian network inference of a four-state risk posterior,
criticality scoring, and 1-D clustering into priority categories, exposed
through a versioned scenario store with CLI and HTTP interfaces.
"""

__version__ = "0.1.0"

"""Uniform hexagonal tiling of a rectangular study region.

Pointy-top hexagons on axial coordinates (q, r). ``max_width`` is the
corner-to-corner diameter of one hexagon, i.e. twice the circumradius,
so the per-tile area is (3*sqrt(3)/8) * max_width**2.

Tiles overhang the bounding box rather than being clipped, keeping all
tiles congruent; a tile belongs to the grid iff its hexagon overlaps
the bounding box with positive area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotFoundError, ValidationError
from .geometry import clip_ring_convex, point_in_convex, ring_area

SQRT3 = math.sqrt(3.0)

# 1-ring axial offsets, fixed order (E, NE, NW, W, SW, SE in pointy-top terms)
AXIAL_DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


@dataclass(frozen=True)
class Tile:
    id: str
    axial: tuple[int, int]
    polygon: tuple[tuple[float, float], ...]
    centroid: tuple[float, float]


@dataclass(frozen=True)
class HexGrid:
    origin: tuple[float, float]
    max_width: float
    bbox: tuple[float, float, float, float]
    tiles: tuple[Tile, ...]
    index: dict  # axial -> tile id

    @property
    def circumradius(self) -> float:
        return self.max_width / 2.0

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {t.id: t for t in self.tiles})

    def get(self, tile_id: str) -> Tile:
        try:
            return self._by_id[tile_id]
        except KeyError:
            raise NotFoundError(f"unknown tile id {tile_id!r}") from None


def tile_id_for_axial(q: int, r: int) -> str:
    return f"{q},{r}"


def _hex_center(origin, radius, q, r):
    ox, oy = origin
    return (ox + SQRT3 * radius * (q + r / 2.0), oy + 1.5 * radius * r)


def _hex_polygon(center, radius):
    cx, cy = center
    verts = []
    # CCW, starting at the east-most upper vertex (30 degrees)
    for k in range(6):
        ang = math.radians(30.0 + 60.0 * k)
        verts.append((cx + radius * math.cos(ang), cy + radius * math.sin(ang)))
    return tuple(verts)


def build_grid(bbox, max_width) -> HexGrid:
    """Tile the bbox (minx, miny, maxx, maxy) with hexagons of the given width.

    Ordering is row-major over axial coordinates: sorted by r, then q.
    """
    minx, miny, maxx, maxy = bbox
    if not (max_width > 0):
        raise ValidationError(f"max_width must be positive, got {max_width}")
    if not (maxx > minx):
        raise ValidationError(f"bbox has non-positive width: {minx}..{maxx}")
    if not (maxy > miny):
        raise ValidationError(f"bbox has non-positive height: {miny}..{maxy}")

    radius = max_width / 2.0
    origin = (minx, miny)
    rect = ((minx, miny), (maxx, miny), (maxx, maxy), (minx, maxy))

    # candidate axial ranges with margin, filtered by exact overlap
    r_lo = math.floor((0.0 - radius) / (1.5 * radius)) - 1
    r_hi = math.ceil(((maxy - miny) + radius) / (1.5 * radius)) + 1
    tiles = []
    index = {}
    for r in range(r_lo, r_hi + 1):
        q_lo = math.floor(((0.0 - SQRT3 * radius) / (SQRT3 * radius)) - r / 2.0) - 1
        q_hi = math.ceil((((maxx - minx) + SQRT3 * radius) / (SQRT3 * radius)) - r / 2.0) + 1
        for q in range(q_lo, q_hi + 1):
            center = _hex_center(origin, radius, q, r)
            poly = _hex_polygon(center, radius)
            clipped = clip_ring_convex(poly, rect)
            if len(clipped) >= 3 and ring_area(clipped) > 1e-9:
                tile = Tile(id=tile_id_for_axial(q, r), axial=(q, r),
                            polygon=poly, centroid=center)
                tiles.append(tile)
                index[(q, r)] = tile.id
    return HexGrid(origin=origin, max_width=max_width, bbox=tuple(bbox),
                   tiles=tuple(tiles), index=index)


def neighbors(grid: HexGrid, tile_id: str) -> list[str]:
    """Ids of the 1-ring neighbours present in the grid, fixed direction order."""
    tile = grid.get(tile_id)
    q, r = tile.axial
    out = []
    for dq, dr in AXIAL_DIRECTIONS:
        nid = grid.index.get((q + dq, r + dr))
        if nid is not None:
            out.append(nid)
    return out


def locate(grid: HexGrid, p) -> str | None:
    """Tile whose closed hexagon contains p, or None.

    On shared edges/vertices the tile with the lexicographically smallest
    axial coordinate wins.
    """
    radius = grid.circumradius
    x = p[0] - grid.origin[0]
    y = p[1] - grid.origin[1]
    qf = (SQRT3 / 3.0 * x - y / 3.0) / radius
    rf = (2.0 / 3.0 * y) / radius
    q0, r0 = _axial_round(qf, rf)
    candidates = [(q0, r0)] + [(q0 + dq, r0 + dr) for dq, dr in AXIAL_DIRECTIONS]
    hits = []
    for qr in candidates:
        tid = grid.index.get(qr)
        if tid is None:
            continue
        center = _hex_center(grid.origin, radius, *qr)
        if point_in_convex(p, _hex_polygon(center, radius)):
            hits.append(qr)
    if not hits:
        return None
    return grid.index[min(hits)]


def _axial_round(qf, rf):
    sf = -qf - rf
    q = round(qf)
    r = round(rf)
    s = round(sf)
    dq, dr, ds = abs(q - qf), abs(r - rf), abs(s - sf)
    if dq > dr and dq > ds:
        q = -r - s
    elif dr > ds:
        r = -q - s
    return int(q), int(r)


def tile_polygon(grid: HexGrid, tile_id: str):
    """6-vertex CCW polygon of the tile."""
    return grid.get(tile_id).polygon

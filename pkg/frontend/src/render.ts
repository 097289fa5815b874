/** Hex choropleth rendering: SVG polygons with a fixed category palette,
 * a legend with per-category counts, and a version badge. */

import { CATEGORIES, isPrioMapDoc } from "./types";
import type { Category, PrioMapDoc } from "./types";

export const PALETTE: Record<Category, string> = {
  HighPriority: "#d7191c", // red
  Priority: "#fd8d3c", // orange
  Exposed: "#ffd92f", // yellow
  Safe: "#bdbdbd", // muted grey
};

/** Okabe-Ito based alternative for colour-blind viewers. */
export const PALETTE_CB: Record<Category, string> = {
  HighPriority: "#d55e00",
  Priority: "#0072b2",
  Exposed: "#f0e442",
  Safe: "#bdbdbd",
};

const SVG_NS = "http://www.w3.org/2000/svg";

function showError(container: HTMLElement, message: string): void {
  let banner = container.querySelector<HTMLElement>(".error-banner");
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    container.prepend(banner);
  }
  banner.textContent = message;
}

function clearError(container: HTMLElement): void {
  container.querySelector(".error-banner")?.remove();
}

/**
 * Replace the map inside `container` with the document's tiles. On a
 * schema mismatch the previous map is retained and an error banner shown.
 * Returns the number of tile polygons rendered, or null on rejection.
 */
export function renderPriomap(
  container: HTMLElement,
  doc: unknown,
  options: { colourBlind?: boolean; onSelect?: (tileId: string) => void } = {},
): number | null {
  if (!isPrioMapDoc(doc)) {
    showError(container, "Received a document that is not a priority map; keeping the previous map.");
    return null;
  }
  clearError(container);
  const palette = options.colourBlind ? PALETTE_CB : PALETTE;

  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const f of doc.features) {
    for (const [x, y] of f.geometry.coordinates[0]) {
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
  }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "priomap");
  svg.setAttribute(
    "viewBox",
    `${minX} ${minY} ${maxX - minX} ${maxY - minY}`,
  );
  for (const f of doc.features) {
    const polygon = document.createElementNS(SVG_NS, "polygon");
    // flip y: map coordinates grow north, SVG grows down
    const points = f.geometry.coordinates[0]
      .map(([x, y]) => `${x},${minY + maxY - y}`)
      .join(" ");
    polygon.setAttribute("points", points);
    polygon.setAttribute("fill", palette[f.properties.category]);
    polygon.setAttribute("data-tile-id", f.properties.tile_id);
    polygon.setAttribute("data-category", f.properties.category);
    if (options.onSelect) {
      polygon.addEventListener("click", () =>
        options.onSelect!(f.properties.tile_id),
      );
    }
    svg.appendChild(polygon);
  }

  container.querySelector("svg.priomap")?.remove();
  container.querySelector(".legend")?.remove();
  container.querySelector(".version-badge")?.remove();

  const badge = document.createElement("div");
  badge.className = "version-badge";
  badge.textContent = `version ${doc.version}`;
  container.appendChild(badge);
  container.appendChild(svg);
  container.appendChild(buildLegend(doc, palette));
  return doc.features.length;
}

function buildLegend(
  doc: PrioMapDoc,
  palette: Record<Category, string>,
): HTMLElement {
  const legend = document.createElement("ul");
  legend.className = "legend";
  for (const cat of CATEGORIES) {
    const item = document.createElement("li");
    item.dataset.category = cat;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = palette[cat];
    const label = document.createElement("span");
    label.className = "count";
    label.textContent = `${cat}: ${doc.counts[cat] ?? 0}`;
    item.append(swatch, label);
    legend.appendChild(item);
  }
  return legend;
}

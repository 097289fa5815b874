/** Shapes of the service's JSON documents, as consumed by the console. */

export type Category = "HighPriority" | "Priority" | "Exposed" | "Safe";

export const CATEGORIES: Category[] = [
  "HighPriority",
  "Priority",
  "Exposed",
  "Safe",
];

export interface TileProperties {
  tile_id: string;
  category: Category;
  pdc: number;
  p_none: number;
  p_low: number;
  p_medium: number;
  p_high: number;
}

export interface TileFeature {
  type: "Feature";
  id: string;
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: TileProperties;
}

export interface PrioMapDoc {
  type: "FeatureCollection";
  features: TileFeature[];
  scenario_id: string;
  version: number;
  flood_version_tag: string;
  weights: number[];
  centroids: number[];
  counts: Record<Category, number>;
  meta: Record<string, unknown>;
}

export interface TileDetail {
  scenario_id: string;
  version: number;
  tile_id: string;
  evidence: {
    density: string;
    facility_exposed: boolean;
    immediate_unexposed: number;
    remote_accessible: boolean;
    exposed_count: number;
  };
  posterior: number[];
  pdc: number;
  category: Category;
}

export interface Summary {
  scenario_id: string;
  version: number;
  counts: Record<Category, number>;
  centroids: number[];
  weights: number[];
  flood_version_tag: string;
  thresholds: Record<string, unknown>;
}

export interface MutationResult {
  scenario_id: string;
  version: number;
  counts: Record<Category, number>;
}

/** Runtime check that a fetched document is a priority-map collection. */
export function isPrioMapDoc(doc: unknown): doc is PrioMapDoc {
  if (typeof doc !== "object" || doc === null) return false;
  const d = doc as Record<string, unknown>;
  if (d.type !== "FeatureCollection" || !Array.isArray(d.features)) return false;
  if (typeof d.version !== "number") return false;
  return d.features.every((f: unknown) => {
    if (typeof f !== "object" || f === null) return false;
    const feat = f as Record<string, any>;
    return (
      feat.geometry?.type === "Polygon" &&
      Array.isArray(feat.geometry.coordinates) &&
      CATEGORIES.includes(feat.properties?.category) &&
      typeof feat.properties?.pdc === "number"
    );
  });
}

/** Thin client for the scenario service; the console never computes risk
 * itself, every displayed number comes from these endpoints. */

import type { MutationResult, PrioMapDoc, Summary, TileDetail } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      /* non-JSON error body; keep the status text */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async listScenarios(): Promise<string[]> {
    const doc = await asJson<{ scenarios: string[] }>(
      await fetch(this.url("/scenarios")),
    );
    return doc.scenarios;
  }

  async versions(scenarioId: string): Promise<number[]> {
    const doc = await asJson<{ versions: number[] }>(
      await fetch(this.url(`/scenarios/${scenarioId}/versions`)),
    );
    return doc.versions;
  }

  async priomap(scenarioId: string, version?: number): Promise<PrioMapDoc> {
    const query = version === undefined ? "" : `?version=${version}`;
    return asJson(
      await fetch(this.url(`/scenarios/${scenarioId}/priomap${query}`)),
    );
  }

  async tileDetail(
    scenarioId: string,
    tileId: string,
    version?: number,
  ): Promise<TileDetail> {
    const query = version === undefined ? "" : `?version=${version}`;
    return asJson(
      await fetch(
        this.url(
          `/scenarios/${scenarioId}/tiles/${encodeURIComponent(tileId)}${query}`,
        ),
      ),
    );
  }

  async summary(scenarioId: string, version?: number): Promise<Summary> {
    const query = version === undefined ? "" : `?version=${version}`;
    return asJson(
      await fetch(this.url(`/scenarios/${scenarioId}/summary${query}`)),
    );
  }

  async patchWeights(
    scenarioId: string,
    weights: number[],
  ): Promise<MutationResult> {
    return asJson(
      await fetch(this.url(`/scenarios/${scenarioId}/weights`), {
        method: "PATCH",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ weights }),
      }),
    );
  }

  async uploadFlood(scenarioId: string, file: Blob): Promise<MutationResult> {
    const form = new FormData();
    form.append("flood", file, "flood.geojson");
    return asJson(
      await fetch(this.url(`/scenarios/${scenarioId}/flood`), {
        method: "POST",
        body: form,
      }),
    );
  }
}

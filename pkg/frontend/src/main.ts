/** Console wiring: one scenario on screen, versioned navigation, controls
 * that round-trip through the service before anything re-renders. */

import { ApiClient, ApiError } from "./api";
import { buildControls, defaultControls } from "./controls";
import { renderInspector, renderInspectorError } from "./inspector";
import { renderPriomap } from "./render";

export interface ViewState {
  scenarioId: string | null;
  version: number | null;
  selectedTile: string | null;
  colourBlind: boolean;
}

export class Console {
  readonly view: ViewState = {
    scenarioId: null,
    version: null,
    selectedTile: null,
    colourBlind: false,
  };
  private readonly controls = defaultControls();

  constructor(
    private readonly api: ApiClient,
    private readonly mapEl: HTMLElement,
    private readonly inspectorEl: HTMLElement,
    private readonly controlsEl: HTMLElement,
    private readonly versionsEl: HTMLSelectElement,
  ) {
    buildControls(this.controlsEl, this.controls, {
      onApplyWeights: (weights) => void this.applyWeights(weights),
      onUploadFlood: (file) => void this.uploadFlood(file),
    });
    this.versionsEl.addEventListener("change", () => {
      const v = Number(this.versionsEl.value);
      if (Number.isInteger(v)) void this.showVersion(v);
    });
  }

  async open(scenarioId: string): Promise<void> {
    this.view.scenarioId = scenarioId;
    await this.refreshVersions();
    await this.showVersion(null);
  }

  /** Render a specific version, or the latest when null. */
  async showVersion(version: number | null): Promise<void> {
    if (!this.view.scenarioId) return;
    const doc = await this.api.priomap(
      this.view.scenarioId,
      version ?? undefined,
    );
    const rendered = renderPriomap(this.mapEl, doc, {
      colourBlind: this.view.colourBlind,
      onSelect: (tileId) => void this.selectTile(tileId),
    });
    if (rendered !== null) {
      this.view.version = doc.version;
      this.versionsEl.value = String(doc.version);
    }
  }

  async selectTile(tileId: string): Promise<void> {
    if (!this.view.scenarioId) return;
    this.view.selectedTile = tileId;
    try {
      const detail = await this.api.tileDetail(
        this.view.scenarioId,
        tileId,
        this.view.version ?? undefined,
      );
      renderInspector(this.inspectorEl, detail);
    } catch (err) {
      renderInspectorError(
        this.inspectorEl,
        err instanceof ApiError ? err.message : "Tile lookup failed",
        () => void this.selectTile(tileId),
      );
    }
  }

  async applyWeights(weights: number[]): Promise<void> {
    if (!this.view.scenarioId) return;
    try {
      const result = await this.api.patchWeights(this.view.scenarioId, weights);
      await this.refreshVersions();
      await this.showVersion(result.version);
    } catch (err) {
      this.showControlError(err);
    }
  }

  async uploadFlood(file: Blob): Promise<void> {
    if (!this.view.scenarioId) return;
    try {
      const result = await this.api.uploadFlood(this.view.scenarioId, file);
      await this.refreshVersions();
      await this.showVersion(result.version);
    } catch (err) {
      this.showControlError(err);
    }
  }

  setColourBlind(on: boolean): Promise<void> {
    this.view.colourBlind = on;
    return this.showVersion(this.view.version);
  }

  private async refreshVersions(): Promise<void> {
    if (!this.view.scenarioId) return;
    const versions = await this.api.versions(this.view.scenarioId);
    this.versionsEl.replaceChildren(
      ...versions.map((v) => {
        const option = document.createElement("option");
        option.value = String(v);
        option.textContent = `v${v}`;
        return option;
      }),
    );
  }

  private showControlError(err: unknown): void {
    const box = this.controlsEl.querySelector(".weights-error");
    if (box) {
      box.textContent =
        err instanceof ApiError ? err.message : "Request failed";
    }
  }
}

export function boot(): void {
  const api = new ApiClient("");
  const console_ = new Console(
    api,
    document.getElementById("map")!,
    document.getElementById("inspector")!,
    document.getElementById("controls")!,
    document.getElementById("versions") as HTMLSelectElement,
  );
  const toggle = document.getElementById("cb-toggle") as HTMLInputElement | null;
  toggle?.addEventListener("change", () =>
    void console_.setColourBlind(toggle.checked),
  );
  void api.listScenarios().then((ids) => {
    if (ids.length > 0) return console_.open(ids[0]);
  });
}

if (typeof document !== "undefined" && document.getElementById("map")) {
  boot();
}

/** Parameter controls: weight sliders, percentile inputs, flood upload.
 * Optimistic UI is deliberately off — every change waits for the server's
 * authoritative new version before the map is replaced. */

export interface ControlState {
  weights: [number, number, number, number];
  percentiles: [number, number];
  pendingFlood: Blob | null;
}

export function defaultControls(): ControlState {
  return {
    weights: [0, 0.33, 0.66, 1.0],
    percentiles: [0.75, 0.9],
    pendingFlood: null,
  };
}

/** Weights must be non-decreasing; returns a reason or null when valid. */
export function weightsProblem(weights: number[]): string | null {
  if (weights.length !== 4 || weights.some((w) => !Number.isFinite(w))) {
    return "four numeric weights are required";
  }
  for (let i = 1; i < weights.length; i++) {
    if (weights[i] < weights[i - 1]) {
      return "weights must not decrease from None to High";
    }
  }
  return null;
}

/** Percentile levels must be strictly increasing inside (0, 1). */
export function percentilesProblem(levels: number[]): string | null {
  if (levels.length !== 2 || levels.some((p) => !Number.isFinite(p))) {
    return "two numeric percentile levels are required";
  }
  const [lo, hi] = levels;
  if (!(0 < lo && lo < hi && hi < 1)) {
    return "percentile levels must satisfy 0 < medium < high < 1";
  }
  return null;
}

export interface ControlsCallbacks {
  onApplyWeights: (weights: number[]) => void;
  onUploadFlood: (file: Blob) => void;
}

/** Build the control strip; invalid input disables apply and shows why. */
export function buildControls(
  container: HTMLElement,
  state: ControlState,
  callbacks: ControlsCallbacks,
): void {
  container.replaceChildren();

  const weightLabels = ["None", "Low", "Medium", "High"];
  const weightInputs: HTMLInputElement[] = [];
  const weightsBox = document.createElement("fieldset");
  weightsBox.className = "weights";
  for (let i = 0; i < 4; i++) {
    const label = document.createElement("label");
    label.textContent = weightLabels[i];
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "2";
    input.step = "0.01";
    input.value = String(state.weights[i]);
    input.dataset.weight = weightLabels[i].toLowerCase();
    label.appendChild(input);
    weightInputs.push(input);
    weightsBox.appendChild(label);
  }
  const weightsError = document.createElement("span");
  weightsError.className = "weights-error";
  const applyButton = document.createElement("button");
  applyButton.className = "apply-weights";
  applyButton.textContent = "Apply weights";

  const readWeights = () => weightInputs.map((i) => Number(i.value));
  const revalidate = () => {
    const problem = weightsProblem(readWeights());
    weightsError.textContent = problem ?? "";
    applyButton.disabled = problem !== null;
  };
  weightInputs.forEach((i) => i.addEventListener("input", revalidate));
  applyButton.addEventListener("click", () => {
    const weights = readWeights();
    if (weightsProblem(weights) === null) callbacks.onApplyWeights(weights);
  });
  weightsBox.append(applyButton, weightsError);
  container.appendChild(weightsBox);

  const pctBox = document.createElement("fieldset");
  pctBox.className = "percentiles";
  const pctError = document.createElement("span");
  pctError.className = "percentiles-error";
  const pctInputs = state.percentiles.map((p, i) => {
    const input = document.createElement("input");
    input.type = "number";
    input.step = "0.01";
    input.value = String(p);
    input.dataset.percentile = i === 0 ? "medium" : "high";
    input.addEventListener("input", () => {
      pctError.textContent =
        percentilesProblem(pctInputs.map((x) => Number(x.value))) ?? "";
    });
    pctBox.appendChild(input);
    return input;
  });
  pctBox.appendChild(pctError);
  container.appendChild(pctBox);

  const uploadBox = document.createElement("fieldset");
  uploadBox.className = "flood-upload";
  const fileInput = document.createElement("input");
  fileInput.type = "file";
  fileInput.accept = ".geojson,application/geo+json,application/json";
  const uploadButton = document.createElement("button");
  uploadButton.className = "upload-flood";
  uploadButton.textContent = "Upload flood snapshot";
  uploadButton.addEventListener("click", () => {
    const file = state.pendingFlood ?? fileInput.files?.[0] ?? null;
    if (file) callbacks.onUploadFlood(file);
  });
  fileInput.addEventListener("change", () => {
    state.pendingFlood = fileInput.files?.[0] ?? null;
  });
  uploadBox.append(fileInput, uploadButton);
  container.appendChild(uploadBox);
}

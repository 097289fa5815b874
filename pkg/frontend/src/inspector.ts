/** Tile inspector: posterior bars, criticality score, and the four
 * evidence values behind them. */

import type { TileDetail } from "./types";

const STATE_LABELS = ["None", "Low", "Medium", "High"] as const;

export function renderInspector(panel: HTMLElement, detail: TileDetail): void {
  panel.replaceChildren();
  panel.querySelector(".inspector-error")?.remove();

  const title = document.createElement("h3");
  title.textContent = `Tile ${detail.tile_id} — ${detail.category}`;
  panel.appendChild(title);

  const bars = document.createElement("div");
  bars.className = "posterior-bars";
  detail.posterior.forEach((p, i) => {
    const row = document.createElement("div");
    row.className = "bar-row";
    row.dataset.state = STATE_LABELS[i];
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.width = `${(p * 100).toFixed(1)}%`;
    bar.dataset.value = String(p);
    const label = document.createElement("span");
    label.textContent = `${STATE_LABELS[i]}: ${(p * 100).toFixed(1)}%`;
    row.append(bar, label);
    bars.appendChild(row);
  });
  panel.appendChild(bars);

  const score = document.createElement("p");
  score.className = "pdc";
  score.textContent = `Criticality: ${detail.pdc.toFixed(4)}`;
  panel.appendChild(score);

  const ev = detail.evidence;
  const list = document.createElement("dl");
  list.className = "evidence";
  const entries: [string, string][] = [
    ["Exposed-building density", ev.density],
    ["Exposed buildings", String(ev.exposed_count)],
    ["Care facility exposed", ev.facility_exposed ? "yes" : "no"],
    ["Nearby unflooded share", ev.immediate_unexposed.toFixed(3)],
    ["Escape route on road network", ev.remote_accessible ? "open" : "cut off"],
  ];
  for (const [term, value] of entries) {
    const dt = document.createElement("dt");
    dt.textContent = term;
    const dd = document.createElement("dd");
    dd.textContent = value;
    list.append(dt, dd);
  }
  panel.appendChild(list);
}

/** Fetch failures keep the panel usable: show the message and a retry hook. */
export function renderInspectorError(
  panel: HTMLElement,
  message: string,
  retry: () => void,
): void {
  panel.querySelector(".inspector-error")?.remove();
  const box = document.createElement("div");
  box.className = "inspector-error";
  const text = document.createElement("span");
  text.textContent = message;
  const button = document.createElement("button");
  button.textContent = "Retry";
  button.addEventListener("click", retry);
  box.append(text, button);
  panel.appendChild(box);
}

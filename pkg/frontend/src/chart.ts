// Categorical status chart: one clickable segment per nonzero status plus a
// legend. Clicking a category hands its status back to the caller, which
// applies it as the table filter.

import { el } from "./dom.js";
import { STATUSES } from "./types.js";

export function statusChart(
  counts: Record<string, number>,
  onSelect: (status: string) => void,
): HTMLElement {
  const total = Object.values(counts).reduce((a, b) => a + b, 0);
  const bar = el("div", { class: "chart" });
  const legend = el("ul", { class: "legend" });
  for (const status of STATUSES) {
    const count = counts[status] ?? 0;
    if (count === 0) continue;
    const share = total === 0 ? 0 : (count / total) * 100;
    const segment = el("div", {
      class: `segment seg-${status}`,
      title: `${status}: ${count}`,
      data: { status, count: String(count) },
      onClick: () => onSelect(status),
    });
    segment.style.width = `${share}%`;
    bar.append(segment);
    legend.append(
      el(
        "li",
        { data: { status }, onClick: () => onSelect(status) },
        el("span", { class: `dot seg-${status}` }),
        el("span", { text: `${status} ` }),
        el("strong", { text: String(count) }),
      ),
    );
  }
  return el("div", { class: "status-chart" }, bar, legend);
}

// Unified-diff rendering with per-line coloring. The patch text is stored
// verbatim server-side; this only colors lines, it never parses hunks.

import { el, placeholder } from "./dom.js";

function lineClass(line: string): string {
  if (line.startsWith("+++") || line.startsWith("---")) return "meta";
  if (line.startsWith("@@")) return "hunk";
  if (line.startsWith("+")) return "add";
  if (line.startsWith("-")) return "del";
  if (line.startsWith("diff ") || line.startsWith("index ")) return "meta";
  return "ctx";
}

export function diffView(patch: string | null): HTMLElement {
  if (patch === null || patch.trim() === "") {
    return el("div", {}, placeholder("absent"));
  }
  const pre = el("pre", { class: "diff" });
  for (const line of patch.split("\n")) {
    pre.append(el("span", { class: lineClass(line), text: line }), "\n");
  }
  return pre;
}

// Small DOM construction helpers; no framework, no templates.

export interface Attrs {
  class?: string;
  text?: string;
  href?: string;
  title?: string;
  type?: string;
  value?: string;
  disabled?: boolean;
  checked?: boolean;
  data?: Record<string, string>;
  onClick?: (event: MouseEvent) => void;
  onChange?: (event: Event) => void;
}

export function el(tag: string, attrs: Attrs = {}, ...children: (Node | string)[]): HTMLElement {
  const node = document.createElement(tag);
  if (attrs.class) node.className = attrs.class;
  if (attrs.text !== undefined) node.textContent = attrs.text;
  if (attrs.href !== undefined) (node as HTMLAnchorElement).href = attrs.href;
  if (attrs.title !== undefined) node.title = attrs.title;
  if (attrs.type !== undefined) (node as HTMLInputElement).type = attrs.type;
  if (attrs.value !== undefined) (node as HTMLInputElement).value = attrs.value;
  if (attrs.disabled) (node as HTMLButtonElement).disabled = true;
  if (attrs.checked) (node as HTMLInputElement).checked = true;
  if (attrs.data) {
    for (const [key, value] of Object.entries(attrs.data)) node.dataset[key] = value;
  }
  if (attrs.onClick) node.addEventListener("click", attrs.onClick);
  if (attrs.onChange) node.addEventListener("change", attrs.onChange);
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Display mapping for a resolved-rate fraction served by the API. */
export function fmtPct(rate: number | null): string {
  if (rate === null) return "-";
  return `${(rate * 100).toFixed(1)}%`;
}

export function fmtBytes(size: number): string {
  if (size < 1024) return `${size} B`;
  if (size < 1024 * 1024) return `${(size / 1024).toFixed(1)} KiB`;
  return `${(size / (1024 * 1024)).toFixed(1)} MiB`;
}

export function statusBadge(status: string): HTMLElement {
  return el("span", { class: `badge s-${status}`, text: status });
}

export function placeholder(label: string): HTMLElement {
  return el("span", { class: "placeholder", text: label });
}

export function errorBox(err: unknown, retry: () => void): HTMLElement {
  const code = err instanceof Error && "code" in err ? String((err as { code: unknown }).code) : "error";
  const message = err instanceof Error ? err.message : String(err);
  return el(
    "div",
    { class: "error-box", data: { code } },
    el("div", {}, el("code", { text: code }), ` ${message}`),
    el("button", { text: "Retry", onClick: retry }),
  );
}

import { renderRoute } from "../src/main.js";
import { decodeHash, type Navigate, type ViewState } from "../src/state.js";

export interface Mounted {
  root: HTMLElement;
  navigations: ViewState[];
}

/** Render a view with a recording navigate spy (no live router). */
export async function mount(state: ViewState): Promise<Mounted> {
  const root = document.createElement("div");
  document.body.append(root);
  const navigations: ViewState[] = [];
  const navigate: Navigate = (next) => {
    navigations.push(next);
  };
  await renderRoute(root, state, navigate);
  return { root, navigations };
}

/** Render straight from a URL hash, as a reload would. */
export async function mountHash(hash: string): Promise<Mounted> {
  return mount(decodeHash(hash));
}

export function texts(root: HTMLElement, selector: string): string[] {
  return [...root.querySelectorAll(selector)].map((node) => node.textContent ?? "");
}

export function field(root: HTMLElement, name: string): string {
  const node = root.querySelector(`[data-field="${name}"] .value`) ?? root.querySelector(`[data-field="${name}"]`);
  if (!node) throw new Error(`no [data-field=${name}] in view`);
  return node.textContent ?? "";
}

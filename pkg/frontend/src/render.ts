// Minimal DOM helpers; no framework.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function barRow(label: string, value: string, fraction: number): HTMLElement {
  const fill = el("div", { class: "bar-fill" });
  fill.style.width = `${Math.max(1, Math.round(fraction * 100))}%`;
  return el("div", { class: "bar-row" }, [
    el("span", { class: "bar-label" }, [label]),
    el("div", { class: "bar-track" }, [fill]),
    el("span", { class: "bar-value" }, [value]),
  ]);
}

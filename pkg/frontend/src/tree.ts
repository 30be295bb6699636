/** Collapsible AST tree view; selecting a node reports its id upward. */

import type { AstNode } from "./api.js";

export interface TreeCallbacks {
  onSelect: (nodeId: number) => void;
}

export function renderAstTree(
  container: HTMLElement,
  nodes: AstNode[],
  callbacks: TreeCallbacks,
  selected: number | null = null,
): void {
  container.textContent = "";
  if (nodes.length === 0) return;
  const byId = new Map(nodes.map((n) => [n.id, n]));
  const doc = container.ownerDocument;

  const build = (node: AstNode): HTMLElement => {
    const labelButton = doc.createElement("button");
    labelButton.type = "button";
    labelButton.className = "ast-node";
    labelButton.dataset.nodeId = String(node.id);
    labelButton.textContent = node.label;
    labelButton.title = node.text;
    if (node.id === selected) labelButton.classList.add("selected");
    labelButton.addEventListener("click", (event) => {
      event.stopPropagation();
      callbacks.onSelect(node.id);
    });
    if (node.children.length === 0) {
      const leaf = doc.createElement("div");
      leaf.className = "ast-leaf";
      leaf.appendChild(labelButton);
      return leaf;
    }
    const details = doc.createElement("details");
    details.open = true;
    details.className = "ast-branch";
    const summary = doc.createElement("summary");
    summary.appendChild(labelButton);
    details.appendChild(summary);
    for (const childId of node.children) {
      const child = byId.get(childId);
      if (child) details.appendChild(build(child));
    }
    return details;
  };

  container.appendChild(build(nodes[0]));
}

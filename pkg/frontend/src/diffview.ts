/** The live code pane: server-rendered script with fading diff highlights. */

import type { DiffOpDict } from "./api.js";
import { changedLineIndexes } from "./state.js";

export class DiffPane {
  private readonly pre: HTMLElement;
  private rendered = "";

  constructor(private readonly container: HTMLElement) {
    this.pre = container.ownerDocument.createElement("pre");
    this.pre.className = "code-lines";
    this.pre.dataset.role = "code-pane";
    container.appendChild(this.pre);
  }

  /** Replace the pane content; lines touched by the diff get the fade class. */
  render(script: string, diff: DiffOpDict[], placeholder: string): void {
    const doc = this.container.ownerDocument;
    this.pre.textContent = "";
    this.rendered = script;
    if (script === "") {
      const note = doc.createElement("div");
      note.className = "code-placeholder";
      note.textContent = placeholder;
      this.pre.appendChild(note);
      return;
    }
    const changed = changedLineIndexes(diff);
    const lines = script.replace(/\n$/, "").split("\n");
    lines.forEach((text, index) => {
      const line = doc.createElement("span");
      line.className = changed.has(index) ? "line changed" : "line";
      line.textContent = text;
      this.pre.appendChild(line);
    });
  }

  /** The exact server script bytes currently shown (empty for placeholder). */
  text(): string {
    return this.rendered;
  }
}

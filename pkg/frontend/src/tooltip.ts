/** Hover tooltips: every selectable item explains itself and links onward. */

export interface TooltipContent {
  text: string;
  docUrl?: string;
}

export class TooltipManager {
  private current: HTMLElement | null = null;

  constructor(private readonly doc: Document) {}

  show(anchor: HTMLElement, content: TooltipContent): void {
    this.hide();
    const tip = this.doc.createElement("div");
    tip.className = "tooltip";
    tip.setAttribute("role", "tooltip");
    const text = this.doc.createElement("div");
    text.textContent = content.text;
    tip.appendChild(text);
    if (content.docUrl) {
      const link = this.doc.createElement("a");
      link.href = content.docUrl;
      link.target = "_blank";
      link.rel = "noreferrer";
      link.textContent = "Learn more";
      tip.appendChild(link);
    }
    const rect = anchor.getBoundingClientRect();
    tip.style.left = `${rect.left}px`;
    tip.style.top = `${rect.bottom + 6}px`;
    this.doc.body.appendChild(tip);
    this.current = tip;
  }

  hide(): void {
    if (this.current !== null) {
      this.current.remove();
      this.current = null;
    }
  }

  /** Show on hover; content may arrive lazily from the registry endpoint. */
  attach(anchor: HTMLElement, load: () => Promise<TooltipContent | null>): void {
    anchor.addEventListener("mouseenter", () => {
      void load().then((content) => {
        if (content !== null) {
          this.show(anchor, content);
        }
      });
    });
    anchor.addEventListener("mouseleave", () => this.hide());
  }
}

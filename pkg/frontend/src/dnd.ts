/** Drag-and-drop ordering for the pipeline lists.
 *
 * The dragged index is tracked internally rather than via DataTransfer, so
 * the behavior is identical across browsers and DOM emulations. Each
 * category zone gets its own SortableList; dropping outside the zone simply
 * never fires, which makes cross-zone moves impossible in the UI (the server
 * rejects them anyway).
 */

export interface ReorderMove {
  from: number;
  to: number;
}

export function computeDrop(dragIndex: number | null, dropIndex: number): ReorderMove | null {
  if (dragIndex === null || dragIndex === dropIndex) {
    return null;
  }
  return { from: dragIndex, to: dropIndex };
}

export class SortableList {
  private dragIndex: number | null = null;

  constructor(private readonly onMove: (move: ReorderMove) => void) {}

  /** Wire one list item; `index` is its current position in the zone. */
  attach(item: HTMLElement, index: number): void {
    item.draggable = true;
    item.addEventListener("dragstart", () => {
      this.dragIndex = index;
      item.classList.add("dragging");
    });
    item.addEventListener("dragend", () => {
      this.dragIndex = null;
      item.classList.remove("dragging");
    });
    item.addEventListener("dragover", (event) => {
      event.preventDefault();
      if (this.dragIndex !== null && this.dragIndex !== index) {
        item.classList.add("drop-target");
      }
    });
    item.addEventListener("dragleave", () => item.classList.remove("drop-target"));
    item.addEventListener("drop", (event) => {
      event.preventDefault();
      item.classList.remove("drop-target");
      const move = computeDrop(this.dragIndex, index);
      this.dragIndex = null;
      if (move !== null) {
        this.onMove(move);
      }
    });
  }
}

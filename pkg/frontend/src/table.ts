/**
 * Comparison table renderer.
 *
 * Cell text is the API's display string, verbatim. Converted cells get the
 * "converted" class (distinct background) and their column's calculator icon
 * the "active" class (changed color); hovering a converted cell shows the
 * original value and unit from the API's tooltip payload.
 */

import { CellData, ComparisonResponse, FacetDescriptor } from "./api.js";

export interface TableHandlers {
  onCalculator(propertyId: string): void;
}

export function renderComparisonTable(
  container: HTMLElement,
  view: ComparisonResponse,
  handlers: TableHandlers,
): void {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "comparison";

  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  headRow.appendChild(document.createElement("th"));
  for (const column of view.table.columns) {
    const th = document.createElement("th");
    th.dataset.property = column.property_id;
    const label = document.createElement("span");
    label.textContent = column.display_unit
      ? `${column.label} (${column.display_unit})`
      : column.label;
    th.appendChild(label);

    const calculator = document.createElement("button");
    calculator.type = "button";
    calculator.className = "calculator";
    if (column.display_unit) {
      calculator.classList.add("active");
    }
    calculator.dataset.property = column.property_id;
    calculator.textContent = "\u{1F5A9}";
    calculator.title = "convert this column to another unit";
    calculator.addEventListener("click", () => handlers.onCalculator(column.property_id));
    th.appendChild(calculator);
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement("tbody");
  view.table.rows.forEach((row, rowIndex) => {
    const tr = document.createElement("tr");
    tr.dataset.contribution = row.contribution_id;
    const rowHeader = document.createElement("th");
    rowHeader.scope = "row";
    rowHeader.textContent = row.label;
    rowHeader.title = row.paper_title;
    tr.appendChild(rowHeader);
    view.table.columns.forEach((column, columnIndex) => {
      tr.appendChild(renderCell(view.table.cells[rowIndex]?.[columnIndex] ?? null));
    });
    tbody.appendChild(tr);
  });
  table.appendChild(tbody);
  container.appendChild(table);
}

function renderCell(cell: CellData): HTMLTableCellElement {
  const td = document.createElement("td");
  td.className = "cell";
  if (cell === null) {
    td.classList.add("absent");
    return td;
  }
  if (cell.type === "literal") {
    td.classList.add("literal");
    td.textContent = cell.text;
    return td;
  }
  const value = document.createElement("span");
  value.className = "value";
  value.textContent = cell.display_value;
  td.appendChild(value);
  td.appendChild(document.createTextNode(" "));
  const unit = document.createElement("span");
  unit.className = "unit";
  unit.textContent = cell.display_unit;
  td.appendChild(unit);

  if (cell.converted) {
    td.classList.add("converted");
  }
  if (cell.inconvertible) {
    td.classList.add("inconvertible");
  }
  if (cell.tooltip) {
    const tooltipText = `${cell.tooltip.original_value} ${cell.tooltip.original_unit}`;
    td.title = tooltipText;
    const tooltip = document.createElement("span");
    tooltip.className = "tooltip";
    tooltip.textContent = tooltipText;
    td.appendChild(tooltip);
  }
  return td;
}

export interface DialogHandlers {
  onSelect(unitCode: string): void;
  onClose(): void;
}

/** Unit-selection dialog: exactly the facet's unit options, facet order. */
export function renderUnitDialog(
  container: HTMLElement,
  facet: FacetDescriptor,
  handlers: DialogHandlers,
): void {
  container.replaceChildren();
  const dialog = document.createElement("div");
  dialog.className = "unit-dialog";
  dialog.setAttribute("role", "dialog");

  const heading = document.createElement("p");
  heading.textContent = `Convert "${facet.property_label}" to:`;
  dialog.appendChild(heading);

  const list = document.createElement("ul");
  for (const option of facet.unit_options) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.className = "unit-option";
    button.dataset.code = option.code;
    button.textContent = `${option.label} (${option.code})`;
    button.addEventListener("click", () => handlers.onSelect(option.code));
    item.appendChild(button);
    list.appendChild(item);
  }
  dialog.appendChild(list);

  const close = document.createElement("button");
  close.type = "button";
  close.className = "close";
  close.textContent = "Cancel";
  close.addEventListener("click", () => handlers.onClose());
  dialog.appendChild(close);

  container.appendChild(dialog);
}

/**
 * Filter panel: range/exclusion widgets with unit autocomplete.
 *
 * Posts FilterSpec bodies to /api/search and renders the matching
 * contribution list. The unit field suggests context-appropriate units for
 * the property's quantity kind; an incommensurable unit (HTTP 422) shows an
 * inline "incompatible unit" hint instead of breaking the panel.
 */

import { ApiError, Comparator, FilterSpec } from "./api.js";
import { ComparisonController } from "./state.js";

const INTERVAL_COMPARATORS: ReadonlySet<string> = new Set(["within", "exclude"]);

export class FilterPanel {
  readonly root: HTMLElement;
  private readonly propertyInput: HTMLInputElement;
  private readonly comparatorSelect: HTMLSelectElement;
  private readonly valueInput: HTMLInputElement;
  private readonly highInput: HTMLInputElement;
  private readonly unitInput: HTMLInputElement;
  private readonly suggestionList: HTMLDataListElement;
  private readonly hint: HTMLElement;
  private readonly resultList: HTMLUListElement;
  private quantityKind: string | null = null;

  constructor(
    root: HTMLElement,
    private readonly controller: ComparisonController,
  ) {
    this.root = root;
    root.replaceChildren();
    root.classList.add("filter-panel");

    this.propertyInput = this.addInput(root, "property", "property id");
    this.comparatorSelect = document.createElement("select");
    this.comparatorSelect.name = "comparator";
    for (const comparator of ["gt", "lt", "eq", "within", "exclude"]) {
      const option = document.createElement("option");
      option.value = comparator;
      option.textContent = comparator;
      this.comparatorSelect.appendChild(option);
    }
    root.appendChild(this.comparatorSelect);

    this.valueInput = this.addInput(root, "value", "value");
    this.highInput = this.addInput(root, "high", "upper bound");
    this.highInput.classList.add("hidden");
    this.comparatorSelect.addEventListener("change", () => {
      this.highInput.classList.toggle(
        "hidden",
        !INTERVAL_COMPARATORS.has(this.comparatorSelect.value),
      );
    });

    this.unitInput = this.addInput(root, "unit", "unit code");
    this.suggestionList = document.createElement("datalist");
    this.suggestionList.id = "unit-suggestions";
    this.unitInput.setAttribute("list", this.suggestionList.id);
    root.appendChild(this.suggestionList);
    this.unitInput.addEventListener("input", () => {
      void this.refreshSuggestions();
    });

    const apply = document.createElement("button");
    apply.type = "button";
    apply.className = "apply";
    apply.textContent = "Apply";
    apply.addEventListener("click", () => void this.apply());
    root.appendChild(apply);

    const clear = document.createElement("button");
    clear.type = "button";
    clear.className = "clear";
    clear.textContent = "Clear";
    clear.addEventListener("click", () => void this.clear());
    root.appendChild(clear);

    this.hint = document.createElement("p");
    this.hint.className = "hint hidden";
    root.appendChild(this.hint);

    this.resultList = document.createElement("ul");
    this.resultList.className = "results";
    root.appendChild(this.resultList);

    controller.onResults((ids) => this.renderResults(ids));
  }

  private addInput(root: HTMLElement, name: string, placeholder: string): HTMLInputElement {
    const input = document.createElement("input");
    input.name = name;
    input.placeholder = placeholder;
    root.appendChild(input);
    return input;
  }

  /** Quantity kind for the current property, resolved via /api/facets. */
  private async resolveQuantityKind(): Promise<string | null> {
    const property = this.propertyInput.value.trim();
    if (!property) {
      return null;
    }
    try {
      const facet = await this.controller.api.facets(property);
      this.quantityKind = facet.quantity_kind_id;
    } catch (error) {
      if (!(error instanceof ApiError)) {
        throw error;
      }
      this.quantityKind = null;
    }
    return this.quantityKind;
  }

  async refreshSuggestions(): Promise<void> {
    const kind = this.quantityKind ?? (await this.resolveQuantityKind());
    if (!kind) {
      return;
    }
    const suggestions = await this.controller.api.autocompleteUnits(
      this.unitInput.value.trim(),
      kind,
    );
    this.suggestionList.replaceChildren();
    for (const suggestion of suggestions) {
      const option = document.createElement("option");
      option.value = suggestion.code;
      option.label = suggestion.label;
      this.suggestionList.appendChild(option);
    }
  }

  currentFilter(): FilterSpec | null {
    const property = this.propertyInput.value.trim();
    const unit = this.unitInput.value.trim();
    const comparator = this.comparatorSelect.value as Comparator;
    if (!property || !unit || !this.quantityKind) {
      return null;
    }
    const spec: FilterSpec = {
      property,
      quantityKind: this.quantityKind,
      comparator,
      unit,
    };
    if (INTERVAL_COMPARATORS.has(comparator)) {
      spec.interval = [Number(this.valueInput.value), Number(this.highInput.value)];
    } else {
      spec.value = Number(this.valueInput.value);
    }
    return spec;
  }

  async apply(): Promise<void> {
    this.hideHint();
    if (!this.quantityKind) {
      await this.resolveQuantityKind();
    }
    const filter = this.currentFilter();
    if (filter === null) {
      this.showHint("fill in property, value, and unit first");
      return;
    }
    try {
      await this.controller.applyFilters([filter]);
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.showHint("incompatible unit for this property");
        return;
      }
      if (error instanceof ApiError) {
        this.showHint(`${error.code}: ${error.message}`);
        return;
      }
      throw error;
    }
  }

  async clear(): Promise<void> {
    this.propertyInput.value = "";
    this.valueInput.value = "";
    this.highInput.value = "";
    this.unitInput.value = "";
    this.quantityKind = null;
    this.hideHint();
    await this.controller.clearFilters();
  }

  private renderResults(contributionIds: string[]): void {
    this.resultList.replaceChildren();
    for (const id of contributionIds) {
      const item = document.createElement("li");
      item.dataset.contribution = id;
      item.textContent = id;
      this.resultList.appendChild(item);
    }
  }

  private showHint(text: string): void {
    this.hint.textContent = text;
    this.hint.classList.remove("hidden");
  }

  private hideHint(): void {
    this.hint.textContent = "";
    this.hint.classList.add("hidden");
  }
}

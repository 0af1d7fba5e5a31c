/**
 * Application shell: wires the table, calculator dialog, filter panel, and
 * save button together. The API base URL comes from
 * ``window.UNITFACETS_API_BASE`` (set it in index.html) or defaults to the
 * page's own origin.
 */

import { ApiClient, ApiError } from "./api.js";
import { ComparisonController, savedViewIdFromHash } from "./state.js";
import { FilterPanel } from "./filters.js";
import { renderComparisonTable, renderUnitDialog } from "./table.js";

declare global {
  interface Window {
    UNITFACETS_API_BASE?: string;
  }
}

export interface AppElements {
  table: HTMLElement;
  dialog: HTMLElement;
  filters: HTMLElement;
  saveButton: HTMLButtonElement;
  savedUrl: HTMLElement;
  errorBanner: HTMLElement;
  builderForm: HTMLFormElement;
}

export class App {
  readonly controller: ComparisonController;

  constructor(
    private readonly elements: AppElements,
    api: ApiClient,
  ) {
    this.controller = new ComparisonController(api);
    this.controller.onView((view) => {
      renderComparisonTable(this.elements.table, view, {
        onCalculator: (propertyId) => void this.openDialog(propertyId),
      });
    });

    new FilterPanel(elements.filters, this.controller);

    elements.saveButton.addEventListener("click", () => void this.saveView());
    elements.builderForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.loadFromBuilder();
    });
  }

  async start(hash: string): Promise<void> {
    const savedId = savedViewIdFromHash(hash);
    if (savedId !== null) {
      await this.guarded(() => this.controller.loadSaved(savedId));
    }
  }

  async loadFromBuilder(): Promise<void> {
    const data = new FormData(this.elements.builderForm);
    const split = (name: string) =>
      String(data.get(name) ?? "")
        .split(",")
        .map((part) => part.trim())
        .filter((part) => part.length > 0);
    this.controller.state.contributions = split("contributions");
    this.controller.state.properties = split("properties");
    this.controller.state.unitOverrides = {};
    await this.guarded(() => this.controller.refresh());
  }

  async openDialog(propertyId: string): Promise<void> {
    await this.guarded(async () => {
      const facet = await this.controller.api.facets(propertyId);
      renderUnitDialog(this.elements.dialog, facet, {
        onSelect: (unitCode) => {
          this.elements.dialog.replaceChildren();
          void this.guarded(() => this.controller.setUnitOverride(propertyId, unitCode));
        },
        onClose: () => this.elements.dialog.replaceChildren(),
      });
    });
  }

  async saveView(): Promise<void> {
    await this.guarded(async () => {
      const saved = await this.controller.save();
      const link = document.createElement("a");
      link.href = `#/comparisons/${saved.id}`;
      link.textContent = `${window.location.origin}${window.location.pathname}#/comparisons/${saved.id}`;
      this.elements.savedUrl.replaceChildren(link);
    });
  }

  /** Surface API failures in the banner; the current table stays as-is. */
  private async guarded(action: () => Promise<void>): Promise<void> {
    try {
      this.elements.errorBanner.classList.add("hidden");
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.elements.errorBanner.textContent = `${error.code}: ${error.message}`;
        this.elements.errorBanner.classList.remove("hidden");
        return;
      }
      this.elements.errorBanner.textContent = "service unreachable";
      this.elements.errorBanner.classList.remove("hidden");
    }
  }
}

export function bootstrap(): App {
  const byId = <T extends HTMLElement>(id: string): T => {
    const element = document.getElementById(id);
    if (!element) {
      throw new Error(`missing element #${id}`);
    }
    return element as T;
  };
  const app = new App(
    {
      table: byId("comparison"),
      dialog: byId("dialog"),
      filters: byId("filters"),
      saveButton: byId<HTMLButtonElement>("save-view"),
      savedUrl: byId("saved-url"),
      errorBanner: byId("error-banner"),
      builderForm: byId<HTMLFormElement>("builder"),
    },
    new ApiClient(window.UNITFACETS_API_BASE ?? ""),
  );
  void app.start(window.location.hash);
  window.addEventListener("hashchange", () => void app.start(window.location.hash));
  return app;
}

if (typeof document !== "undefined" && document.getElementById("comparison")) {
  bootstrap();
}

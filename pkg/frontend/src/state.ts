/**
 * View state and the controller that keeps it mirroring the server.
 *
 * Every committed action round-trips through the API: the controller posts
 * the configuration, fetches the rendered table, and only then updates the
 * state. Responses for superseded actions are discarded, and no number is
 * ever computed client-side.
 */

import {
  ApiClient,
  ComparisonResponse,
  FilterSpec,
  SavedComparisonRef,
} from "./api.js";

export interface ViewState {
  contributions: string[];
  properties: string[];
  unitOverrides: Record<string, string>;
  filters: FilterSpec[];
  lastSavedId: string | null;
}

/** Monotonic token source; stale async completions check in before committing. */
export class StaleGuard {
  private seq = 0;

  next(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

export type ViewListener = (view: ComparisonResponse) => void;
export type ResultsListener = (contributionIds: string[]) => void;

export class ComparisonController {
  readonly state: ViewState;
  view: ComparisonResponse | null = null;
  results: string[] = [];

  private readonly viewGuard = new StaleGuard();
  private readonly searchGuard = new StaleGuard();
  private viewListeners: ViewListener[] = [];
  private resultsListeners: ResultsListener[] = [];

  constructor(
    readonly api: ApiClient,
    contributions: string[] = [],
    properties: string[] = [],
  ) {
    this.state = {
      contributions,
      properties,
      unitOverrides: {},
      filters: [],
      lastSavedId: null,
    };
  }

  onView(listener: ViewListener): void {
    this.viewListeners.push(listener);
  }

  onResults(listener: ResultsListener): void {
    this.resultsListeners.push(listener);
  }

  /** Render the current configuration through the server. */
  async refresh(): Promise<void> {
    const token = this.viewGuard.next();
    const saved = await this.api.saveComparison({
      contributions: this.state.contributions,
      properties: this.state.properties,
      unitOverrides: this.state.unitOverrides,
    });
    const rendered = await this.api.getComparison(saved.id);
    if (!this.viewGuard.isCurrent(token)) {
      return; // superseded by a later action
    }
    this.commitView(rendered);
  }

  /** Load an existing saved view; state mirrors the server's record. */
  async loadSaved(id: string): Promise<void> {
    const token = this.viewGuard.next();
    const rendered = await this.api.getComparison(id);
    if (!this.viewGuard.isCurrent(token)) {
      return;
    }
    this.state.contributions = rendered.table.rows.map((r) => r.contribution_id);
    this.state.properties = rendered.table.columns.map((c) => c.property_id);
    this.state.unitOverrides = { ...rendered.unit_overrides };
    this.state.lastSavedId = rendered.id;
    this.commitView(rendered);
  }

  async setUnitOverride(propertyId: string, unitCode: string): Promise<void> {
    this.state.unitOverrides = { ...this.state.unitOverrides, [propertyId]: unitCode };
    await this.refresh();
  }

  /** Persist the current configuration; returns the permanent reference. */
  async save(): Promise<SavedComparisonRef> {
    const saved = await this.api.saveComparison({
      contributions: this.state.contributions,
      properties: this.state.properties,
      unitOverrides: this.state.unitOverrides,
    });
    this.state.lastSavedId = saved.id;
    return saved;
  }

  async applyFilters(filters: FilterSpec[]): Promise<string[]> {
    const token = this.searchGuard.next();
    const response = await this.api.search(filters);
    if (!this.searchGuard.isCurrent(token)) {
      return this.results;
    }
    this.state.filters = filters;
    this.results = response.contribution_ids;
    for (const listener of this.resultsListeners) {
      listener(this.results);
    }
    return this.results;
  }

  clearFilters(): Promise<string[]> {
    return this.applyFilters([]);
  }

  private commitView(rendered: ComparisonResponse): void {
    this.view = rendered;
    for (const listener of this.viewListeners) {
      listener(rendered);
    }
  }
}

/** Parse "#/comparisons/<id>" into the saved-view id, else null. */
export function savedViewIdFromHash(hash: string): string | null {
  const match = /^#\/comparisons\/([A-Za-z0-9_-]+)$/.exec(hash);
  return match ? match[1] ?? null : null;
}

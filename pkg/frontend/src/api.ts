/**
 * Typed client for the unitfacets HTTP API.
 *
 * Every numeric display string (converted values, facet ranges) is passed
 * through verbatim: the client never parses, rounds, or recomputes them.
 */

export interface ConvertResponse {
  value: string;
  source: string;
  target: string;
}

export interface UnitOption {
  code: string;
  label: string;
}

export interface FacetDescriptor {
  property_id: string;
  property_label: string;
  quantity_kind_id: string;
  quantity_kind_label: string;
  unit_options: UnitOption[];
  display_unit: string;
  min_value: string;
  max_value: string;
  count: number;
}

export interface TooltipPayload {
  original_value: string;
  original_unit: string;
  target_unit: string | null;
}

export interface QuantityCellData {
  type: "quantity";
  display_value: string;
  display_unit: string;
  quantity_kind_id: string;
  converted: boolean;
  inconvertible: boolean;
  tooltip?: TooltipPayload;
}

export interface LiteralCellData {
  type: "literal";
  text: string;
}

export type CellData = QuantityCellData | LiteralCellData | null;

export interface TableColumn {
  property_id: string;
  label: string;
  display_unit: string | null;
}

export interface TableRow {
  contribution_id: string;
  label: string;
  paper_title: string;
}

export interface TableData {
  columns: TableColumn[];
  rows: TableRow[];
  cells: CellData[][];
}

export interface ComparisonResponse {
  id: string;
  created: string;
  unit_overrides: Record<string, string>;
  table: TableData;
}

export interface SavedComparisonRef {
  id: string;
  url: string;
}

export interface SearchResponse {
  contribution_ids: string[];
  total: number;
}

export type Comparator = "eq" | "gt" | "lt" | "within" | "exclude";

export interface FilterSpec {
  property: string;
  quantityKind: string;
  comparator: Comparator;
  unit: string;
  value?: number;
  interval?: [number, number];
}

export interface ComparisonSpec {
  contributions: string[];
  properties: string[];
  unitOverrides: Record<string, string>;
}

/** Error raised for non-2xx responses; carries the API's machine code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body: unknown = await response.json();
    if (!response.ok) {
      const err = body as { code?: string; message?: string };
      throw new ApiError(
        response.status,
        err.code ?? "INTERNAL_ERROR",
        err.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  /** `{value}/from/{source}/to/{target}` with percent-encoded unit codes. */
  convertValue(value: string, source: string, target: string): Promise<ConvertResponse> {
    const enc = encodeURIComponent;
    return this.request(`/api/convert/${enc(value)}/from/${enc(source)}/to/${enc(target)}`);
  }

  search(filters: FilterSpec[]): Promise<SearchResponse> {
    return this.post("/api/search", { filters });
  }

  facets(property: string, unit?: string): Promise<FacetDescriptor> {
    const params = new URLSearchParams({ property });
    if (unit !== undefined) params.set("unit", unit);
    return this.request(`/api/facets?${params.toString()}`);
  }

  autocompleteUnits(q: string, quantityKind: string): Promise<UnitOption[]> {
    const params = new URLSearchParams({ q, quantityKind });
    return this.request<{ suggestions: UnitOption[] }>(
      `/api/units/autocomplete?${params.toString()}`,
    ).then((body) => body.suggestions);
  }

  saveComparison(spec: ComparisonSpec): Promise<SavedComparisonRef> {
    return this.post("/api/comparisons", spec);
  }

  getComparison(id: string): Promise<ComparisonResponse> {
    return this.request(`/api/comparisons/${encodeURIComponent(id)}`);
  }
}

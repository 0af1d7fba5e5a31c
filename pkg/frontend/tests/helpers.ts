/**
 * Mock fetch for tests. Serves response bodies captured from the real
 * service (tests/fixtures.json), so assertions about display strings are
 * assertions about genuine API output.
 */

import fixtures from "./fixtures.json";

export { fixtures };

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export interface MockServer {
  fetchFn: (input: string, init?: RequestInit) => Promise<Response>;
  calls: RecordedCall[];
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const PLAIN_ID: string = fixtures.save_plain.id;
const CM_ID: string = fixtures.save_cm.id;

export function mockServer(): MockServer {
  const calls: RecordedCall[] = [];

  async function fetchFn(input: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    calls.push({ method, path: input, body });

    if (method === "GET" && input.startsWith("/api/facets?")) {
      const params = new URLSearchParams(input.split("?")[1]);
      if (params.get("property") === "global_mean_sea_level") {
        return json(fixtures.facets_sea_level);
      }
      return json({ code: "UNKNOWN_PROPERTY", message: "unknown property" }, 404);
    }

    if (method === "GET" && input.startsWith("/api/units/autocomplete?")) {
      const params = new URLSearchParams(input.split("?")[1]);
      if (params.get("quantityKind") !== "Length") {
        return json({ code: "UNKNOWN_QUANTITY_KIND", message: "unknown kind" }, 404);
      }
      return json(
        params.get("q") === "c"
          ? fixtures.autocomplete_length_c
          : fixtures.autocomplete_length_empty,
      );
    }

    if (method === "POST" && input === "/api/comparisons") {
      const overrides = (body as { unitOverrides?: Record<string, string> }).unitOverrides ?? {};
      return json(overrides["global_mean_sea_level"] === "cm"
        ? fixtures.save_cm
        : fixtures.save_plain);
    }

    if (method === "GET" && input === `/api/comparisons/${PLAIN_ID}`) {
      return json(fixtures.comparison_plain);
    }
    if (method === "GET" && input === `/api/comparisons/${CM_ID}`) {
      return json(fixtures.comparison_cm);
    }

    if (method === "POST" && input === "/api/search") {
      const filters = (body as { filters: Array<Record<string, unknown>> }).filters;
      if (filters.length === 0) {
        return json(fixtures.search_all);
      }
      const filter = filters[0]!;
      if (filter.unit === "s") {
        return json(fixtures.error_422, 422);
      }
      if (filter.comparator === "gt" && filter.unit === "cm" && filter.value === 20) {
        return json(fixtures.search_gt20cm);
      }
      if (filter.comparator === "gt" && filter.unit === "cm" && filter.value === 30) {
        return json(fixtures.search_gt30cm);
      }
      return json(fixtures.search_all);
    }

    if (method === "GET" && input === "/api/convert/0.25/from/m/to/cm") {
      return json(fixtures.convert_025_m_cm);
    }

    return json({ code: "NOT_FOUND", message: `no mock for ${method} ${input}` }, 404);
  }

  return { fetchFn, calls };
}

/** Every numeric display string the mocked API ever returns. */
export function allApiNumberStrings(): Set<string> {
  const strings = new Set<string>();
  strings.add(fixtures.convert_025_m_cm.value);
  strings.add(fixtures.facets_sea_level.min_value);
  strings.add(fixtures.facets_sea_level.max_value);
  for (const rendered of [fixtures.comparison_plain, fixtures.comparison_cm]) {
    for (const row of rendered.table.cells) {
      for (const cell of row) {
        if (cell && cell.type === "quantity") {
          strings.add(cell.display_value);
          if (cell.tooltip) {
            strings.add(cell.tooltip.original_value);
          }
        }
      }
    }
  }
  return strings;
}

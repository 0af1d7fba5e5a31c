/**
 * End-to-end flows against the mocked service, mirroring the two UI
 * acceptance flows: per-column unit conversion via the calculator dialog,
 * and unit-qualified filtering with autocomplete.
 */

import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, AppElements } from "../src/app.js";
import { fixtures, mockServer } from "./helpers.js";

function buildElements(): AppElements {
  const make = <T extends HTMLElement>(tag: string): T =>
    document.createElement(tag) as T;
  const builderForm = make<HTMLFormElement>("form");
  for (const name of ["contributions", "properties"]) {
    const input = document.createElement("input");
    input.name = name;
    builderForm.appendChild(input);
  }
  const elements: AppElements = {
    table: make("div"),
    dialog: make("div"),
    filters: make("div"),
    saveButton: make<HTMLButtonElement>("button"),
    savedUrl: make("span"),
    errorBanner: make("div"),
    builderForm,
  };
  document.body.replaceChildren(
    elements.table, elements.dialog, elements.filters,
    elements.saveButton, elements.savedUrl, elements.errorBanner, builderForm,
  );
  return elements;
}

function makeApp() {
  const server = mockServer();
  const elements = buildElements();
  const app = new App(elements, new ApiClient("", server.fetchFn));
  app.controller.state.contributions = ["C_sea_a", "C_sea_b"];
  app.controller.state.properties = ["global_mean_sea_level"];
  return { app, elements, server };
}

describe("conversion flow", () => {
  it("selecting cm shows 25 in both rows with one converted tooltip", async () => {
    const { app, elements } = makeApp();
    await app.controller.refresh();
    expect(
      [...elements.table.querySelectorAll("td .value")].map((e) => e.textContent),
    ).toEqual(["0.25", "25"]);

    // Calculator opens the dialog listing exactly the facet's options.
    await app.openDialog("global_mean_sea_level");
    const options = [...elements.dialog.querySelectorAll("button.unit-option")];
    expect(options.map((o) => (o as HTMLElement).dataset.code)).toEqual(
      fixtures.facets_sea_level.unit_options.map((o: { code: string }) => o.code),
    );

    // Choosing "cm" re-fetches the rendered table from the service.
    (elements.dialog.querySelector(
      'button.unit-option[data-code="cm"]',
    ) as HTMLButtonElement).click();
    await vi.waitFor(() => {
      const values = [...elements.table.querySelectorAll("td .value")].map(
        (e) => e.textContent,
      );
      expect(values).toEqual(["25", "25"]);
    });

    const converted = elements.table.querySelectorAll("td.converted");
    expect(converted).toHaveLength(1);
    expect(converted[0]?.getAttribute("title")).toBe("0.25 m");
    expect(elements.dialog.childElementCount).toBe(0); // dialog closed
    expect(app.controller.state.unitOverrides).toEqual({
      global_mean_sea_level: "cm",
    });
  });

  it("save view displays the shareable URL for the current state", async () => {
    const { app, elements } = makeApp();
    await app.controller.refresh();
    elements.saveButton.click();
    await vi.waitFor(() => {
      const link = elements.savedUrl.querySelector("a");
      expect(link?.getAttribute("href")).toBe(
        `#/comparisons/${fixtures.save_plain.id}`,
      );
    });
  });

  it("loading the saved URL reproduces the converted table", async () => {
    const { app, elements } = makeApp();
    await app.start(`#/comparisons/${fixtures.save_cm.id}`);
    const values = [...elements.table.querySelectorAll("td .value")].map(
      (e) => e.textContent,
    );
    expect(values).toEqual(["25", "25"]);
    expect(elements.table.querySelectorAll("td.converted")).toHaveLength(1);
  });

  it("API failures surface in the banner and keep the table", async () => {
    const { app, elements } = makeApp();
    await app.controller.refresh();
    const before = elements.table.innerHTML;
    await app.openDialog("unknown_property");
    expect(elements.errorBanner.classList.contains("hidden")).toBe(false);
    expect(elements.errorBanner.textContent).toContain("UNKNOWN_PROPERTY");
    expect(elements.table.innerHTML).toBe(before);
  });
});

describe("filter flow", () => {
  function panelParts(elements: AppElements) {
    const panel = elements.filters;
    return {
      panel,
      property: panel.querySelector('input[name="property"]') as HTMLInputElement,
      comparator: panel.querySelector("select") as HTMLSelectElement,
      value: panel.querySelector('input[name="value"]') as HTMLInputElement,
      unit: panel.querySelector('input[name="unit"]') as HTMLInputElement,
      apply: panel.querySelector("button.apply") as HTMLButtonElement,
      clear: panel.querySelector("button.clear") as HTMLButtonElement,
      results: () =>
        [...panel.querySelectorAll("ul.results li")].map(
          (li) => (li as HTMLElement).dataset.contribution,
        ),
      hint: panel.querySelector("p.hint") as HTMLElement,
    };
  }

  it("gt 20 with autocompleted cm narrows the list; clearing restores it", async () => {
    const { app, elements } = makeApp();
    const parts = panelParts(elements);

    parts.property.value = "global_mean_sea_level";
    parts.unit.value = "c";
    parts.unit.dispatchEvent(new Event("input", { bubbles: true }));
    await vi.waitFor(() => {
      const suggested = [...parts.panel.querySelectorAll("datalist option")].map(
        (o) => (o as HTMLOptionElement).value,
      );
      expect(suggested).toContain("cm");
    });

    parts.comparator.value = "gt";
    parts.value.value = "20";
    parts.unit.value = "cm";
    parts.apply.click();
    await vi.waitFor(() => {
      expect(parts.results()).toEqual(fixtures.search_gt20cm.contribution_ids);
    });
    expect(app.controller.state.filters).toHaveLength(1);

    parts.clear.click();
    await vi.waitFor(() => {
      expect(parts.results()).toEqual(fixtures.search_all.contribution_ids);
    });
    expect(app.controller.state.filters).toHaveLength(0);
  });

  it("shows the incompatible-unit hint on 422 responses", async () => {
    const { elements } = makeApp();
    const parts = panelParts(elements);
    parts.property.value = "global_mean_sea_level";
    parts.comparator.value = "gt";
    parts.value.value = "20";
    parts.unit.value = "s";
    parts.apply.click();
    await vi.waitFor(() => {
      expect(parts.hint.classList.contains("hidden")).toBe(false);
      expect(parts.hint.textContent).toContain("incompatible unit");
    });
  });
});

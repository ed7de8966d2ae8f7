import { describe, expect, it } from "vitest";

import type { DiffDoc, MatrixDoc, SummaryDoc } from "../dist/api.js";
import { initialState } from "../dist/state.js";
import { renderApp, renderDiff, renderMatrix, renderSummary } from "../dist/render.js";

function summaryDoc(events = 24): SummaryDoc {
  return {
    events,
    objects: 15,
    object_types: 5,
    relations: 60,
    objects_per_type: { Orders: 3, Items: 6 },
    events_per_type: { Orders: 13, Items: 17 },
    events_per_activity: { "Pick Item": 7 },
    activity_ratio_per_type: { Orders: 0.6923, Items: 0.95 },
  };
}

function matrixDoc(): MatrixDoc {
  return {
    object_types: ["Orders"],
    activities: ["Create Order", "Pick Item"],
    cells: [
      { object_type: "Orders", activity: "Create Order", incidences: 3, unique_objects: 3, ratio: 1.0, cooccurring: true },
      { object_type: "Orders", activity: "Pick Item", incidences: 7, unique_objects: 3, ratio: 3 / 7, cooccurring: true },
    ],
  };
}

describe("render purity", () => {
  it("renders identical markup for identical state", () => {
    const state = initialState();
    state.logId = "abc";
    state.summary = summaryDoc();
    state.matrix = matrixDoc();
    expect(renderApp(state)).toBe(renderApp(state));
  });
});

describe("summary panel", () => {
  it("shows the headline counts", () => {
    const state = initialState();
    state.summary = summaryDoc();
    const html = renderSummary(state);
    expect(html).toContain("24 events, 15 objects, 5 object types");
    expect(html).toContain("Orders");
  });
});

describe("matrix panel", () => {
  it("pre-unchecks sub-threshold cells and marks them dropped", () => {
    const state = initialState();
    state.matrix = matrixDoc();
    state.slider = 0.5;
    const html = renderMatrix(state);
    const pickCell = html.split("<td").find((part) => part.includes("0.43"));
    expect(pickCell).toBeDefined();
    expect(pickCell).toContain("dropped");
    expect(pickCell).not.toContain("checked");
    const createCell = html.split("<td").find((part) => part.includes("1.00"));
    expect(createCell).toContain("kept");
    expect(createCell).toContain("checked");
  });

  it("escapes markup in names", () => {
    const state = initialState();
    state.matrix = {
      object_types: ["<b>Orders</b>"],
      activities: ["Pick & Pack"],
      cells: [
        {
          object_type: "<b>Orders</b>",
          activity: "Pick & Pack",
          incidences: 1,
          unique_objects: 1,
          ratio: 1,
          cooccurring: true,
        },
      ],
    };
    const html = renderMatrix(state);
    expect(html).not.toContain("<b>Orders</b>");
    expect(html).toContain("&lt;b&gt;Orders&lt;/b&gt;");
  });
});

describe("diff panel", () => {
  it("shows the overall event reduction", () => {
    const state = initialState();
    const step = {
      label: "OE2",
      before: summaryDoc(24),
      after: summaryDoc(16),
      removed: { events: 8, objects: 0, object_types: 0, relations: 0 },
      retention_percent: { events: 66, objects: 100, object_types: 100, relations: 100 },
    };
    const diff: DiffDoc = { steps: [step], overall: step };
    state.diff = diff;
    const html = renderDiff(state);
    expect(html).toContain("events 24 &rarr; 16");
    expect(html).toContain("(66%)");
  });
});

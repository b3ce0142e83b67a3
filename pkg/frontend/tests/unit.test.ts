import { describe, expect, it } from "vitest";

import { buildQuery, isDocumented } from "../src/api.js";
import { QueryPageController, ALL_TOGGLES } from "../src/querypage.js";
import { seedFromParams } from "../src/resultspage.js";
import { AbstractController } from "../src/abstractpage.js";
import { ageInDays, composeQuery, escapeHtml, filterTag, formatAuthors } from "../src/util.js";
import type { DocResponse } from "../src/model.js";

describe("query string building", () => {
  it("encodes parameters and skips undefined", () => {
    expect(buildQuery({ q: '"weak lensing"', sort: "cited", k: undefined })).toBe(
      "?q=%22weak%20lensing%22&sort=cited",
    );
    expect(buildQuery({})).toBe("");
  });
});

describe("documented endpoint whitelist", () => {
  it("accepts every endpoint the pages use", () => {
    for (const path of [
      "/search?q=x&sort=recent",
      "/lists",
      "/lists/current",
      "/lists/current/op/coread",
      "/lists/current/op/similar?k=5",
      "/explore/reviews?q=x",
      "/doc/d1",
      "/pane?k=5",
      "/digest",
      "/complete?prefix=ga&limit=8",
      "/view/d1",
      "/profile/u1",
    ]) {
      expect(isDocumented(path), path).toBe(true);
    }
  });
  it("rejects anything else", () => {
    for (const path of ["/admin/reload", "/search", "/lists/a/op/frobnicate", "/docs", "/corpus"]) {
      expect(isDocumented(path), path).toBe(false);
    }
  });
});

describe("facet filter composition", () => {
  it("renders grammar tags, quoting values with spaces", () => {
    expect(filterTag("entity", "Abell383")).toBe("entity:Abell383");
    expect(filterTag("author", "Kurtz, M.")).toBe('author:"Kurtz, M."');
    expect(filterTag("year", "2011")).toBe("year:2011");
  });
  it("appends filters to the base query in click order", () => {
    const q = composeQuery('"weak lensing"', [
      { dim: "entity", value: "Abell383" },
      { dim: "keyword", value: "HST" },
    ]);
    expect(q).toBe('"weak lensing" entity:Abell383 keyword:HST');
  });
});

describe("age math", () => {
  it("computes document age in days", () => {
    const now = new Date("2024-07-01T12:00:00Z");
    expect(ageInDays("2024-06-30", now)).toBe(1);
    expect(ageInDays("2023-07-01", now)).toBe(366);
  });
});

describe("html escaping and author formatting", () => {
  it("escapes markup", () => {
    expect(escapeHtml('<b>"x" & y</b>')).toBe("&lt;b&gt;&quot;x&quot; &amp; y&lt;/b&gt;");
  });
  it("truncates long author lists", () => {
    expect(formatAuthors(["A", "B", "C", "D"])).toBe("A; B; C et al.");
  });
});

describe("query page toggles", () => {
  it("has exactly seven toggles: four sorts and three explore modes", () => {
    expect(ALL_TOGGLES).toEqual([
      "recent",
      "relevant",
      "cited",
      "popular",
      "reviews",
      "experts",
      "reading",
    ]);
  });
  it("routes sorts and explore modes to the results page", () => {
    const ctl = new QueryPageController(null as never);
    expect(ctl.targetUrl("weak lensing", "cited")).toBe(
      "results.html?q=weak%20lensing&sort=cited",
    );
    expect(ctl.targetUrl("weak lensing", "reviews")).toBe(
      "results.html?q=weak%20lensing&explore=reviews",
    );
  });
});

describe("results page URL seeding", () => {
  it("reconstructs page state from URL parameters alone", () => {
    expect(seedFromParams(new URLSearchParams("q=x&sort=cited"))).toEqual({
      kind: "search",
      q: "x",
      sort: "cited",
    });
    expect(seedFromParams(new URLSearchParams("q=x&explore=experts"))).toEqual({
      kind: "explore",
      q: "x",
      mode: "experts",
    });
    expect(seedFromParams(new URLSearchParams("doc=d1&button=coread"))).toEqual({
      kind: "doc-button",
      docId: "d1",
      button: "coread",
    });
    expect(seedFromParams(new URLSearchParams("list=mine"))).toEqual({
      kind: "recall",
      name: "mine",
    });
  });
});

describe("abstract panel view", () => {
  it("keeps empty slots visible with their reason", () => {
    const ctl = new AbstractController(null as never);
    ctl.data = {
      document: {} as DocResponse["document"],
      buttons: {},
      panel: [
        { algorithm: "closest", doc_id: "d9", score: 0.9, reason: null, title: "Near paper" },
        { algorithm: "coread_top", doc_id: null, score: null, reason: "no readers", title: null },
      ],
      panel_unavailable: null,
      session: "s",
    };
    const rows = ctl.panelView();
    expect(rows).toHaveLength(2);
    expect(rows[0]).toMatchObject({ algorithm: "closest", docId: "d9", title: "Near paper" });
    expect(rows[1]).toMatchObject({ algorithm: "coread_top", docId: null, detail: "no readers" });
  });
});

/** Results/list page controller: the two-panel page where lists are refined,
 * edited, and fed into the list operators.
 *
 * Facet clicks re-run the search with the filter appended to the query, so
 * ordering and counts stay server-authoritative. The date slider and the
 * per-item checkboxes edit the current list client-side; operator buttons act
 * on the edited selection by saving it as the session's working list and
 * invoking the operator on the server. Every displayed list keeps its
 * provenance string, and the page accumulates the provenance trail of the
 * whole chain.
 *
 * Each user gesture (search, facet click, slider, checkbox, operator button,
 * save/recall) is one controller call; the gesture counter exists so tests
 * can hold walkthroughs to the intended interaction budget.
 */
import { Api } from "./api.js";
import type { ExploreMode, Facets, Hit, Operator, SortMode } from "./model.js";
import { ageInDays, composeQuery } from "./util.js";

export interface AppliedFilter {
  dim: string;
  value: string;
}

export type ResultsSeed =
  | { kind: "search"; q: string; sort: SortMode }
  | { kind: "explore"; q: string; mode: ExploreMode }
  | { kind: "doc-button"; docId: string; button: string }
  | { kind: "recall"; name: string };

const WORKING_LIST = "current";

export class ResultsController {
  readonly api: Api;
  readonly now: Date;
  gestures = 0;

  baseQuery = "";
  sort: SortMode = "recent";
  filters: AppliedFilter[] = [];
  hits: Hit[] = [];
  facets: Facets = {};
  provenance = "";
  trail: string[] = [];
  unchecked: Set<string> = new Set();
  maxAgeDays: number | null = null;
  listSource = "";

  constructor(api: Api, opts: { now?: Date } = {}) {
    this.api = api;
    this.now = opts.now ?? new Date();
  }

  private show(hits: Hit[], provenance: string, facets: Facets = {}): void {
    this.hits = hits;
    this.provenance = provenance;
    this.facets = facets;
    this.trail.push(provenance);
    this.unchecked = new Set();
    this.maxAgeDays = null;
  }

  /** Initial load from URL parameters; not a gesture. */
  async seed(seed: ResultsSeed): Promise<void> {
    if (seed.kind === "search") {
      this.baseQuery = seed.q;
      this.sort = seed.sort;
      this.filters = [];
      const resp = await this.api.search(seed.q, seed.sort);
      this.listSource = "search";
      this.show(resp.results.items, resp.results.provenance, resp.facets);
    } else if (seed.kind === "explore") {
      const resp = await this.api.explore(seed.mode, seed.q);
      this.listSource = `explore:${seed.mode}`;
      this.show(resp.results.items, resp.results.provenance);
    } else if (seed.kind === "doc-button") {
      const resp = await this.api.doc(seed.docId);
      const list = resp.buttons[seed.button];
      if (!list) throw new Error(`unknown button: ${seed.button}`);
      this.listSource = `doc:${seed.docId}:${seed.button}`;
      this.show(list.items, list.provenance);
    } else {
      const resp = await this.api.getList(seed.name);
      this.listSource = `list:${seed.name}`;
      this.show(resp.results.items, resp.results.provenance);
    }
  }

  /** Gesture: type a query (optionally picking a sort) and submit. */
  async search(q: string, sort: SortMode = this.sort): Promise<void> {
    this.gestures += 1;
    this.baseQuery = q;
    this.sort = sort;
    this.filters = [];
    const resp = await this.api.search(q, sort);
    this.listSource = "search";
    this.show(resp.results.items, resp.results.provenance, resp.facets);
  }

  /** Gesture: click a facet value; server re-ranks with the filter applied. */
  async clickFacet(dim: string, value: string): Promise<void> {
    this.gestures += 1;
    this.filters.push({ dim, value });
    const resp = await this.api.search(composeQuery(this.baseQuery, this.filters), this.sort);
    this.show(resp.results.items, resp.results.provenance, resp.facets);
  }

  /** Gesture: the date slider truncates the current list by document age. */
  setMaxAge(days: number | null): void {
    this.gestures += 1;
    this.maxAgeDays = days;
  }

  /** Gesture: per-item checkbox. */
  toggleItem(id: string): void {
    this.gestures += 1;
    if (this.unchecked.has(id)) this.unchecked.delete(id);
    else this.unchecked.add(id);
  }

  /** The current list after client-side edits (slider + checkboxes). */
  visibleHits(): Hit[] {
    return this.hits.filter((h) => {
      if (this.unchecked.has(h.id)) return false;
      if (this.maxAgeDays !== null && ageInDays(h.pub_date, this.now) >= this.maxAgeDays)
        return false;
      return true;
    });
  }

  /** Gesture: run a list operator on the edited list; the result replaces the
   * display (its provenance chains through the session's working list). */
  async runOperator(op: Operator): Promise<void> {
    this.gestures += 1;
    const ids = this.visibleHits().map((h) => h.id);
    await this.api.saveList(WORKING_LIST, { ids });
    const resp = await this.api.runOp(WORKING_LIST, op);
    this.listSource = `op:${op}`;
    this.show(resp.results.items, resp.results.provenance);
  }

  /** Gesture: save the edited list under a name for later recall. */
  async saveAs(name: string): Promise<void> {
    this.gestures += 1;
    await this.api.saveList(name, { ids: this.visibleHits().map((h) => h.id) });
  }

  /** Gesture: recall a named list. */
  async recall(name: string): Promise<void> {
    this.gestures += 1;
    await this.seed({ kind: "recall", name });
  }

  async savedNames(): Promise<string[]> {
    return (await this.api.listNames()).names;
  }
}

export function seedFromParams(params: URLSearchParams): ResultsSeed {
  const doc = params.get("doc");
  const button = params.get("button");
  if (doc && button) return { kind: "doc-button", docId: doc, button };
  const name = params.get("list");
  if (name) return { kind: "recall", name };
  const explore = params.get("explore");
  const q = params.get("q") ?? "";
  if (explore) return { kind: "explore", q, mode: explore as ExploreMode };
  return { kind: "search", q, sort: (params.get("sort") ?? "recent") as SortMode };
}

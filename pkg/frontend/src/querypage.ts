/** Query page controller: the query box with auto-complete, the seven search
 * toggles (four sorts, three explore pipelines), and the three-tab
 * recommender pane fed by the session.
 */
import { Api } from "./api.js";
import type { ExploreMode, PaneResponse, SortMode, TermCount } from "./model.js";
import { EXPLORE_MODES, SORT_MODES } from "./model.js";

export type QueryToggle = SortMode | ExploreMode;

export const ALL_TOGGLES: QueryToggle[] = [...SORT_MODES, ...EXPLORE_MODES];

export class QueryPageController {
  readonly api: Api;
  suggestions: TermCount[] = [];
  pane: PaneResponse | null = null;
  activeTab = "todays_release";

  constructor(api: Api) {
    this.api = api;
  }

  async typeahead(prefix: string): Promise<TermCount[]> {
    const last = prefix.split(/\s+/).pop() ?? "";
    if (last.length < 2) {
      this.suggestions = [];
      return [];
    }
    const resp = await this.api.complete(last);
    this.suggestions = resp.terms;
    return this.suggestions;
  }

  /** Where submitting the query box sends the browser. */
  targetUrl(q: string, toggle: QueryToggle): string {
    const query = encodeURIComponent(q);
    if ((EXPLORE_MODES as readonly string[]).includes(toggle)) {
      return `results.html?q=${query}&explore=${toggle}`;
    }
    return `results.html?q=${query}&sort=${toggle}`;
  }

  async loadPane(): Promise<PaneResponse> {
    this.pane = await this.api.pane();
    return this.pane;
  }

  paneTab(label: string): { items: { id: string; title: string }[]; reason: string | null } {
    const list = this.pane?.lists.find((l) => l.label === label);
    if (!list) return { items: [], reason: "not loaded" };
    return {
      items: list.results.items.map((h) => ({ id: h.id, title: h.title })),
      reason: list.reason,
    };
  }
}

/** Typed client for the litscout service.
 *
 * Every request the pages make goes through this module, and every path is
 * checked against the documented endpoint set before it leaves the client;
 * anything else is a programming error, not a network call.
 */
import type {
  CompleteResponse,
  DigestResponse,
  DocResponse,
  ExploreMode,
  ExploreResponse,
  ListNamesResponse,
  ListSavedResponse,
  Operator,
  OpResponse,
  PaneResponse,
  SearchResponse,
  SortMode,
  ViewResponse,
} from "./model.js";

export const DOCUMENTED_ENDPOINTS: RegExp[] = [
  /^\/search\?/,
  /^\/lists$/,
  /^\/lists\/[^/]+$/,
  /^\/lists\/[^/]+\/op\/(references|citations|coread|similar|helper)(\?|$)/,
  /^\/explore\/(reviews|experts|reading)\?/,
  /^\/doc\/[^/]+(\?|$)/,
  /^\/pane(\?|$)/,
  /^\/digest(\?|$)/,
  /^\/complete\?/,
  /^\/view\/[^/]+$/,
  /^\/profile\/[^/]+$/,
];

export function isDocumented(pathWithQuery: string): boolean {
  return DOCUMENTED_ENDPOINTS.some((re) => re.test(pathWithQuery));
}

export function buildQuery(params: Record<string, string | number | boolean | undefined>): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value === undefined) continue;
    parts.push(`${encodeURIComponent(key)}=${encodeURIComponent(String(value))}`);
  }
  return parts.length ? `?${parts.join("&")}` : "";
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface ApiConfig {
  baseUrl?: string;
  sessionId?: string;
  fetchFn?: typeof fetch;
}

export class Api {
  readonly baseUrl: string;
  readonly sessionId: string | undefined;
  private readonly fetchFn: typeof fetch;

  constructor(cfg: ApiConfig = {}) {
    this.baseUrl = cfg.baseUrl ?? "";
    this.sessionId = cfg.sessionId;
    this.fetchFn = cfg.fetchFn ?? fetch.bind(globalThis);
  }

  private async call<T>(method: "GET" | "POST", path: string, body?: unknown): Promise<T> {
    if (!isDocumented(path)) {
      throw new Error(`undocumented endpoint: ${path}`);
    }
    const headers: Record<string, string> = {};
    if (this.sessionId) headers["X-Session-Id"] = this.sessionId;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const resp = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const err = payload?.error ?? { code: "UnknownError", message: resp.statusText };
      throw new ApiError(resp.status, err.code, err.message);
    }
    return payload as T;
  }

  search(
    q: string,
    sort: SortMode,
    extra: { refereed?: boolean; year?: string } = {},
  ): Promise<SearchResponse> {
    return this.call("GET", `/search${buildQuery({ q, sort, ...extra })}`);
  }

  saveList(name: string, body: { ids: string[] } | { query: string; sort?: string }): Promise<ListSavedResponse> {
    return this.call("POST", `/lists/${encodeURIComponent(name)}`, body);
  }

  listNames(): Promise<ListNamesResponse> {
    return this.call("GET", "/lists");
  }

  getList(name: string): Promise<ListSavedResponse> {
    return this.call("GET", `/lists/${encodeURIComponent(name)}`);
  }

  runOp(name: string, op: Operator, params: { k?: number; n?: number } = {}): Promise<OpResponse> {
    return this.call(
      "POST",
      `/lists/${encodeURIComponent(name)}/op/${op}${buildQuery({ ...params })}`,
    );
  }

  explore(mode: ExploreMode, q: string, k?: number): Promise<ExploreResponse> {
    return this.call("GET", `/explore/${mode}${buildQuery({ q, k })}`);
  }

  doc(id: string): Promise<DocResponse> {
    return this.call("GET", `/doc/${encodeURIComponent(id)}`);
  }

  view(id: string): Promise<ViewResponse> {
    return this.call("POST", `/view/${encodeURIComponent(id)}`);
  }

  pane(k?: number): Promise<PaneResponse> {
    return this.call("GET", `/pane${buildQuery({ k })}`);
  }

  digest(perList?: number): Promise<DigestResponse> {
    return this.call("GET", `/digest${buildQuery({ per_list: perList })}`);
  }

  setProfile(user: string): Promise<{ user: string; session: string }> {
    return this.call("POST", `/profile/${encodeURIComponent(user)}`);
  }

  complete(prefix: string, limit = 8): Promise<CompleteResponse> {
    return this.call("GET", `/complete${buildQuery({ prefix, limit })}`);
  }
}

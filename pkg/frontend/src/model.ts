/** Response shapes of the litscout HTTP API. */

export interface Hit {
  id: string;
  score: number;
  rank: number;
  title: string;
  authors: string[];
  pub_date: string;
  journal: string;
  refereed: boolean;
}

export interface ListOut {
  items: Hit[];
  provenance: string;
  total: number;
}

export interface FacetValue {
  value: string;
  count: number;
}

export type Facets = Record<string, FacetValue[]>;

export interface SearchResponse {
  query: string;
  sort: string;
  results: ListOut;
  facets: Facets;
  session: string;
}

export interface SlotOut {
  algorithm: string;
  doc_id: string | null;
  score: number | null;
  reason: string | null;
  title: string | null;
}

export interface DocumentOut {
  id: string;
  title: string;
  abstract: string;
  body: string | null;
  authors: string[];
  pub_date: string;
  journal: string;
  refereed: boolean;
  keywords: string[];
  entities: string[];
  references: string[];
  citation_count: number;
  reads_90d: number;
}

export interface DocResponse {
  document: DocumentOut;
  buttons: Record<string, ListOut>;
  panel: SlotOut[] | null;
  panel_unavailable: string | null;
  session: string;
}

export interface ExploreResponse {
  mode: string;
  query: string;
  results: ListOut;
  session: string;
}

export interface ListSavedResponse {
  name: string;
  results: ListOut;
  session: string;
}

export interface ListNamesResponse {
  names: string[];
  session: string;
}

export interface OpResponse {
  source: string;
  op: string;
  results: ListOut;
  session: string;
}

export interface LabeledListOut {
  label: string;
  results: ListOut;
  reason: string | null;
}

export interface PaneResponse {
  lists: LabeledListOut[];
  session: string;
}

export interface DigestResponse {
  user: string;
  lists: LabeledListOut[];
  session: string;
}

export interface TermCount {
  term: string;
  count: number;
}

export interface CompleteResponse {
  prefix: string;
  terms: TermCount[];
}

export interface ViewResponse {
  viewed: string;
  recent: string[];
  session: string;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export const SORT_MODES = ["recent", "relevant", "cited", "popular"] as const;
export type SortMode = (typeof SORT_MODES)[number];

export const EXPLORE_MODES = ["reviews", "experts", "reading"] as const;
export type ExploreMode = (typeof EXPLORE_MODES)[number];

export const OPERATORS = ["references", "citations", "coread", "similar", "helper"] as const;
export type Operator = (typeof OPERATORS)[number];

export const BUTTON_NAMES = ["references", "citations", "coread", "similar"] as const;
export type ButtonName = (typeof BUTTON_NAMES)[number];

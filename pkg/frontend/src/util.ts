/** Small shared helpers: HTML escaping, query grammar tags, date math. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** A facet value as a query-grammar filter tag, quoting when needed. */
export function filterTag(dim: string, value: string): string {
  const tag = dim === "year" ? "year" : dim;
  const needsQuotes = /[\s"]/.test(value);
  const safe = value.replace(/"/g, "");
  return `${tag}:${needsQuotes ? `"${safe}"` : safe}`;
}

/** Compose the base query text with applied facet filters. */
export function composeQuery(base: string, filters: Array<{ dim: string; value: string }>): string {
  const tags = filters.map((f) => filterTag(f.dim, f.value));
  return [base.trim(), ...tags].filter(Boolean).join(" ");
}

export function ageInDays(pubDate: string, now: Date): number {
  const pub = new Date(`${pubDate}T00:00:00Z`);
  return Math.floor((now.getTime() - pub.getTime()) / 86_400_000);
}

export function formatAuthors(authors: string[], max = 3): string {
  if (authors.length <= max) return authors.join("; ");
  return `${authors.slice(0, max).join("; ")} et al.`;
}

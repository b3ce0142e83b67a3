/** DOM wiring for the abstract page: metadata, the four buttons, and the
 * eight-slot panel (empty slots keep their reason text).
 */
import { Api } from "./api.js";
import { AbstractController } from "./abstractpage.js";
import { BUTTON_NAMES } from "./model.js";
import { currentSessionId } from "./session.js";
import { escapeHtml, formatAuthors } from "./util.js";

const BUTTON_LABELS: Record<string, string> = {
  references: "References",
  citations: "Citations",
  coread: "Co-Read",
  similar: "Similar Articles",
};

export async function initAbstractPage(): Promise<void> {
  const api = new Api({ sessionId: currentSessionId() });
  const ctl = new AbstractController(api);
  const docId = new URLSearchParams(window.location.search).get("id");
  const meta = document.getElementById("metadata") as HTMLElement;
  const buttons = document.getElementById("buttons") as HTMLElement;
  const panel = document.getElementById("panel") as HTMLElement;

  if (!docId) {
    meta.innerHTML = `<p class="error">no document id given</p>`;
    return;
  }
  try {
    await ctl.load(docId);
  } catch (err) {
    meta.innerHTML = `<p class="error">${escapeHtml(String(err))}</p>`;
    return;
  }
  const doc = ctl.data!.document;
  meta.innerHTML = `
    <h2>${escapeHtml(doc.title)}</h2>
    <p class="meta">${escapeHtml(formatAuthors(doc.authors, 8))}</p>
    <p class="meta">${escapeHtml(doc.journal)} · ${doc.pub_date} · ${doc.refereed ? "refereed" : "unrefereed"}
       · cited ${doc.citation_count} · read by ${doc.reads_90d} in 90d</p>
    <p>${escapeHtml(doc.abstract)}</p>
    <p class="meta">keywords: ${doc.keywords.map(escapeHtml).join(", ") || "-"}</p>
    <p class="meta">objects: ${doc.entities.map(escapeHtml).join(", ") || "-"}</p>`;

  buttons.innerHTML = BUTTON_NAMES.map(
    (b) => `<a class="button" href="${ctl.buttonUrl(b)}">${BUTTON_LABELS[b]}</a>`,
  ).join("");

  if (!ctl.data!.panel) {
    panel.innerHTML = `<p class="muted">${escapeHtml(ctl.data!.panel_unavailable ?? "panel unavailable")}</p>`;
    return;
  }
  panel.innerHTML = ctl
    .panelView()
    .map((slot) => {
      const body = slot.docId
        ? `<a href="${ctl.slotUrl(slot.docId)}">${escapeHtml(slot.title)}</a>`
        : `<span class="muted">${escapeHtml(slot.detail)}</span>`;
      return `<div class="slot"><h4>${escapeHtml(slot.algorithm)}</h4>${body}</div>`;
    })
    .join("");
}

if (typeof document !== "undefined" && document.getElementById("panel")) {
  void initAbstractPage();
}

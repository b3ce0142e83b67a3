/** DOM wiring for the query page. */
import { Api } from "./api.js";
import { QueryPageController, ALL_TOGGLES, type QueryToggle } from "./querypage.js";
import { currentSessionId } from "./session.js";
import { escapeHtml } from "./util.js";

const TOGGLE_LABELS: Record<string, string> = {
  recent: "Most Recent",
  relevant: "Most Relevant",
  cited: "Most Cited",
  popular: "Most Popular",
  reviews: "Reviews & Introductory",
  experts: "What Experts Cite",
  reading: "What People Are Reading",
};

const PANE_TABS: Array<[string, string]> = [
  ["todays_release", "Today's release"],
  ["recently_viewed", "Recently viewed"],
  ["similar_hot", "Similar & hot"],
];

function renderPane(ctl: QueryPageController, root: HTMLElement): void {
  const tabs = PANE_TABS.map(
    ([label, text]) =>
      `<button class="tab ${ctl.activeTab === label ? "active" : ""}" data-tab="${label}">${text}</button>`,
  ).join("");
  const current = ctl.paneTab(ctl.activeTab);
  const body = current.items.length
    ? `<ul>${current.items
        .map(
          (it) =>
            `<li><a href="abstract.html?id=${encodeURIComponent(it.id)}">${escapeHtml(it.title)}</a></li>`,
        )
        .join("")}</ul>`
    : `<p class="muted">${escapeHtml(current.reason ?? "nothing here yet")}</p>`;
  root.innerHTML = `<div class="tabs">${tabs}</div>${body}`;
  root.querySelectorAll<HTMLButtonElement>("button.tab").forEach((btn) => {
    btn.addEventListener("click", () => {
      ctl.activeTab = btn.dataset.tab ?? "todays_release";
      renderPane(ctl, root);
    });
  });
}

export function initQueryPage(): void {
  const api = new Api({ sessionId: currentSessionId() });
  const ctl = new QueryPageController(api);

  const box = document.getElementById("query-box") as HTMLInputElement;
  const suggestions = document.getElementById("suggestions") as HTMLElement;
  const toggles = document.getElementById("toggles") as HTMLElement;
  const pane = document.getElementById("pane") as HTMLElement;

  let active: QueryToggle = "recent";
  toggles.innerHTML = ALL_TOGGLES.map(
    (t, i) =>
      `<button class="toggle ${i === 0 ? "active" : ""}" data-toggle="${t}">${TOGGLE_LABELS[t]}</button>`,
  ).join("");
  toggles.querySelectorAll<HTMLButtonElement>("button.toggle").forEach((btn) => {
    btn.addEventListener("click", () => {
      active = btn.dataset.toggle as QueryToggle;
      toggles.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
      btn.classList.add("active");
    });
  });

  box.addEventListener("input", async () => {
    const terms = await ctl.typeahead(box.value);
    suggestions.innerHTML = terms
      .map((t) => `<span class="suggestion">${escapeHtml(t.term)} <em>${t.count}</em></span>`)
      .join(" ");
  });

  (document.getElementById("query-form") as HTMLFormElement).addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (box.value.trim()) {
      window.location.href = ctl.targetUrl(box.value, active);
    }
  });

  ctl.loadPane().then(() => renderPane(ctl, pane)).catch((err) => {
    pane.innerHTML = `<p class="muted">pane unavailable: ${escapeHtml(String(err))}</p>`;
  });
}

if (typeof document !== "undefined" && document.getElementById("query-form")) {
  initQueryPage();
}

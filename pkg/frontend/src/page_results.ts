/** DOM wiring for the results/list page: facets left, results right, nothing
 * unrequested. List edits and operator buttons act on the visible selection.
 */
import { Api } from "./api.js";
import { OPERATORS } from "./model.js";
import { ResultsController, seedFromParams } from "./resultspage.js";
import { currentSessionId } from "./session.js";
import { escapeHtml, formatAuthors } from "./util.js";

const AGE_STOPS: Array<[string, number | null]> = [
  ["1 month", 30],
  ["3 months", 90],
  ["1 year", 365],
  ["2 years", 730],
  ["5 years", 1825],
  ["10 years", 3650],
  ["any age", null],
];

function renderFacets(ctl: ResultsController, root: HTMLElement): void {
  const blocks = Object.entries(ctl.facets)
    .filter(([, values]) => values.length > 0)
    .map(([dim, values]) => {
      const rows = values
        .slice(0, 12)
        .map(
          (v) =>
            `<li><a href="#" data-dim="${dim}" data-value="${escapeHtml(v.value)}">${escapeHtml(
              v.value,
            )}</a> <span class="count">${v.count}</span></li>`,
        )
        .join("");
      return `<section class="facet"><h3>${dim}</h3><ul>${rows}</ul></section>`;
    });
  root.innerHTML = blocks.join("") || `<p class="muted">no facets for this list</p>`;
}

function renderResults(ctl: ResultsController, root: HTMLElement): void {
  const visible = new Set(ctl.visibleHits().map((h) => h.id));
  const rows = ctl.hits
    .map((h) => {
      const dimmed = visible.has(h.id) ? "" : "dimmed";
      const checked = ctl.unchecked.has(h.id) ? "" : "checked";
      return `
      <li class="hit ${dimmed}">
        <input type="checkbox" data-id="${escapeHtml(h.id)}" ${checked}>
        <a href="abstract.html?id=${encodeURIComponent(h.id)}">${escapeHtml(h.title) || h.id}</a>
        <span class="meta">${escapeHtml(formatAuthors(h.authors))} · ${escapeHtml(h.journal)} · ${h.pub_date} · score ${h.score}</span>
      </li>`;
    })
    .join("");
  root.innerHTML = rows || `<p class="muted">empty list</p>`;
}

function renderProvenance(ctl: ResultsController, root: HTMLElement): void {
  const steps = ctl.trail.map((p) => `<li>${escapeHtml(p)}</li>`).join("");
  root.innerHTML = `<p class="prov-now">${escapeHtml(ctl.provenance)}</p><ol class="trail">${steps}</ol>`;
}

export async function initResultsPage(): Promise<void> {
  const api = new Api({ sessionId: currentSessionId() });
  const ctl = new ResultsController(api);

  const facetsEl = document.getElementById("facets") as HTMLElement;
  const resultsEl = document.getElementById("results") as HTMLElement;
  const provEl = document.getElementById("provenance") as HTMLElement;
  const slider = document.getElementById("age-slider") as HTMLInputElement;
  const sliderLabel = document.getElementById("age-label") as HTMLElement;
  const opsEl = document.getElementById("operators") as HTMLElement;
  const savedEl = document.getElementById("saved") as HTMLElement;

  function redraw(): void {
    renderFacets(ctl, facetsEl);
    renderResults(ctl, resultsEl);
    renderProvenance(ctl, provEl);
    facetsEl.querySelectorAll<HTMLAnchorElement>("a[data-dim]").forEach((a) => {
      a.addEventListener("click", async (ev) => {
        ev.preventDefault();
        await ctl.clickFacet(a.dataset.dim as string, a.dataset.value as string);
        redraw();
      });
    });
    resultsEl.querySelectorAll<HTMLInputElement>("input[type=checkbox]").forEach((cb) => {
      cb.addEventListener("change", () => {
        ctl.toggleItem(cb.dataset.id as string);
        redraw();
      });
    });
  }

  slider.max = String(AGE_STOPS.length - 1);
  slider.value = String(AGE_STOPS.length - 1);
  slider.addEventListener("input", () => {
    const stop = AGE_STOPS[Number(slider.value)];
    if (!stop) return;
    sliderLabel.textContent = stop[0];
    ctl.setMaxAge(stop[1]);
    redraw();
  });

  opsEl.innerHTML = OPERATORS.map(
    (op) => `<button class="op" data-op="${op}">${op}</button>`,
  ).join("");
  opsEl.querySelectorAll<HTMLButtonElement>("button.op").forEach((btn) => {
    btn.addEventListener("click", async () => {
      try {
        await ctl.runOperator(btn.dataset.op as (typeof OPERATORS)[number]);
      } catch (err) {
        provEl.insertAdjacentHTML("beforeend", `<p class="error">${escapeHtml(String(err))}</p>`);
      }
      redraw();
    });
  });

  async function redrawSaved(): Promise<void> {
    const names = await ctl.savedNames();
    savedEl.innerHTML = `
      <input id="save-name" placeholder="list name">
      <button id="save-btn">save list</button>
      ${names.map((n) => `<button class="recall" data-name="${escapeHtml(n)}">open ${escapeHtml(n)}</button>`).join("")}`;
    (savedEl.querySelector("#save-btn") as HTMLButtonElement).addEventListener("click", async () => {
      const name = (savedEl.querySelector("#save-name") as HTMLInputElement).value.trim();
      if (name) {
        await ctl.saveAs(name);
        await redrawSaved();
      }
    });
    savedEl.querySelectorAll<HTMLButtonElement>("button.recall").forEach((btn) => {
      btn.addEventListener("click", async () => {
        await ctl.recall(btn.dataset.name as string);
        redraw();
      });
    });
  }

  await ctl.seed(seedFromParams(new URLSearchParams(window.location.search)));
  redraw();
  await redrawSaved();
}

if (typeof document !== "undefined" && document.getElementById("results")) {
  void initResultsPage();
}

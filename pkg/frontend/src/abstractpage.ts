/** Abstract page controller: document metadata, the four user-directed
 * buttons, and the eight-slot automated recommendation panel.
 *
 * Opening the page records a view in the session (the pane's short-term
 * memory). Empty panel slots keep their reason text so the user can see what
 * signal the corpus lacks, rather than silently disappearing.
 */
import { Api } from "./api.js";
import type { ButtonName, DocResponse } from "./model.js";

export interface SlotView {
  algorithm: string;
  docId: string | null;
  title: string;
  detail: string;
}

export class AbstractController {
  readonly api: Api;
  data: DocResponse | null = null;

  constructor(api: Api) {
    this.api = api;
  }

  async load(docId: string, opts: { recordView?: boolean } = {}): Promise<DocResponse> {
    if (opts.recordView ?? true) {
      await this.api.view(docId);
    }
    this.data = await this.api.doc(docId);
    return this.data;
  }

  buttonUrl(button: ButtonName): string {
    if (!this.data) throw new Error("page not loaded");
    return `results.html?doc=${encodeURIComponent(this.data.document.id)}&button=${button}`;
  }

  slotUrl(docId: string): string {
    return `abstract.html?id=${encodeURIComponent(docId)}`;
  }

  /** Panel rows for rendering; exactly one row per algorithm, always eight
   * when the panel is available. */
  panelView(): SlotView[] {
    if (!this.data?.panel) return [];
    return this.data.panel.map((slot) => ({
      algorithm: slot.algorithm,
      docId: slot.doc_id,
      title: slot.doc_id ? (slot.title ?? slot.doc_id) : "(no recommendation)",
      detail: slot.doc_id ? `score ${slot.score}` : (slot.reason ?? ""),
    }));
  }
}

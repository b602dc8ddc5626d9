/** Workspace: alternative tabs, editable matrix grids, live scoreboard.
 *
 * Single source of truth: every displayed number is taken verbatim from a
 * service response. The UI reformats service numbers for display and takes
 * differences of service-provided scores for delta badges, but never
 * evaluates the scoring formula itself.
 */

import {
  AlternativeDoc,
  ApiError,
  CellDelta,
  Client,
  MatrixDoc,
  ModelDoc,
  PairScoresDoc,
  ScoresDoc,
} from "./api.js";
import { cycleEffect, EFFECT_GLYPH, formatDelta, formatNumber, formatPercent } from "./format.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function pairLabel(dimFrom: string, dimTo: string): string {
  return `${dimFrom}-${dimTo}`;
}

/** Model order with the theoretical optimal last, matching service tables. */
export function orderedAlternatives(model: ModelDoc): AlternativeDoc[] {
  const regular = model.alternatives.filter((a) => !a.is_theoretical_optimal);
  const optimal = model.alternatives.filter((a) => a.is_theoretical_optimal);
  return [...regular, ...optimal];
}

export class Workspace {
  sessionId = "";
  private model: ModelDoc | null = null;
  private baseline: ScoresDoc | null = null;
  private current: ScoresDoc | null = null;
  private activeAlt = "";
  /** Serializes PATCH requests so edits reach the service in click order. */
  private queue: Promise<unknown> = Promise.resolve();

  private readonly banners: HTMLElement;
  private readonly toolbar: HTMLElement;
  private readonly tabs: HTMLElement;
  private readonly grids: HTMLElement;
  private readonly scoreboard: HTMLElement;

  constructor(root: HTMLElement, private readonly client: Client) {
    this.banners = el("div", "banners");
    this.toolbar = el("div", "toolbar");
    this.tabs = el("div", "tabs");
    this.grids = el("div", "grids");
    this.scoreboard = el("div", "scoreboard");
    root.replaceChildren(this.banners, this.toolbar, this.tabs, this.grids, this.scoreboard);
  }

  async load(modelDoc: unknown, rawPriorities = false): Promise<void> {
    try {
      this.sessionId = await this.client.createSession(modelDoc, rawPriorities);
      this.model = await this.client.getModel(this.sessionId);
      this.baseline = await this.client.getScores(this.sessionId, false);
      this.current = this.baseline;
    } catch (error) {
      this.showError(error);
      return;
    }
    const alternatives = orderedAlternatives(this.model);
    this.activeAlt = alternatives[0]?.id ?? "";
    this.renderToolbar();
    this.renderTabs();
    this.renderGrids();
    this.renderScoreboard();
  }

  /** Resolves once all queued edits have been acknowledged. */
  async idle(): Promise<void> {
    await this.queue;
  }

  // -- banners --------------------------------------------------------------

  showError(error: unknown): void {
    const banner = el("div", "banner error");
    if (error instanceof ApiError) {
      banner.dataset.code = error.code;
      banner.append(el("span", "code", error.code), el("span", "message", ` ${error.message}`));
      if (error.detail && typeof error.detail === "object" && "path" in error.detail) {
        banner.append(el("span", "detail", ` at ${String((error.detail as { path: unknown }).path)}`));
      }
    } else {
      banner.append(el("span", "message", String(error)));
    }
    const dismiss = el("button", "dismiss", "×");
    dismiss.addEventListener("click", () => banner.remove());
    banner.append(dismiss);
    this.banners.append(banner);
  }

  // -- toolbar and tabs -----------------------------------------------------

  private renderToolbar(): void {
    const commit = el("button", "commit", "Commit");
    commit.addEventListener("click", () => void this.commit());
    const reset = el("button", "reset", "Reset");
    reset.addEventListener("click", () => void this.reset());
    this.toolbar.replaceChildren(commit, reset);
  }

  private renderTabs(): void {
    if (!this.model) return;
    this.tabs.replaceChildren(
      ...orderedAlternatives(this.model).map((alt) => {
        const tab = el("button", "tab", alt.name);
        tab.dataset.alt = alt.id;
        if (alt.is_theoretical_optimal) {
          tab.classList.add("readonly");
          tab.append(el("span", "lock", " \u{1f512}"));
        }
        if (alt.id === this.activeAlt) tab.classList.add("active");
        tab.addEventListener("click", () => {
          this.activeAlt = alt.id;
          this.renderTabs();
          this.renderGrids();
        });
        return tab;
      }),
    );
  }

  // -- matrix grids ---------------------------------------------------------

  private renderGrids(): void {
    if (!this.model) return;
    const alt = this.model.alternatives.find((a) => a.id === this.activeAlt);
    if (!alt) return;
    this.grids.replaceChildren(...alt.resolved_matrices.map((m) => this.buildGrid(alt, m)));
  }

  private buildGrid(alt: AlternativeDoc, matrix: MatrixDoc): HTMLElement {
    const names = new Map(this.model!.quality_attributes.map((qa) => [qa.id, qa.name]));
    const table = el("table", "grid");
    table.dataset.pair = pairLabel(matrix.dim_from, matrix.dim_to);
    if (alt.is_theoretical_optimal) table.classList.add("readonly");
    const caption = el("caption", "", pairLabel(matrix.dim_from, matrix.dim_to));
    table.append(caption);
    const head = el("tr");
    head.append(el("th"));
    for (const col of matrix.col_qas) head.append(el("th", "", names.get(col) ?? col));
    table.append(head);
    matrix.effects.forEach((row, i) => {
      const tr = el("tr");
      tr.append(el("th", "", names.get(matrix.row_qas[i]) ?? matrix.row_qas[i]));
      row.forEach((effect, j) => {
        const td = el("td", "cell", EFFECT_GLYPH[effect]);
        td.dataset.row = matrix.row_qas[i];
        td.dataset.col = matrix.col_qas[j];
        td.dataset.effect = String(effect);
        if (alt.is_theoretical_optimal) {
          td.classList.add("locked");
          td.addEventListener("click", () => {
            td.classList.add("lock-flash");
          });
        } else {
          td.addEventListener("click", () => this.toggleCell(alt.id, matrix, td));
        }
        tr.append(td);
      });
      table.append(tr);
    });
    return table;
  }

  /** One click cycles -1 -> 0 -> +1 -> -1 and stages the edit server-side.
   * The glyph updates immediately so rapid clicks keep cycling; the PATCH
   * requests themselves are queued to reach the service in click order. */
  toggleCell(altId: string, matrix: MatrixDoc, td: HTMLTableCellElement): Promise<unknown> {
    const next = cycleEffect(Number(td.dataset.effect));
    td.dataset.effect = String(next);
    td.textContent = EFFECT_GLYPH[next];
    td.classList.add("pending");
    const job = this.queue.then(async () => {
      const delta = await this.client.patchCell(this.sessionId, {
        alternative: altId,
        dim_from: matrix.dim_from,
        dim_to: matrix.dim_to,
        row: td.dataset.row!,
        col: td.dataset.col!,
        effect: next,
      });
      this.applyDelta(delta);
    });
    this.queue = job.catch(async (error) => {
      this.showError(error);
      await this.refresh(); // resync the optimistic glyph with the service
    });
    return this.queue;
  }

  private applyDelta(delta: CellDelta): void {
    if (!this.current) return;
    const pairs = this.current.pairs.map((p) => {
      if (p.dim_from !== delta.pair.dim_from || p.dim_to !== delta.pair.dim_to) return p;
      return {
        ...p,
        raw: delta.pair_scores.raw,
        normalized_percent: delta.pair_scores.normalized_percent,
      };
    });
    this.current = { pairs };
    this.renderScoreboard();
  }

  // -- scoreboard -----------------------------------------------------------

  private renderScoreboard(): void {
    if (!this.model || !this.current || !this.baseline) return;
    const baselineByPair = new Map(
      this.baseline.pairs.map((p) => [pairLabel(p.dim_from, p.dim_to), p]),
    );
    const table = el("table", "scores");
    const head = el("tr");
    head.append(el("th", "", "Alternative"));
    for (const p of this.current.pairs) head.append(el("th", "", pairLabel(p.dim_from, p.dim_to)));
    table.append(head);
    for (const alt of orderedAlternatives(this.model)) {
      const tr = el("tr");
      tr.append(el("th", "", alt.name));
      for (const p of this.current.pairs) {
        tr.append(this.buildScoreCell(alt, p, baselineByPair.get(pairLabel(p.dim_from, p.dim_to))));
      }
      table.append(tr);
    }
    const footnote = el(
      "p",
      "footnote",
      "Raw scores have no lower bound; percentages are relative to the theoretical optimal only.",
    );
    this.scoreboard.replaceChildren(table, footnote);
  }

  private buildScoreCell(
    alt: AlternativeDoc,
    pair: PairScoresDoc,
    baseline: PairScoresDoc | undefined,
  ): HTMLElement {
    const td = el("td", "score");
    td.dataset.alt = alt.id;
    td.dataset.pair = pairLabel(pair.dim_from, pair.dim_to);
    const raw = alt.is_theoretical_optimal ? pair.theoretical_optimal : pair.raw[alt.id];
    const pct = pair.normalized_percent[alt.id] ?? null;
    td.dataset.rawValue = String(raw);
    if (pct !== null) td.dataset.pctValue = String(pct);
    td.append(el("span", "raw", formatNumber(raw)));
    td.append(el("span", "pct", formatPercent(pct)));
    // delta between two service-provided scores for the same pair
    const baselinePct = baseline?.normalized_percent[alt.id];
    if (baseline && baselinePct !== undefined && pct !== null && pct !== baselinePct) {
      const span = el("span", "delta", formatDelta(pct - baselinePct));
      if (pct < baselinePct) span.classList.add("warn");
      td.append(span);
    }
    return td;
  }

  // -- commit / reset -------------------------------------------------------

  async commit(): Promise<void> {
    try {
      await this.queue;
      await this.client.commit(this.sessionId);
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  async reset(): Promise<void> {
    try {
      await this.queue;
      await this.client.reset(this.sessionId);
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  /** Re-reads the committed state; clears pending highlights by rebuild. */
  private async refresh(): Promise<void> {
    this.model = await this.client.getModel(this.sessionId, false);
    this.baseline = await this.client.getScores(this.sessionId, false);
    this.current = this.baseline;
    this.renderTabs();
    this.renderGrids();
    this.renderScoreboard();
  }
}

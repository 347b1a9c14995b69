import { describeCriterion } from "./api.js";
import type { ActiveCell } from "./state.js";
import { scoresComplete } from "./state.js";
import type {
  Progress,
  RatingDraft,
  SessionMeta,
  Stage1Item,
  Stage2Item,
  Verdict,
} from "./types.js";
import { CRITERIA, SCORES } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function commitList(messages: string[]): string {
  const rows = messages
    .map((m) => `<li class="commit">${escapeHtml(m)}</li>`)
    .join("");
  return `<ol class="commits">${rows}</ol>`;
}

export function renderJoin(): string {
  return `
  <section class="join">
    <h1>prscrub rating session</h1>
    <p>Choose a rater id to begin or resume your pass.</p>
    <form id="join-form">
      <input id="rater-input" placeholder="rater id" autocomplete="off" />
      <button type="submit">Join</button>
    </form>
  </section>`;
}

export function renderProgress(progress: Progress): string {
  const pct =
    progress.total === 0
      ? 0
      : Math.round((100 * progress.completed) / progress.total);
  return `
  <div class="progress" data-completed="${progress.completed}" data-total="${progress.total}">
    <div class="progress-bar"><div class="progress-fill" style="width:${pct}%"></div></div>
    <span>${progress.completed} / ${progress.total} items (${pct}%)</span>
  </div>`;
}

export function renderDone(progress: Progress): string {
  return `
  <section class="done">
    ${renderProgress(progress)}
    <h2>All items complete</h2>
    <p>Thanks! Ask the session owner to run
    <code>prscrub annotate export</code> to unblind and analyze the results.</p>
  </section>`;
}

export function renderBanner(kind: "error" | "retry", message: string): string {
  const hint =
    kind === "retry" ? " Submission will be retried; your scores are kept." : "";
  return `<div class="banner banner-${kind}" role="alert">${escapeHtml(message)}${hint}</div>`;
}

function scoreButton(
  arm: string,
  criterion: string,
  score: number,
  selected: boolean,
  active: boolean,
): string {
  const classes = ["score"];
  if (selected) classes.push("selected");
  if (active) classes.push("active");
  return `<button class="${classes.join(" ")}" data-arm="${arm}" data-criterion="${criterion}" data-score="${score}" aria-pressed="${selected}">${score}</button>`;
}

function scoreGrid(
  arm: "A" | "B",
  draft: RatingDraft,
  active: ActiveCell | null,
): string {
  const rows = CRITERIA.map((criterion) => {
    const chosen = draft[arm][criterion];
    const isActiveRow =
      active !== null && active.arm === arm && active.criterion === criterion;
    const buttons = SCORES.map((score) =>
      scoreButton(arm, criterion, score, chosen === score, isActiveRow),
    ).join("");
    return `
      <div class="criterion-row${isActiveRow ? " active" : ""}" data-arm="${arm}" data-criterion="${criterion}">
        <label title="${escapeHtml(describeCriterion(criterion))}">${criterion}</label>
        <div class="scores">${buttons}</div>
      </div>`;
  }).join("");
  return `<div class="score-grid" data-arm="${arm}">${rows}</div>`;
}

export function renderStage1Item(
  item: Stage1Item,
  draft: RatingDraft,
  active: ActiveCell | null,
  banner = "",
): string {
  const canSubmit = scoresComplete(draft, item.pending_arms);
  const panel = (arm: "A" | "B", text: string) => `
    <div class="panel arm-panel" data-arm="${arm}">
      <h3>Description ${arm}</h3>
      <p class="generated">${escapeHtml(text)}</p>
      ${scoreGrid(arm, draft, active)}
    </div>`;
  return `
  <article class="item stage1" data-sample="${escapeHtml(item.sample_id)}">
    ${banner}
    <section class="context">
      <h2>Commit messages</h2>
      ${commitList(item.input_sequence)}
      <h2>Developer-written description</h2>
      <p class="ground-truth">${escapeHtml(item.ground_truth)}</p>
    </section>
    <section class="arms">
      ${panel("A", item.arm_a)}
      ${panel("B", item.arm_b)}
    </section>
    <footer>
      <span class="hint">Keys 1-4 score the highlighted row; Enter submits.</span>
      <button id="submit" ${canSubmit ? "" : "disabled"}>Submit ratings</button>
    </footer>
  </article>`;
}

export function renderStage2Item(
  item: Stage2Item,
  verdict: Verdict | null,
  banner = "",
): string {
  const button = (value: Verdict, label: string) =>
    `<button class="verdict${verdict === value ? " selected" : ""}" data-verdict="${value}" aria-pressed="${verdict === value}">${label}</button>`;
  return `
  <article class="item stage2" data-sample="${escapeHtml(item.sample_id)}" data-heuristic="${escapeHtml(item.heuristic)}">
    ${banner}
    <section class="rule">
      <h2>${escapeHtml(item.heuristic)} flagged this PR</h2>
      <p class="rule-text">${escapeHtml(item.rule_text)}</p>
    </section>
    <section class="context">
      <h2>Commit messages</h2>
      ${commitList(item.input_sequence)}
      <h2>Developer-written description</h2>
      <p class="ground-truth">${escapeHtml(item.ground_truth)}</p>
    </section>
    <footer>
      <span class="hint">Press T for true positive, F for false positive; Enter submits.</span>
      ${button("TP", "True positive (noisy)")}
      ${button("FP", "False positive (not noisy)")}
      <button id="submit" ${verdict ? "" : "disabled"}>Submit verdict</button>
    </footer>
  </article>`;
}

export function renderHeader(meta: SessionMeta, rater: string): string {
  const label = meta.stage === 1 ? "description scoring" : "noise auditing";
  return `<header><strong>prscrub</strong> stage ${meta.stage} ${label}
    <span class="rater">rater: ${escapeHtml(rater)}</span></header>`;
}

import { ApiClient, ApiError } from "./api.js";
import {
  clearDraft,
  draftKey,
  loadRatingDraft,
  loadVerdictDraft,
  saveRatingDraft,
  saveVerdictDraft,
} from "./drafts.js";
import {
  renderBanner,
  renderDone,
  renderHeader,
  renderJoin,
  renderProgress,
  renderStage1Item,
  renderStage2Item,
} from "./render.js";
import type { ActiveCell } from "./state.js";
import {
  applyScoreKey,
  firstUnscoredCell,
  ratingPayloads,
  scoresComplete,
  setScore,
} from "./state.js";
import type {
  Arm,
  Criterion,
  Progress,
  RatingDraft,
  SessionMeta,
  Stage1Item,
  Stage2Item,
  Verdict,
} from "./types.js";

const api = new ApiClient();
const app = document.getElementById("app") as HTMLElement;

let meta: SessionMeta;
let rater = localStorage.getItem("prscrub-rater") ?? "";
let queue: (Stage1Item | Stage2Item)[] = [];
let progress: Progress | null = null;
let draft: RatingDraft = { A: {}, B: {} };
let verdict: Verdict | null = null;
let active: ActiveCell | null = null;
let banner = "";

function currentItem(): Stage1Item | Stage2Item | null {
  return queue.length > 0 ? queue[0] : null;
}

function currentKey(): string {
  const item = currentItem();
  return item ? draftKey(meta.stage, rater, item.sample_id) : "";
}

function render(): void {
  if (!rater) {
    app.innerHTML = renderJoin();
    return;
  }
  const item = currentItem();
  if (item === null) {
    app.innerHTML =
      renderHeader(meta, rater) +
      (progress ? renderDone(progress) : renderBanner("error", "no items"));
    return;
  }
  const progressHtml = progress ? renderProgress(progress) : "";
  const body =
    meta.stage === 1
      ? renderStage1Item(item as Stage1Item, draft, active, banner)
      : renderStage2Item(item as Stage2Item, verdict, banner);
  app.innerHTML = renderHeader(meta, rater) + progressHtml + body;
}

async function refresh(): Promise<void> {
  const [itemsResponse, progressResponse] = await Promise.all([
    api.items(rater),
    api.progress(rater),
  ]);
  queue = itemsResponse.items;
  progress = progressResponse;
  const item = currentItem();
  if (item) {
    if (meta.stage === 1) {
      draft = loadRatingDraft(localStorage, currentKey());
      active = firstUnscoredCell(draft, (item as Stage1Item).pending_arms);
    } else {
      verdict = loadVerdictDraft(localStorage, currentKey());
    }
  }
  render();
}

async function submitCurrent(): Promise<void> {
  const item = currentItem();
  if (!item) return;
  banner = "";
  try {
    if (meta.stage === 1) {
      const stage1 = item as Stage1Item;
      if (!scoresComplete(draft, stage1.pending_arms)) return;
      for (const payload of ratingPayloads(stage1, draft, rater)) {
        await api.submitRating(payload);
      }
    } else {
      if (!verdict) return;
      const stage2 = item as Stage2Item;
      await api.submitLabel({
        sample_id: stage2.sample_id,
        heuristic: stage2.heuristic,
        rater_id: rater,
        verdict,
      });
    }
    clearDraft(localStorage, currentKey());
    verdict = null;
    draft = { A: {}, B: {} };
    await refresh();
  } catch (error) {
    if (error instanceof ApiError) {
      // Server rejected the submission: show its detail, keep the scores.
      banner = renderBanner("error", `${error.code}: ${error.detail}`);
    } else {
      banner = renderBanner("retry", "Network problem.");
    }
    render();
  }
}

function handleScoreClick(target: HTMLElement): void {
  const arm = target.dataset.arm as Arm;
  const criterion = target.dataset.criterion as Criterion;
  const score = Number(target.dataset.score);
  draft = setScore(draft, arm, criterion, score);
  saveRatingDraft(localStorage, currentKey(), draft);
  const item = currentItem() as Stage1Item;
  active = firstUnscoredCell(draft, item.pending_arms) ?? { arm, criterion };
  render();
}

function handleVerdictClick(target: HTMLElement): void {
  verdict = target.dataset.verdict as Verdict;
  saveVerdictDraft(localStorage, currentKey(), verdict);
  render();
}

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  if (target.matches("button.score")) handleScoreClick(target);
  else if (target.matches("button.verdict")) handleVerdictClick(target);
  else if (target.id === "submit") void submitCurrent();
});

document.addEventListener("submit", (event) => {
  const form = event.target as HTMLElement;
  if (form.id !== "join-form") return;
  event.preventDefault();
  const input = document.getElementById("rater-input") as HTMLInputElement;
  if (!input.value.trim()) return;
  rater = input.value.trim();
  localStorage.setItem("prscrub-rater", rater);
  void refresh();
});

document.addEventListener("keydown", (event) => {
  if (!rater || !currentItem()) return;
  if (meta.stage === 1) {
    const item = currentItem() as Stage1Item;
    const result = applyScoreKey(event.key, draft, active, item.pending_arms);
    if (result) {
      draft = result.draft;
      active = result.active;
      saveRatingDraft(localStorage, currentKey(), draft);
      render();
      return;
    }
  } else {
    const key = event.key.toLowerCase();
    if (key === "t" || key === "f") {
      verdict = key === "t" ? "TP" : "FP";
      saveVerdictDraft(localStorage, currentKey(), verdict);
      render();
      return;
    }
  }
  if (event.key === "Enter") void submitCurrent();
});

async function boot(): Promise<void> {
  try {
    meta = await api.session();
  } catch {
    app.innerHTML = renderBanner("error", "Cannot reach the annotation service.");
    return;
  }
  if (rater) await refresh();
  else render();
}

void boot();

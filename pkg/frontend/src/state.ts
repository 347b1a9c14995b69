import type { Arm, Criterion, RatingDraft, Stage1Item } from "./types.js";
import { CRITERIA } from "./types.js";

export interface ActiveCell {
  arm: Arm;
  criterion: Criterion;
}

/** Grid order: all of arm A top to bottom, then arm B. */
export function cellOrder(pendingArms: Arm[]): ActiveCell[] {
  const cells: ActiveCell[] = [];
  for (const arm of ["A", "B"] as Arm[]) {
    if (!pendingArms.includes(arm)) continue;
    for (const criterion of CRITERIA) {
      cells.push({ arm, criterion });
    }
  }
  return cells;
}

export function setScore(
  draft: RatingDraft,
  arm: Arm,
  criterion: Criterion,
  score: number,
): RatingDraft {
  if (score < 1 || score > 4) return draft;
  return {
    ...draft,
    [arm]: { ...draft[arm], [criterion]: score },
  };
}

/** Submit only unlocks when every pending arm has all three criteria. */
export function scoresComplete(draft: RatingDraft, pendingArms: Arm[]): boolean {
  return pendingArms.every((arm) =>
    CRITERIA.every((criterion) => typeof draft[arm][criterion] === "number"),
  );
}

export function firstUnscoredCell(
  draft: RatingDraft,
  pendingArms: Arm[],
): ActiveCell | null {
  for (const cell of cellOrder(pendingArms)) {
    if (typeof draft[cell.arm][cell.criterion] !== "number") return cell;
  }
  return null;
}

export function nextCell(
  current: ActiveCell,
  pendingArms: Arm[],
): ActiveCell | null {
  const order = cellOrder(pendingArms);
  const index = order.findIndex(
    (c) => c.arm === current.arm && c.criterion === current.criterion,
  );
  return index >= 0 && index + 1 < order.length ? order[index + 1] : null;
}

/** Key "1".."4" scores the active cell and advances the cursor. */
export function applyScoreKey(
  key: string,
  draft: RatingDraft,
  active: ActiveCell | null,
  pendingArms: Arm[],
): { draft: RatingDraft; active: ActiveCell | null } | null {
  if (!/^[1-4]$/.test(key) || active === null) return null;
  const updated = setScore(draft, active.arm, active.criterion, Number(key));
  return {
    draft: updated,
    active:
      nextCell(active, pendingArms) ?? firstUnscoredCell(updated, pendingArms),
  };
}

export function ratingPayloads(
  item: Stage1Item,
  draft: RatingDraft,
  raterId: string,
): {
  sample_id: string;
  rater_id: string;
  arm: Arm;
  relevance: number;
  descriptiveness: number;
  clarity: number;
}[] {
  return item.pending_arms.map((arm) => ({
    sample_id: item.sample_id,
    rater_id: raterId,
    arm,
    relevance: draft[arm].relevance as number,
    descriptiveness: draft[arm].descriptiveness as number,
    clarity: draft[arm].clarity as number,
  }));
}

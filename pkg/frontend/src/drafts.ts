import type { RatingDraft, Verdict } from "./types.js";
import { emptyDraft } from "./types.js";

/** Minimal storage surface so tests can swap in a plain object. */
export interface KVStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export function draftKey(stage: number, rater: string, sampleId: string): string {
  return `prscrub-draft:${stage}:${rater}:${sampleId}`;
}

export function saveRatingDraft(
  storage: KVStorage,
  key: string,
  draft: RatingDraft,
): void {
  storage.setItem(key, JSON.stringify(draft));
}

export function loadRatingDraft(storage: KVStorage, key: string): RatingDraft {
  const raw = storage.getItem(key);
  if (!raw) return emptyDraft();
  try {
    const parsed = JSON.parse(raw);
    return { A: parsed.A ?? {}, B: parsed.B ?? {} };
  } catch {
    return emptyDraft();
  }
}

export function saveVerdictDraft(
  storage: KVStorage,
  key: string,
  verdict: Verdict,
): void {
  storage.setItem(key, verdict);
}

export function loadVerdictDraft(storage: KVStorage, key: string): Verdict | null {
  const raw = storage.getItem(key);
  return raw === "TP" || raw === "FP" ? raw : null;
}

export function clearDraft(storage: KVStorage, key: string): void {
  storage.removeItem(key);
}

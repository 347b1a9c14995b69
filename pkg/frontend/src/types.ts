export type Arm = "A" | "B";
export type Criterion = "relevance" | "descriptiveness" | "clarity";
export type Verdict = "TP" | "FP";

export const CRITERIA: Criterion[] = ["relevance", "descriptiveness", "clarity"];
export const SCORES = [1, 2, 3, 4];

export interface SessionMeta {
  stage: 1 | 2;
  item_count: number;
  criteria?: Criterion[];
  scale?: Record<string, string>;
  heuristics?: string[];
  verdicts?: Verdict[];
}

export interface Stage1Item {
  sample_id: string;
  input_sequence: string[];
  ground_truth: string;
  arm_a: string;
  arm_b: string;
  pending_arms: Arm[];
}

export interface Stage2Item {
  sample_id: string;
  heuristic: string;
  input_sequence: string[];
  ground_truth: string;
  rule_text: string;
}

export interface Progress {
  rater_id: string;
  total: number;
  completed: number;
  remaining: number;
}

/** Per-arm scores entered so far; may be partial until submit. */
export type RatingDraft = {
  [arm in Arm]: Partial<Record<Criterion, number>>;
};

export function emptyDraft(): RatingDraft {
  return { A: {}, B: {} };
}

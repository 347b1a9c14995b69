import type {
  Arm,
  Criterion,
  Progress,
  SessionMeta,
  Stage1Item,
  Stage2Item,
  Verdict,
} from "./types.js";

/** Error reported by the service, carrying its machine-readable code. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export interface RatingSubmission {
  sample_id: string;
  rater_id: string;
  arm: Arm;
  relevance: number;
  descriptiveness: number;
  clarity: number;
}

export interface LabelSubmission {
  sample_id: string;
  heuristic: string;
  rater_id: string;
  verdict: Verdict;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        typeof body.error === "string" ? body.error : "http_error",
        typeof body.detail === "string" ? body.detail : response.statusText,
      );
    }
    return body as T;
  }

  session(): Promise<SessionMeta> {
    return this.request("/api/session");
  }

  items(
    rater: string,
  ): Promise<{ stage: 1 | 2; items: (Stage1Item | Stage2Item)[] }> {
    return this.request(`/api/items?rater=${encodeURIComponent(rater)}`);
  }

  progress(rater: string): Promise<Progress> {
    return this.request(`/api/progress?rater=${encodeURIComponent(rater)}`);
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  submitRating(rating: RatingSubmission): Promise<{ status: string }> {
    return this.post("/api/stage1/rating", rating);
  }

  submitLabel(label: LabelSubmission): Promise<{ status: string }> {
    return this.post("/api/stage2/label", label);
  }
}

export function describeCriterion(criterion: Criterion): string {
  switch (criterion) {
    case "relevance":
      return "How closely the description matches the commits and context";
    case "descriptiveness":
      return "How well the description conveys and summarizes the change";
    case "clarity":
      return "How easy the description is to read and how concise it is";
  }
}

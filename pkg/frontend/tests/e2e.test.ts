import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { ratingPayloads, scoresComplete } from "../src/state.js";
import type { RatingDraft, Stage1Item, Stage2Item } from "../src/types.js";
import { FakeAnnotationServer, makeStage1Fixture, makeStage2Fixture } from "./fakeServer.js";

function scriptedDraft(): RatingDraft {
  return {
    A: { relevance: 4, descriptiveness: 3, clarity: 4 },
    B: { relevance: 2, descriptiveness: 2, clarity: 1 },
  };
}

describe("scripted rater", () => {
  it("completes a 10-item stage-1 session to 100%", async () => {
    const { items } = makeStage1Fixture(10);
    const server = new FakeAnnotationServer(1, items);
    const client = new ApiClient("", server.fetch);

    for (;;) {
      const view = await client.items("scripted");
      if (view.items.length === 0) break;
      const item = view.items[0] as Stage1Item;
      const draft = scriptedDraft();
      expect(scoresComplete(draft, item.pending_arms)).toBe(true);
      for (const payload of ratingPayloads(item, draft, "scripted")) {
        expect((await client.submitRating(payload)).status).toBe("stored");
      }
    }
    const progress = await client.progress("scripted");
    expect(progress).toMatchObject({ total: 10, completed: 10, remaining: 0 });
    expect(server.appends).toBe(20); // two arms per item, stored once each
  });

  it("duplicate submit after a reconnect stays a single stored record", async () => {
    const { items } = makeStage1Fixture(3);
    const server = new FakeAnnotationServer(1, items);
    const client = new ApiClient("", server.fetch);
    const item = (await client.items("r")).items[0] as Stage1Item;
    const [payload] = ratingPayloads(item, scriptedDraft(), "r");

    expect((await client.submitRating(payload)).status).toBe("stored");

    // Connection drops before the client sees the ack; it resubmits.
    server.offline = true;
    await expect(client.submitRating(payload)).rejects.toThrow(TypeError);
    server.offline = false;
    expect((await client.submitRating(payload)).status).toBe("duplicate");
    expect(server.appends).toBe(1);
  });

  it("a 4xx keeps the draft usable and carries the server detail", async () => {
    const { items } = makeStage1Fixture(1);
    const server = new FakeAnnotationServer(1, items);
    const client = new ApiClient("", server.fetch);
    const draft = scriptedDraft();
    const item = (await client.items("r")).items[0] as Stage1Item;
    const error = await client
      .submitRating({ ...ratingPayloads(item, draft, "r")[0], relevance: 99 })
      .catch((e) => e as ApiError);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.detail).toBeTruthy();
    // the draft object is untouched by the failed submission
    expect(draft.A.relevance).toBe(4);
    expect(scoresComplete(draft, item.pending_arms)).toBe(true);
  });

  it("completes a stage-2 audit pass with keyboard-style verdicts", async () => {
    const stage2 = makeStage2Fixture(8);
    const server = new FakeAnnotationServer(2, [], stage2);
    const client = new ApiClient("", server.fetch);

    for (;;) {
      const view = await client.items("auditor");
      if (view.items.length === 0) break;
      const item = view.items[0] as Stage2Item;
      const verdict = item.heuristic === "H3" ? "FP" : "TP"; // keystroke choice
      expect(
        (await client.submitLabel({
          sample_id: item.sample_id,
          heuristic: item.heuristic,
          rater_id: "auditor",
          verdict,
        })).status,
      ).toBe("stored");
    }
    expect((await client.progress("auditor")).completed).toBe(8);
    const verdicts = [...server.stored.values()].map((r) => r.verdict);
    expect(verdicts.filter((v) => v === "FP")).toHaveLength(2);
  });
});

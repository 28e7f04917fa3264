// Job polling: chip sequence, terminal stop (no orphan timers), backoff.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { isTerminal, jobChip, pollJob, POLL_INTERVAL_MS } from "../src/jobs.js";
import type { JobRecord } from "../src/types.js";

const fixture = <T>(name: string): T =>
  JSON.parse(readFileSync(join(__dirname, "fixtures", `${name}.json`), "utf-8")) as T;

const record = (status: JobRecord["status"], progress: number): JobRecord => ({
  job_id: "j1",
  kind: "topic_model",
  status,
  progress,
  created_at: "2024-01-01T00:00:00Z",
  finished_at: null,
  result_ref: status === "completed" ? "m1" : null,
  error: status === "failed" ? "boom" : null,
});

describe("job chip", () => {
  it("follows the queued -> running -> completed sequence", () => {
    const sequence: JobRecord[] = [
      record("queued", 0.0),
      record("running", 0.3),
      record("running", 0.8),
      record("completed", 1.0),
    ];
    const labels = sequence.map((j) => jobChip(j).className);
    expect(labels).toEqual([
      "chip chip-queued",
      "chip chip-running",
      "chip chip-running",
      "chip chip-completed",
    ]);
  });

  it("recorded real sequence respects the status order and monotone progress", () => {
    const order = { queued: 0, running: 1, completed: 2, failed: 2 };
    const snapshots = fixture<JobRecord[]>("job_sequence");
    for (let i = 1; i < snapshots.length; i++) {
      expect(order[snapshots[i].status]).toBeGreaterThanOrEqual(order[snapshots[i - 1].status]);
      expect(snapshots[i].progress).toBeGreaterThanOrEqual(snapshots[i - 1].progress);
    }
    expect(snapshots[snapshots.length - 1].status).toBe("completed");
  });

  it("marks failed jobs", () => {
    expect(jobChip(record("failed", 0.4)).className).toContain("chip-failed");
  });
});

describe("pollJob", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("stops after terminal status with no orphan timers", async () => {
    const responses = [record("queued", 0), record("running", 0.5), record("completed", 1)];
    let calls = 0;
    const fetchJob = async () => responses[Math.min(calls++, responses.length - 1)];
    const seen: string[] = [];
    const handle = pollJob(fetchJob, "j1", (job) => seen.push(job.status));

    await vi.advanceTimersByTimeAsync(0);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS);
    expect(seen).toEqual(["queued", "running", "completed"]);
    expect(handle.active).toBe(false);
    expect(vi.getTimerCount()).toBe(0);

    // a long wait after completion triggers no further fetches
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS * 10);
    expect(calls).toBe(3);
  });

  it("stop() cancels a pending poll", async () => {
    let calls = 0;
    const fetchJob = async () => {
      calls++;
      return record("running", 0.1);
    };
    const handle = pollJob(fetchJob, "j1", () => undefined);
    await vi.advanceTimersByTimeAsync(0);
    expect(calls).toBe(1);
    handle.stop();
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS * 5);
    expect(calls).toBe(1);
    expect(vi.getTimerCount()).toBe(0);
  });

  it("backs off on errors and recovers", async () => {
    let calls = 0;
    const fetchJob = async () => {
      calls++;
      if (calls <= 2) throw new Error("network");
      return record("completed", 1);
    };
    const errors: unknown[] = [];
    const seen: string[] = [];
    pollJob(fetchJob, "j1", (j) => seen.push(j.status), (e) => errors.push(e));

    await vi.advanceTimersByTimeAsync(0);                      // first call fails
    expect(errors.length).toBe(1);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS * 2);   // backed-off retry fails
    expect(errors.length).toBe(2);
    await vi.advanceTimersByTimeAsync(POLL_INTERVAL_MS * 4);   // next backoff, succeeds
    expect(seen).toEqual(["completed"]);
    expect(vi.getTimerCount()).toBe(0);
  });

  it("isTerminal covers both terminal states", () => {
    expect(isTerminal("completed")).toBe(true);
    expect(isTerminal("failed")).toBe(true);
    expect(isTerminal("running")).toBe(false);
    expect(isTerminal("queued")).toBe(false);
  });
});

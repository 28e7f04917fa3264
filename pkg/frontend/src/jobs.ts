// Job polling: 2 s interval, exponential backoff on fetch errors, and a hard
// stop at terminal status so no timer outlives its job.

import type { JobRecord } from "./types.js";

export const POLL_INTERVAL_MS = 2000;
export const MAX_BACKOFF_MS = 30000;

export type JobStatus = JobRecord["status"];

export interface PollHandle {
  stop(): void;
  readonly active: boolean;
}

export function isTerminal(status: JobStatus): boolean {
  return status === "completed" || status === "failed";
}

/** CSS class + label for the status chip shown next to a running job. */
export function jobChip(job: Pick<JobRecord, "status" | "progress">): {
  label: string;
  className: string;
} {
  const pct = Math.round(job.progress * 100);
  switch (job.status) {
    case "queued":
      return { label: "queued", className: "chip chip-queued" };
    case "running":
      return { label: `running ${pct}%`, className: "chip chip-running" };
    case "completed":
      return { label: "completed", className: "chip chip-completed" };
    case "failed":
      return { label: "failed", className: "chip chip-failed" };
  }
}

/**
 * Poll a job until terminal. `onUpdate` fires for every successful fetch
 * (including the terminal one). Returns a handle whose `stop()` cancels the
 * loop; after a terminal status the handle deactivates itself.
 */
export function pollJob(
  fetchJob: (jobId: string) => Promise<JobRecord>,
  jobId: string,
  onUpdate: (job: JobRecord) => void,
  onError?: (err: unknown) => void,
  intervalMs: number = POLL_INTERVAL_MS,
): PollHandle {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let active = true;
  let delay = intervalMs;

  const finish = () => {
    active = false;
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
    }
  };

  const tick = async () => {
    if (!active) return;
    try {
      const job = await fetchJob(jobId);
      delay = intervalMs; // healthy fetch resets the backoff
      onUpdate(job);
      if (isTerminal(job.status)) {
        finish();
        return;
      }
    } catch (err) {
      delay = Math.min(delay * 2, MAX_BACKOFF_MS);
      onError?.(err);
    }
    if (active) timer = setTimeout(tick, delay);
  };

  timer = setTimeout(tick, 0);
  return {
    stop: finish,
    get active() {
      return active;
    },
  };
}

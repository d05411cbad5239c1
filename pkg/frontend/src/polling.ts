// Poll one analysis until it settles. At most one in-flight request per
// analysis: the next tick is scheduled only after the previous response
// lands.

import type { ApiClient } from "./api.js";
import type { AnalysisView } from "./types.js";

export interface PollHandle {
  cancel(): void;
  done: Promise<AnalysisView>;
}

export const DEFAULT_POLL_INTERVAL_MS = 2000;

export function pollAnalysis(
  client: ApiClient,
  analysisId: string,
  options: {
    intervalMs?: number;
    onUpdate?: (view: AnalysisView) => void;
    setTimeoutImpl?: (fn: () => void, ms: number) => unknown;
    clearTimeoutImpl?: (handle: unknown) => void;
  } = {},
): PollHandle {
  const intervalMs = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
  const schedule = options.setTimeoutImpl ?? ((fn, ms) => setTimeout(fn, ms));
  const unschedule = options.clearTimeoutImpl ?? ((h) => clearTimeout(h as number));

  let cancelled = false;
  let timer: unknown = null;

  const done = new Promise<AnalysisView>((resolve, reject) => {
    const tick = async () => {
      if (cancelled) return;
      let view: AnalysisView;
      try {
        view = await client.getAnalysis(analysisId);
      } catch (err) {
        reject(err);
        return;
      }
      if (cancelled) return;
      options.onUpdate?.(view);
      if (view.status === "done" || view.status === "failed") {
        resolve(view);
        return;
      }
      timer = schedule(tick, intervalMs);
    };
    void tick();
  });

  return {
    cancel() {
      cancelled = true;
      if (timer !== null) unschedule(timer);
    },
    done,
  };
}

/** Typed client for the sensing service.
 *
 * All pipeline math happens server-side; this module only moves JSON.
 * Requests for the same run are queued so at most one is in flight,
 * matching the single-user session model.
 */

import type {
  ConfigDoc,
  ErrorEnvelope,
  ReconstructSummary,
  RecoverSummary,
  RunView,
  SampleSummary,
  ScenarioDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface RecoverOptions {
  sparsity?: number | null;
  rel_tol?: number;
  eps_res?: number;
  symmetrize?: boolean;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class SensingClient {
  private tails = new Map<string, Promise<unknown>>();

  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  /** Serializes tasks sharing a key; later calls wait for earlier ones. */
  private enqueue<T>(key: string, task: () => Promise<T>): Promise<T> {
    const tail = this.tails.get(key) ?? Promise.resolve();
    const next = tail.then(task, task);
    this.tails.set(key, next.catch(() => undefined));
    return next;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let envelope: ErrorEnvelope | null = null;
      try {
        envelope = (await resp.json()) as ErrorEnvelope;
      } catch {
        // non-JSON error body; fall through to the generic error below
      }
      if (envelope && envelope.code) {
        throw new ApiError(resp.status, envelope.code, envelope.message, envelope.details);
      }
      throw new ApiError(resp.status, "http-error", `HTTP ${resp.status}`, null);
    }
    return (await resp.json()) as T;
  }

  createRun(scenario: ScenarioDoc): Promise<{ run_id: string; stage: number }> {
    return this.enqueue("create", () =>
      this.request("POST", "/v1/runs", scenario),
    );
  }

  sample(runId: string, config: ConfigDoc, bankSeed = 0): Promise<SampleSummary> {
    return this.enqueue(runId, () =>
      this.request("POST", `/v1/runs/${runId}/sample`, {
        config,
        bank_seed: bankSeed,
      }),
    );
  }

  recover(runId: string, options: RecoverOptions = {}): Promise<RecoverSummary> {
    const payload: Record<string, unknown> = {};
    if (options.sparsity !== undefined && options.sparsity !== null) {
      payload.sparsity = options.sparsity;
    }
    if (options.rel_tol !== undefined) payload.rel_tol = options.rel_tol;
    if (options.eps_res !== undefined) payload.eps_res = options.eps_res;
    if (options.symmetrize !== undefined) payload.symmetrize = options.symmetrize;
    return this.enqueue(runId, () =>
      this.request("POST", `/v1/runs/${runId}/recover`, payload),
    );
  }

  reconstruct(runId: string): Promise<ReconstructSummary> {
    return this.enqueue(runId, () =>
      this.request("POST", `/v1/runs/${runId}/reconstruct`),
    );
  }

  getRun(runId: string): Promise<RunView> {
    return this.enqueue(runId, () => this.request("GET", `/v1/runs/${runId}`));
  }

  async artifact(runId: string, name: string): Promise<ArrayBuffer> {
    return this.enqueue(runId, async () => {
      const resp = await this.fetchImpl(
        `${this.baseUrl}/v1/runs/${runId}/artifacts/${name}`,
      );
      if (!resp.ok) {
        const envelope = (await resp.json()) as ErrorEnvelope;
        throw new ApiError(resp.status, envelope.code, envelope.message, envelope.details);
      }
      return resp.arrayBuffer();
    });
  }
}

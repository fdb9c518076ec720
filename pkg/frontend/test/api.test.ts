import { describe, expect, it } from "vitest";

import { ApiError, SensingClient } from "../src/api.js";
import { DEMO_SCENARIO, PROTOTYPE_CONFIG } from "../src/presets.js";

interface Captured {
  url: string;
  method: string;
  body: unknown;
}

/** fetch stub that records calls and replies from a queue. */
function stubFetch(replies: Array<{ status?: number; json?: unknown; delayMs?: number }>) {
  const calls: Captured[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    const reply = replies[Math.min(calls.length, replies.length - 1)];
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    if (reply.delayMs) {
      await new Promise((r) => setTimeout(r, reply.delayMs));
    }
    return new Response(JSON.stringify(reply.json ?? {}), {
      status: reply.status ?? 200,
      headers: { "content-type": "application/json" },
    });
  };
  return { calls, impl };
}

describe("SensingClient", () => {
  it("posts the scenario document verbatim to /v1/runs", async () => {
    const { calls, impl } = stubFetch([{ json: { run_id: "r1", stage: 1 } }]);
    const client = new SensingClient("http://x", impl);
    const out = await client.createRun(DEMO_SCENARIO);
    expect(out.run_id).toBe("r1");
    expect(calls[0].url).toBe("http://x/v1/runs");
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual(DEMO_SCENARIO);
  });

  it("strips trailing slashes from the base URL", async () => {
    const { calls, impl } = stubFetch([{ json: {} }]);
    const client = new SensingClient("http://x:8000///", impl);
    await client.getRun("r1");
    expect(calls[0].url).toBe("http://x:8000/v1/runs/r1");
  });

  it("sends config and bank seed to the sample stage", async () => {
    const { calls, impl } = stubFetch([{ json: {} }]);
    const client = new SensingClient("http://x", impl);
    await client.sample("r1", PROTOTYPE_CONFIG, 3);
    expect(calls[0].url).toBe("http://x/v1/runs/r1/sample");
    expect(calls[0].body).toEqual({ config: PROTOTYPE_CONFIG, bank_seed: 3 });
  });

  it("omits a null sparsity so the server picks its default", async () => {
    const { calls, impl } = stubFetch([{ json: {} }]);
    const client = new SensingClient("http://x", impl);
    await client.recover("r1", { sparsity: null });
    expect(calls[0].body).toEqual({});
    await client.recover("r1", { sparsity: 4 });
    expect(calls[1].body).toEqual({ sparsity: 4 });
  });

  it("turns an error envelope into a typed ApiError", async () => {
    const { impl } = stubFetch([
      {
        status: 422,
        json: { code: "invalid-scenario", message: "band outside range", details: { i: 0 } },
      },
    ]);
    const client = new SensingClient("http://x", impl);
    const err = await client.createRun(DEMO_SCENARIO).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.code).toBe("invalid-scenario");
    expect(err.message).toBe("band outside range");
    expect(err.details).toEqual({ i: 0 });
  });

  it("falls back to a generic code for non-envelope errors", async () => {
    const impl = async () => new Response("boom", { status: 500 });
    const client = new SensingClient("http://x", impl);
    const err = await client.getRun("r1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("http-error");
  });

  it("serializes requests against the same run", async () => {
    const { calls, impl } = stubFetch([
      { json: {}, delayMs: 30 },
      { json: {} },
    ]);
    const client = new SensingClient("http://x", impl);
    const order: string[] = [];
    const p1 = client.sample("r1", PROTOTYPE_CONFIG).then(() => order.push("sample"));
    const p2 = client.recover("r1").then(() => order.push("recover"));
    await Promise.all([p1, p2]);
    expect(order).toEqual(["sample", "recover"]);
    // the second request must not have been dispatched before the first
    // resolved; with a 30 ms delay on call 1 this is only possible if the
    // queue held it back
    expect(calls.map((c) => c.url)).toEqual([
      "http://x/v1/runs/r1/sample",
      "http://x/v1/runs/r1/recover",
    ]);
  });

  it("keeps queueing after a failure", async () => {
    const { calls, impl } = stubFetch([
      { status: 409, json: { code: "conflict", message: "too early", details: null } },
      { json: { ok: true } },
    ]);
    const client = new SensingClient("http://x", impl);
    await expect(client.reconstruct("r1")).rejects.toMatchObject({ code: "conflict" });
    await expect(client.getRun("r1")).resolves.toEqual({ ok: true });
    expect(calls).toHaveLength(2);
  });
});

/** Runs wizard stages against the service, updating the view model.
 *
 * Shared by the page script and the integration tests so both drive the
 * exact same request-building code.
 */

import { ApiError, SensingClient } from "./api.js";
import type { StageNumber, StageViewModel } from "./model.js";
import type { ErrorEnvelope } from "./types.js";

export function toEnvelope(err: unknown): ErrorEnvelope {
  if (err instanceof ApiError) {
    return { code: err.code, message: err.message, details: err.details };
  }
  return { code: "client-error", message: String(err), details: null };
}

/** Executes one stage; resolves true on success, false on a recorded error. */
export async function runStage(
  vm: StageViewModel,
  client: SensingClient,
  stage: StageNumber,
): Promise<boolean> {
  if (!vm.canRun(stage)) {
    return false;
  }
  vm.markPending(stage);
  try {
    if (stage === 1) {
      vm.applySuccess(1, await client.createRun(vm.scenario));
    } else if (stage === 2) {
      const runId = vm.runId as string;
      vm.applySuccess(2, await client.sample(runId, vm.config, vm.bankSeed));
    } else if (stage === 3) {
      const runId = vm.runId as string;
      vm.applySuccess(3, await client.recover(runId, { sparsity: vm.sparsity }));
    } else {
      const runId = vm.runId as string;
      vm.applySuccess(4, await client.reconstruct(runId));
    }
    return true;
  } catch (err) {
    vm.applyError(stage, toEnvelope(err));
    return false;
  }
}

/** Runs stages 1 through 4 in order, stopping at the first failure. */
export async function runAllStages(
  vm: StageViewModel,
  client: SensingClient,
): Promise<boolean> {
  for (const stage of [1, 2, 3, 4] as StageNumber[]) {
    if (!(await runStage(vm, client, stage))) {
      return false;
    }
  }
  return true;
}

/** Wizard state: four stages, strict gating, downstream invalidation.
 *
 * Stage 1 defines the scenario and creates the run, stage 2 samples,
 * stage 3 recovers the support, stage 4 reconstructs. A stage can only
 * run when every earlier stage holds a valid result; editing an earlier
 * stage's inputs visibly invalidates everything after it.
 */

import { configErrors, scenarioErrors } from "./forms.js";
import { cloneConfig, cloneScenario } from "./presets.js";
import type {
  ConfigDoc,
  ErrorEnvelope,
  ExportDoc,
  ReconstructSummary,
  RecoverSummary,
  SampleSummary,
  ScenarioDoc,
} from "./types.js";

export type StageNumber = 1 | 2 | 3 | 4;
export type StageStatus = "idle" | "pending" | "done" | "error";

export interface StageState<T> {
  status: StageStatus;
  data: T | null;
  error: ErrorEnvelope | null;
}

function idle<T>(): StageState<T> {
  return { status: "idle", data: null, error: null };
}

export class StageViewModel {
  scenario: ScenarioDoc;
  config: ConfigDoc;
  bankSeed = 0;
  sparsity: number | null = null;

  runId: string | null = null;
  create: StageState<{ run_id: string }> = idle();
  sample: StageState<SampleSummary> = idle();
  recover: StageState<RecoverSummary> = idle();
  reconstruct: StageState<ReconstructSummary> = idle();

  constructor(scenario: ScenarioDoc, config: ConfigDoc) {
    this.scenario = cloneScenario(scenario);
    this.config = cloneConfig(config);
  }

  private state(stage: StageNumber): StageState<unknown> {
    return [this.create, this.sample, this.recover, this.reconstruct][stage - 1];
  }

  stageDone(stage: StageNumber): boolean {
    return this.state(stage).status === "done";
  }

  anyPending(): boolean {
    return ([1, 2, 3, 4] as StageNumber[]).some(
      (s) => this.state(s).status === "pending",
    );
  }

  /** Why a stage's run button is disabled; null when it may run. */
  gateReason(stage: StageNumber): string | null {
    if (this.anyPending()) return "a request is already in flight";
    if (stage === 1) {
      const errors = scenarioErrors(this.scenario);
      return errors.length ? `fix the scenario first: ${errors[0].message}` : null;
    }
    if (!this.stageDone(1)) return "create the run first (stage 1)";
    if (stage === 2) {
      if (this.scenario.bands.length === 0) {
        return "the scenario has no transmissions; add at least one band";
      }
      const errors = configErrors(this.config, this.scenario);
      return errors.length ? `fix the converter config: ${errors[0].message}` : null;
    }
    if (!this.stageDone(2)) return "sample first (stage 2)";
    if (stage === 3) return null;
    if (!this.stageDone(3)) return "recover the support first (stage 3)";
    return null;
  }

  canRun(stage: StageNumber): boolean {
    return this.gateReason(stage) === null;
  }

  /** Drop results from `fromStage` on; stage 1 also forgets the run. */
  invalidateFrom(fromStage: StageNumber): void {
    if (fromStage <= 1) {
      this.runId = null;
      this.create = idle();
    }
    if (fromStage <= 2) this.sample = idle();
    if (fromStage <= 3) this.recover = idle();
    this.reconstruct = idle();
  }

  setScenario(doc: ScenarioDoc): void {
    this.scenario = cloneScenario(doc);
    this.invalidateFrom(1);
  }

  setConfig(doc: ConfigDoc): void {
    this.config = cloneConfig(doc);
    this.invalidateFrom(2);
  }

  setBankSeed(seed: number): void {
    this.bankSeed = seed;
    this.invalidateFrom(2);
  }

  setSparsity(sparsity: number | null): void {
    this.sparsity = sparsity;
    this.invalidateFrom(3);
  }

  /** The what-if loop: back to stage 2 keeping scenario and run. */
  tweakAndRerun(): void {
    this.invalidateFrom(2);
  }

  markPending(stage: StageNumber): void {
    const s = this.state(stage);
    s.status = "pending";
    s.error = null;
  }

  applySuccess(stage: StageNumber, data: unknown): void {
    const s = this.state(stage);
    s.status = "done";
    s.data = data;
    s.error = null;
    if (stage === 1) {
      this.runId = (data as { run_id: string }).run_id;
    }
  }

  applyError(stage: StageNumber, error: ErrorEnvelope): void {
    const s = this.state(stage);
    s.status = "error";
    s.data = null;
    s.error = error;
  }

  currentStage(): StageNumber {
    if (this.stageDone(4)) return 4;
    if (this.stageDone(3)) return 4;
    if (this.stageDone(2)) return 3;
    if (this.stageDone(1)) return 2;
    return 1;
  }

  exportDoc(): ExportDoc {
    return {
      scenario: cloneScenario(this.scenario),
      config: cloneConfig(this.config),
      bank_seed: this.bankSeed,
      sparsity: this.sparsity,
    };
  }

  exportJson(): string {
    return JSON.stringify(this.exportDoc(), null, 2) + "\n";
  }

  /** Restores an exported session; all stages reset to idle. */
  importJson(text: string): void {
    let doc: ExportDoc;
    try {
      doc = JSON.parse(text) as ExportDoc;
    } catch (err) {
      throw new Error(`not valid JSON: ${(err as Error).message}`);
    }
    if (!doc || typeof doc !== "object" || !doc.scenario || !doc.config) {
      throw new Error("expected an object with 'scenario' and 'config'");
    }
    this.scenario = cloneScenario(doc.scenario);
    this.config = cloneConfig(doc.config);
    this.bankSeed = doc.bank_seed ?? 0;
    this.sparsity = doc.sparsity ?? null;
    this.invalidateFrom(1);
  }
}

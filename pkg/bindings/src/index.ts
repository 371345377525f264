export {
  BoundSession,
  CoreError,
  bindPlanStep,
  bindRunTrial,
} from "./session.js";
export type {
  LossBreakdown,
  PlanArgs,
  PlanResult,
  RunResult,
  SensingRecordInput,
  SessionOptions,
} from "./session.js";
export { parseJsonl, parseMetricsCsv, parseTeamCsv } from "./csv.js";
export type { MetricsRow, TeamRow } from "./csv.js";

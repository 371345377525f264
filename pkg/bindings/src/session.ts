/** Session-level bindings over the native command line.
 *
 * Nothing here re-implements core math: every operation spawns the core
 * executable, and results come back through its persisted files or its
 * JSON stdout. That keeps the bindings bit-identical to the CLI by
 * construction, which the parity tests then enforce end to end.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { MetricsRow, TeamRow, parseJsonl, parseMetricsCsv, parseTeamCsv } from "./csv.js";

/** A core failure surfaced through the CLI, with the core error name kept. */
export class CoreError extends Error {
  readonly exitCode: number;

  constructor(name: string, message: string, exitCode: number) {
    super(message);
    this.name = name;
    this.exitCode = exitCode;
  }
}

export interface SessionOptions {
  /** Command vector for the core CLI. Defaults to the ACTIVESEARCH_CLI
   *  environment variable (whitespace-split) or ["activesearch"]. */
  command?: string[];
  /** Keep run output directories instead of deleting them after parsing. */
  keepOutputs?: boolean;
}

export interface RunResult {
  seed: number;
  metrics: MetricsRow[];
  targetCells: number[];
  team: TeamRow[];
  messages: unknown[];
  manifest: Record<string, unknown>;
  raw: {
    metricsCsv: string;
    teamCsv: string;
    messagesJsonl: string;
    manifestJson: string;
  };
  /** Human-readable summary the CLI printed. */
  summary: string;
  /** Where the outputs live when keepOutputs is set, otherwise null. */
  outDir: string | null;
}

export interface LossBreakdown {
  l2: number;
  indicator: number;
  lambda: number;
  total: number;
}

export interface PlanResult {
  goal_cell: number;
  goal_point: [number, number];
  traversed: number[];
  loss: LossBreakdown;
  /** The exact JSON line the CLI printed. */
  raw: string;
}

export interface SensingRecordInput {
  cell: number;
  y: number;
  c: number;
  robot?: number;
  kind?: string;
}

export interface PlanArgs {
  x: number;
  y: number;
  seed?: number;
  records?: SensingRecordInput[];
}

function defaultCommand(): string[] {
  const env = process.env.ACTIVESEARCH_CLI;
  if (env && env.trim().length > 0) {
    return env.trim().split(/\s+/);
  }
  return ["activesearch"];
}

function raiseFromCli(status: number, stderr: string): never {
  const text = stderr.trim();
  if (status === 2) {
    const message = text.replace(/^config error:\s*/, "");
    throw new CoreError("ConfigError", message, status);
  }
  const match = text.match(/^error:\s*([A-Za-z_][A-Za-z0-9_]*):\s*(.*)$/s);
  if (match) {
    throw new CoreError(match[1]!, match[2]!, status);
  }
  throw new CoreError("CliError", text || `core exited with status ${status}`, status);
}

/** One loaded scenario plus a base seed; every call spawns the core CLI.
 *
 * Sessions hold no mutable state beyond their options, but spawned runs
 * share temp directories per call, so use one session per thread.
 */
export class BoundSession {
  readonly configPath: string;
  readonly seed: number;
  private readonly command: string[];
  private readonly keepOutputs: boolean;

  constructor(configPath: string, seed: number, options: SessionOptions = {}) {
    this.configPath = configPath;
    this.seed = seed;
    this.command = options.command ?? defaultCommand();
    this.keepOutputs = options.keepOutputs ?? false;
  }

  private spawn(args: string[]): { stdout: string; stderr: string } {
    const [head, ...rest] = this.command;
    const proc = spawnSync(head!, [...rest, ...args], { encoding: "utf8" });
    if (proc.error) {
      throw proc.error;
    }
    if (proc.status !== 0) {
      raiseFromCli(proc.status ?? -1, proc.stderr);
    }
    return { stdout: proc.stdout, stderr: proc.stderr };
  }

  /** Run one trial through the CLI and parse everything it persisted. */
  runTrial(overrides: { seed?: number; outDir?: string } = {}): RunResult {
    const seed = overrides.seed ?? this.seed;
    const outDir = overrides.outDir ?? mkdtempSync(join(tmpdir(), "activesearch-run-"));
    const keep = this.keepOutputs || overrides.outDir !== undefined;
    try {
      const { stdout } = this.spawn([
        "run",
        "--config",
        this.configPath,
        "--seed",
        String(seed),
        "--out",
        outDir,
      ]);
      const metricsCsv = readFileSync(join(outDir, "metrics.csv"), "utf8");
      const teamCsv = readFileSync(join(outDir, "team.csv"), "utf8");
      const messagesJsonl = readFileSync(join(outDir, "messages.jsonl"), "utf8");
      const manifestJson = readFileSync(join(outDir, "manifest.json"), "utf8");
      const { rows, targetCells } = parseMetricsCsv(metricsCsv);
      return {
        seed,
        metrics: rows,
        targetCells,
        team: parseTeamCsv(teamCsv),
        messages: parseJsonl(messagesJsonl),
        manifest: JSON.parse(manifestJson),
        raw: { metricsCsv, teamCsv, messagesJsonl, manifestJson },
        summary: stdout,
        outDir: keep ? outDir : null,
      };
    } finally {
      if (!keep) {
        rmSync(outDir, { recursive: true, force: true });
      }
    }
  }

  /** One planner step: posterior fit, posterior sample, candidate scoring. */
  planStep(args: PlanArgs): PlanResult {
    const seed = args.seed ?? this.seed;
    const cliArgs = [
      "plan",
      "--config",
      this.configPath,
      "--x",
      String(args.x),
      "--y",
      String(args.y),
      "--seed",
      String(seed),
    ];
    let recordsDir: string | null = null;
    try {
      if (args.records !== undefined) {
        recordsDir = mkdtempSync(join(tmpdir(), "activesearch-records-"));
        const path = join(recordsDir, "records.jsonl");
        const lines = args.records.map((r) => JSON.stringify(r));
        writeFileSync(path, lines.join("\n") + (lines.length ? "\n" : ""));
        cliArgs.push("--records", path);
      }
      const { stdout } = this.spawn(cliArgs);
      const raw = stdout.trim();
      const parsed = JSON.parse(raw);
      return { ...parsed, raw };
    } finally {
      if (recordsDir !== null) {
        rmSync(recordsDir, { recursive: true, force: true });
      }
    }
  }
}

/** Run one trial for (config, seed) and return its metrics structures. */
export function bindRunTrial(
  configPath: string,
  seed: number,
  options: SessionOptions = {},
): RunResult {
  return new BoundSession(configPath, seed, options).runTrial();
}

/** One planner step for a config, a position, and a seed. */
export function bindPlanStep(
  configPath: string,
  x: number,
  y: number,
  seed: number,
  records?: SensingRecordInput[],
  options: SessionOptions = {},
): PlanResult {
  return new BoundSession(configPath, seed, options).planStep({ x, y, seed, records });
}

/** Notebook-style tour of the bindings.
 *
 * Writes a small scenario, runs one trial, inspects the parsed tables,
 * then asks the planner for a single step from the robot's start.
 *
 * Run with: npm run example
 */

import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BoundSession } from "./index.js";

const SCENARIO = `
[grid]
width_cells = 5
height_cells = 5
cell_size = 15.0

[[robots]]
id = 0
start = [7.5, 7.5]
planner = "guts"

[[targets]]
cell = 12
confidence = 0.1

[sim]
duration = 120.0
tick = 0.1
seed = 2
`;

const dir = mkdtempSync(join(tmpdir(), "activesearch-example-"));
const configPath = join(dir, "scenario.toml");
writeFileSync(configPath, SCENARIO);

try {
  // A session is a config plus a base seed; runs and plan steps both come
  // back as plain data.
  const session = new BoundSession(configPath, 2);

  const run = session.runTrial();
  const finalTeam = run.team[run.team.length - 1]!;
  console.log(`trial over ${finalTeam.time} s: ${finalTeam.pctUnknown.toFixed(1)}% of the zone seen`);
  console.log(`target cell ${run.targetCells[0]} views per robot at the end:`);
  const last = run.metrics[run.metrics.length - 1]!;
  console.log(`  robot ${last.robot}: ${last.views[0]} views`);
  console.log(`manifest hash: ${(run.manifest as { config_hash?: string }).config_hash}`);

  // A fresh planner step from the start corner. The same seed always
  // returns the same goal; a detection record pulls the goal toward it.
  const cold = session.planStep({ x: 7.5, y: 7.5, seed: 9 });
  console.log(`cold plan: goal cell ${cold.goal_cell}, loss ${cold.loss.total.toFixed(3)}`);

  const informed = session.planStep({
    x: 7.5,
    y: 7.5,
    seed: 9,
    records: [
      { cell: 12, y: 1.0, c: 0.1, robot: 0, kind: "SelfDetection" },
      { cell: 12, y: 1.0, c: 0.1, robot: 0, kind: "SelfDetection" },
    ],
  });
  console.log(
    `after two low-confidence detections at cell 12: goal cell ${informed.goal_cell}, ` +
      `path ${JSON.stringify(informed.traversed)}`,
  );
} finally {
  rmSync(dir, { recursive: true, force: true });
}

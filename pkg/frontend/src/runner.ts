/** Spawns the core CLI and maps failures onto host exceptions. */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

function cliCommand(): string[] {
  const override = process.env.PATCHTOPO_CLI;
  if (override && override.trim()) return override.trim().split(/\s+/);
  return ["patchtopo"];
}

export class CoreError extends Error {
  constructor(public readonly exitCode: number, diagnostic: string) {
    super(diagnostic);
    this.name = "CoreError";
  }
}

export function runCli(args: string[]): void {
  const [cmd, ...prefix] = cliCommand();
  const res = spawnSync(cmd, [...prefix, ...args], { encoding: "utf8" });
  if (res.error && (res.error as NodeJS.ErrnoException).code === "ENOENT") {
    // no console script on PATH; fall back to the module entry point
    const py = spawnSync("python3", ["-m", "patchtopo.cli", ...args], {
      encoding: "utf8",
    });
    if (py.error) throw py.error;
    if (py.status !== 0) {
      throw new CoreError(py.status ?? -1, (py.stderr || "core failed").trim());
    }
    return;
  }
  if (res.error) throw res.error;
  if (res.status !== 0) {
    throw new CoreError(res.status ?? -1, (res.stderr || "core failed").trim());
  }
}

export function withScratchDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "patchtopo-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import {
  CoreError,
  MaskInput,
  VolumeInput,
  alphaPersistence,
  buildPointCloud,
  cubicalPersistence,
  vectorize,
} from "../src/index";
import { writeMask, writeVolume } from "../src/formats";

/** Deterministic 32-bit PRNG so phantoms are reproducible across runs. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function ballPhantom(seed: number, shape = 12): { volume: VolumeInput; mask: MaskInput } {
  const rand = mulberry32(seed);
  const n = shape * shape * shape;
  const data = new Float32Array(n);
  const maskData = new Uint8Array(n);
  const c = shape / 2 + (rand() - 0.5);
  const r = shape * (0.3 + 0.1 * rand());
  const hollow = seed % 2 === 0;
  const rIn = hollow ? r * 0.5 : 0;
  let idx = 0;
  for (let z = 0; z < shape; z++) {
    for (let y = 0; y < shape; y++) {
      for (let x = 0; x < shape; x++, idx++) {
        const d = Math.sqrt((z - c) ** 2 + (y - c) ** 2 + (x - c) ** 2);
        const inside = d <= r && d >= rIn;
        maskData[idx] = inside ? 1 : 0;
        data[idx] = Math.fround(20 * rand() + (inside ? 100 : 0));
      }
    }
  }
  return {
    volume: { data, dims: [shape, shape, shape], spacing: [1, 1, 1] },
    mask: { data: maskData, dims: [shape, shape, shape] },
  };
}

const scratch = mkdtempSync(join(tmpdir(), "bindings-test-"));
afterAll(() => rmSync(scratch, { recursive: true, force: true }));

function cli(args: string[]): void {
  execFileSync("patchtopo", args, { encoding: "utf8" });
}

describe("cubicalPersistence", () => {
  it("single voxel gives one essential bar (0, c, inf)", () => {
    const bars = cubicalPersistence({
      data: new Float32Array([4.5]),
      dims: [1, 1, 1],
    });
    expect(bars).toEqual([{ dim: 0, birth: 4.5, death: Infinity }]);
  });

  it("hollow shell has an H2 void", () => {
    const data = new Float32Array(27);
    data[13] = 9; // center voxel of the 3^3 block
    const bars = cubicalPersistence({ data, dims: [3, 3, 3] });
    const h2 = bars.filter((b) => b.dim === 2);
    expect(h2).toEqual([{ dim: 2, birth: 0, death: 9 }]);
  });
});

describe("alphaPersistence", () => {
  it("recovers the unit-square loop", () => {
    const bars = alphaPersistence([
      [0, 0, 0],
      [1, 0, 0],
      [0, 1, 0],
      [1, 1, 0],
    ]);
    const h1 = bars.filter((b) => b.dim === 1);
    expect(h1).toHaveLength(1);
    expect(h1[0].birth).toBeCloseTo(0.25, 9);
    expect(h1[0].death).toBeCloseTo(0.5, 9);
  });
});

describe("buildPointCloud", () => {
  it("returns one point per ROI-touching patch with the requested d", () => {
    const { volume, mask } = ballPhantom(1);
    const points = buildPointCloud(volume, mask, { patchSize: 4, stats: ["mean", "std"] });
    expect(points.length).toBeGreaterThan(0);
    expect(points[0]).toHaveLength(3);
    for (const row of points) {
      for (const v of row) {
        expect(v).toBeGreaterThanOrEqual(0);
        expect(v).toBeLessThanOrEqual(1);
      }
    }
  });
});

describe("error surfacing", () => {
  it("unknown stat names raise host exceptions with the core diagnostic", () => {
    const { volume, mask } = ballPhantom(2);
    expect(() =>
      buildPointCloud(volume, mask, { patchSize: 4, stats: ["mean", "bogus"] }),
    ).toThrowError(/unknown stat/);
  });

  it("an all-zero mask is a numerical failure", () => {
    const { volume } = ballPhantom(3);
    const empty: MaskInput = {
      data: new Uint8Array(12 * 12 * 12),
      dims: [12, 12, 12],
    };
    let err: unknown;
    try {
      buildPointCloud(volume, empty, { patchSize: 4, stats: ["mean", "std"] });
    } catch (e) {
      err = e;
    }
    expect(err).toBeInstanceOf(CoreError);
    expect((err as CoreError).exitCode).toBe(3);
  });
});

describe("bindings parity with the CLI", () => {
  it("features match bit-exactly on 5 phantom volumes", () => {
    for (let i = 0; i < 5; i++) {
      const { volume, mask } = ballPhantom(10 + i);

      // bindings route
      const points = buildPointCloud(volume, mask, { patchSize: 4, stats: ["mean", "iqr"] });
      const bars = alphaPersistence(points);
      const viaBindings = vectorize(bars);

      // direct CLI route through the same file formats
      const dir = join(scratch, `sample${i}`);
      writeVolume(join(dir, "v.json"), volume);
      writeMask(join(dir, "m.json"), mask);
      cli([
        "pointcloud", "--volume", join(dir, "v.json"), "--mask", join(dir, "m.json"),
        "--patch-size", "4", "--stats", "mean,iqr", "--out", join(dir, "pc.csv"),
      ]);
      cli(["ph", "--pointcloud", join(dir, "pc.csv"), "--out", join(dir, "bars.csv")]);
      cli([
        "features", "--barcodes", join(dir, "bars.csv"),
        "--id", "s", "--label", "", "--out", join(dir, "feats.csv"),
      ]);
      const lines = readFileSync(join(dir, "feats.csv"), "utf8").trimEnd().split("\n");
      const viaCli = lines[1].split(",").slice(1, -1).map(Number);

      expect(viaBindings.values).toHaveLength(114);
      expect(viaBindings.names).toHaveLength(114);
      for (let k = 0; k < 114; k++) {
        // bit-exact: Object.is distinguishes every double
        expect(Object.is(viaBindings.values[k], viaCli[k])).toBe(true);
      }
    }
  });
});

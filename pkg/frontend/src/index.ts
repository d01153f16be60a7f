/**
 * Node bindings for the patchtopo core.
 *
 * Four functions mirror the core pipeline: {@link buildPointCloud},
 * {@link alphaPersistence}, {@link cubicalPersistence}, and
 * {@link vectorize}. No numerical logic lives here: inputs are copied
 * into the core's documented file formats, the CLI runs, and outputs
 * are parsed back, so every result equals the core's bit for bit.
 * Core failures surface as {@link CoreError} with the CLI diagnostic.
 */

import { join } from "node:path";

import {
  Bar,
  MaskInput,
  VolumeInput,
  readBarcode,
  readFeatures,
  readPointCloud,
  writeBarcode,
  writeMask,
  writePointCloud,
  writeVolume,
} from "./formats.js";
import { CoreError, runCli, withScratchDir } from "./runner.js";

export { Bar, MaskInput, VolumeInput } from "./formats.js";
export { CoreError } from "./runner.js";

export const VERSION = "0.1.0";

export interface PatchOptions {
  /** Cubic patch edge length, 3..10. */
  patchSize: number;
  /** 2 or 3 statistic names; mutually exclusive with pca. */
  stats?: string[];
  /** Number of PCA components (must be 3); mutually exclusive with stats. */
  pca?: number;
  /** Min-max scale each axis to [0,1] (core default: true). */
  normalize?: boolean;
}

export interface FeatureVector {
  values: Float64Array;
  names: string[];
}

function encoderFlags(opts: PatchOptions): string[] {
  const flags = ["--patch-size", String(opts.patchSize)];
  if (opts.stats !== undefined) flags.push("--stats", opts.stats.join(","));
  if (opts.pca !== undefined) flags.push("--pca", String(opts.pca));
  if (opts.normalize === false) flags.push("--no-normalize");
  return flags;
}

/** Convert a masked volume into an N x d point cloud. */
export function buildPointCloud(
  volume: VolumeInput,
  mask: MaskInput,
  opts: PatchOptions,
): number[][] {
  return withScratchDir((dir) => {
    writeVolume(join(dir, "volume.json"), volume);
    writeMask(join(dir, "mask.json"), mask);
    const out = join(dir, "cloud.csv");
    runCli([
      "pointcloud",
      "--volume", join(dir, "volume.json"),
      "--mask", join(dir, "mask.json"),
      ...encoderFlags(opts),
      "--out", out,
    ]);
    return readPointCloud(out);
  });
}

/** Alpha-filtration persistence of a point cloud, dimensions 0..2. */
export function alphaPersistence(points: number[][]): Bar[] {
  return withScratchDir((dir) => {
    const cloud = join(dir, "cloud.csv");
    writePointCloud(cloud, points);
    const out = join(dir, "barcodes.csv");
    runCli(["ph", "--pointcloud", cloud, "--out", out]);
    return readBarcode(out);
  });
}

/** Sublevel-set cubical persistence of a (masked) volume, dimensions 0..2. */
export function cubicalPersistence(volume: VolumeInput, mask?: MaskInput): Bar[] {
  return withScratchDir((dir) => {
    writeVolume(join(dir, "volume.json"), volume);
    const args = ["ph", "--cubical", "--volume", join(dir, "volume.json")];
    if (mask !== undefined) {
      writeMask(join(dir, "mask.json"), mask);
      args.push("--mask", join(dir, "mask.json"));
    }
    const out = join(dir, "barcodes.csv");
    runCli([...args, "--out", out]);
    return readBarcode(out);
  });
}

/** Barcode statistics vector (114 values) with its parallel name list. */
export function vectorize(bars: Bar[], dropEssential = false): FeatureVector {
  return withScratchDir((dir) => {
    const barcodes = join(dir, "barcodes.csv");
    writeBarcode(barcodes, bars);
    const out = join(dir, "features.csv");
    const args = ["features", "--barcodes", barcodes, "--out", out];
    if (dropEssential) args.push("--drop-essential");
    runCli(args);
    const rows = readFeatures(out);
    return { values: rows[0].values, names: rows[0].names };
  });
}

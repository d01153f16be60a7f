/**
 * Readers/writers for the core's on-disk formats: raw+JSON volumes,
 * point-cloud CSV, barcode CSV, and feature CSV. All binary payloads
 * are little-endian regardless of host byte order.
 */

import { mkdirSync, writeFileSync, readFileSync } from "node:fs";
import { dirname, basename, join } from "node:path";

export interface VolumeInput {
  /** Row-major scalars, length nz*ny*nx. */
  data: Float32Array | number[];
  dims: [number, number, number];
  spacing?: [number, number, number];
}

export interface MaskInput {
  /** Row-major 0/1 values, length nz*ny*nx. */
  data: Uint8Array | number[];
  dims: [number, number, number];
}

export interface Bar {
  dim: number;
  birth: number;
  death: number; // Infinity for essential classes
}

export function writeVolume(path: string, volume: VolumeInput): void {
  const [nz, ny, nx] = volume.dims;
  const n = nz * ny * nx;
  const values = volume.data;
  if (values.length !== n) {
    throw new Error(`volume data length ${values.length} != ${n}`);
  }
  const raw = Buffer.alloc(4 * n);
  for (let i = 0; i < n; i++) {
    raw.writeFloatLE(Number(values[i]), 4 * i);
  }
  const rawName = basename(path).replace(/\.json$/, "") + ".raw";
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(join(dirname(path), rawName), raw);
  const header = {
    dims: volume.dims,
    spacing: volume.spacing ?? [1, 1, 1],
    dtype: "f32",
    data: rawName,
  };
  writeFileSync(path, JSON.stringify(header, null, 2) + "\n");
}

export function writeMask(path: string, mask: MaskInput): void {
  const [nz, ny, nx] = mask.dims;
  const n = nz * ny * nx;
  if (mask.data.length !== n) {
    throw new Error(`mask data length ${mask.data.length} != ${n}`);
  }
  const raw = Buffer.alloc(2 * n);
  for (let i = 0; i < n; i++) {
    const v = Number(mask.data[i]);
    if (v !== 0 && v !== 1) {
      throw new Error(`mask values must be 0 or 1, found ${v}`);
    }
    raw.writeInt16LE(v, 2 * i);
  }
  const rawName = basename(path).replace(/\.json$/, "") + ".raw";
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(join(dirname(path), rawName), raw);
  const header = { dims: mask.dims, spacing: [1, 1, 1], dtype: "i16", data: rawName };
  writeFileSync(path, JSON.stringify(header, null, 2) + "\n");
}

function formatNumber(x: number): string {
  if (x === Infinity) return "inf";
  if (x === -Infinity) return "-inf";
  // ECMAScript ToString is shortest-round-trip, so the core parses the
  // exact same double back
  return String(x);
}

export function writePointCloud(path: string, points: number[][]): void {
  if (points.length === 0) throw new Error("empty point cloud");
  const d = points[0].length;
  const header = Array.from({ length: d }, (_, i) => `x${i}`).join(",");
  const lines = [header];
  for (const row of points) {
    if (row.length !== d) throw new Error("ragged point rows");
    lines.push(row.map(formatNumber).join(","));
  }
  writeFileSync(path, lines.join("\n") + "\n");
}

export function readPointCloud(path: string): number[][] {
  const lines = readFileSync(path, "utf8").trimEnd().split("\n");
  return lines.slice(1).map((line) => line.split(",").map(Number));
}

export function writeBarcode(path: string, bars: Bar[]): void {
  const lines = ["dim,birth,death"];
  for (const b of bars) {
    lines.push(`${b.dim},${formatNumber(b.birth)},${formatNumber(b.death)}`);
  }
  writeFileSync(path, lines.join("\n") + "\n");
}

export function readBarcode(path: string): Bar[] {
  const lines = readFileSync(path, "utf8").trimEnd().split("\n");
  const out: Bar[] = [];
  for (const line of lines.slice(1)) {
    if (!line) continue;
    const [dim, birth, death] = line.split(",");
    out.push({
      dim: Number(dim),
      birth: Number(birth),
      death: death === "inf" ? Infinity : Number(death),
    });
  }
  return out;
}

export interface FeatureRow {
  id: string;
  values: Float64Array;
  names: string[];
  label: string;
}

export function readFeatures(path: string): FeatureRow[] {
  const lines = readFileSync(path, "utf8").trimEnd().split("\n");
  const header = lines[0].split(",");
  const names = header.slice(1, -1);
  return lines.slice(1).map((line) => {
    const cells = line.split(",");
    return {
      id: cells[0],
      values: Float64Array.from(cells.slice(1, -1), Number),
      names,
      label: cells[cells.length - 1],
    };
  });
}

// Continuous color scales. Attribute scales are fixed per topic from the
// global min/max so colors stay comparable across students.

import type { ColorAttribute } from "./state";
import type { StudentEntry } from "./api";

type Rgb = [number, number, number];

// compact viridis-like ramp: dark violet -> teal -> yellow
const RAMP: Rgb[] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

export function rampColor(t: number): string {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (RAMP.length - 1);
  const low = Math.min(RAMP.length - 2, Math.floor(scaled));
  const frac = scaled - low;
  const [r, g, b] = [0, 1, 2].map((i) => Math.round(lerp(RAMP[low][i], RAMP[low + 1][i], frac)));
  return `rgb(${r}, ${g}, ${b})`;
}

export interface Range {
  min: number;
  max: number;
}

export function attributeRange(students: StudentEntry[], attribute: ColorAttribute): Range {
  if (students.length === 0) return { min: 0, max: 1 };
  const values = students.map((s) => s.aggregate[attribute]);
  return { min: Math.min(...values), max: Math.max(...values) };
}

export function scaleColor(value: number, range: Range): string {
  if (range.max === range.min) return rampColor(0.5);
  return rampColor((value - range.min) / (range.max - range.min));
}

/** Rank-ordered gradient for neighbor highlighting: nearest purple, furthest yellow. */
export function neighborGradient(count: number): string[] {
  if (count <= 1) return [rampColor(0)];
  return Array.from({ length: count }, (_, i) => rampColor(i / (count - 1)));
}

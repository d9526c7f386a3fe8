/** Likert-pair to mood-octant mapping.
 *
 * Must agree with the pipeline's mapping on every (happiness, activeness)
 * pair; the shared table in ../../shared/mood-grid.json pins all 25 cases.
 * The octant is the angle of (happiness-2, activeness-2) rounded to the
 * nearest multiple of 45 degrees; the grid center is neutral. No integer
 * offset lies on an octant boundary, so rounding never ties.
 */

import { isValidLikert } from "./types.js";

export type MoodLabel =
  | "pleasure"
  | "excitement"
  | "arousal"
  | "distress"
  | "misery"
  | "depression"
  | "sleepiness"
  | "contentment"
  | "neutral";

/** Octants counterclockwise from the positive happiness axis. */
export const OCTANTS: readonly MoodLabel[] = [
  "pleasure",
  "excitement",
  "arousal",
  "distress",
  "misery",
  "depression",
  "sleepiness",
  "contentment",
];

export function moodFromLikert(happiness: number, activeness: number): MoodLabel {
  if (!isValidLikert(happiness) || !isValidLikert(activeness)) {
    throw new RangeError(`likert pair (${happiness}, ${activeness}) outside 0..4`);
  }
  const dx = happiness - 2;
  const dy = activeness - 2;
  if (dx === 0 && dy === 0) return "neutral";
  const theta = (Math.atan2(dy, dx) * 180) / Math.PI;
  const octant = ((Math.round(theta / 45) % 8) + 8) % 8;
  return OCTANTS[octant];
}

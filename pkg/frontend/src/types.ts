/** Wire schema shared with the collection service (one JSON object per log line). */
export interface EmaEntry {
  scheduled_at: number; // unix seconds
  answered_at: number; // unix seconds
  happiness: number; // 0..4
  activeness: number; // 0..4
}

export const LIKERT_MIN = 0;
export const LIKERT_MAX = 4;

export function isValidLikert(value: number): boolean {
  return Number.isInteger(value) && value >= LIKERT_MIN && value <= LIKERT_MAX;
}

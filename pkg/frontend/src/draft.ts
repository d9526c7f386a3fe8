/** Entry draft: both Likert values must be chosen before submit unlocks. */

import { EmaEntry, isValidLikert } from "./types.js";

export class EntryDraft {
  happiness: number | null = null;
  activeness: number | null = null;

  /** scheduledAt is the prompt time in unix seconds; null = self-initiated. */
  constructor(public scheduledAt: number | null = null) {}

  setHappiness(value: number): void {
    if (!isValidLikert(value)) throw new RangeError(`happiness ${value} outside 0..4`);
    this.happiness = value;
  }

  setActiveness(value: number): void {
    if (!isValidLikert(value)) throw new RangeError(`activeness ${value} outside 0..4`);
    this.activeness = value;
  }

  get canSubmit(): boolean {
    return this.happiness !== null && this.activeness !== null;
  }

  /** Freeze the draft into a wire entry; self-initiated entries use
   * answered time as their scheduled time. */
  complete(nowSeconds: number): EmaEntry {
    if (this.happiness === null || this.activeness === null) {
      throw new Error("both happiness and activeness must be chosen");
    }
    return {
      scheduled_at: this.scheduledAt ?? nowSeconds,
      answered_at: nowSeconds,
      happiness: this.happiness,
      activeness: this.activeness,
    };
  }
}

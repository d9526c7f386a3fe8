/** Prompt scheduling: evenly spaced prompts inside the day's active hours. */

export class PromptSchedule {
  constructor(
    public readonly promptsPerDay: number = 5,
    public readonly activeStartHour: number = 9,
    public readonly activeEndHour: number = 21,
  ) {
    if (promptsPerDay < 1 || !Number.isInteger(promptsPerDay)) {
      throw new RangeError("promptsPerDay must be an integer >= 1");
    }
    if (!(0 <= activeStartHour && activeStartHour < activeEndHour && activeEndHour <= 24)) {
      throw new RangeError("active hours must satisfy 0 <= start < end <= 24");
    }
  }

  /** Prompt times for the calendar day containing `day`, strictly increasing. */
  promptTimesFor(day: Date): Date[] {
    const start = new Date(day);
    start.setHours(0, 0, 0, 0);
    const startMs = start.getTime() + this.activeStartHour * 3_600_000;
    const spanMs = (this.activeEndHour - this.activeStartHour) * 3_600_000;
    const times: Date[] = [];
    for (let k = 0; k < this.promptsPerDay; k++) {
      times.push(new Date(startMs + ((k + 1) * spanMs) / (this.promptsPerDay + 1)));
    }
    return times;
  }

  /** The next prompt strictly after `now` (today's remainder, else tomorrow). */
  nextPromptAfter(now: Date): Date {
    for (const t of this.promptTimesFor(now)) {
      if (t.getTime() > now.getTime()) return t;
    }
    const tomorrow = new Date(now);
    tomorrow.setDate(tomorrow.getDate() + 1);
    return this.promptTimesFor(tomorrow)[0];
  }
}

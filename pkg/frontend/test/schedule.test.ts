import { describe, expect, it } from "vitest";

import { PromptSchedule } from "../src/schedule.js";

describe("PromptSchedule", () => {
  it("spaces the requested number of prompts inside active hours", () => {
    const schedule = new PromptSchedule(5, 9, 21);
    const times = schedule.promptTimesFor(new Date(2019, 3, 1, 12, 0));
    expect(times).toHaveLength(5);
    expect(times[0].getHours()).toBeGreaterThanOrEqual(9);
    expect(times[times.length - 1].getHours()).toBeLessThan(21);
  });

  it("prompt times are strictly increasing", () => {
    const schedule = new PromptSchedule(7, 8, 20);
    const times = schedule.promptTimesFor(new Date(2019, 3, 1));
    for (let i = 1; i < times.length; i++) {
      expect(times[i].getTime()).toBeGreaterThan(times[i - 1].getTime());
    }
  });

  it("finds the next prompt later today", () => {
    const schedule = new PromptSchedule(5, 9, 21);
    const now = new Date(2019, 3, 1, 10, 0);
    const next = schedule.nextPromptAfter(now);
    expect(next.getTime()).toBeGreaterThan(now.getTime());
    expect(next.getDate()).toBe(1);
  });

  it("rolls over to tomorrow after the last prompt", () => {
    const schedule = new PromptSchedule(5, 9, 21);
    const lateEvening = new Date(2019, 3, 1, 22, 30);
    const next = schedule.nextPromptAfter(lateEvening);
    expect(next.getDate()).toBe(2);
  });

  it("validates its configuration", () => {
    expect(() => new PromptSchedule(0)).toThrow(RangeError);
    expect(() => new PromptSchedule(5, 21, 9)).toThrow(RangeError);
  });
});

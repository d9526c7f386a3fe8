import { afterEach, describe, expect, it, vi } from "vitest";

import { parseLog, postEntry } from "../src/api.js";

const ENTRY = { scheduled_at: 1000, answered_at: 1060, happiness: 3, activeness: 1 };

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("postEntry", () => {
  it("classifies server responses", async () => {
    for (const [status, expected] of [
      [201, "created"],
      [409, "duplicate"],
      [422, "rejected"],
      [400, "rejected"],
    ] as const) {
      vi.stubGlobal("fetch", vi.fn(async () => new Response("{}", { status })));
      expect(await postEntry(ENTRY)).toBe(expected);
    }
  });

  it("posts the exact wire schema", async () => {
    const fetchMock = vi.fn(async () => new Response("{}", { status: 201 }));
    vi.stubGlobal("fetch", fetchMock);
    await postEntry(ENTRY);
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/ema");
    expect(JSON.parse(init.body as string)).toEqual(ENTRY);
  });

  it("maps transport failure to offline", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => Promise.reject(new TypeError("down"))));
    expect(await postEntry(ENTRY)).toBe("offline");
  });
});

describe("parseLog", () => {
  it("parses newline-delimited entries and skips blank lines", () => {
    const text = `${JSON.stringify(ENTRY)}\n\n${JSON.stringify({ ...ENTRY, answered_at: 2000 })}\n`;
    const entries = parseLog(text);
    expect(entries).toHaveLength(2);
    expect(entries[1].answered_at).toBe(2000);
  });

  it("returns an empty list for an empty log", () => {
    expect(parseLog("")).toEqual([]);
  });
});

/** HTTP client for the collection service. */

import { EmaEntry } from "./types.js";

/** Definitive server outcomes vs. transient transport failure. */
export type PostResult = "created" | "duplicate" | "rejected" | "offline";

export async function postEntry(entry: EmaEntry, baseUrl = ""): Promise<PostResult> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}/ema`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(entry),
    });
  } catch {
    return "offline";
  }
  if (response.status === 201) return "created";
  if (response.status === 409) return "duplicate"; // already stored: delivered
  return "rejected";
}

export function parseLog(text: string): EmaEntry[] {
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as EmaEntry);
}

export async function fetchLog(baseUrl = ""): Promise<EmaEntry[]> {
  const response = await fetch(`${baseUrl}/ema`);
  if (!response.ok) throw new Error(`GET /ema failed: ${response.status}`);
  return parseLog(await response.text());
}

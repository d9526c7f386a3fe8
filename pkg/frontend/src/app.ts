/** DOM wiring: the two-question prompt form, history view and prompt timer. */

import { fetchLog, postEntry } from "./api.js";
import { EntryDraft } from "./draft.js";
import { moodFromLikert } from "./mood.js";
import { OfflineQueue } from "./queue.js";
import { PromptSchedule } from "./schedule.js";
import { EmaEntry } from "./types.js";

const AXES = [
  { id: "happiness", label: "How happy do you feel?", low: "unhappy", high: "happy" },
  { id: "activeness", label: "How active do you feel?", low: "calm", high: "active" },
] as const;

const queue = new OfflineQueue(window.localStorage);
const schedule = new PromptSchedule();
let draft = new EntryDraft();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderScale(axis: (typeof AXES)[number]): HTMLElement {
  const wrap = document.createElement("fieldset");
  wrap.className = "scale";
  const legend = document.createElement("legend");
  legend.textContent = axis.label;
  wrap.appendChild(legend);
  const row = document.createElement("div");
  row.className = "scale-row";
  const low = document.createElement("span");
  low.className = "hint";
  low.textContent = axis.low;
  row.appendChild(low);
  for (let value = 0; value <= 4; value++) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = String(value);
    button.dataset.axis = axis.id;
    button.dataset.value = String(value);
    button.addEventListener("click", () => {
      if (axis.id === "happiness") draft.setHappiness(value);
      else draft.setActiveness(value);
      row.querySelectorAll("button").forEach((b) => b.classList.remove("chosen"));
      button.classList.add("chosen");
      syncSubmit();
    });
    row.appendChild(button);
  }
  const high = document.createElement("span");
  high.className = "hint";
  high.textContent = axis.high;
  row.appendChild(high);
  wrap.appendChild(row);
  return wrap;
}

function syncSubmit(): void {
  el<HTMLButtonElement>("submit").disabled = !draft.canSubmit;
}

function resetForm(): void {
  draft = new EntryDraft();
  document.querySelectorAll(".scale button").forEach((b) => b.classList.remove("chosen"));
  syncSubmit();
}

function setStatus(text: string): void {
  el("status").textContent = text;
}

async function submit(): Promise<void> {
  const entry = draft.complete(Date.now() / 1000);
  queue.enqueue(entry);
  resetForm();
  await flushQueue();
  await renderHistory();
}

async function flushQueue(): Promise<void> {
  const outcome = await queue.flush((entry: EmaEntry) => postEntry(entry));
  if (outcome.remaining > 0) {
    setStatus(`offline: ${outcome.remaining} entr${outcome.remaining === 1 ? "y" : "ies"} queued`);
  } else if (outcome.rejected > 0) {
    setStatus(`server rejected ${outcome.rejected} entr${outcome.rejected === 1 ? "y" : "ies"}`);
  } else {
    setStatus("all entries delivered");
  }
}

function sameLocalDay(seconds: number, reference: Date): boolean {
  const d = new Date(seconds * 1000);
  return (
    d.getFullYear() === reference.getFullYear() &&
    d.getMonth() === reference.getMonth() &&
    d.getDate() === reference.getDate()
  );
}

async function renderHistory(): Promise<void> {
  const list = el<HTMLUListElement>("history");
  let entries: EmaEntry[];
  try {
    entries = await fetchLog();
  } catch {
    setStatus("offline: history unavailable");
    return;
  }
  const today = entries.filter((e) => sameLocalDay(e.answered_at, new Date()));
  today.sort((a, b) => b.answered_at - a.answered_at); // newest first
  list.replaceChildren(
    ...today.map((e) => {
      const item = document.createElement("li");
      const when = new Date(e.answered_at * 1000).toLocaleTimeString([], {
        hour: "2-digit",
        minute: "2-digit",
      });
      const mood = moodFromLikert(e.happiness, e.activeness);
      item.textContent = `${when} — ${mood} (happiness ${e.happiness}, activeness ${e.activeness})`;
      return item;
    }),
  );
  el("history-empty").hidden = today.length > 0;
}

function armPromptTimer(): void {
  const next = schedule.nextPromptAfter(new Date());
  el("next-prompt").textContent = `next prompt ${next.toLocaleTimeString([], {
    hour: "2-digit",
    minute: "2-digit",
  })}`;
  window.setTimeout(() => {
    draft = new EntryDraft(next.getTime() / 1000);
    el("prompt-banner").hidden = false;
    armPromptTimer();
  }, Math.max(next.getTime() - Date.now(), 1000));
}

export function start(): void {
  const form = el("form");
  for (const axis of AXES) form.appendChild(renderScale(axis));
  const submitButton = el<HTMLButtonElement>("submit");
  submitButton.addEventListener("click", () => {
    el("prompt-banner").hidden = true;
    void submit();
  });
  syncSubmit();
  window.addEventListener("online", () => void flushQueue().then(renderHistory));
  void flushQueue();
  void renderHistory();
  armPromptTimer();
}

start();

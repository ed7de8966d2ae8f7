/** DOM wiring: one mutable UiState, re-rendered after every transition.
 * At most one mutating request is in flight; apply/undo/upload disable while
 * pending. Everything shown comes from server responses. */

import {
  ApiError,
  applyPipeline,
  blockExportUrl,
  exportUrl,
  fetchEvents,
  fetchMatrix,
  fetchSamples,
  fetchSummary,
  undo,
  uploadLog,
} from "./api.js";
import {
  addCard,
  buildDescriptor,
  draftHasChanges,
  enterSnapshot,
  initialState,
  PAGE_SIZE,
  removeCard,
  setCardValue,
  toggleCell,
  type CardKind,
  type UiState,
} from "./state.js";
import { renderApp } from "./render.js";

export const state: UiState = initialState();

let root: HTMLElement | null = null;
let lastRefresh: (() => Promise<void>) | null = null;

export function render(): void {
  if (root) root.innerHTML = renderApp(state);
}

function toast(message: string): void {
  state.toast = message;
  render();
  setTimeout(() => {
    state.toast = null;
    render();
  }, 2500);
}

async function guarded(task: () => Promise<void>, refresh?: () => Promise<void>): Promise<void> {
  if (refresh) lastRefresh = refresh;
  state.banner = null;
  try {
    await task();
  } catch (error) {
    if (error instanceof ApiError) {
      state.stepError = error.message;
    } else {
      state.banner = "Server unreachable. Is the ocelkit service running?";
    }
  }
  render();
}

async function refreshSnapshot(): Promise<void> {
  if (!state.logId) return;
  const [summaryDoc, matrixDoc] = await Promise.all([
    fetchSummary(state.logId),
    fetchMatrix(state.logId),
  ]);
  enterSnapshot(state, summaryDoc.snapshot, summaryDoc.summary, matrixDoc.matrix, summaryDoc.depth);
}

export async function handleUpload(text: string): Promise<void> {
  await guarded(async () => {
    state.pending = true;
    render();
    try {
      const response = await uploadLog(text);
      state.logId = response.log_id;
      state.diff = null;
      await refreshSnapshot();
    } finally {
      state.pending = false;
    }
  }, refreshSnapshot);
}

export async function handleApply(): Promise<void> {
  if (!state.logId || state.pending) return;
  if (!draftHasChanges(state)) {
    toast("no changes to apply");
    return;
  }
  const descriptor = buildDescriptor(state);
  await guarded(async () => {
    state.pending = true;
    state.stepError = null;
    render();
    try {
      const logId = state.logId!;
      const response = await applyPipeline(logId, descriptor);
      const matrixDoc = await fetchMatrix(logId);
      const diff = response.diff;
      enterSnapshot(state, response.snapshot, response.summary, matrixDoc.matrix, response.snapshot + 1);
      state.diff = diff;
    } finally {
      state.pending = false;
    }
  }, refreshSnapshot);
}

export async function handleUndo(): Promise<void> {
  if (!state.logId || state.pending) return;
  await guarded(async () => {
    state.pending = true;
    render();
    try {
      const logId = state.logId!;
      const response = await undo(logId);
      const matrixDoc = await fetchMatrix(logId);
      enterSnapshot(state, response.snapshot, response.summary, matrixDoc.matrix, response.snapshot + 1);
      state.diff = null;
    } finally {
      state.pending = false;
    }
  }, refreshSnapshot);
}

export async function handleLoadSamples(strategy: string, k?: number, seed?: number): Promise<void> {
  if (!state.logId) return;
  await guarded(async () => {
    state.samples = await fetchSamples(state.logId!, strategy, k, seed);
  });
}

export async function handleLoadEvents(offset: number): Promise<void> {
  if (!state.logId) return;
  await guarded(async () => {
    state.eventsOffset = Math.max(0, offset);
    state.events = await fetchEvents(state.logId!, state.eventsOffset, PAGE_SIZE);
  });
}

function onClick(event: Event): void {
  const target = (event.target as HTMLElement).closest("[data-action]") as HTMLElement | null;
  if (!target) return;
  const action = target.dataset.action;
  if (action === "add-card") {
    addCard(state, target.dataset.kind as CardKind);
    render();
  } else if (action === "remove-card") {
    removeCard(state, Number(target.dataset.cardIndex));
    render();
  } else if (action === "apply") {
    void handleApply();
  } else if (action === "undo") {
    void handleUndo();
  } else if (action === "retry") {
    state.banner = null;
    render();
    if (lastRefresh) void guarded(lastRefresh);
  } else if (action === "load-samples") {
    const strategy = (document.getElementById("sample-strategy") as HTMLSelectElement).value;
    const rawK = (document.getElementById("sample-k") as HTMLInputElement).value;
    const rawSeed = (document.getElementById("sample-seed") as HTMLInputElement).value;
    void handleLoadSamples(
      strategy,
      rawK === "" ? undefined : Number(rawK),
      rawSeed === "" ? undefined : Number(rawSeed),
    );
  } else if (action === "events-prev") {
    void handleLoadEvents(state.eventsOffset - PAGE_SIZE);
  } else if (action === "events-next") {
    void handleLoadEvents(state.eventsOffset + PAGE_SIZE);
  } else if (action === "export" && state.logId) {
    event.preventDefault();
    window.open(exportUrl(state.logId), "_blank");
  } else if (action === "export-block" && state.logId) {
    event.preventDefault();
    window.open(blockExportUrl(state.logId, Number(target.dataset.block)), "_blank");
  }
}

function onChange(event: Event): void {
  const target = event.target as HTMLInputElement;
  if (target.id === "file-input") {
    const file = target.files && target.files[0];
    if (file) void file.text().then(handleUpload);
  } else if (target.dataset.pair !== undefined) {
    const [otype, activity] = JSON.parse(decodeURIComponent(target.dataset.pair)) as [string, string];
    toggleCell(state, otype, activity);
    render();
  } else if (target.classList.contains("card-value")) {
    setCardValue(state, Number(target.dataset.cardIndex), Number(target.value));
  }
}

function onInput(event: Event): void {
  const target = event.target as HTMLInputElement;
  if (target.id === "slider") {
    state.slider = Number(target.value);
    render();
  }
}

export function mount(container: HTMLElement): void {
  root = container;
  root.addEventListener("click", onClick);
  root.addEventListener("change", onChange);
  root.addEventListener("input", onInput);
  render();
}

declare global {
  interface Window {
    __ocelkitMounted?: boolean;
  }
}

if (typeof document !== "undefined" && document.getElementById("app") && !window.__ocelkitMounted) {
  window.__ocelkitMounted = true;
  mount(document.getElementById("app") as HTMLElement);
}

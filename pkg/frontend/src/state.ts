/** UI state and its pure transitions.
 *
 * The matrix works on two layers: the slider provides the default checkbox
 * state (a cell is pre-checked when its server-computed ratio reaches the
 * threshold), and explicit user toggles override those defaults until the
 * next snapshot. The pipeline actually sent to the server carries the
 * resulting explicit pair list, never the slider value.
 */

import type {
  DiffDoc,
  EventsPageDoc,
  MatrixCellDoc,
  MatrixDoc,
  PipelineDescriptor,
  SamplesDoc,
  SummaryDoc,
} from "./api.js";

export type CardKind = "OTF1" | "OTF2" | "OTF3" | "OE1" | "OE2" | "OE3";

export interface StepCard {
  kind: CardKind;
  value: number | null; // threshold n or ratio r; null for OE2
}

export interface UiState {
  logId: string | null;
  snapshot: number;
  depth: number;
  summary: SummaryDoc | null;
  matrix: MatrixDoc | null;
  slider: number;
  overrides: Record<string, boolean>;
  cards: StepCard[];
  diff: DiffDoc | null;
  samples: SamplesDoc | null;
  events: EventsPageDoc | null;
  eventsOffset: number;
  pending: boolean;
  banner: string | null;
  toast: string | null;
  stepError: string | null;
}

export const PAGE_SIZE = 100;

export function initialState(): UiState {
  return {
    logId: null,
    snapshot: 0,
    depth: 1,
    summary: null,
    matrix: null,
    slider: 0.5,
    overrides: {},
    cards: [],
    diff: null,
    samples: null,
    events: null,
    eventsOffset: 0,
    pending: false,
    banner: null,
    toast: null,
    stepError: null,
  };
}

export function pairKey(objectType: string, activity: string): string {
  return JSON.stringify([objectType, activity]);
}

/** Checkbox state of one matrix cell: explicit override, else slider default. */
export function cellChecked(state: UiState, cell: MatrixCellDoc): boolean {
  const override = state.overrides[pairKey(cell.object_type, cell.activity)];
  if (override !== undefined) return override;
  return cell.ratio >= state.slider;
}

export function toggleCell(state: UiState, objectType: string, activity: string): void {
  const cell = findCell(state, objectType, activity);
  if (!cell || !cell.cooccurring) return;
  const key = pairKey(objectType, activity);
  state.overrides[key] = !cellChecked(state, cell);
}

function findCell(state: UiState, objectType: string, activity: string): MatrixCellDoc | undefined {
  return state.matrix?.cells.find(
    (c) => c.object_type === objectType && c.activity === activity,
  );
}

export function cooccurringCells(state: UiState): MatrixCellDoc[] {
  return state.matrix ? state.matrix.cells.filter((c) => c.cooccurring) : [];
}

export function checkedPairs(state: UiState): [string, string][] {
  return cooccurringCells(state)
    .filter((c) => cellChecked(state, c))
    .map((c) => [c.object_type, c.activity]);
}

export function uncheckedPairs(state: UiState): [string, string][] {
  return cooccurringCells(state)
    .filter((c) => !cellChecked(state, c))
    .map((c) => [c.object_type, c.activity]);
}

/** True when applying the draft would change anything server-side. */
export function draftHasChanges(state: UiState): boolean {
  return state.cards.length > 0 || uncheckedPairs(state).length > 0;
}

const TYPE_KINDS: CardKind[] = ["OTF1", "OTF2", "OTF3"];

/** Serialize the draft: type-level cards, then the matrix selection (when it
 * excludes something), then event-level cards. */
export function buildDescriptor(state: UiState): PipelineDescriptor {
  const steps: PipelineDescriptor["steps"] = [];
  for (const card of state.cards) {
    if (TYPE_KINDS.includes(card.kind)) steps.push(cardStep(card));
  }
  if (uncheckedPairs(state).length > 0) {
    steps.push({ kind: "OA_EXPLICIT", params: { pairs: checkedPairs(state) } });
  }
  for (const card of state.cards) {
    if (!TYPE_KINDS.includes(card.kind)) steps.push(cardStep(card));
  }
  return { schema: "ocelkit-pipeline/1", steps };
}

function cardStep(card: StepCard): { kind: string; params: Record<string, unknown> } {
  if (card.kind === "OE2") return { kind: card.kind, params: {} };
  if (card.kind === "OTF3") return { kind: card.kind, params: { r: card.value ?? 0 } };
  return { kind: card.kind, params: { n: card.value ?? 0 } };
}

export function addCard(state: UiState, kind: CardKind): void {
  state.cards.push({ kind, value: kind === "OE2" ? null : defaultValue(kind) });
}

function defaultValue(kind: CardKind): number {
  return kind === "OTF3" ? 0.25 : 2;
}

export function removeCard(state: UiState, index: number): void {
  state.cards.splice(index, 1);
}

export function setCardValue(state: UiState, index: number, value: number): void {
  const card = state.cards[index];
  if (card && card.kind !== "OE2") card.value = value;
}

/** A new snapshot invalidates the draft: overrides and cards are cleared and
 * the matrix/summary are replaced by what the server reports. */
export function enterSnapshot(
  state: UiState,
  snapshot: number,
  summary: SummaryDoc,
  matrix: MatrixDoc,
  depth?: number,
): void {
  state.snapshot = snapshot;
  if (depth !== undefined) state.depth = depth;
  state.summary = summary;
  state.matrix = matrix;
  state.overrides = {};
  state.cards = [];
  state.samples = null;
  state.events = null;
  state.eventsOffset = 0;
  state.stepError = null;
}

export function summaryHeadline(summary: SummaryDoc): string {
  return `${summary.events} events, ${summary.objects} objects, ${summary.object_types} object types`;
}

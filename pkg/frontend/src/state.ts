import type { EvidenceInput, SessionPayload } from './types.js';

/**
 * Page state.  Every field is a service response or input captured for one;
 * the client never computes report numbers itself.  `preview` and `pending`
 * hold an uncommitted what-if and the evidence that produced it.
 */
export interface AppState {
  session: SessionPayload | null;
  preview: SessionPayload | null;
  pending: EvidenceInput | null;
}

export function initialState(): AppState {
  return { session: null, preview: null, pending: null };
}

export function withSession(state: AppState, payload: SessionPayload): AppState {
  return { ...state, session: payload, preview: null, pending: null };
}

export function withPreview(state: AppState, payload: SessionPayload, pending: EvidenceInput): AppState {
  return { ...state, preview: payload, pending };
}

export function clearPreview(state: AppState): AppState {
  return { ...state, preview: null, pending: null };
}

export function canUndo(state: AppState): boolean {
  return state.session !== null && state.session.evidence_count > 0;
}

/** Raw evidence form inputs, as typed. */
export interface EvidenceFormValues {
  variable: string;
  kind: string;
  amount: string;
  sd: string;
  note: string;
}

export type FormField = 'variable' | 'kind' | 'amount' | 'sd';

export type FormResult =
  | { ok: true; item: EvidenceInput }
  | { ok: false; field: FormField; message: string };

/** Client-side validation mirrors the service rules (in particular sd > 0). */
export function buildEvidence(values: EvidenceFormValues): FormResult {
  const variable = values.variable.trim();
  if (!variable) {
    return { ok: false, field: 'variable', message: 'pick a variable' };
  }
  if (values.amount.trim() === '' || !Number.isFinite(Number(values.amount))) {
    return { ok: false, field: 'amount', message: 'enter a numeric value' };
  }
  const amount = Number(values.amount);
  const note = values.note.trim();
  if (values.kind === 'normal') {
    if (values.sd.trim() === '' || !Number.isFinite(Number(values.sd))) {
      return { ok: false, field: 'sd', message: 'enter a numeric sd' };
    }
    const sd = Number(values.sd);
    if (!(sd > 0)) {
      return { ok: false, field: 'sd', message: `normal evidence on '${variable}' needs sd > 0` };
    }
    return { ok: true, item: { variable, kind: 'normal', mean: amount, sd, ...(note ? { note } : {}) } };
  }
  if (values.kind === 'observation') {
    return { ok: true, item: { variable, kind: 'observation', value: amount, ...(note ? { note } : {}) } };
  }
  return { ok: false, field: 'kind', message: `unknown evidence kind '${values.kind}'` };
}

/** Route a service-reported field path to the form input it belongs to. */
export function formFieldFor(apiField: string | null): FormField | 'form' {
  const leaf = (apiField ?? '').split('.').pop() ?? '';
  if (leaf === 'variable') return 'variable';
  if (leaf === 'kind') return 'kind';
  if (leaf === 'mean' || leaf === 'value') return 'amount';
  if (leaf === 'sd') return 'sd';
  return 'form';
}

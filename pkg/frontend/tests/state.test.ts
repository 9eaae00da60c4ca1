import { describe, expect, it } from 'vitest';

import {
  buildEvidence,
  canUndo,
  clearPreview,
  formFieldFor,
  initialState,
  withPreview,
  withSession,
} from '../src/state.js';
import type { EvidenceFormValues } from '../src/state.js';
import { baselineSession } from './fixtures.js';

const values = (over: Partial<EvidenceFormValues> = {}): EvidenceFormValues => ({
  variable: 'G',
  kind: 'normal',
  amount: '0.04',
  sd: '0.005',
  note: '',
  ...over,
});

describe('state transitions', () => {
  it('starts empty and cannot undo', () => {
    const state = initialState();
    expect(state.session).toBeNull();
    expect(state.preview).toBeNull();
    expect(canUndo(state)).toBe(false);
  });

  it('adopting a session clears any preview', () => {
    const item = { variable: 'G', kind: 'normal', mean: 0.04, sd: 0.005 } as const;
    let state = withSession(initialState(), baselineSession);
    state = withPreview(state, { ...baselineSession, preview: true }, item);
    expect(state.preview).not.toBeNull();
    expect(state.pending).toEqual(item);
    state = withSession(state, baselineSession);
    expect(state.preview).toBeNull();
    expect(state.pending).toBeNull();
  });

  it('cancelling a preview keeps the session', () => {
    const item = { variable: 'G', kind: 'normal', mean: 0.04, sd: 0.005 } as const;
    let state = withSession(initialState(), baselineSession);
    state = clearPreview(withPreview(state, { ...baselineSession, preview: true }, item));
    expect(state.session).toBe(baselineSession);
    expect(state.preview).toBeNull();
  });

  it('undo is possible only with evidence on the timeline', () => {
    const state = withSession(initialState(), baselineSession);
    expect(canUndo(state)).toBe(false);
    const withEvidence = withSession(state, { ...baselineSession, evidence_count: 2 });
    expect(canUndo(withEvidence)).toBe(true);
  });
});

describe('buildEvidence', () => {
  it('accepts a normal reading', () => {
    const result = buildEvidence(values({ note: 'gold survey' }));
    expect(result).toEqual({
      ok: true,
      item: { variable: 'G', kind: 'normal', mean: 0.04, sd: 0.005, note: 'gold survey' },
    });
  });

  it('accepts an exact observation and drops the sd', () => {
    const result = buildEvidence(values({ kind: 'observation', amount: '0.03', sd: '' }));
    expect(result).toEqual({ ok: true, item: { variable: 'G', kind: 'observation', value: 0.03 } });
  });

  it('mirrors the service rule sd > 0', () => {
    const result = buildEvidence(values({ sd: '0' }));
    expect(result).toEqual({
      ok: false,
      field: 'sd',
      message: "normal evidence on 'G' needs sd > 0",
    });
    expect(buildEvidence(values({ sd: '-0.1' }))).toMatchObject({ ok: false, field: 'sd' });
  });

  it('rejects blank or non-numeric inputs at the offending field', () => {
    expect(buildEvidence(values({ variable: ' ' }))).toMatchObject({ ok: false, field: 'variable' });
    expect(buildEvidence(values({ amount: '' }))).toMatchObject({ ok: false, field: 'amount' });
    expect(buildEvidence(values({ amount: 'abc' }))).toMatchObject({ ok: false, field: 'amount' });
    expect(buildEvidence(values({ sd: 'abc' }))).toMatchObject({ ok: false, field: 'sd' });
    expect(buildEvidence(values({ kind: 'poisson' }))).toMatchObject({ ok: false, field: 'kind' });
  });
});

describe('formFieldFor', () => {
  it('routes service field paths to form inputs', () => {
    expect(formFieldFor('evidence.sd')).toBe('sd');
    expect(formFieldFor('evidence.mean')).toBe('amount');
    expect(formFieldFor('evidence.value')).toBe('amount');
    expect(formFieldFor('evidence[0].variable')).toBe('variable');
    expect(formFieldFor('evidence.kind')).toBe('kind');
    expect(formFieldFor('evidence')).toBe('form');
    expect(formFieldFor(null)).toBe('form');
  });
});

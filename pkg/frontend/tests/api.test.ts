import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

const item = { variable: 'G', kind: 'normal', mean: 0.04, sd: 0.005 } as const;

describe('ApiClient', () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it('lists models', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { models: ['gold_stocks'] }));
    vi.stubGlobal('fetch', fetchMock);
    await expect(new ApiClient('http://svc').listModels()).resolves.toEqual({
      models: ['gold_stocks'],
    });
    expect(fetchMock).toHaveBeenCalledWith('http://svc/models', undefined);
  });

  it('creates sessions with a JSON body', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(201, { session_id: 'abc' }));
    vi.stubGlobal('fetch', fetchMock);
    await new ApiClient('http://svc').createSession('gold_stocks');
    expect(fetchMock).toHaveBeenCalledWith('http://svc/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: '{"model_id":"gold_stocks"}',
    });
  });

  it('sends previews as an encoded query parameter', async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(200, { preview: true }));
    vi.stubGlobal('fetch', fetchMock);
    await new ApiClient('http://svc').previewEvidence('abc', item);
    const expected = `http://svc/sessions/abc/whatif?evidence=${encodeURIComponent(JSON.stringify(item))}`;
    expect(fetchMock).toHaveBeenCalledWith(expected, undefined);
  });

  it('commits evidence with POST and undoes with DELETE', async () => {
    const fetchMock = vi
      .fn()
      .mockImplementation(() => Promise.resolve(jsonResponse(200, { evidence_count: 1 })));
    vi.stubGlobal('fetch', fetchMock);
    const client = new ApiClient('http://svc');
    await client.commitEvidence('abc', item);
    expect(fetchMock).toHaveBeenLastCalledWith('http://svc/sessions/abc/evidence', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(item),
    });
    await client.undoEvidence('abc');
    expect(fetchMock).toHaveBeenLastCalledWith('http://svc/sessions/abc/evidence/last', {
      method: 'DELETE',
    });
  });

  it('surfaces field errors from 400 payloads', async () => {
    const detail = { field: 'evidence.sd', message: 'evidence.sd: expected a number' };
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(jsonResponse(400, { detail })));
    const err: unknown = await new ApiClient('http://svc')
      .commitEvidence('abc', item)
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err as ApiError).toMatchObject({
      status: 400,
      field: 'evidence.sd',
      message: 'evidence.sd: expected a number',
    });
  });

  it('surfaces plain-string detail without a field', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(jsonResponse(404, { detail: "no model 'x'" })));
    const err: unknown = await new ApiClient('http://svc').getModel('x').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err as ApiError).toMatchObject({ status: 404, field: null, message: "no model 'x'" });
  });

  it('falls back to a generic message on unreadable error bodies', async () => {
    vi.stubGlobal('fetch', vi.fn().mockResolvedValue(new Response('boom', { status: 500 })));
    const err: unknown = await new ApiClient('http://svc').listModels().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).message).toBe('request failed (500)');
  });

  it('treats array detail (framework validation) as generic', async () => {
    vi.stubGlobal(
      'fetch',
      vi.fn().mockResolvedValue(jsonResponse(422, { detail: [{ msg: 'field required' }] })),
    );
    const err: unknown = await new ApiClient('http://svc').listModels().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).message).toBe('request failed (422)');
  });
});

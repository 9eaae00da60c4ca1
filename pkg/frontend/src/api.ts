import type { EvidenceInput, ModelInfo, ModelListPayload, SessionPayload } from './types.js';

/** Service error; `field` carries the offending input path on 400s. */
export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly field: string | null = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function fail(res: Response): Promise<never> {
  const body = (await res.json().catch(() => null)) as { detail?: unknown } | null;
  const detail = body?.detail;
  if (typeof detail === 'string') {
    throw new ApiError(detail, res.status);
  }
  if (detail && typeof detail === 'object' && !Array.isArray(detail)) {
    const { field, message } = detail as { field?: string; message?: string };
    throw new ApiError(message ?? `request failed (${res.status})`, res.status, field || null);
  }
  throw new ApiError(`request failed (${res.status})`, res.status);
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      await fail(res);
    }
    return (await res.json()) as T;
  }

  listModels(): Promise<ModelListPayload> {
    return this.request('/models');
  }

  getModel(modelId: string): Promise<ModelInfo> {
    return this.request(`/models/${encodeURIComponent(modelId)}`);
  }

  createSession(modelId: string): Promise<SessionPayload> {
    return this.request('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ model_id: modelId }),
    });
  }

  getReport(sessionId: string): Promise<SessionPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/report`);
  }

  previewEvidence(sessionId: string, item: EvidenceInput): Promise<SessionPayload> {
    const query = encodeURIComponent(JSON.stringify(item));
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/whatif?evidence=${query}`);
  }

  commitEvidence(sessionId: string, item: EvidenceInput): Promise<SessionPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/evidence`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(item),
    });
  }

  undoEvidence(sessionId: string): Promise<SessionPayload> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/evidence/last`, {
      method: 'DELETE',
    });
  }
}

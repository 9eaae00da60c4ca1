import { ApiClient, ApiError } from './api.js';
import type { AppState, FormField } from './state.js';
import {
  buildEvidence,
  canUndo,
  clearPreview,
  formFieldFor,
  initialState,
  withPreview,
  withSession,
} from './state.js';
import {
  renderDelta,
  renderOptions,
  renderReport,
  renderSessionMeta,
  renderTimeline,
} from './view.js';

export interface App {
  /** Resolves once every queued service round trip has settled. */
  idle(): Promise<void>;
  state(): AppState;
}

/** Wire the page: every render follows a service response. */
export function initApp(doc: Document, client: ApiClient): App {
  const must = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) {
      throw new Error(`missing element #${id}`);
    }
    return node as T;
  };

  const modelSelect = must<HTMLSelectElement>('model-select');
  const reportBox = must<HTMLDivElement>('report');
  const metaBox = must<HTMLDivElement>('session-meta');
  const timelineBox = must<HTMLDivElement>('timeline');
  const form = must<HTMLFormElement>('evidence-form');
  const variableSelect = must<HTMLSelectElement>('ev-variable');
  const kindSelect = must<HTMLSelectElement>('ev-kind');
  const amountInput = must<HTMLInputElement>('ev-amount');
  const sdRow = must<HTMLElement>('sd-row');
  const sdInput = must<HTMLInputElement>('ev-sd');
  const noteInput = must<HTMLInputElement>('ev-note');
  const previewPanel = must<HTMLElement>('preview-panel');
  const deltaBox = must<HTMLDivElement>('preview-delta');
  const commitButton = must<HTMLButtonElement>('commit-evidence');
  const cancelButton = must<HTMLButtonElement>('cancel-preview');
  const undoButton = must<HTMLButtonElement>('undo-evidence');
  const errors: Record<FormField | 'form', HTMLElement> = {
    variable: must('err-variable'),
    kind: must('err-kind'),
    amount: must('err-amount'),
    sd: must('err-sd'),
    form: must('err-form'),
  };

  let state = initialState();
  let chain: Promise<void> = Promise.resolve();

  function clearErrors(): void {
    for (const slot of Object.values(errors)) {
      slot.textContent = '';
    }
  }

  function showError(e: unknown): void {
    const slot = e instanceof ApiError ? errors[formFieldFor(e.field)] : errors.form;
    slot.textContent = e instanceof Error ? e.message : String(e);
  }

  function render(): void {
    const session = state.session;
    reportBox.innerHTML = session ? renderReport(session) : '<p class="muted">loading&hellip;</p>';
    metaBox.innerHTML = session ? renderSessionMeta(session) : '';
    timelineBox.innerHTML = session ? renderTimeline(session.evidence) : '';
    undoButton.disabled = !canUndo(state);
    if (session && state.preview) {
      previewPanel.hidden = false;
      deltaBox.innerHTML = renderDelta(session.report, state.preview.report);
    } else {
      previewPanel.hidden = true;
      deltaBox.innerHTML = '';
    }
  }

  // Actions are chained, never concurrent: each render reflects the service
  // response that finished last, and errors land in the form's error slots.
  function track(run: () => Promise<void>): void {
    chain = chain.then(run).catch(showError);
  }

  function syncKind(): void {
    sdRow.hidden = kindSelect.value !== 'normal';
  }

  async function startSession(modelId: string): Promise<void> {
    const [session, info] = await Promise.all([
      client.createSession(modelId),
      client.getModel(modelId),
    ]);
    variableSelect.innerHTML = renderOptions(info.model.variables, info.model.variables[0] ?? '');
    state = withSession(state, session);
    render();
  }

  async function loadModels(): Promise<void> {
    const { models } = await client.listModels();
    modelSelect.innerHTML = renderOptions(models, models[0] ?? '');
    if (models.length === 0) {
      reportBox.innerHTML = '<p class="muted">No models in the model directory.</p>';
      return;
    }
    await startSession(models[0]);
  }

  modelSelect.addEventListener('change', () => {
    clearErrors();
    track(() => startSession(modelSelect.value));
  });

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    clearErrors();
    const session = state.session;
    if (!session) {
      return;
    }
    const result = buildEvidence({
      variable: variableSelect.value,
      kind: kindSelect.value,
      amount: amountInput.value,
      sd: sdInput.value,
      note: noteInput.value,
    });
    if (!result.ok) {
      errors[result.field].textContent = result.message;
      return;
    }
    track(async () => {
      const preview = await client.previewEvidence(session.session_id, result.item);
      state = withPreview(state, preview, result.item);
      render();
    });
  });

  commitButton.addEventListener('click', () => {
    const session = state.session;
    const item = state.pending;
    if (!session || !item) {
      return;
    }
    clearErrors();
    track(async () => {
      const updated = await client.commitEvidence(session.session_id, item);
      state = withSession(state, updated);
      form.reset();
      syncKind();
      render();
    });
  });

  cancelButton.addEventListener('click', () => {
    // Previews never touched the session, so discarding one is local.
    state = clearPreview(state);
    render();
  });

  undoButton.addEventListener('click', () => {
    const session = state.session;
    if (!session || !canUndo(state)) {
      return;
    }
    clearErrors();
    track(async () => {
      const updated = await client.undoEvidence(session.session_id);
      state = withSession(state, updated);
      render();
    });
  });

  kindSelect.addEventListener('change', syncKind);

  syncKind();
  render();
  track(loadModels);

  return {
    idle: async () => {
      let current: Promise<void>;
      do {
        current = chain;
        await current;
      } while (current !== chain);
    },
    state: () => state,
  };
}

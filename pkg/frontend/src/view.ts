import { barWidth, formatRate, formatSigned, heatColor } from './format.js';
import type { EvidenceEntry, ReportPayload, SessionPayload } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderOptions(values: string[], selected: string): string {
  return values
    .map((v) => {
      const flag = v === selected ? ' selected' : '';
      return `<option value="${escapeHtml(v)}"${flag}>${escapeHtml(v)}</option>`;
    })
    .join('');
}

export function renderAssetTable(report: ReportPayload): string {
  const rows = report.variables
    .map((v) => {
      const asset = report.assets[v];
      return `<tr><th>${escapeHtml(v)}</th><td class="num">${formatRate(asset.mean)}</td><td class="num">${formatRate(asset.sd)}</td></tr>`;
    })
    .join('');
  return `<table class="asset-table"><thead><tr><th>Asset</th><th>Mean</th><th>SD</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderCovarianceTable(report: ReportPayload): string {
  const scale = Math.max(...report.covariance.flat().map(Math.abs));
  const head = report.variables.map((v) => `<th>${escapeHtml(v)}</th>`).join('');
  const rows = report.variables
    .map((v, i) => {
      const cells = report.covariance[i]
        .map((c) => `<td class="num" style="background: ${heatColor(c, scale)}">${formatRate(c)}</td>`)
        .join('');
      return `<tr><th>${escapeHtml(v)}</th>${cells}</tr>`;
    })
    .join('');
  return `<table class="cov-table"><thead><tr><th></th>${head}</tr></thead><tbody>${rows}</tbody></table>`;
}

export function renderWeights(report: ReportPayload): string {
  const stocks = report.variables.filter((v) => v in report.current_weights);
  const tangency = report.tangency_weights;
  const rows = stocks
    .map((s) => {
      const current = report.current_weights[s];
      const target = tangency ? tangency[s] : null;
      const targetCells =
        target === null
          ? '<td class="num">&mdash;</td><td class="bar-cell"></td>'
          : `<td class="num">${formatRate(target)}</td><td class="bar-cell"><div class="bar tangency" style="width: ${barWidth(target)}"></div></td>`;
      return (
        `<tr><th>${escapeHtml(s)}</th>` +
        `<td class="num">${formatRate(current)}</td>` +
        `<td class="bar-cell"><div class="bar current" style="width: ${barWidth(current)}"></div></td>` +
        targetCells +
        '</tr>'
      );
    })
    .join('');
  const note = tangency
    ? ''
    : '<p class="muted">Tangency weights unavailable: the stock covariance block is singular.</p>';
  return (
    '<table class="weight-table"><thead><tr><th>Stock</th><th colspan="2">Current</th><th colspan="2">Tangency</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>${note}`
  );
}

export function renderReport(payload: SessionPayload): string {
  const report = payload.report;
  return (
    `<section class="report-block"><h3>Posterior returns</h3>${renderAssetTable(report)}</section>` +
    `<section class="report-block"><h3>Covariance</h3>${renderCovarianceTable(report)}</section>` +
    `<section class="report-block"><h3>Portfolio weights</h3>${renderWeights(report)}` +
    `<p class="muted">riskless rate ${formatRate(report.riskless_rate)}</p></section>`
  );
}

export function renderSessionMeta(payload: SessionPayload): string {
  const badge = payload.preview ? '<span class="badge">preview</span> ' : '';
  return (
    badge +
    `model <code>${escapeHtml(payload.model_id)}</code>@<code>${escapeHtml(payload.model_hash)}</code>` +
    ` &middot; evidence ${payload.evidence_count}` +
    ` &middot; state <code>${escapeHtml(payload.state_hash)}</code>`
  );
}

export function describeEvidence(item: EvidenceEntry): string {
  if (item.kind === 'normal') {
    return `${item.variable}: reading ${formatRate(item.mean)} (sd ${formatRate(item.sd)})`;
  }
  return `${item.variable}: observed ${formatRate(item.value)}`;
}

export function renderTimeline(evidence: EvidenceEntry[]): string {
  if (evidence.length === 0) {
    return '<p class="muted">No evidence yet; the report shows the prior model.</p>';
  }
  const items = evidence
    .map((e, i) => {
      const note = e.note ? ` <span class="note">${escapeHtml(e.note)}</span>` : '';
      return `<li><span class="step">${i + 1}</span> ${escapeHtml(describeEvidence(e))}${note}</li>`;
    })
    .join('');
  return `<ol class="timeline">${items}</ol>`;
}

/**
 * Before/after comparison for a what-if preview.  Deltas are signed changes
 * between the two service reports; an SD that shrinks is highlighted as a
 * variance reduction.
 */
export function renderDelta(before: ReportPayload, after: ReportPayload): string {
  const assetRows = after.variables
    .map((v) => {
      const prev = before.assets[v];
      const next = after.assets[v];
      if (!prev) {
        return `<tr><th>${escapeHtml(v)}</th><td colspan="2">new in this view</td></tr>`;
      }
      const sdClass = next.sd < prev.sd ? 'num improved' : 'num';
      return (
        `<tr><th>${escapeHtml(v)}</th>` +
        `<td class="num">${formatRate(prev.mean)} &rarr; ${formatRate(next.mean)} (${formatSigned(next.mean - prev.mean)})</td>` +
        `<td class="${sdClass}">${formatRate(prev.sd)} &rarr; ${formatRate(next.sd)} (${formatSigned(next.sd - prev.sd)})</td></tr>`
      );
    })
    .join('');
  const assets =
    '<table class="delta-table"><thead><tr><th>Asset</th><th>Mean</th><th>SD</th></tr></thead>' +
    `<tbody>${assetRows}</tbody></table>`;
  return assets + renderWeightDelta(before, after);
}

function renderWeightDelta(before: ReportPayload, after: ReportPayload): string {
  const prev = before.tangency_weights;
  const next = after.tangency_weights;
  if (!prev || !next) {
    return '<p class="muted">Tangency weights unavailable on one side of the comparison.</p>';
  }
  const stocks = after.variables.filter((v) => v in next);
  const rows = stocks
    .map((s) => {
      return (
        `<tr><th>${escapeHtml(s)}</th>` +
        `<td class="num">${formatRate(prev[s])} &rarr; ${formatRate(next[s])} (${formatSigned(next[s] - prev[s])})</td></tr>`
      );
    })
    .join('');
  return (
    '<table class="delta-table"><thead><tr><th>Stock</th><th>Tangency weight</th></tr></thead>' +
    `<tbody>${rows}</tbody></table>`
  );
}

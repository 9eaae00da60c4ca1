/** Presentation rounding and colors; numbers come straight from service payloads. */

const PLACES = 4;
const ZERO = '0.' + '0'.repeat(PLACES);

// Half-up rounding of a plain non-negative decimal string.  Looking at the
// first dropped digit alone is exact: the remainder is >= half iff that
// digit is >= 5.
function roundHalfUp(decimal: string, places: number): string {
  const [whole, frac = ''] = decimal.split('.');
  const digits = frac.padEnd(places + 1, '0');
  let kept = BigInt(whole + digits.slice(0, places));
  if (digits.charCodeAt(places) >= 53) kept += 1n;
  const flat = kept.toString().padStart(places + 1, '0');
  return `${flat.slice(0, -places)}.${flat.slice(-places)}`;
}

/**
 * Render a rate or weight to 4 decimals exactly as the service's own table
 * output does: snap the double to 12 decimal places first, then round
 * half-up.  A raw toFixed(4) would show 0.034249999999999996 as 0.0342
 * even though it is the published 0.0343.
 */
export function formatRate(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  const out = roundHalfUp(Math.abs(x).toFixed(12), PLACES);
  return x < 0 && out !== ZERO ? `-${out}` : out;
}

/** Delta presentation: an explicit sign, zero shown as +0.0000. */
export function formatSigned(x: number): string {
  const out = formatRate(x);
  return out.startsWith('-') ? out : `+${out}`;
}

/** Heat cell background: green positive, red negative, alpha by magnitude. */
export function heatColor(value: number, scale: number): string {
  if (!(scale > 0) || value === 0) return 'transparent';
  const alpha = Math.min(Math.abs(value) / scale, 0.8);
  if (value > 0) {
    return `rgba(34, 197, 94, ${alpha})`;
  }
  return `rgba(239, 68, 68, ${alpha})`;
}

/** Weight bar width; weights outside [0, 1] clamp to the track. */
export function barWidth(weight: number): string {
  const clamped = Math.max(0, Math.min(1, weight));
  return `${(clamped * 100).toFixed(1)}%`;
}

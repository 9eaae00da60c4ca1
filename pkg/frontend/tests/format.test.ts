import { describe, expect, it } from 'vitest';

import { barWidth, formatRate, formatSigned, heatColor } from '../src/format.js';

// Frozen parity table: inputs are doubles seen in service payloads plus edge
// cases; expected strings were produced by the service's own table formatter.
const PARITY: Array<[number, string]> = [
  [0.034249999999999996, '0.0343'],
  [0.04, '0.0400'],
  [0.032499999999999994, '0.0325'],
  [0.034999999999999996, '0.0350'],
  [0.1341470731365871, '0.1341'],
  [0.5266687554580785, '0.5267'],
  [0.3391841714053344, '0.3392'],
  [0.07533235294117649, '0.0753'],
  [0.09082352941176473, '0.0908'],
  [0.07061764705882355, '0.0706'],
  [0.07735294117647058, '0.0774'],
  [0.14297497291099256, '0.1430'],
  [0.5152007361249724, '0.5152'],
  [0.3418242909640349, '0.3418'],
  [0.03125, '0.0313'],
  [-0.03125, '-0.0313'],
  [0.0, '0.0000'],
  [-0.0, '0.0000'],
  [1.0, '1.0000'],
  [-0.25, '-0.2500'],
  [0.99995, '1.0000'],
  [-0.99995, '-1.0000'],
  [5e-5, '0.0001'],
  [-5e-5, '-0.0001'],
  [1e-9, '0.0000'],
  [-1e-9, '0.0000'],
  [0.00015, '0.0002'],
  [0.00025, '0.0003'],
  [2.5, '2.5000'],
  [-2.5, '-2.5000'],
  [0.123456789, '0.1235'],
  [123.45678, '123.4568'],
  [0.00167893, '0.0017'],
  [0.007568000000000002, '0.0076'],
];

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe('formatRate', () => {
  it('matches the service table formatter on the parity battery', () => {
    for (const [input, expected] of PARITY) {
      expect(formatRate(input), `formatRate(${input})`).toBe(expected);
    }
  });

  it('snaps before rounding, unlike a raw toFixed', () => {
    // The served P mean sits just under 0.03425; toFixed alone drops it.
    expect((0.034249999999999996).toFixed(4)).toBe('0.0342');
    expect(formatRate(0.034249999999999996)).toBe('0.0343');
  });

  it('rounds exact ties away from zero', () => {
    expect(formatRate(0.03125)).toBe('0.0313');
    expect(formatRate(-0.03125)).toBe('-0.0313');
  });

  it('never shows a signed zero', () => {
    expect(formatRate(-1e-13)).toBe('0.0000');
  });

  // rounds within half a display unit and keeps a fixed shape
  it('stays within 5e-5 of the input on random rates', () => {
    const rand = mulberry32(20260814);
    for (let i = 0; i < 500; i += 1) {
      const x = (rand() - 0.5) * 3;
      const out = formatRate(x);
      expect(out).toMatch(/^-?\d+\.\d{4}$/);
      expect(Math.abs(Number(out) - x)).toBeLessThanOrEqual(5e-5 + 1e-12);
    }
  });

  it('is idempotent on already-rounded values', () => {
    const rand = mulberry32(1311);
    for (let i = 0; i < 200; i += 1) {
      const out = formatRate((rand() - 0.5) * 2);
      expect(formatRate(Number(out))).toBe(out);
    }
  });
});

describe('formatSigned', () => {
  it('prefixes an explicit sign', () => {
    expect(formatSigned(0.0410823)).toBe('+0.0411');
    expect(formatSigned(-0.0011)).toBe('-0.0011');
    expect(formatSigned(0)).toBe('+0.0000');
    expect(formatSigned(-1e-13)).toBe('+0.0000');
  });
});

describe('heatColor', () => {
  it('is transparent at zero or with no scale', () => {
    expect(heatColor(0, 1)).toBe('transparent');
    expect(heatColor(0.5, 0)).toBe('transparent');
  });

  it('colors positive green and negative red, alpha by magnitude', () => {
    expect(heatColor(0.4, 1)).toBe('rgba(34, 197, 94, 0.4)');
    expect(heatColor(-0.4, 1)).toBe('rgba(239, 68, 68, 0.4)');
  });

  it('caps alpha at 0.8', () => {
    expect(heatColor(5, 1)).toBe('rgba(34, 197, 94, 0.8)');
    expect(heatColor(-5, 1)).toBe('rgba(239, 68, 68, 0.8)');
  });
});

describe('barWidth', () => {
  it('maps weights to percent widths, clamped to the track', () => {
    expect(barWidth(0.2)).toBe('20.0%');
    expect(barWidth(0.1341470731365871)).toBe('13.4%');
    expect(barWidth(1.2)).toBe('100.0%');
    expect(barWidth(-0.1)).toBe('0.0%');
  });
});

/**
 * Minimal deterministic SVG helpers.
 *
 * Figures are pure functions of their inputs: no timestamps, no random
 * identifiers, and all numbers rendered through fixed-precision
 * formatting, so the same data always yields byte-identical output.
 */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed two-decimal coordinate formatting (deterministic, no exponents). */
export function px(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`non-finite coordinate: ${value}`);
  }
  return value.toFixed(2);
}

export function svgDocument(
  width: number,
  height: number,
  body: string,
): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}" ` +
    `font-family="system-ui, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    `</svg>\n`
  );
}

export interface Scale {
  (value: number): number;
}

/** Linear scale mapping [d0, d1] onto [r0, r1]. */
export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): Scale {
  const span = d1 - d0;
  if (span === 0) {
    throw new Error("degenerate scale domain");
  }
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

/** Round tick step so that [0, max] holds 4-8 ticks (1/2/5 progression). */
export function tickStep(max: number): number {
  if (!(max > 0)) {
    throw new Error(`tick range must be positive, got ${max}`);
  }
  const raw = max / 5;
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (power * mult >= raw) {
      return power * mult;
    }
  }
  return power * 10;
}

export function ticks(max: number): number[] {
  const step = tickStep(max);
  const values: number[] = [];
  for (let v = 0; v <= max + step * 1e-9; v += step) {
    values.push(Number(v.toFixed(6)));
  }
  return values;
}

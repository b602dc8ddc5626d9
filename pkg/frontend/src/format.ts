/** Display formatting. Values always originate in a service response; this
 * module only turns those numbers into strings, it never derives new ones. */

/** Half-up (ties away from zero) to two decimals, matching the service's
 * table output. */
export function formatNumber(value: number): string {
  // trim float dust like 77.99999999999999 before rounding
  const scaled = Number((Math.abs(value) * 100).toFixed(6));
  const rounded = Math.round(scaled) / 100;
  const signed = value < 0 && rounded !== 0 ? -rounded : rounded;
  return signed.toFixed(2);
}

export function formatPercent(value: number | null): string {
  return value === null ? "-" : `${formatNumber(value)}%`;
}

export function formatDelta(value: number): string {
  const text = formatNumber(value);
  return value > 0 && !text.startsWith("-") ? `+${text}` : text;
}

export const EFFECT_GLYPH: Record<number, string> = { 1: "+", 0: "0", [-1]: "−" };

/** Click cycle: -1 -> 0 -> +1 -> -1. */
export function cycleEffect(effect: number): number {
  return effect === 1 ? -1 : effect + 1;
}

/** Exact rational arithmetic over BigInt; the UI never renders floats. */

import type { Rational } from './types';

export interface Rat {
  num: bigint;
  den: bigint;
}

function gcd(a: bigint, b: bigint): bigint {
  while (b !== 0n) {
    [a, b] = [b, a % b];
  }
  return a < 0n ? -a : a;
}

export function rat(num: bigint | number, den: bigint | number = 1n): Rat {
  let n = BigInt(num);
  let d = BigInt(den);
  if (d === 0n) throw new Error('zero denominator');
  if (d < 0n) {
    n = -n;
    d = -d;
  }
  const g = gcd(n, d) || 1n;
  return { num: n / g, den: d / g };
}

export function fromWire(value: Rational): Rat {
  return rat(value.num, value.den);
}

export function add(a: Rat, b: Rat): Rat {
  return rat(a.num * b.den + b.num * a.den, a.den * b.den);
}

export function sum(values: Rat[]): Rat {
  return values.reduce(add, rat(0n));
}

export function compare(a: Rat, b: Rat): -1 | 0 | 1 {
  const left = a.num * b.den;
  const right = b.num * a.den;
  if (left < right) return -1;
  if (left > right) return 1;
  return 0;
}

export function gte(a: Rat, b: Rat): boolean {
  return compare(a, b) >= 0;
}

export function eq(a: Rat, b: Rat): boolean {
  return compare(a, b) === 0;
}

/** Exact display form: "num/den", or just "num" for integers. */
export function fmt(a: Rat): string {
  return a.den === 1n ? `${a.num}` : `${a.num}/${a.den}`;
}

/** Approximate share in [0, 1] for bar widths only; never displayed. */
export function toRatio(a: Rat): number {
  return Number(a.num) / Number(a.den);
}

import { describe, expect, it } from 'vitest';

import { add, compare, eq, fmt, fromWire, gte, rat, sum } from '../src/rational';

describe('exact rationals', () => {
  it('normalizes to lowest terms with positive denominator', () => {
    expect(rat(2, 4)).toEqual({ num: 1n, den: 2n });
    expect(rat(-1, -3)).toEqual({ num: 1n, den: 3n });
    expect(rat(0, 7)).toEqual({ num: 0n, den: 1n });
  });

  it('adds and sums exactly', () => {
    expect(add(rat(1, 3), rat(1, 6))).toEqual({ num: 1n, den: 2n });
    expect(sum([rat(1, 2), rat(1, 3), rat(1, 6)])).toEqual({ num: 1n, den: 1n });
  });

  it('compares without rounding', () => {
    expect(compare(rat(1, 3), rat(333333333, 1000000000))).toBe(1);
    expect(gte(rat(2, 3), rat(2, 3))).toBe(true);
    expect(eq(fromWire({ num: 4, den: 6 }), rat(2, 3))).toBe(true);
  });

  it('renders num/den, never a float', () => {
    expect(fmt(rat(1, 3))).toBe('1/3');
    expect(fmt(rat(6, 3))).toBe('2');
    expect(fmt(fromWire({ num: 2, den: 4 }))).toBe('1/2');
  });

  it('rejects zero denominators', () => {
    expect(() => rat(1, 0)).toThrow();
  });
});

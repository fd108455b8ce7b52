/**
 * Selection logic for the subset-choice stage.
 *
 * The server's legal-move list is the single source of truth for what can be
 * submitted; the live tally of the current selection against the mass bound
 * is display logic that must agree with it.
 */

import { fromWire, gte, rat, sum, type Rat } from './rational';
import type { DefSubsetPosition, Move, SubsetMove } from './types';

function sameSet(a: string[], b: string[]): boolean {
  if (a.length !== b.length) return false;
  const left = [...a].sort();
  const right = [...b].sort();
  return left.every((v, i) => v === right[i]);
}

export class SubsetGate {
  private readonly legal: SubsetMove[];
  private readonly rho: Rat;
  private readonly mass = new Map<string, Rat>();

  constructor(position: DefSubsetPosition, legalMoves: Move[]) {
    this.legal = legalMoves.filter((m): m is SubsetMove => m.kind === 'subset');
    this.rho = fromWire(position.rho);
    for (const entry of position.other_dist) {
      this.mass.set(entry.state, fromWire(entry.prob));
    }
  }

  /** Exact mass of the current selection under the opposing distribution. */
  tally(chosen: string[]): Rat {
    return sum(chosen.map((s) => this.mass.get(s) ?? rat(0n)));
  }

  /** The protocol bound: the reply must carry at least the committed mass. */
  satisfiesBound(chosen: string[]): boolean {
    return chosen.length > 0 && gte(this.tally(chosen), this.rho);
  }

  /** Submission gate: exactly membership in the server's legal moves. */
  canSubmit(chosen: string[]): boolean {
    return this.legal.some((m) => sameSet(m.subset, chosen));
  }

  /** The move object to post for a selection (must be legal). */
  moveFor(chosen: string[]): SubsetMove {
    const move = this.legal.find((m) => sameSet(m.subset, chosen));
    if (!move) throw new Error('selection is not a legal move');
    return move;
  }
}

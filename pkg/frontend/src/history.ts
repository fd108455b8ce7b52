/** Step-through cursor over a finished or ongoing play transcript. */

import type { HistoryEntry, Position, SessionStatus } from './types';

export interface ReplayFrame {
  position: Position;
  move: HistoryEntry | null;
  index: number;
  total: number;
}

export class Replay {
  private cursor: number;

  constructor(
    private readonly history: HistoryEntry[],
    private readonly finalPosition: Position,
    readonly status: SessionStatus,
  ) {
    this.cursor = history.length;
  }

  get length(): number {
    return this.history.length;
  }

  frame(): ReplayFrame {
    const atEnd = this.cursor >= this.history.length;
    return {
      position: atEnd ? this.finalPosition : this.history[this.cursor].position,
      move: atEnd ? null : this.history[this.cursor],
      index: this.cursor,
      total: this.history.length,
    };
  }

  toStart(): ReplayFrame {
    this.cursor = 0;
    return this.frame();
  }

  toEnd(): ReplayFrame {
    this.cursor = this.history.length;
    return this.frame();
  }

  next(): ReplayFrame {
    if (this.cursor < this.history.length) this.cursor += 1;
    return this.frame();
  }

  prev(): ReplayFrame {
    if (this.cursor > 0) this.cursor -= 1;
    return this.frame();
  }
}

export function banner(status: SessionStatus, horizon: number): string {
  switch (status) {
    case 'attacker_won':
      return 'Attacker wins: Defender had no matching transition.';
    case 'defender_survived':
      return `Defender survives the ${horizon}-round horizon.`;
    case 'defender_won_dead':
      return 'Defender wins: neither state has a transition left.';
    default:
      return 'Play in progress.';
  }
}

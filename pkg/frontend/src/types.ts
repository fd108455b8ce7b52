/** Wire types mirroring the session API's JSON bodies. */

export interface Rational {
  num: number;
  den: number;
}

export interface DistEntry {
  state: string;
  prob: Rational;
}

export type Dist = DistEntry[];

export interface PairPosition {
  kind: 'pair';
  s1: string;
  s2: string;
}

export interface DefTransPosition {
  kind: 'def_trans';
  attacked_side: 1 | 2;
  action: string;
  dist: Dist;
  other: string;
}

export interface DistPairPosition {
  kind: 'dist_pair';
  d1: Dist;
  d2: Dist;
}

export interface DefSubsetPosition {
  kind: 'def_subset';
  chosen_side: 1 | 2;
  subset: string[];
  other_dist: Dist;
  rho: Rational;
}

export interface SetPairPosition {
  kind: 'set_pair';
  t1: string[];
  t2: string[];
}

export interface DefPickPosition {
  kind: 'def_pick';
  chosen_side: 1 | 2;
  state: string;
  other_set: string[];
}

export type Position =
  | PairPosition
  | DefTransPosition
  | DistPairPosition
  | DefSubsetPosition
  | SetPairPosition
  | DefPickPosition;

export interface TransitionMove {
  actor: 'attacker' | 'defender';
  kind: 'transition';
  side: 1 | 2;
  action: string;
  dist: Dist;
}

export interface SubsetMove {
  actor: 'attacker' | 'defender';
  kind: 'subset';
  side: 1 | 2;
  subset: string[];
}

export interface PickMove {
  actor: 'attacker' | 'defender';
  kind: 'pick';
  side: 1 | 2;
  state: string;
}

export type Move = TransitionMove | SubsetMove | PickMove;

export interface HistoryEntry {
  position: Position;
  move: Move;
  by: 'engine' | 'human';
  round: number;
}

export type SessionStatus =
  | 'active'
  | 'attacker_won'
  | 'defender_survived'
  | 'defender_won_dead';

export interface SessionState {
  id: string;
  model: string;
  status: SessionStatus;
  human_side: 'attacker' | 'defender';
  engine_side: 'attacker' | 'defender';
  horizon: number;
  rounds_used: number;
  lifted_rounds: number;
  position: Position;
  legal_moves: Move[];
  history: HistoryEntry[];
}

export interface ModelInfo {
  name: string;
  kind: 'plts' | 'ppda';
  states?: string[];
  controls?: string[];
  stack?: string[];
  actions: string[];
}

/** DOM renderers for the position variants and the move list. */

import { fmt, fromWire, toRatio } from './rational';
import { SubsetGate } from './subsetGate';
import type { Dist, Move, Position, SessionState } from './types';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function stateChip(name: string): HTMLElement {
  return el('span', 'chip', name);
}

function distBar(dist: Dist): HTMLElement {
  const wrap = el('div', 'dist');
  for (const entry of dist) {
    const prob = fromWire(entry.prob);
    const seg = el('div', 'dist-seg');
    seg.style.flexGrow = String(Math.max(toRatio(prob), 0.04));
    seg.append(el('span', 'dist-label', `${entry.state}`), el('span', 'dist-prob', fmt(prob)));
    wrap.append(seg);
  }
  return wrap;
}

function describeMove(move: Move): string {
  if (move.kind === 'transition') {
    const terms = move.dist.map((e) => `${fmt(fromWire(e.prob))} ${e.state}`).join(' + ');
    return `side ${move.side}: take ${move.action} to ${terms}`;
  }
  if (move.kind === 'subset') {
    return `side ${move.side}: subset {${[...move.subset].join(', ')}}`;
  }
  return `side ${move.side}: pick ${move.state}`;
}

export function renderPosition(state: SessionState, onMove: (move: Move) => void): HTMLElement {
  const pos = state.position;
  const root = el('div', 'position');
  root.append(el('h3', 'position-kind', positionTitle(pos)));
  switch (pos.kind) {
    case 'pair': {
      const row = el('div', 'pair-row');
      row.append(stateChip(pos.s1), el('span', 'vs', 'vs'), stateChip(pos.s2));
      root.append(row);
      break;
    }
    case 'def_trans': {
      root.append(
        el('p', undefined,
          `Attacker took ${pos.action} on side ${pos.attacked_side}; match it from ${pos.other}.`),
        distBar(pos.dist),
      );
      break;
    }
    case 'dist_pair': {
      root.append(el('p', undefined, 'Committed distributions:'), distBar(pos.d1), distBar(pos.d2));
      break;
    }
    case 'def_subset':
      root.append(renderSubsetView(state, onMove));
      return root;
    case 'set_pair': {
      const rows = el('div');
      rows.append(
        el('p', undefined, `T1 = {${pos.t1.join(', ')}}`),
        el('p', undefined, `T2 = {${pos.t2.join(', ')}}`),
      );
      root.append(rows);
      break;
    }
    case 'def_pick': {
      root.append(
        el('p', undefined,
          `Attacker picked ${pos.state} on side ${pos.chosen_side}; answer from ` +
          `{${pos.other_set.join(', ')}}.`),
      );
      break;
    }
  }
  root.append(renderMoveButtons(state, onMove));
  return root;
}

function positionTitle(pos: Position): string {
  switch (pos.kind) {
    case 'pair':
      return 'Current pair';
    case 'def_trans':
      return 'Defender: match the transition';
    case 'dist_pair':
      return 'Attacker: choose a support subset';
    case 'def_subset':
      return 'Defender: choose a reply subset';
    case 'set_pair':
      return 'Attacker: pick an element';
    case 'def_pick':
      return 'Defender: pick an element';
  }
}

function renderMoveButtons(state: SessionState, onMove: (move: Move) => void): HTMLElement {
  const list = el('div', 'moves');
  if (state.status !== 'active') return list;
  for (const move of state.legal_moves) {
    const button = el('button', 'move', describeMove(move));
    button.addEventListener('click', () => onMove(move));
    list.append(button);
  }
  return list;
}

/**
 * Subset-selection view: checkboxes over the opposing support with a live
 * exact tally against the committed mass; submission is enabled exactly for
 * server-legal selections.
 */
export function renderSubsetView(state: SessionState, onMove: (move: Move) => void): HTMLElement {
  const pos = state.position;
  if (pos.kind !== 'def_subset') throw new Error('not a subset position');
  const gate = new SubsetGate(pos, state.legal_moves);
  const wrap = el('div', 'subset-view');
  wrap.append(
    el('p', undefined,
      `Attacker committed {${pos.subset.join(', ')}} with mass ${fmt(fromWire(pos.rho))}; ` +
      'choose a reply of at least that mass.'),
    distBar(pos.other_dist),
  );
  const chosen = new Set<string>();
  const tally = el('p', 'tally');
  const submit = el('button', 'submit', 'play subset');

  const refresh = () => {
    const selection = [...chosen];
    const mass = gate.tally(selection);
    const okBound = gate.satisfiesBound(selection);
    tally.textContent =
      `d(T) = ${fmt(mass)} ${okBound ? '≥' : '<'} ${fmt(fromWire(pos.rho))}` +
      (okBound ? '' : ' — not enough mass');
    submit.toggleAttribute('disabled', !gate.canSubmit(selection));
  };
  for (const entry of pos.other_dist) {
    const label = el('label', 'subset-option');
    const box = el('input') as HTMLInputElement;
    box.type = 'checkbox';
    box.addEventListener('change', () => {
      if (box.checked) chosen.add(entry.state);
      else chosen.delete(entry.state);
      refresh();
    });
    label.append(box, el('span', undefined, `${entry.state} (${fmt(fromWire(entry.prob))})`));
    wrap.append(label);
  }
  submit.addEventListener('click', () => onMove(gate.moveFor([...chosen])));
  wrap.append(tally, submit);
  refresh();
  return wrap;
}

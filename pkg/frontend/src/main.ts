/** App wiring: loader form, live board, history replay. */

import { Client } from './api';
import { el, renderPosition } from './board';
import { banner, Replay } from './history';
import type { HistoryEntry, Move, SessionState } from './types';
import { fmt, fromWire } from './rational';

const client = new Client('');
let current: SessionState | null = null;
let replay: Replay | null = null;

const loader = document.getElementById('loader') as HTMLElement;
const boardHost = document.getElementById('board') as HTMLElement;
const statusHost = document.getElementById('status') as HTMLElement;
const historyHost = document.getElementById('history') as HTMLElement;

async function buildLoader(): Promise<void> {
  const models = await client.models();
  const form = el('form', 'loader-form');
  const modelSel = el('select') as HTMLSelectElement;
  for (const model of models) {
    const opt = el('option', undefined, `${model.name} (${model.kind})`) as HTMLOptionElement;
    opt.value = model.name;
    modelSel.append(opt);
  }
  const s1 = el('input') as HTMLInputElement;
  const s2 = el('input') as HTMLInputElement;
  s1.placeholder = 'left state / configuration';
  s2.placeholder = 'right state / configuration';
  const sideSel = el('select') as HTMLSelectElement;
  for (const side of ['defender', 'attacker']) {
    const opt = el('option', undefined, `play ${side}`) as HTMLOptionElement;
    opt.value = side;
    sideSel.append(opt);
  }
  const horizon = el('input') as HTMLInputElement;
  horizon.type = 'number';
  horizon.value = '3';
  horizon.min = '1';
  const start = el('button', 'submit', 'start session') as HTMLButtonElement;
  start.type = 'submit';
  const error = el('p', 'error');

  const fillDefaults = () => {
    const model = models.find((m) => m.name === modelSel.value);
    if (model?.states && model.states.length >= 2) {
      s1.value = model.states[0];
      s2.value = model.states[model.states.length - 1];
    }
  };
  modelSel.addEventListener('change', fillDefaults);
  fillDefaults();

  form.append(modelSel, s1, s2, sideSel, horizon, start, error);
  form.addEventListener('submit', async (ev) => {
    ev.preventDefault();
    error.textContent = '';
    try {
      const state = await client.createSession({
        model: modelSel.value,
        s1: s1.value.trim(),
        s2: s2.value.trim(),
        human_side: sideSel.value as 'attacker' | 'defender',
        horizon: Number(horizon.value),
      });
      setState(state);
    } catch (err) {
      error.textContent = String(err);
    }
  });
  loader.replaceChildren(form);
}

function setState(state: SessionState): void {
  current = state;
  replay = new Replay(state.history, state.position, state.status);
  render();
}

async function play(move: Move): Promise<void> {
  if (!current) return;
  // moves are confirmed by the server before anything renders
  const state = await client.playMove(current.id, move);
  setState(state);
}

function describeEntry(entry: HistoryEntry): string {
  const move = entry.move;
  let what: string;
  if (move.kind === 'transition') {
    const terms = move.dist.map((e) => `${fmt(fromWire(e.prob))} ${e.state}`).join(' + ');
    what = `${move.action} → ${terms}`;
  } else if (move.kind === 'subset') {
    what = `subset {${move.subset.join(', ')}}`;
  } else {
    what = `pick ${move.state}`;
  }
  return `round ${entry.round + 1} · ${entry.by} (${move.actor}, side ${move.side}): ${what}`;
}

function render(): void {
  if (!current || !replay) return;
  const state = current;
  statusHost.replaceChildren(
    el('span', `badge badge-${state.status}`, state.status.replace(/_/g, ' ')),
    el('span', 'counter',
      `round ${state.rounds_used}/${state.horizon} · lifted ${state.lifted_rounds}`),
    el('span', 'counter', `you: ${state.human_side}`),
  );
  if (state.status === 'active') {
    boardHost.replaceChildren(renderPosition(state, (move) => void play(move)));
  } else {
    boardHost.replaceChildren(el('p', 'banner', banner(state.status, state.horizon)));
  }

  const list = el('ol', 'transcript');
  for (const entry of state.history) {
    list.append(el('li', undefined, describeEntry(entry)));
  }
  const controls = el('div', 'replay-controls');
  const frameInfo = el('span', 'counter');
  const show = () => {
    const frame = replay!.frame();
    frameInfo.textContent = `step ${frame.index}/${frame.total}`;
    const items = list.querySelectorAll('li');
    items.forEach((item, i) => item.classList.toggle('current', i === frame.index));
  };
  for (const [label, go] of [
    ['⏮', () => replay!.toStart()],
    ['◀', () => replay!.prev()],
    ['▶', () => replay!.next()],
    ['⏭', () => replay!.toEnd()],
  ] as const) {
    const button = el('button', 'replay-btn', label);
    button.addEventListener('click', () => {
      go();
      show();
    });
    controls.append(button);
  }
  historyHost.replaceChildren(el('h3', undefined, 'Transcript'), controls, frameInfo, list);
  show();
}

void buildLoader();

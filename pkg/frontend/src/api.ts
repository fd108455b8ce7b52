/** Thin typed client over the session endpoints; all game rules stay server-side. */

import type { Move, ModelInfo, SessionState } from './types';

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(typeof body.error === 'string' ? body.error : resp.statusText, resp.status);
  }
  return body as T;
}

export class Client {
  constructor(private readonly base: string = '') {}

  async models(): Promise<ModelInfo[]> {
    const body = await request<{ models: ModelInfo[] }>(`${this.base}/models`);
    return body.models;
  }

  createSession(params: {
    model: string;
    s1: string;
    s2: string;
    human_side: 'attacker' | 'defender';
    horizon: number;
  }): Promise<SessionState> {
    return request<SessionState>(`${this.base}/session`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(params),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return request<SessionState>(`${this.base}/session/${id}`);
  }

  playMove(id: string, move: Move): Promise<SessionState> {
    return request<SessionState>(`${this.base}/session/${id}/move`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(move),
    });
  }
}

/**
 * UiSession: session lifecycle against the gateway plus the client-side
 * event log. Events are deduped on seq across reconnects, so the rendered
 * transcript always equals the server buffer in seq order.
 */

import { EventStream } from './sse.js';
import type { AgentEvent, ConnectionState, EventEnvelope } from './types.js';

export interface SessionOptions {
  token?: string;
  fetchFn?: typeof fetch;
  minBackoffMs?: number;
  maxBackoffMs?: number;
}

const TERMINAL_TYPES = new Set(['final_answer', 'turn_failed']);

export class UiSession {
  readonly sessionId: string;
  readonly gatewayUrl: string;
  state: ConnectionState = 'connecting';
  turnRunning = false;
  /** Seq-ordered, deduped event log. */
  readonly events: EventEnvelope[] = [];
  onEnvelope: ((envelope: EventEnvelope) => void) | null = null;
  onStateChange: ((state: ConnectionState) => void) | null = null;
  onTurnChange: ((running: boolean) => void) | null = null;

  private readonly seen = new Set<number>();
  private readonly stream: EventStream;
  private readonly fetchFn: typeof fetch;
  private readonly token?: string;

  private constructor(gatewayUrl: string, sessionId: string, options: SessionOptions) {
    this.gatewayUrl = gatewayUrl.replace(/\/$/, '');
    this.sessionId = sessionId;
    this.fetchFn = options.fetchFn ?? fetch;
    this.token = options.token;
    this.stream = new EventStream(
      `${this.gatewayUrl}/sessions/${sessionId}/events`,
      {
        onEvent: (seq, event) => this.accept(seq, event),
        onState: (state) => {
          this.state = state;
          this.onStateChange?.(state);
        },
      },
      {
        token: options.token,
        fetchFn: options.fetchFn,
        minBackoffMs: options.minBackoffMs,
        maxBackoffMs: options.maxBackoffMs,
      },
    );
  }

  /** POST /sessions, then open the event stream. */
  static async connect(
    gatewayUrl: string,
    assistant = 'default',
    profile?: string,
    options: SessionOptions = {},
  ): Promise<UiSession> {
    const fetchFn = options.fetchFn ?? fetch;
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (options.token) headers.Authorization = `Bearer ${options.token}`;
    const response = await fetchFn(`${gatewayUrl.replace(/\/$/, '')}/sessions`, {
      method: 'POST',
      headers,
      body: JSON.stringify(profile === undefined ? { assistant } : { assistant, profile }),
    });
    if (!response.ok) {
      throw new Error(`session creation failed: HTTP ${response.status}`);
    }
    const body = (await response.json()) as { session_id: string };
    const session = new UiSession(gatewayUrl, body.session_id, options);
    session.stream.start();
    return session;
  }

  /**
   * Send a user message. Returns a notice instead of throwing for the
   * expected rejections (busy turn, disconnected gateway).
   */
  async sendMessage(text: string): Promise<{ accepted: boolean; notice?: string }> {
    if (!text.trim()) return { accepted: false, notice: 'empty message' };
    if (this.turnRunning) {
      return { accepted: false, notice: 'a turn is already running' };
    }
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) headers.Authorization = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchFn(
        `${this.gatewayUrl}/sessions/${this.sessionId}/messages`,
        { method: 'POST', headers, body: JSON.stringify({ text }) },
      );
    } catch (error) {
      return { accepted: false, notice: `gateway unreachable: ${String(error)}` };
    }
    if (response.status === 409) {
      return { accepted: false, notice: 'a turn is already running (gateway)' };
    }
    if (response.status !== 202) {
      return { accepted: false, notice: `rejected: HTTP ${response.status}` };
    }
    this.setTurnRunning(true);
    return { accepted: true };
  }

  /** Simulate a dropped stream; reconnect logic resumes with Last-Event-ID. */
  interruptStream(): void {
    this.stream.interrupt();
  }

  close(): void {
    this.stream.stop();
  }

  get lastSeq(): number {
    return this.stream.lastSeq;
  }

  transcript(): EventEnvelope[] {
    return [...this.events];
  }

  private accept(seq: number, event: AgentEvent): void {
    if (this.seen.has(seq)) return; // duplicate after replay
    this.seen.add(seq);
    const envelope: EventEnvelope = { seq, event };
    // insert preserving seq order; replays arrive ordered, so this is a
    // fast append in the common case
    let i = this.events.length;
    while (i > 0 && this.events[i - 1].seq > seq) i--;
    this.events.splice(i, 0, envelope);
    if (event.type === 'turn_started') this.setTurnRunning(true);
    if (TERMINAL_TYPES.has(event.type)) this.setTurnRunning(false);
    this.onEnvelope?.(envelope);
  }

  private setTurnRunning(running: boolean): void {
    if (this.turnRunning !== running) {
      this.turnRunning = running;
      this.onTurnChange?.(running);
    }
  }
}

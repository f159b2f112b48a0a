/**
 * Minimal SSE consumer over fetch streams.
 *
 * Tracks the last seen event id and reconnects automatically with a
 * Last-Event-ID header, backing off from 1 s and doubling up to 30 s.
 * Built on fetch + ReadableStream so the same code runs in browsers and
 * in the node-based test harness.
 */

import type { AgentEvent, ConnectionState } from './types.js';

export interface StreamHandlers {
  onEvent: (seq: number, event: AgentEvent) => void;
  onState?: (state: ConnectionState) => void;
  /** Fatal HTTP status (401/404): the stream stops and reports `lost`. */
  onFatal?: (status: number) => void;
}

export interface StreamOptions {
  token?: string;
  initialLastSeq?: number;
  minBackoffMs?: number;
  maxBackoffMs?: number;
  fetchFn?: typeof fetch;
}

export class EventStream {
  lastSeq: number;
  private readonly url: string;
  private readonly handlers: StreamHandlers;
  private readonly token?: string;
  private readonly minBackoff: number;
  private readonly maxBackoff: number;
  private readonly fetchFn: typeof fetch;
  private backoff: number;
  private controller: AbortController | null = null;
  private stopped = false;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private everConnected = false;

  constructor(url: string, handlers: StreamHandlers, options: StreamOptions = {}) {
    this.url = url;
    this.handlers = handlers;
    this.token = options.token;
    this.lastSeq = options.initialLastSeq ?? -1;
    this.minBackoff = options.minBackoffMs ?? 1000;
    this.maxBackoff = options.maxBackoffMs ?? 30000;
    this.backoff = this.minBackoff;
    this.fetchFn = options.fetchFn ?? fetch;
  }

  start(): void {
    this.stopped = false;
    void this.connectOnce();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.controller?.abort();
  }

  /** Drop the current connection; the reconnect logic takes over. */
  interrupt(): void {
    this.controller?.abort();
  }

  private setState(state: ConnectionState): void {
    this.handlers.onState?.(state);
  }

  private async connectOnce(): Promise<void> {
    if (this.stopped) return;
    this.setState(this.everConnected ? 'replaying' : 'connecting');
    this.controller = new AbortController();
    const headers: Record<string, string> = {
      Accept: 'text/event-stream',
      'Last-Event-ID': String(this.lastSeq),
    };
    if (this.token) headers.Authorization = `Bearer ${this.token}`;

    try {
      const response = await this.fetchFn(this.url, {
        headers,
        signal: this.controller.signal,
      });
      if (response.status === 401 || response.status === 404) {
        this.setState('lost');
        this.handlers.onFatal?.(response.status);
        return;
      }
      if (!response.ok || !response.body) {
        throw new Error(`stream responded ${response.status}`);
      }
      this.everConnected = true;
      this.backoff = this.minBackoff;
      this.setState('live');
      await this.consume(response.body);
    } catch {
      // fall through to reconnect
    }
    if (this.stopped) return;
    this.setState('replaying');
    this.timer = setTimeout(() => void this.connectOnce(), this.backoff);
    this.backoff = Math.min(this.backoff * 2, this.maxBackoff);
  }

  private async consume(body: ReadableStream<Uint8Array>): Promise<void> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let buffer = '';
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let boundary: number;
      while ((boundary = buffer.indexOf('\n\n')) >= 0) {
        const frame = buffer.slice(0, boundary);
        buffer = buffer.slice(boundary + 2);
        this.handleFrame(frame);
      }
    }
  }

  private handleFrame(frame: string): void {
    let id: number | null = null;
    let data = '';
    for (const line of frame.split('\n')) {
      if (line.startsWith('id: ')) {
        id = Number(line.slice(4));
      } else if (line.startsWith('data: ')) {
        data += line.slice(6);
      }
      // comment lines (": ping") keep the connection warm; nothing to do
    }
    if (id === null || data === '') return;
    this.lastSeq = Math.max(this.lastSeq, id);
    let event: AgentEvent;
    try {
      event = JSON.parse(data) as AgentEvent;
    } catch {
      return;
    }
    this.handlers.onEvent(id, event);
  }
}

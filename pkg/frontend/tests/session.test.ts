import { describe, expect, it } from 'vitest';

import { UiSession } from '../src/session.js';

function sseBody(frames: Array<{ seq: number; event: unknown }>): string {
  return (
    ': connected\n\n' +
    frames.map((f) => `id: ${f.seq}\ndata: ${JSON.stringify(f.event)}\n\n`).join('')
  );
}

interface Exchange {
  matcher: (url: string, init?: RequestInit) => boolean;
  respond: (url: string, init?: RequestInit) => Response;
}

function fakeFetch(exchanges: Exchange[], log: string[]): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    log.push(`${init?.method ?? 'GET'} ${url}`);
    for (const exchange of exchanges) {
      if (exchange.matcher(url, init)) return exchange.respond(url, init);
    }
    throw new Error(`unexpected fetch ${url}`);
  }) as typeof fetch;
}

const TURN = [
  { seq: 0, event: { type: 'turn_started' } },
  { seq: 1, event: { type: 'reasoning', text: 'hmm' } },
  {
    seq: 2,
    event: { type: 'tool_call_issued', call: { call_id: 'c', tool: 'echo', args: {} } },
  },
  {
    seq: 3,
    event: { type: 'observation_received', observation: { call_id: 'c', ok: true, value: {} } },
  },
  { seq: 4, event: { type: 'final_answer', text: 'done' } },
  { seq: 5, event: { type: 'action_summary', text: 'echo: ok' } },
];

function waitFor(predicate: () => boolean, timeoutMs = 5000): Promise<void> {
  return new Promise((resolve, reject) => {
    const start = Date.now();
    const poll = () => {
      if (predicate()) return resolve();
      if (Date.now() - start > timeoutMs) return reject(new Error('timed out waiting'));
      setTimeout(poll, 5);
    };
    poll();
  });
}

describe('UiSession', () => {
  it('connects, streams a turn, and tracks turn state', async () => {
    const log: string[] = [];
    let posted = false; // the turn's events exist only after the message is sent
    const session = await UiSession.connect('http://gw', 'default', undefined, {
      fetchFn: fakeFetch(
        [
          {
            matcher: (url, init) => url.endsWith('/sessions') && init?.method === 'POST',
            respond: () => Response.json({ session_id: 'abc' }),
          },
          {
            matcher: (url) => url.includes('/events'),
            respond: () =>
              new Response(sseBody(posted ? TURN : []), {
                headers: { 'Content-Type': 'text/event-stream' },
              }),
          },
          {
            matcher: (url, init) => url.endsWith('/messages') && init?.method === 'POST',
            respond: () => {
              posted = true;
              return Response.json({ status: 'accepted' }, { status: 202 });
            },
          },
        ],
        log,
      ),
      minBackoffMs: 20,
      maxBackoffMs: 50,
    });
    expect(session.sessionId).toBe('abc');
    const outcome = await session.sendMessage('hello');
    expect(outcome.accepted).toBe(true);
    expect(session.turnRunning).toBe(true); // input disabled while running
    await waitFor(() => session.events.length === TURN.length);
    expect(session.transcript().map((e) => e.seq)).toEqual([0, 1, 2, 3, 4, 5]);
    expect(session.turnRunning).toBe(false); // final answer arrived
    session.close();
  });

  it('409 surfaces as a notice, not an exception', async () => {
    const session = await UiSession.connect('http://gw', 'default', undefined, {
      fetchFn: fakeFetch(
        [
          {
            matcher: (url, init) => url.endsWith('/sessions') && init?.method === 'POST',
            respond: () => Response.json({ session_id: 'abc' }),
          },
          {
            matcher: (url) => url.includes('/events'),
            respond: () => new Response(sseBody([]), { headers: {} }),
          },
          {
            matcher: (url, init) => url.endsWith('/messages') && init?.method === 'POST',
            respond: () => Response.json({ error: {} }, { status: 409 }),
          },
        ],
        [],
      ),
      minBackoffMs: 10_000,
    });
    const outcome = await session.sendMessage('hi');
    expect(outcome.accepted).toBe(false);
    expect(outcome.notice).toContain('already running');
    session.close();
  });

  it('empty input is rejected locally', async () => {
    const session = await UiSession.connect('http://gw', 'default', undefined, {
      fetchFn: fakeFetch(
        [
          {
            matcher: (url, init) => url.endsWith('/sessions') && init?.method === 'POST',
            respond: () => Response.json({ session_id: 'abc' }),
          },
          {
            matcher: (url) => url.includes('/events'),
            respond: () => new Response(sseBody([]), { headers: {} }),
          },
        ],
        [],
      ),
      minBackoffMs: 10_000,
    });
    expect((await session.sendMessage('   ')).accepted).toBe(false);
    session.close();
  });

  it('replays with Last-Event-ID after a dropped stream and dedupes', async () => {
    const log: string[] = [];
    let streamCalls = 0;
    const session = await UiSession.connect('http://gw', 'default', undefined, {
      fetchFn: fakeFetch(
        [
          {
            matcher: (url, init) => url.endsWith('/sessions') && init?.method === 'POST',
            respond: () => Response.json({ session_id: 'abc' }),
          },
          {
            matcher: (url) => url.includes('/events'),
            respond: (_url, init) => {
              streamCalls += 1;
              const lastId = Number(
                (init?.headers as Record<string, string>)['Last-Event-ID'],
              );
              if (streamCalls === 1) {
                // first connection dies after three events
                return new Response(sseBody(TURN.slice(0, 3)), { headers: {} });
              }
              // replay everything after lastId, with one overlapping duplicate
              const replayFrom = Math.max(0, lastId); // seq lastId re-sent on purpose
              return new Response(sseBody(TURN.slice(replayFrom)), { headers: {} });
            },
          },
        ],
        log,
      ),
      minBackoffMs: 10,
      maxBackoffMs: 20,
    });
    await waitFor(() => session.events.length === TURN.length);
    expect(streamCalls).toBeGreaterThanOrEqual(2);
    expect(session.transcript().map((e) => e.seq)).toEqual([0, 1, 2, 3, 4, 5]);
    // duplicate seq 2 from the overlapping replay was dropped
    const seqs = session.transcript().map((e) => e.seq);
    expect(new Set(seqs).size).toBe(seqs.length);
    session.close();
  });
});

// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from 'vitest';

import { Transcript, renderEvent } from '../src/render.js';
import { bytesToBase64 } from '../src/png.js';
import type { AgentEvent } from '../src/types.js';

describe('renderEvent', () => {
  it('reasoning becomes a collapsible dim block', () => {
    const node = renderEvent({ type: 'reasoning', text: 'thinking hard' });
    expect(node.tagName).toBe('DETAILS');
    expect(node.className).toContain('dim');
    expect(node.textContent).toContain('thinking hard');
  });

  it('tool call becomes a card with name and pretty args', () => {
    const node = renderEvent({
      type: 'tool_call_issued',
      call: { call_id: 'c1', tool: 'move_stage', args: { dx: 10, dy: -5 } },
    } as AgentEvent);
    expect(node.className).toContain('card');
    expect(node.querySelector('.tool-name')?.textContent).toBe('move_stage');
    expect(node.querySelector('.tool-args')?.textContent).toContain('"dx": 10');
  });

  it('ok observation nests the result', () => {
    const node = renderEvent({
      type: 'observation_received',
      observation: { call_id: 'c1', ok: true, value: { x: 10, y: -5 } },
    } as AgentEvent);
    expect(node.className).toContain('nested');
    expect(node.querySelector('.observation-badge')?.textContent).toBe('ok');
    expect(node.textContent).toContain('"x": 10');
  });

  it('error observation shows the kind', () => {
    const node = renderEvent({
      type: 'observation_received',
      observation: {
        call_id: 'c1',
        ok: false,
        error: { kind: 'OutOfRange', message: 'x axis would reach 10010 um' },
      },
    } as AgentEvent);
    expect(node.querySelector('.observation-badge')?.textContent).toBe('error(OutOfRange)');
    expect(node.textContent).toContain('10010');
  });

  it('image payload inside an observation renders an inline png', () => {
    const pixels = new Uint8Array(16).fill(128);
    const node = renderEvent({
      type: 'observation_received',
      observation: {
        call_id: 'c1',
        ok: true,
        value: {
          width: 4,
          height: 4,
          pixel_format: 'grey-u8',
          data: bytesToBase64(pixels),
          stage_position: { x: 0, y: 0 },
        },
      },
    } as AgentEvent);
    const img = node.querySelector('img');
    expect(img).not.toBeNull();
    expect(img!.src.startsWith('data:image/png;base64,')).toBe(true);
    expect(img!.width).toBe(4);
  });

  it('file artifacts with image media types render inline', () => {
    const node = renderEvent({
      type: 'observation_received',
      observation: {
        call_id: 'c1',
        ok: true,
        value: {
          exit_status: 0,
          artifacts: [
            { path: 'out.png', media_type: 'image/png', data_b64: 'aGk=', size: 2 },
            { path: 'notes.txt', media_type: 'text/plain', data_b64: 'aGk=', size: 2 },
          ],
        },
      },
    } as AgentEvent);
    const images = node.querySelectorAll('img');
    expect(images.length).toBe(1);
    expect(images[0].src).toBe('data:image/png;base64,aGk=');
  });

  it('final answer is the primary bubble', () => {
    const node = renderEvent({ type: 'final_answer', text: 'All done.' });
    expect(node.className).toContain('primary');
    expect(node.textContent).toBe('All done.');
  });

  it('summary is a footnote', () => {
    const node = renderEvent({ type: 'action_summary', text: 'move_stage: ok' });
    expect(node.className).toContain('footnote');
  });

  it('turn failure keeps the partial trace visible', () => {
    const node = renderEvent({
      type: 'turn_failed',
      reason: 'IterationLimit',
      message: 'no final answer after 3 iterations',
      trace: [{ tool: 'docs_search', outcome: 'ok' }],
    } as AgentEvent);
    expect(node.className).toContain('banner');
    expect(node.textContent).toContain('IterationLimit');
    expect(node.querySelector('.failure-trace')?.textContent).toContain('docs_search');
  });

  it('unknown event types fall back to a raw json card', () => {
    const node = renderEvent({ type: 'token_usage', tokens: 123 } as AgentEvent);
    expect(node.className).toContain('unknown-event');
    expect(node.textContent).toContain('token_usage');
    expect(node.textContent).toContain('123');
  });
});

describe('Transcript', () => {
  let host: HTMLElement;
  let transcript: Transcript;

  beforeEach(() => {
    host = document.createElement('div');
    transcript = new Transcript(host);
  });

  it('orders by seq and dedupes', () => {
    transcript.add({ seq: 1, event: { type: 'reasoning', text: 'b' } });
    transcript.add({ seq: 0, event: { type: 'turn_started' } });
    transcript.add({ seq: 1, event: { type: 'reasoning', text: 'duplicate' } });
    transcript.add({ seq: 2, event: { type: 'final_answer', text: 'x' } });
    expect(transcript.seqs()).toEqual([0, 1, 2]);
    expect(host.children.length).toBe(3);
    expect(host.textContent).not.toContain('duplicate');
  });

  it('user messages are appended without seq', () => {
    transcript.addUserMessage('hello there');
    transcript.add({ seq: 0, event: { type: 'turn_started' } });
    expect(host.textContent).toContain('hello there');
    expect(transcript.seqs()).toEqual([0]);
  });
});

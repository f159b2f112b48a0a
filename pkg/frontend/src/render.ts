/**
 * Event rendering: one DOM node per agent event.
 *
 * Reasoning collapses into a dim block, tool calls become cards with
 * pretty-printed arguments, observations nest under them (image payloads
 * render inline), final answers get the primary bubble, summaries become
 * footnotes, failures become banners that keep the partial trace visible.
 * Unknown event types fall back to a raw JSON card, so newer gateways
 * stay renderable.
 */

import { greyPngDataUrl } from './png.js';
import {
  fileArtifactsOf,
  isImagePayload,
  type AgentEvent,
  type EventEnvelope,
  type ObservationPayload,
} from './types.js';

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function prettyJson(value: unknown, clip = 2000): string {
  let rendered: string;
  try {
    rendered = JSON.stringify(value, null, 2) ?? String(value);
  } catch {
    rendered = String(value);
  }
  return rendered.length > clip ? `${rendered.slice(0, clip)}…` : rendered;
}

function renderImages(value: unknown, parent: HTMLElement): void {
  if (isImagePayload(value)) {
    const img = el('img', 'observation-image inline-image') as HTMLImageElement;
    img.src = greyPngDataUrl(value.width, value.height, value.data);
    img.width = value.width;
    img.height = value.height;
    img.alt = 'acquired image';
    parent.appendChild(img);
  }
  for (const artifact of fileArtifactsOf(value)) {
    if (!artifact.media_type.startsWith('image/')) continue;
    const img = el('img', 'artifact-image inline-image') as HTMLImageElement;
    img.src = `data:${artifact.media_type};base64,${artifact.data_b64}`;
    img.alt = artifact.path;
    parent.appendChild(img);
  }
}

function renderObservation(observation: ObservationPayload): HTMLElement {
  const node = el('div', `observation nested ${observation.ok ? 'ok' : 'error'}`);
  node.appendChild(
    el('span', 'observation-badge', observation.ok ? 'ok' : `error(${observation.error?.kind})`),
  );
  if (observation.ok) {
    node.appendChild(el('pre', 'observation-value', prettyJson(observation.value)));
    renderImages(observation.value, node);
  } else {
    node.appendChild(el('pre', 'observation-error', observation.error?.message ?? ''));
  }
  return node;
}

export function renderEvent(event: AgentEvent): HTMLElement {
  switch (event.type) {
    case 'turn_started':
      return el('div', 'turn-divider', '── turn ──');
    case 'reasoning': {
      const details = el('details', 'reasoning dim') as HTMLDetailsElement;
      details.appendChild(el('summary', 'reasoning-summary', 'reasoning'));
      details.appendChild(el('pre', 'reasoning-text', String(event.text ?? '')));
      return details;
    }
    case 'tool_call_issued': {
      const call = (event as { call: { tool: string; args: unknown } }).call;
      const card = el('div', 'tool-call card');
      card.appendChild(el('span', 'tool-name', call.tool));
      card.appendChild(el('pre', 'tool-args', prettyJson(call.args)));
      return card;
    }
    case 'observation_received':
      return renderObservation(
        (event as { observation: ObservationPayload }).observation,
      );
    case 'final_answer':
      return el('div', 'final-answer bubble primary', String(event.text ?? ''));
    case 'action_summary':
      return el('div', 'action-summary footnote', String(event.text ?? ''));
    case 'turn_failed': {
      const banner = el('div', 'turn-failed banner error');
      banner.appendChild(
        el('span', 'failure-reason', `turn failed: ${String(event.reason ?? 'unknown')}`),
      );
      banner.appendChild(el('pre', 'failure-message', String(event.message ?? '')));
      const trace = (event as { trace?: unknown[] }).trace;
      if (Array.isArray(trace) && trace.length) {
        banner.appendChild(el('pre', 'failure-trace', prettyJson(trace)));
      }
      return banner;
    }
    default:
      {
        const card = el('div', 'unknown-event card');
        card.appendChild(el('span', 'unknown-type', event.type));
        card.appendChild(el('pre', 'unknown-json', prettyJson(event)));
        return card;
      }
  }
}

/** Seq-ordered, dedupe-on-seq transcript container. */
export class Transcript {
  constructor(private readonly container: HTMLElement) {}

  add(envelope: EventEnvelope): void {
    const seq = envelope.seq;
    if (this.container.querySelector(`[data-seq="${seq}"]`)) return;
    const node = renderEvent(envelope.event);
    node.dataset.seq = String(seq);
    let before: Element | null = null;
    for (const child of Array.from(this.container.children)) {
      const childSeq = Number((child as HTMLElement).dataset.seq ?? NaN);
      if (!Number.isNaN(childSeq) && childSeq > seq) {
        before = child;
        break;
      }
    }
    this.container.insertBefore(node, before);
  }

  /** Locally echoed user input; carries no seq and never dedupes. */
  addUserMessage(text: string): void {
    this.container.appendChild(el('div', 'user-message bubble', text));
  }

  seqs(): number[] {
    return Array.from(this.container.children)
      .map((child) => Number((child as HTMLElement).dataset.seq ?? NaN))
      .filter((seq) => !Number.isNaN(seq));
  }
}

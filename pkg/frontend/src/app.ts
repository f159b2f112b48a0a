/** Page bootstrap: connection form, status banner, transcript, tool panel. */

import { Transcript } from './render.js';
import { UiSession } from './session.js';
import type { ConnectionState } from './types.js';

const STATE_LABELS: Record<ConnectionState, string> = {
  connecting: 'connecting…',
  live: 'live',
  replaying: 'reconnecting — replaying missed events',
  lost: 'connection lost',
};

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function refreshTools(gatewayUrl: string, panel: HTMLElement): Promise<void> {
  try {
    const response = await fetch(`${gatewayUrl.replace(/\/$/, '')}/openapi.json`);
    const doc = (await response.json()) as { paths: Record<string, unknown> };
    const names = Object.keys(doc.paths)
      .map((path) => path.replace('/tools/', ''))
      .sort();
    panel.textContent = names.length ? `tools: ${names.join(', ')}` : 'no tools registered';
  } catch {
    panel.textContent = 'tool status unavailable';
  }
}

export function main(): void {
  const form = byId<HTMLFormElement>('connect-form');
  const gatewayInput = byId<HTMLInputElement>('gateway-url');
  const tokenInput = byId<HTMLInputElement>('token');
  const assistantInput = byId<HTMLInputElement>('assistant');
  const profileInput = byId<HTMLInputElement>('profile');
  const banner = byId<HTMLElement>('status-banner');
  const toolPanel = byId<HTMLElement>('tool-panel');
  const transcriptHost = byId<HTMLElement>('transcript');
  const input = byId<HTMLInputElement>('message-input');
  const send = byId<HTMLButtonElement>('send-button');
  const notice = byId<HTMLElement>('notice');

  let session: UiSession | null = null;
  const transcript = new Transcript(transcriptHost);

  const updateControls = () => {
    const running = session?.turnRunning ?? false;
    const live = session !== null && session.state === 'live';
    send.disabled = !live || running || !input.value.trim();
    input.disabled = session === null;
  };
  input.addEventListener('input', updateControls);

  form.addEventListener('submit', (submitEvent) => {
    submitEvent.preventDefault();
    void (async () => {
      session?.close();
      transcriptHost.textContent = '';
      banner.textContent = STATE_LABELS.connecting;
      banner.dataset.state = 'connecting';
      try {
        session = await UiSession.connect(
          gatewayInput.value,
          assistantInput.value || 'default',
          profileInput.value || undefined,
          { token: tokenInput.value || undefined },
        );
      } catch (error) {
        banner.textContent = `${STATE_LABELS.lost}: ${String(error)}`;
        banner.dataset.state = 'lost';
        return;
      }
      session.onEnvelope = (envelope) => transcript.add(envelope);
      session.onStateChange = (state) => {
        banner.textContent = STATE_LABELS[state];
        banner.dataset.state = state;
        updateControls();
      };
      session.onTurnChange = updateControls;
      void refreshTools(gatewayInput.value, toolPanel);
      updateControls();
    })();
  });

  send.addEventListener('click', () => {
    void (async () => {
      if (!session) return;
      const text = input.value.trim();
      const outcome = await session.sendMessage(text);
      if (!outcome.accepted) {
        notice.textContent = outcome.notice ?? 'message not accepted';
        return;
      }
      notice.textContent = '';
      transcript.addUserMessage(text);
      input.value = '';
      updateControls();
    })();
  });
}

if (typeof document !== 'undefined' && document.getElementById('connect-form')) {
  main();
}

/** Wire shapes shared with the gateway. */

export interface ToolCallPayload {
  call_id: string;
  tool: string;
  args: Record<string, unknown>;
}

export interface ObservationPayload {
  call_id: string;
  ok: boolean;
  value?: unknown;
  error?: { kind: string; message: string };
}

export type AgentEvent =
  | { type: 'turn_started' }
  | { type: 'reasoning'; text: string }
  | { type: 'tool_call_issued'; call: ToolCallPayload }
  | { type: 'observation_received'; observation: ObservationPayload }
  | { type: 'final_answer'; text: string }
  | { type: 'action_summary'; text: string }
  | { type: 'turn_failed'; reason: string; message: string; trace?: unknown[] }
  | { type: string; [key: string]: unknown };

/** One buffered gateway event: monotonically increasing seq plus payload. */
export interface EventEnvelope {
  seq: number;
  event: AgentEvent;
}

export type ConnectionState = 'connecting' | 'live' | 'replaying' | 'lost';

/** Fields of a microscope frame delivered inside an observation value. */
export interface ImagePayload {
  width: number;
  height: number;
  pixel_format: string;
  data: string; // base64 raw pixels
}

export function isImagePayload(value: unknown): value is ImagePayload {
  if (typeof value !== 'object' || value === null) return false;
  const v = value as Record<string, unknown>;
  return (
    typeof v.width === 'number' &&
    typeof v.height === 'number' &&
    v.pixel_format === 'grey-u8' &&
    typeof v.data === 'string'
  );
}

export interface FileArtifact {
  path: string;
  media_type: string;
  data_b64: string;
}

export function fileArtifactsOf(value: unknown): FileArtifact[] {
  if (typeof value !== 'object' || value === null) return [];
  const artifacts = (value as Record<string, unknown>).artifacts;
  if (!Array.isArray(artifacts)) return [];
  return artifacts.filter(
    (a): a is FileArtifact =>
      typeof a === 'object' &&
      a !== null &&
      typeof (a as FileArtifact).media_type === 'string' &&
      typeof (a as FileArtifact).data_b64 === 'string',
  );
}

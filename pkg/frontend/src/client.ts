import type { Readable, Writable } from "node:stream";

import {
  decodeInbound,
  encodeOutbound,
  type InboundMessage,
  type OutboundMessage,
} from "./protocol.js";

export interface ClientEvents {
  onMessage(message: InboundMessage): void;
  onProtocolError?(line: string, error: unknown): void;
}

/**
 * Newline-JSON framing over a pair of engine streams. Every outbound
 * message is schema-validated before it is written; malformed inbound
 * lines are reported and skipped, never thrown.
 */
export class EngineClient {
  private buffer = "";

  constructor(
    private readonly input: Writable,
    output: Readable,
    private readonly events: ClientEvents,
  ) {
    output.setEncoding("utf8");
    output.on("data", (chunk: string) => this.feed(chunk));
  }

  send(message: OutboundMessage): void {
    this.input.write(encodeOutbound(message));
  }

  private feed(chunk: string): void {
    this.buffer += chunk;
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl === -1) return;
      const line = this.buffer.slice(0, nl).trim();
      this.buffer = this.buffer.slice(nl + 1);
      if (!line) continue;
      let message: InboundMessage;
      try {
        message = decodeInbound(line);
      } catch (error) {
        this.events.onProtocolError?.(line, error);
        continue;
      }
      this.events.onMessage(message);
    }
  }
}

import { describe, expect, it } from "vitest";

import { decodeInbound, encodeOutbound, InboundSchema, OutboundSchema } from "../src/protocol.js";

describe("wire schema", () => {
  it("round-trips a doc message", () => {
    const line = encodeOutbound({ kind: "doc", path: "A.java", text: "class A {}" });
    expect(line.endsWith("\n")).toBe(true);
    expect(JSON.parse(line).kind).toBe("doc");
  });

  it("rejects outbound messages with missing fields", () => {
    expect(() => OutboundSchema.parse({ kind: "paste", id: "p1" })).toThrow();
    expect(() => OutboundSchema.parse({ kind: "accept", id: "r1" })).toThrow();
    expect(() => OutboundSchema.parse({ kind: "nonsense" })).toThrow();
  });

  it("rejects negative offsets and empty ids", () => {
    expect(() =>
      OutboundSchema.parse({ kind: "paste", id: "", path: "A", text: "t", offset: 0 }),
    ).toThrow();
    expect(() =>
      OutboundSchema.parse({ kind: "paste", id: "p", path: "A", text: "t", offset: -1 }),
    ).toThrow();
  });

  it("decodes engine messages and enforces bounds", () => {
    const rec = decodeInbound(
      JSON.stringify({
        kind: "recommendation",
        id: "r1",
        paste_id: "p1",
        path: "A.java",
        span: { start: 0, end: 4 },
        probability: 0.75,
        duplicates: [{ method: "m", similarity: 1.0, exact: true }],
      }),
    );
    expect(rec.kind).toBe("recommendation");
    expect(() =>
      InboundSchema.parse({
        kind: "recommendation",
        id: "r1",
        paste_id: "p1",
        path: "A.java",
        span: { start: 0, end: 4 },
        probability: 1.5,
        duplicates: [{ method: "m", similarity: 1.0, exact: true }],
      }),
    ).toThrow();
    expect(() =>
      InboundSchema.parse({
        kind: "recommendation",
        id: "r1",
        paste_id: "p1",
        path: "A.java",
        span: { start: 0, end: 4 },
        probability: 0.9,
        duplicates: [],
      }),
    ).toThrow();
  });

  it("error id is optional", () => {
    expect(decodeInbound(JSON.stringify({ kind: "error", message: "boom" })).kind).toBe("error");
  });
});

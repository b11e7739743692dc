import { z } from "zod";

// Newline-delimited JSON wire protocol spoken with the engine process.

export const SpanSchema = z.object({
  start: z.number().int().nonnegative(),
  end: z.number().int().nonnegative(),
});

export const OutboundSchema = z.discriminatedUnion("kind", [
  z.object({ kind: z.literal("doc"), path: z.string().min(1), text: z.string() }),
  z.object({
    kind: z.literal("paste"),
    id: z.string().min(1),
    path: z.string().min(1),
    text: z.string(),
    offset: z.number().int().nonnegative(),
  }),
  z.object({ kind: z.literal("accept"), id: z.string().min(1), name: z.string().min(1) }),
  z.object({ kind: z.literal("dismiss"), id: z.string().min(1) }),
  z.object({ kind: z.literal("advance"), ms: z.number().int().nonnegative() }),
]);

export const DuplicateSchema = z.object({
  method: z.string(),
  similarity: z.number().min(0).max(1),
  exact: z.boolean(),
});

export const InboundSchema = z.discriminatedUnion("kind", [
  z.object({
    kind: z.literal("recommendation"),
    id: z.string(),
    paste_id: z.string(),
    path: z.string(),
    span: SpanSchema,
    probability: z.number().min(0).max(1),
    duplicates: z.array(DuplicateSchema).min(1),
  }),
  z.object({
    kind: z.literal("edits"),
    id: z.string(),
    edits: z.array(z.object({ path: z.string(), span: SpanSchema, new_text: z.string() })),
  }),
  z.object({ kind: z.literal("error"), id: z.string().optional(), message: z.string() }),
  z.object({ kind: z.literal("expired"), id: z.string() }),
]);

export type OutboundMessage = z.infer<typeof OutboundSchema>;
export type InboundMessage = z.infer<typeof InboundSchema>;
export type RecommendationMessage = Extract<InboundMessage, { kind: "recommendation" }>;
export type EditsMessage = Extract<InboundMessage, { kind: "edits" }>;
export type TextEdit = EditsMessage["edits"][number];

export function encodeOutbound(message: OutboundMessage): string {
  return JSON.stringify(OutboundSchema.parse(message)) + "\n";
}

export function decodeInbound(line: string): InboundMessage {
  return InboundSchema.parse(JSON.parse(line));
}

/**
 * The block-dump JSON contract.
 *
 * This schema is the boundary between PDF extraction and everything
 * downstream (ingest, encoding, classification); the extractor
 * validates its own output against it before emitting anything.
 */

import { z } from "zod";

const finite = z.number().finite();

export const SpanSchema = z
  .object({
    font: z.string().min(1),
    size: finite.positive(),
    chars: z.number().int().positive(),
  })
  .refine((s) => Math.abs(s.size * 10 - Math.round(s.size * 10)) < 1e-6, {
    message: "span size must sit on the 0.1 pt grid",
  });

export const BBoxSchema = z
  .tuple([finite, finite, finite, finite])
  .refine(([x0, , x1]) => x0 < x1, { message: "bbox needs x0 < x1" })
  .refine(([, y0, , y1]) => y0 < y1, { message: "bbox needs y0 < y1" });

export const BlockSchema = z
  .object({
    block_id: z.number().int().nonnegative(),
    kind: z.enum(["text", "image"]),
    bbox: BBoxSchema,
    text: z.string(),
    spans: z.array(SpanSchema),
  })
  .refine((b) => (b.kind === "image" ? b.spans.length === 0 : b.spans.length > 0), {
    message: "text blocks need spans; image blocks must have none",
  })
  .refine((b) => b.kind === "text" || b.text === "", {
    message: "image blocks carry no text",
  });

export const PageSchema = z.object({
  page_index: z.number().int().nonnegative(),
  width: finite.positive(),
  height: finite.positive(),
  blocks: z.array(BlockSchema),
});

export const BlockDumpSchema = z
  .object({
    doc_id: z.string().min(1),
    pages: z.array(PageSchema).min(1),
  })
  .refine((d) => d.pages.every((p, i) => p.page_index === i), {
    message: "page_index must equal the page position",
  })
  .refine(
    (d) => {
      const ids = d.pages.flatMap((p) => p.blocks.map((b) => b.block_id));
      return new Set(ids).size === ids.length;
    },
    { message: "block_id must be unique across the document" },
  );

export type Span = z.infer<typeof SpanSchema>;
export type Block = z.infer<typeof BlockSchema>;
export type Page = z.infer<typeof PageSchema>;
export type BlockDump = z.infer<typeof BlockDumpSchema>;

export interface ValidationResult {
  ok: boolean;
  issues: string[];
}

/** Validate anything claiming to be a block dump; never throws. */
export function validateBlockDump(data: unknown): ValidationResult {
  const parsed = BlockDumpSchema.safeParse(data);
  if (parsed.success) {
    return { ok: true, issues: [] };
  }
  const issues = parsed.error.issues.map(
    (issue) => `${issue.path.join(".") || "<root>"}: ${issue.message}`,
  );
  return { ok: false, issues };
}

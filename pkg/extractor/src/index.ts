export { extractPdf, extractPdfFile } from "./extract.js";
export {
  EncryptedPdfError,
  ExtractError,
  InputError,
  NoTextLayerError,
  SchemaValidationError,
} from "./errors.js";
export {
  BBoxSchema,
  BlockDumpSchema,
  BlockSchema,
  PageSchema,
  SpanSchema,
  validateBlockDump,
} from "./schema.js";
export type { Block, BlockDump, Page, Span, ValidationResult } from "./schema.js";

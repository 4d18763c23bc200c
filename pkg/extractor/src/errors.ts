/** Error types shared by the extractor library and its CLI. */

export class ExtractError extends Error {
  readonly details: Record<string, unknown>;

  constructor(message: string, details: Record<string, unknown> = {}) {
    super(message);
    this.name = new.target.name;
    this.details = details;
  }

  /** Machine-readable envelope, mirrored by the CLI on stderr. */
  toJSON(): { error: string; message: string; details: Record<string, unknown> } {
    return { error: this.name, message: this.message, details: this.details };
  }
}

/** The PDF is password-protected; extraction refuses rather than guesses. */
export class EncryptedPdfError extends ExtractError {}

/** The PDF has no text layer at all (a scan); OCR is out of scope. */
export class NoTextLayerError extends ExtractError {}

/** The input cannot be read or is not a PDF. */
export class InputError extends ExtractError {}

/** An assembled dump failed its own schema check; always a bug. */
export class SchemaValidationError extends ExtractError {}

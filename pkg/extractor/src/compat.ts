/**
 * Runtime compatibility shims.
 *
 * pdfjs-dist 6.x calls `ArrayBuffer.prototype.transferToFixedLength` while
 * translating embedded and standard fonts.  That method ships in Node 21+;
 * on Node 20 the call throws, the font-translation task aborts, and font
 * objects are never exported to `page.commonObjs` (text extraction then only
 * sees internal resource names like "g_d0_f2").  Emulate the method with
 * `structuredClone`, which can detach the source buffer on every Node
 * release this package supports.
 */

type TransferFn = (this: ArrayBuffer, newByteLength?: number) => ArrayBuffer;

function makeTransfer(): TransferFn {
  return function transfer(this: ArrayBuffer, newByteLength?: number): ArrayBuffer {
    const length = newByteLength ?? this.byteLength;
    // Detach `this` exactly like the native method would; the clone keeps
    // the original bytes.
    const detached = structuredClone(this, { transfer: [this] });
    if (detached.byteLength === length) {
      return detached;
    }
    const out = new ArrayBuffer(length);
    const copyLength = Math.min(length, detached.byteLength);
    new Uint8Array(out).set(new Uint8Array(detached, 0, copyLength));
    return out;
  };
}

const proto = ArrayBuffer.prototype as ArrayBuffer["constructor"]["prototype"] & {
  transfer?: TransferFn;
  transferToFixedLength?: TransferFn;
};

if (typeof proto.transfer !== "function") {
  Object.defineProperty(proto, "transfer", {
    value: makeTransfer(),
    writable: true,
    configurable: true,
  });
}

if (typeof proto.transferToFixedLength !== "function") {
  Object.defineProperty(proto, "transferToFixedLength", {
    value: makeTransfer(),
    writable: true,
    configurable: true,
  });
}

export {};

/* tslint:disable */
/* eslint-disable */

export class ArPath {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly symbols: Int32Array;
    /**
     * Regeneration time of the window (a negative integer or 0).
     */
    readonly tau: number;
}

export function ar_path(theta0: number, theta: Float64Array, tail_scale: number, tail_ratio: number, logistic: boolean, len: number, seed: number): ArPath;

export function dary_histogram(p10: number, p11: number, resolution: number, samples: number, seed: number): Uint32Array;

export function rho_curve(family: string, a: number, b: number, horizon: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_arpath_free: (a: number, b: number) => void;
    readonly ar_path: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly arpath_symbols: (a: number) => [number, number];
    readonly arpath_tau: (a: number) => number;
    readonly dary_histogram: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly rho_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;

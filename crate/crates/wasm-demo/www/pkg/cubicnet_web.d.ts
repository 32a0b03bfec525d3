/* tslint:disable */
/* eslint-disable */

/**
 * Chamber report for `t`, as JSON.
 */
export function classify(t_re: number, t_im: number): string;

/**
 * SVG of the network of `α x(x−1)/(x−t)⁹ dx³` at phase `theta`, with the
 * core shaded and any degeneration at that phase thickened.
 */
export function network_svg(t_re: number, t_im: number, a_re: number, a_im: number, theta: number, original_frame: boolean): string;

/**
 * Special phases and core types over one period, as JSON.
 */
export function scan_json(t_re: number, t_im: number, a_re: number, a_im: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify: (a: number, b: number) => [number, number, number, number];
    readonly network_svg: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly scan_json: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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

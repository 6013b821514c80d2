/* tslint:disable */
/* eslint-disable */

/**
 * Result of a control run: the sampled signal and its diagnostics.
 */
export class ControlRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    times(): Float64Array;
    values(): Float64Array;
    readonly energyRatio: number;
    readonly norm: number;
    readonly residual: number;
    readonly tAlpha: number;
}

export function controllabilityTime(alpha: number, length: number): number;

/**
 * Samples the first `modes` eigenfunctions on `samples` uniform nodes.
 *
 * Layout: `[x_0..x_{s-1}, phi_1(x)..., phi_2(x)..., ...]`.
 */
export function eigenSamples(alpha: number, length: number, modes: number, samples: number): Float64Array;

export function eigenvalues(alpha: number, length: number, modes: number): Float64Array;

/**
 * Smallest Gram eigenvalue on `points` horizons in `(0, t_max]`.
 *
 * Layout: `[T_0, lambda_0, T_1, lambda_1, ...]`.
 */
export function gramSweep(alpha: number, length: number, modes: number, t_max: number, points: number): Float64Array;

/**
 * Drives the smooth reference state `v0_k = 1/k^2`, `v1_k = (-1)^k / (2 k^2)`
 * to rest at time `horizon` and checks the result with the FD solver.
 */
export function runControl(alpha: number, length: number, modes: number, horizon: number, cells: number, uniform: boolean): ControlRun;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_controlrun_free: (a: number, b: number) => void;
    readonly controllabilityTime: (a: number, b: number) => [number, number, number];
    readonly controlrun_energyRatio: (a: number) => number;
    readonly controlrun_norm: (a: number) => number;
    readonly controlrun_residual: (a: number) => number;
    readonly controlrun_tAlpha: (a: number) => number;
    readonly controlrun_times: (a: number) => [number, number];
    readonly controlrun_values: (a: number) => [number, number];
    readonly eigenSamples: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly eigenvalues: (a: number, b: number, c: number) => [number, number, number, number];
    readonly gramSweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly runControl: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
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

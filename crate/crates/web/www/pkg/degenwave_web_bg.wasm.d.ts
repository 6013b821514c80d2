/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_controlrun_free: (a: number, b: number) => void;
export const controllabilityTime: (a: number, b: number) => [number, number, number];
export const controlrun_energyRatio: (a: number) => number;
export const controlrun_norm: (a: number) => number;
export const controlrun_residual: (a: number) => number;
export const controlrun_tAlpha: (a: number) => number;
export const controlrun_times: (a: number) => [number, number];
export const controlrun_values: (a: number) => [number, number];
export const eigenSamples: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const eigenvalues: (a: number, b: number, c: number) => [number, number, number, number];
export const gramSweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const runControl: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;

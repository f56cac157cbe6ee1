/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_session_free: (a: number, b: number) => void;
export const session_estimate_costs: (a: number, b: number, c: bigint) => [number, number, number, number];
export const session_is_kcc: (a: number) => number;
export const session_kcc: (a: number, b: number, c: number, d: bigint) => [number, number, number];
export const session_matrix: (a: number) => [number, number];
export const session_mfast: (a: number, b: number, c: bigint) => [number, number, number];
export const session_n: (a: number) => number;
export const session_planted: (a: number) => [number, number];
export const session_planted_cost: (a: number) => bigint;
export const session_solution: (a: number) => [number, number];
export const session_solve: (a: number, b: number, c: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;

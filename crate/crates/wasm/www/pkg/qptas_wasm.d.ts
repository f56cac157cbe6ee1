/* tslint:disable */
/* eslint-disable */

export class Session {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Estimator table against exact vertex costs of the planted clustering, as JSON.
     */
    estimate_costs(eps: number, seed: bigint): string;
    is_kcc(): boolean;
    /**
     * Planted k-CC instance.
     */
    static kcc(n: number, k: number, noise: number, seed: bigint): Session;
    /**
     * Row-major `n x n` relation matrix: edge for k-CC, `u -> v` for MFAST.
     */
    matrix(): Uint8Array;
    /**
     * Planted tournament.
     */
    static mfast(n: number, flip: number, seed: bigint): Session;
    n(): number;
    planted_cost(): bigint;
    /**
     * Planted cluster ids or ranks.
     */
    planted(): Uint32Array;
    /**
     * Cluster ids or ranks of the last solve; empty before the first.
     */
    solution(): Uint32Array;
    /**
     * Runs the dispatcher and returns the report as JSON.
     */
    solve(eps: number, seed: bigint): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_session_free: (a: number, b: number) => void;
    readonly session_estimate_costs: (a: number, b: number, c: bigint) => [number, number, number, number];
    readonly session_is_kcc: (a: number) => number;
    readonly session_kcc: (a: number, b: number, c: number, d: bigint) => [number, number, number];
    readonly session_matrix: (a: number) => [number, number];
    readonly session_mfast: (a: number, b: number, c: bigint) => [number, number, number];
    readonly session_n: (a: number) => number;
    readonly session_planted: (a: number) => [number, number];
    readonly session_planted_cost: (a: number) => bigint;
    readonly session_solution: (a: number) => [number, number];
    readonly session_solve: (a: number, b: number, c: bigint) => [number, number, number, number];
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

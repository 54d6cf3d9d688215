/**
 * Thin TypeScript bindings for the comdet community-detection toolkit.
 *
 * The toolkit is driven out of process through its public command-line
 * interface and file formats (SNAP edge lists in, assignment TSV out), so
 * heavy compute never blocks the Node event loop. Data crosses the
 * boundary as primitive arrays only: vertex ids, weights, labels.
 */

import { execFile } from "node:child_process";
import { promises as fs } from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

/** Parallel arrays describing an edge list; ids are non-negative integers. */
export interface EdgeArrays {
  src: number[];
  dst: number[];
  weight?: number[];
}

export interface LpaOptions {
  maxIterations?: number;
  threshold?: number;
  deterministic?: boolean;
  seed?: number;
  threads?: number;
}

export interface LouvainOptions {
  maxIterations?: number;
  maxLevels?: number;
  deterministic?: boolean;
  seed?: number;
  threads?: number;
}

export interface LouvainResult {
  /** Community label per vertex, aligned with `handle.vertices()`. */
  labels: number[];
  /** Modularity after each coarsening level, evaluated on the input graph. */
  modularityPerLevel: number[];
}

function cliCommand(): string[] {
  const override = process.env.COMDET_CLI;
  if (override && override.trim().length > 0) {
    return override.trim().split(/\s+/);
  }
  return ["python3", "-m", "comdet.cli"];
}

async function runCli(args: string[]): Promise<string> {
  const [cmd, ...prefix] = cliCommand();
  try {
    const { stdout } = await execFileAsync(cmd, [...prefix, ...args], {
      maxBuffer: 1 << 28,
    });
    return stdout;
  } catch (err) {
    const e = err as { stderr?: string; message?: string };
    const detail = (e.stderr ?? "").trim() || e.message || "unknown error";
    throw new Error(`comdet CLI failed: ${detail}`);
  }
}

function parseStats(line: string): { n: number; m: number } {
  const fields = new Map<string, string>();
  for (const part of line.trim().split(/\s+/)) {
    const idx = part.indexOf("=");
    if (idx > 0) fields.set(part.slice(0, idx), part.slice(idx + 1));
  }
  const n = Number(fields.get("n"));
  const m = Number(fields.get("m"));
  if (!Number.isInteger(n) || !Number.isInteger(m)) {
    throw new Error(`unexpected stats output: ${line.trim()}`);
  }
  return { n, m };
}

function parseAssignment(text: string): { vertices: number[]; labels: number[] } {
  const vertices: number[] = [];
  const labels: number[] = [];
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    const [rawId, label] = trimmed.split(/\s+/).map(Number);
    vertices.push(rawId);
    labels.push(label);
  }
  return { vertices, labels };
}

/** Collect the distinct raw vertex ids of a SNAP edge-list file, sorted. */
async function scanVertexIds(file: string): Promise<number[]> {
  const text = await fs.readFile(file, "utf-8");
  const ids = new Set<number>();
  for (const line of text.split("\n")) {
    const trimmed = line.trim();
    if (!trimmed || trimmed.startsWith("#")) continue;
    const parts = trimmed.split(/\s+/);
    ids.add(Number(parts[0]));
    ids.add(Number(parts[1]));
  }
  return [...ids].sort((a, b) => a - b);
}

/**
 * Handle to a loaded graph. Immutable once built; algorithm calls on one
 * handle are serialized in arrival order, distinct handles run freely in
 * parallel. `free()` releases the scratch directory; any later call on the
 * handle rejects with an error.
 */
export class GraphHandle {
  readonly n: number;
  readonly m: number;
  readonly graphPath: string;

  private readonly workDir: string;
  private sortedVertices: number[] | null;
  private freed = false;
  private queue: Promise<unknown> = Promise.resolve();
  private scratchCounter = 0;

  /** @internal use {@link loadGraph} */
  constructor(graphPath: string, workDir: string, n: number, m: number,
              vertices: number[] | null) {
    this.graphPath = graphPath;
    this.workDir = workDir;
    this.n = n;
    this.m = m;
    this.sortedVertices = vertices;
  }

  /** Raw vertex ids in ascending order (assignment TSV row order). */
  async vertices(): Promise<number[]> {
    this.assertLive();
    if (this.sortedVertices === null) {
      this.sortedVertices = await scanVertexIds(this.graphPath);
    }
    return this.sortedVertices;
  }

  async free(): Promise<void> {
    if (this.freed) return;
    this.freed = true;
    await fs.rm(this.workDir, { recursive: true, force: true });
  }

  private assertLive(): void {
    if (this.freed) {
      throw new Error("graph handle has been freed");
    }
  }

  /** @internal serialize one CLI-backed operation on this handle */
  enqueue<T>(work: (scratch: string) => Promise<T>): Promise<T> {
    this.assertLive();
    const scratch = path.join(this.workDir, `op-${this.scratchCounter++}`);
    const next = this.queue.then(async () => {
      this.assertLive();
      await fs.mkdir(scratch, { recursive: true });
      return work(scratch);
    });
    this.queue = next.catch(() => undefined);
    return next;
  }
}

function formatEdges(arrays: EdgeArrays): string {
  const { src, dst, weight } = arrays;
  if (src.length !== dst.length || (weight && weight.length !== src.length)) {
    throw new Error("edge arrays must have equal lengths");
  }
  const lines: string[] = [];
  for (let i = 0; i < src.length; i++) {
    const u = src[i];
    const v = dst[i];
    if (!Number.isInteger(u) || !Number.isInteger(v) || u < 0 || v < 0) {
      throw new Error(`edge endpoints must be non-negative integers (edge ${i})`);
    }
    lines.push(weight ? `${u} ${v} ${weight[i]}` : `${u} ${v}`);
  }
  return lines.join("\n") + (lines.length ? "\n" : "");
}

/**
 * Load a graph from a SNAP edge-list file path or from edge arrays.
 * Equivalent to the toolkit's ingest-and-build pipeline; the raw-id
 * remapping is retrievable through `handle.vertices()`.
 */
export async function loadGraph(source: string | EdgeArrays): Promise<GraphHandle> {
  const workDir = await fs.mkdtemp(path.join(os.tmpdir(), "comdet-"));
  try {
    let graphPath: string;
    let vertices: number[] | null = null;
    if (typeof source === "string") {
      await fs.access(source);
      graphPath = source;
    } else {
      graphPath = path.join(workDir, "graph.tsv");
      await fs.writeFile(graphPath, formatEdges(source), "utf-8");
      vertices = [...new Set([...source.src, ...source.dst])].sort((a, b) => a - b);
    }
    const stats = await runCli(["stats", graphPath]);
    const { n, m } = parseStats(stats);
    return new GraphHandle(graphPath, workDir, n, m, vertices);
  } catch (err) {
    await fs.rm(workDir, { recursive: true, force: true });
    throw err;
  }
}

function commonFlags(opts: { deterministic?: boolean; seed?: number;
                             threads?: number }): string[] {
  const args: string[] = [];
  if (opts.deterministic) args.push("--deterministic");
  if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
  if (opts.threads !== undefined) args.push("--threads", String(opts.threads));
  return args;
}

/** Run label propagation; resolves to one community label per vertex. */
export async function lpa(handle: GraphHandle,
                          opts: LpaOptions = {}): Promise<number[]> {
  return handle.enqueue(async (scratch) => {
    const out = path.join(scratch, "assignment.tsv");
    const args = ["lpa", handle.graphPath, "-o", out, ...commonFlags(opts)];
    if (opts.maxIterations !== undefined) {
      args.push("--max-iterations", String(opts.maxIterations));
    }
    if (opts.threshold !== undefined) {
      args.push("--threshold", String(opts.threshold));
    }
    await runCli(args);
    return parseAssignment(await fs.readFile(out, "utf-8")).labels;
  });
}

/** Run multi-level Louvain; labels plus per-level modularity. */
export async function louvain(handle: GraphHandle,
                              opts: LouvainOptions = {}): Promise<LouvainResult> {
  return handle.enqueue(async (scratch) => {
    const out = path.join(scratch, "assignment.tsv");
    const levelsOut = path.join(scratch, "levels.tsv");
    const args = ["louvain", handle.graphPath, "-o", out,
                  "--levels-out", levelsOut, ...commonFlags(opts)];
    if (opts.maxIterations !== undefined) {
      args.push("--max-iterations", String(opts.maxIterations));
    }
    if (opts.maxLevels !== undefined) {
      args.push("--max-levels", String(opts.maxLevels));
    }
    await runCli(args);
    const labels = parseAssignment(await fs.readFile(out, "utf-8")).labels;
    const modularityPerLevel: number[] = [];
    const levelLines = (await fs.readFile(levelsOut, "utf-8")).split("\n");
    for (const line of levelLines.slice(1)) {
      const trimmed = line.trim();
      if (!trimmed) continue;
      modularityPerLevel.push(Number(trimmed.split("\t")[3]));
    }
    return { labels, modularityPerLevel };
  });
}

/** Modularity of a labeling, one label per vertex in `vertices()` order. */
export async function modularity(handle: GraphHandle,
                                 labels: number[]): Promise<number> {
  const vertices = await handle.vertices();
  if (labels.length !== vertices.length) {
    throw new Error(
      `expected ${vertices.length} labels, got ${labels.length}`);
  }
  for (const label of labels) {
    if (!Number.isInteger(label) || label < 0) {
      throw new Error("labels must be non-negative integers");
    }
  }
  return handle.enqueue(async (scratch) => {
    const file = path.join(scratch, "labels.tsv");
    const body = vertices.map((v, i) => `${v}\t${labels[i]}`).join("\n");
    await fs.writeFile(file, body + "\n", "utf-8");
    const out = await runCli(["modularity", handle.graphPath, file]);
    return Number(out.trim());
  });
}

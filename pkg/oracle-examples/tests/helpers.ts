import { spawn } from 'child_process';
import * as path from 'path';

export const ROOT = path.join(__dirname, '..');
export const DIST = path.join(ROOT, 'dist');
export const DATA = path.join(ROOT, 'data');
export const PYTHON = process.env.SVAKADD_PY ?? 'python3';

export interface OracleSession {
	query: (bits: string) => Promise<string>;
	close: () => Promise<number>;
}

/** Spawn an oracle child and expose one-in-flight query/reply. */
export function openOracle(command: string, args: string[]): OracleSession {
	const child = spawn(command, args, { stdio: ['pipe', 'pipe', 'inherit'] });
	let buffer = '';
	const waiting: Array<(line: string) => void> = [];
	child.stdout.setEncoding('utf-8');
	child.stdout.on('data', (chunk: string) => {
		buffer += chunk;
		let nl: number;
		while ((nl = buffer.indexOf('\n')) >= 0) {
			const line = buffer.slice(0, nl);
			buffer = buffer.slice(nl + 1);
			const resolve = waiting.shift();
			if (resolve) {
				resolve(line);
			}
		}
	});
	return {
		query: (bits: string) =>
			new Promise<string>((resolve, reject) => {
				waiting.push(resolve);
				child.stdin.write(bits + '\n', (err) => {
					if (err) {
						reject(err);
					}
				});
			}),
		close: () =>
			new Promise<number>((resolve) => {
				child.stdin.end();
				child.on('exit', (code) => resolve(code ?? -1));
			}),
	};
}

export function runCli(
	args: string[]
): Promise<{ code: number; stdout: string; stderr: string }> {
	return new Promise((resolve) => {
		const child = spawn(PYTHON, ['-m', 'svakadd.cli', ...args], {
			stdio: ['ignore', 'pipe', 'pipe'],
		});
		let stdout = '';
		let stderr = '';
		child.stdout.setEncoding('utf-8');
		child.stderr.setEncoding('utf-8');
		child.stdout.on('data', (c: string) => (stdout += c));
		child.stderr.on('data', (c: string) => (stderr += c));
		child.on('exit', (code) => resolve({ code: code ?? -1, stdout, stderr }));
	});
}

export function parsePhi(stdout: string, n: number): number[] {
	const phi = new Array<number>(n).fill(NaN);
	for (const line of stdout.split('\n')) {
		const match = line.match(/^phi\[(\d+)\] = (.+)$/);
		if (match) {
			phi[Number(match[1]) - 1] = Number(match[2]);
		}
	}
	if (phi.some((v) => !Number.isFinite(v))) {
		throw new Error(`could not parse all phi entries from:\n${stdout}`);
	}
	return phi;
}

export function bitstrings(n: number): string[] {
	const out: string[] = [];
	for (let mask = 0; mask < 1 << n; mask++) {
		let bits = '';
		for (let j = 0; j < n; j++) {
			bits += String((mask >> j) & 1);
		}
		out.push(bits);
	}
	return out;
}

import * as readline from 'readline';

/**
 * Serve the coalition line protocol on stdin/stdout.
 *
 * The parent writes one coalition bitstring per line (character j is
 * player j+1) and expects exactly one decimal real per line back, flushed
 * per reply. Replies are cached per distinct bitstring so repeat queries
 * never recompute. The session ends when stdin closes; the process then
 * exits 0.
 */
export function serveOracle(evaluate: (members: boolean[]) => number): void {
	const cache = new Map<string, string>();
	const rl = readline.createInterface({ input: process.stdin, crlfDelay: Infinity });

	rl.on('line', (line: string) => {
		const bits = line.trim();
		if (bits.length === 0) {
			return;
		}
		if (!/^[01]+$/.test(bits)) {
			process.stderr.write(`oracle: bad query ${JSON.stringify(bits)}\n`);
			process.exit(1);
		}
		let reply = cache.get(bits);
		if (reply === undefined) {
			const members = Array.from(bits, (ch) => ch === '1');
			const value = evaluate(members);
			if (!Number.isFinite(value)) {
				process.stderr.write(`oracle: non-finite value for ${bits}\n`);
				process.exit(1);
			}
			reply = value.toString();
			cache.set(bits, reply);
		}
		process.stdout.write(reply + '\n');
	});

	rl.on('close', () => {
		process.exit(0);
	});
}

/** Pull a named `--flag value` pair out of argv, with an optional default. */
export function argValue(argv: string[], flag: string, fallback?: string): string {
	const idx = argv.indexOf(flag);
	if (idx >= 0 && idx + 1 < argv.length) {
		return argv[idx + 1];
	}
	if (fallback !== undefined) {
		return fallback;
	}
	process.stderr.write(`oracle: missing required ${flag}\n`);
	process.exit(1);
}

/**
 * End-to-end checks through the primary CLI: the python toolkit consumes
 * these oracles over the stdio protocol, so exact Shapley values of the
 * linear local-attribution game must land on the closed form
 * coef_i * (x_i - mean_i), and protocol breakage must surface as exit 3.
 */

import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { describe, expect, it } from 'vitest';

import { columnMeans, loadDataset } from '../src/csv';
import { fitLinear } from '../src/linear';
import { DATA, DIST, parsePhi, runCli } from './helpers';

const FIXTURE = path.join(DATA, 'linear-fixture.csv');
const LOCAL = path.join(DIST, 'local-attribution-oracle.js');

describe('primary CLI consuming the oracles', () => {
	it('cross-language equivalence: exact shapley equals coef * (x - mean)', async () => {
		const index = 0;
		const data = loadDataset(FIXTURE);
		const model = fitLinear(data.features, data.target);
		const means = columnMeans(data.features);
		const expected = data.features[index].map(
			(x, j) => model.coefficients[j] * (x - means[j])
		);

		const result = await runCli([
			'exact',
			'--players', '8',
			'--oracle', `node ${LOCAL} --data ${FIXTURE} --index ${index} --seed 0`,
		]);
		expect(result.code, result.stderr).toBe(0);
		const phi = parsePhi(result.stdout, 8);
		for (let j = 0; j < 8; j++) {
			expect(Math.abs(phi[j] - expected[j])).toBeLessThanOrEqual(1e-8);
		}
	}, 60_000);

	it('an estimator consumes the oracle over the same protocol', async () => {
		const result = await runCli([
			'approx',
			'--players', '8',
			'--oracle', `node ${LOCAL} --data ${FIXTURE} --index 1 --seed 0`,
			'--method', 'svakadd', '--k', '1', '--budget', '32',
			'--constraint-mode', 'eliminate', '--seed', '4',
		]);
		expect(result.code, result.stderr).toBe(0);
		// the game is additive, so k=1 recovers it exactly from any
		// full-rank sample of 32 >= 10 coalitions
		const data = loadDataset(FIXTURE);
		const model = fitLinear(data.features, data.target);
		const means = columnMeans(data.features);
		const estimates = parsePhiLike(result.stdout, 'estimate', 8);
		for (let j = 0; j < 8; j++) {
			const expected = model.coefficients[j] * (data.features[1][j] - means[j]);
			expect(Math.abs(estimates[j] - expected)).toBeLessThanOrEqual(1e-6);
		}
	}, 60_000);

	it('malformed replies surface as CLI exit code 3', async () => {
		const badOracle = path.join(os.tmpdir(), `bad-oracle-${process.pid}.js`);
		fs.writeFileSync(
			badOracle,
			"const rl = require('readline').createInterface({ input: process.stdin });\n" +
				"rl.on('line', () => process.stdout.write('not-a-number\\n'));\n" +
				"rl.on('close', () => process.exit(0));\n"
		);
		try {
			const result = await runCli([
				'exact', '--players', '4', '--oracle', `node ${badOracle}`,
			]);
			expect(result.code).toBe(3);
			expect(result.stderr).toMatch(/non-numeric/);
		} finally {
			fs.unlinkSync(badOracle);
		}
	}, 30_000);

	it('a dead child surfaces as CLI exit code 3', async () => {
		const result = await runCli([
			'exact', '--players', '4', '--oracle', 'node -e "process.exit(0)"',
		]);
		expect(result.code).toBe(3);
	}, 30_000);
});

function parsePhiLike(stdout: string, prefix: string, n: number): number[] {
	const out = new Array<number>(n).fill(NaN);
	for (const line of stdout.split('\n')) {
		const match = line.match(new RegExp(`^${prefix}\\[(\\d+)\\] = (.+)$`));
		if (match) {
			out[Number(match[1]) - 1] = Number(match[2]);
		}
	}
	if (out.some((v) => !Number.isFinite(v))) {
		throw new Error(`could not parse ${prefix} entries from:\n${stdout}`);
	}
	return out;
}

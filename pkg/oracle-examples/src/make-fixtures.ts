/**
 * Regenerate the committed synthetic fixture datasets (deterministic).
 *
 * linear-fixture.csv: 8 features, linear target with mild noise; used by
 * the local-attribution oracle and the cross-language integration test.
 *
 * global-fixture.csv: 6 features where only the first carries signal (it
 * nearly duplicates the target); used by the global-importance oracle.
 */

import * as fs from 'fs';
import * as path from 'path';

import { Rng } from './rng';

function writeCsv(file: string, header: string[], rows: number[][]): void {
	const lines = [header.join(',')];
	for (const row of rows) {
		lines.push(row.map((v) => v.toPrecision(8)).join(','));
	}
	fs.writeFileSync(file, lines.join('\n') + '\n', 'utf-8');
}

function makeLinearFixture(file: string): void {
	const rng = new Rng(1);
	const coefficients = [2.0, -1.5, 0.75, 0.0, 3.0, -0.25, 1.0, -2.0];
	const rows: number[][] = [];
	for (let i = 0; i < 64; i++) {
		const x = coefficients.map(() => rng.normal());
		let y = 0.5; // intercept
		for (let j = 0; j < coefficients.length; j++) {
			y += coefficients[j] * x[j];
		}
		y += 0.01 * rng.normal();
		rows.push([...x, y]);
	}
	writeCsv(file, [...coefficients.map((_, j) => `x${j + 1}`), 'y'], rows);
}

function makeGlobalFixture(file: string): void {
	const rng = new Rng(2);
	const rows: number[][] = [];
	for (let i = 0; i < 120; i++) {
		const signal = rng.normal();
		const noise = [rng.normal(), rng.normal(), rng.normal(), rng.normal(), rng.normal()];
		const y = signal + 0.02 * rng.normal();
		rows.push([signal, ...noise, y]);
	}
	writeCsv(file, ['signal', 'n1', 'n2', 'n3', 'n4', 'n5', 'y'], rows);
}

const dataDir = path.join(__dirname, '..', 'data');
fs.mkdirSync(dataDir, { recursive: true });
makeLinearFixture(path.join(dataDir, 'linear-fixture.csv'));
makeGlobalFixture(path.join(dataDir, 'global-fixture.csv'));
process.stdout.write(`fixtures written to ${dataDir}\n`);

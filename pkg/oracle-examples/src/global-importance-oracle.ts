/**
 * Global-importance value function: the worth of a feature coalition is
 * the test-set improvement of a small bagged-tree model retrained on just
 * those feature columns.
 *
 * Regression replies MSE(mean baseline) - MSE(model); classification
 * replies accuracy(model) - accuracy(majority class). Either way the
 * empty coalition is worth exactly 0. The train/test split and every
 * per-coalition retrain derive from the session seed, so sessions are
 * reproducible query-order-independently.
 *
 * Usage: node dist/global-importance-oracle.js --data d.csv --seed 0
 *        [--task regression|classification] [--trees 20] [--depth 3]
 */

import { loadDataset } from './csv';
import { argValue, serveOracle } from './protocol';
import { hashString, Rng } from './rng';
import { BaggedTrees } from './trees';

function main(): void {
	const argv = process.argv.slice(2);
	const dataPath = argValue(argv, '--data');
	const seed = Number(argValue(argv, '--seed', '0'));
	const task = argValue(argv, '--task', 'regression');
	const trees = Number(argValue(argv, '--trees', '20'));
	const depth = Number(argValue(argv, '--depth', '3'));
	if (task !== 'regression' && task !== 'classification') {
		process.stderr.write(`oracle: unknown --task ${task}\n`);
		process.exit(1);
	}

	const data = loadDataset(dataPath);
	const splitRng = new Rng(seed);
	const order = splitRng.shuffle(data.features.map((_, i) => i));
	const cut = Math.max(1, Math.floor(order.length * 0.7));
	const trainIdx = order.slice(0, cut);
	const testIdx = order.slice(cut);

	const trainY = trainIdx.map((i) => data.target[i]);
	const testY = testIdx.map((i) => data.target[i]);

	const baseline = task === 'regression'
		? mseOf(testY, constant(meanOf(trainY), testY.length))
		: accuracyOf(testY, constant(modeOf(trainY), testY.length));

	serveOracle((members: boolean[]) => {
		const columns: number[] = [];
		members.forEach((inside, j) => {
			if (inside) {
				columns.push(j);
			}
		});
		if (columns.length === 0) {
			return 0; // no features: the model is the baseline itself
		}
		const project = (i: number) => columns.map((j) => data.features[i][j]);
		const trainX = trainIdx.map(project);
		const testX = testIdx.map(project);
		// retrain seed depends on (session seed, coalition) only, never on
		// the order in which coalitions arrive
		const rng = new Rng((seed ^ hashString(members.map((b) => (b ? '1' : '0')).join(''))) >>> 0);
		const model = new BaggedTrees(trainX, trainY, { trees, depth, minLeaf: 2 }, rng);
		const predictions = testX.map((row) => model.predict(row));
		if (task === 'regression') {
			return baseline - mseOf(testY, predictions);
		}
		return accuracyOf(testY, predictions.map((p) => Math.round(p))) - baseline;
	});
}

function meanOf(values: number[]): number {
	return values.reduce((a, b) => a + b, 0) / values.length;
}

function modeOf(values: number[]): number {
	const counts = new Map<number, number>();
	for (const v of values) {
		counts.set(v, (counts.get(v) ?? 0) + 1);
	}
	let best = values[0];
	let bestCount = -1;
	for (const [v, c] of [...counts.entries()].sort((a, b) => a[0] - b[0])) {
		if (c > bestCount) {
			best = v;
			bestCount = c;
		}
	}
	return best;
}

function constant(value: number, length: number): number[] {
	return new Array(length).fill(value);
}

function mseOf(truth: number[], predictions: number[]): number {
	let acc = 0;
	for (let i = 0; i < truth.length; i++) {
		acc += (truth[i] - predictions[i]) ** 2;
	}
	return acc / truth.length;
}

function accuracyOf(truth: number[], predictions: number[]): number {
	let hits = 0;
	for (let i = 0; i < truth.length; i++) {
		if (truth[i] === predictions[i]) {
			hits += 1;
		}
	}
	return hits / truth.length;
}

main();

/**
 * Local-attribution value function for one datapoint of a tabular dataset.
 *
 * A linear model is fitted once on the full data at session start; the
 * worth of a coalition is the model's prediction for the chosen datapoint
 * with every absent feature imputed by its column mean. For a linear
 * model this makes the game additive: nu(A) - nu(empty) is the sum of
 * coef_i * (x_i - mean_i) over the present features, so its Shapley
 * values have that closed form, which the integration tests exploit.
 *
 * Usage: node dist/local-attribution-oracle.js --data d.csv --index 0 [--seed 0]
 */

import { columnMeans, loadDataset } from './csv';
import { fitLinear, predictLinear } from './linear';
import { argValue, serveOracle } from './protocol';

function main(): void {
	const argv = process.argv.slice(2);
	const dataPath = argValue(argv, '--data');
	const index = Number(argValue(argv, '--index', '0'));
	argValue(argv, '--seed', '0'); // accepted for interface symmetry; the fit is deterministic

	const data = loadDataset(dataPath);
	if (!Number.isInteger(index) || index < 0 || index >= data.features.length) {
		process.stderr.write(`oracle: --index out of range 0..${data.features.length - 1}\n`);
		process.exit(1);
	}
	const model = fitLinear(data.features, data.target);
	const means = columnMeans(data.features);
	const point = data.features[index];

	serveOracle((members: boolean[]) => {
		if (members.length !== point.length) {
			process.stderr.write(
				`oracle: query has ${members.length} players, dataset has ${point.length} features\n`
			);
			process.exit(1);
		}
		const imputed = point.map((x, j) => (members[j] ? x : means[j]));
		return predictLinear(model, imputed);
	});
}

main();

/** Ordinary least squares with intercept, by Gaussian elimination on the
 * normal equations. Fine for the handful of features the oracles see. */

export interface LinearModel {
	intercept: number;
	coefficients: number[];
}

export function fitLinear(features: number[][], target: number[]): LinearModel {
	const m = features.length;
	const p = features[0].length + 1; // intercept column first
	const gram: number[][] = Array.from({ length: p }, () => new Array(p + 1).fill(0));
	for (let r = 0; r < m; r++) {
		const row = [1, ...features[r]];
		for (let i = 0; i < p; i++) {
			for (let j = 0; j < p; j++) {
				gram[i][j] += row[i] * row[j];
			}
			gram[i][p] += row[i] * target[r];
		}
	}
	const solution = solveDense(gram, p);
	return { intercept: solution[0], coefficients: solution.slice(1) };
}

export function predictLinear(model: LinearModel, point: number[]): number {
	let value = model.intercept;
	for (let j = 0; j < model.coefficients.length; j++) {
		value += model.coefficients[j] * point[j];
	}
	return value;
}

function solveDense(augmented: number[][], size: number): number[] {
	// partial pivoting; the augmented column sits at index `size`
	const a = augmented.map((row) => row.slice());
	for (let col = 0; col < size; col++) {
		let pivot = col;
		for (let r = col + 1; r < size; r++) {
			if (Math.abs(a[r][col]) > Math.abs(a[pivot][col])) {
				pivot = r;
			}
		}
		if (Math.abs(a[pivot][col]) < 1e-12) {
			throw new Error('singular normal equations; is a feature constant?');
		}
		[a[col], a[pivot]] = [a[pivot], a[col]];
		for (let r = col + 1; r < size; r++) {
			const factor = a[r][col] / a[col][col];
			for (let c = col; c <= size; c++) {
				a[r][c] -= factor * a[col][c];
			}
		}
	}
	const x = new Array(size).fill(0);
	for (let r = size - 1; r >= 0; r--) {
		let acc = a[r][size];
		for (let c = r + 1; c < size; c++) {
			acc -= a[r][c] * x[c];
		}
		x[r] = acc / a[r][r];
	}
	return x;
}

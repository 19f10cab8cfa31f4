import * as fs from 'fs';

export interface Dataset {
	names: string[];
	/** rows x features, numeric */
	features: number[][];
	/** last column of the file */
	target: number[];
}

/**
 * Read a numeric CSV with a header row; the last column is the target,
 * everything before it the feature matrix.
 */
export function loadDataset(path: string): Dataset {
	const text = fs.readFileSync(path, 'utf-8');
	const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
	if (lines.length < 2) {
		throw new Error(`${path}: need a header row and at least one data row`);
	}
	const header = lines[0].split(',').map((h) => h.trim());
	const features: number[][] = [];
	const target: number[] = [];
	for (let i = 1; i < lines.length; i++) {
		const cells = lines[i].split(',').map(Number);
		if (cells.length !== header.length || cells.some((c) => !Number.isFinite(c))) {
			throw new Error(`${path}:${i + 1}: non-numeric or ragged row`);
		}
		features.push(cells.slice(0, -1));
		target.push(cells[cells.length - 1]);
	}
	return { names: header.slice(0, -1), features, target };
}

export function columnMeans(features: number[][]): number[] {
	const cols = features[0].length;
	const means = new Array(cols).fill(0);
	for (const row of features) {
		for (let j = 0; j < cols; j++) {
			means[j] += row[j];
		}
	}
	return means.map((s) => s / features.length);
}

/** Depth-limited regression trees and a seeded bagged ensemble.
 *
 * Deliberately tiny: SSE-greedy splits on midpoint thresholds, bootstrap
 * resampling per tree. Used by the global-importance oracle, which
 * retrains one ensemble per queried coalition.
 */

import { Rng } from './rng';

interface TreeNode {
	value: number;
	feature?: number;
	threshold?: number;
	left?: TreeNode;
	right?: TreeNode;
}

function mean(values: number[]): number {
	return values.reduce((a, b) => a + b, 0) / values.length;
}

function buildTree(
	rows: number[][],
	target: number[],
	depth: number,
	minLeaf: number
): TreeNode {
	const node: TreeNode = { value: mean(target) };
	if (depth === 0 || target.length < 2 * minLeaf || rows[0].length === 0) {
		return node;
	}
	let bestScore = Infinity;
	let bestFeature = -1;
	let bestThreshold = 0;
	const baseSse = target.reduce((acc, y) => acc + (y - node.value) ** 2, 0);
	for (let j = 0; j < rows[0].length; j++) {
		const values = Array.from(new Set(rows.map((r) => r[j]))).sort((a, b) => a - b);
		for (let t = 0; t + 1 < values.length; t++) {
			const threshold = (values[t] + values[t + 1]) / 2;
			const leftY: number[] = [];
			const rightY: number[] = [];
			for (let r = 0; r < rows.length; r++) {
				(rows[r][j] <= threshold ? leftY : rightY).push(target[r]);
			}
			if (leftY.length < minLeaf || rightY.length < minLeaf) {
				continue;
			}
			const lm = mean(leftY);
			const rm = mean(rightY);
			const sse =
				leftY.reduce((acc, y) => acc + (y - lm) ** 2, 0) +
				rightY.reduce((acc, y) => acc + (y - rm) ** 2, 0);
			if (sse < bestScore) {
				bestScore = sse;
				bestFeature = j;
				bestThreshold = threshold;
			}
		}
	}
	if (bestFeature < 0 || bestScore >= baseSse) {
		return node;
	}
	const leftRows: number[][] = [];
	const leftY: number[] = [];
	const rightRows: number[][] = [];
	const rightY: number[] = [];
	for (let r = 0; r < rows.length; r++) {
		if (rows[r][bestFeature] <= bestThreshold) {
			leftRows.push(rows[r]);
			leftY.push(target[r]);
		} else {
			rightRows.push(rows[r]);
			rightY.push(target[r]);
		}
	}
	node.feature = bestFeature;
	node.threshold = bestThreshold;
	node.left = buildTree(leftRows, leftY, depth - 1, minLeaf);
	node.right = buildTree(rightRows, rightY, depth - 1, minLeaf);
	return node;
}

function predictTree(node: TreeNode, row: number[]): number {
	let current = node;
	while (current.feature !== undefined) {
		current = row[current.feature] <= (current.threshold as number)
			? (current.left as TreeNode)
			: (current.right as TreeNode);
	}
	return current.value;
}

export interface EnsembleOptions {
	trees: number;
	depth: number;
	minLeaf: number;
}

export class BaggedTrees {
	private roots: TreeNode[] = [];

	constructor(
		rows: number[][],
		target: number[],
		options: EnsembleOptions,
		rng: Rng
	) {
		for (let t = 0; t < options.trees; t++) {
			const sampleRows: number[][] = [];
			const sampleY: number[] = [];
			for (let i = 0; i < rows.length; i++) {
				const pick = rng.int(rows.length);
				sampleRows.push(rows[pick]);
				sampleY.push(target[pick]);
			}
			this.roots.push(buildTree(sampleRows, sampleY, options.depth, options.minLeaf));
		}
	}

	predict(row: number[]): number {
		let acc = 0;
		for (const root of this.roots) {
			acc += predictTree(root, row);
		}
		return acc / this.roots.length;
	}
}

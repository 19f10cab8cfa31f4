/**
 * Small deterministic PRNG (mulberry32): good enough for bootstrap draws
 * and shuffles, and identical across platforms for a given seed.
 */
export class Rng {
	private state: number;

	constructor(seed: number) {
		this.state = seed >>> 0;
	}

	next(): number {
		this.state = (this.state + 0x6d2b79f5) >>> 0;
		let t = this.state;
		t = Math.imul(t ^ (t >>> 15), t | 1);
		t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
		return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
	}

	int(bound: number): number {
		return Math.floor(this.next() * bound);
	}

	shuffle<T>(items: T[]): T[] {
		const out = items.slice();
		for (let i = out.length - 1; i > 0; i--) {
			const j = this.int(i + 1);
			[out[i], out[j]] = [out[j], out[i]];
		}
		return out;
	}

	normal(): number {
		// Box-Muller; one draw per call keeps the stream simple
		const u = Math.max(this.next(), 1e-12);
		const v = this.next();
		return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
	}
}

/** Stable 32-bit hash, used to derive per-coalition seeds. */
export function hashString(text: string): number {
	let h = 2166136261 >>> 0;
	for (let i = 0; i < text.length; i++) {
		h ^= text.charCodeAt(i);
		h = Math.imul(h, 16777619) >>> 0;
	}
	return h;
}

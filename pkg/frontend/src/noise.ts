/** Seeded Gaussian gaze-noise injection (the eye-tracker stand-in). */

/** Default generating sigmas of the engine's error-vector model, in cm. */
export const DEFAULT_SIGMA_H_CM = 1.8471;
export const DEFAULT_SIGMA_V_CM = 1.2289;

/** mulberry32: tiny deterministic PRNG, uniform in [0, 1). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class NoiseGenerator {
  private uniform: () => number;
  private spare: number | null = null;

  constructor(
    seed: number,
    readonly sigmaHCm = DEFAULT_SIGMA_H_CM,
    readonly sigmaVCm = DEFAULT_SIGMA_V_CM,
    readonly pixelsPerCm = 55.6,
  ) {
    this.uniform = mulberry32(seed);
  }

  /** Standard normal via Box-Muller; caches the paired draw. */
  private gauss(): number {
    if (this.spare !== null) {
      const v = this.spare;
      this.spare = null;
      return v;
    }
    let u = 0;
    while (u === 0) u = this.uniform();
    const v = this.uniform();
    const r = Math.sqrt(-2 * Math.log(u));
    this.spare = r * Math.sin(2 * Math.PI * v);
    return r * Math.cos(2 * Math.PI * v);
  }

  /** One per-sample pixel offset drawn from the generating Gaussians. */
  next(): { dx: number; dy: number } {
    return {
      dx: this.gauss() * this.sigmaHCm * this.pixelsPerCm,
      dy: this.gauss() * this.sigmaVCm * this.pixelsPerCm,
    };
  }
}

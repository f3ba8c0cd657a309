/** Relocation feedback: beep exactly when the service confirms. */

import type { RelocatedFrame } from "./protocol";

export interface Beeper {
  beep(): void;
}

/** Returns true when a beep was played (confirm:true only). */
export function handleRelocated(frame: RelocatedFrame, beeper: Beeper): boolean {
  if (frame.confirm === true) {
    beeper.beep();
    return true;
  }
  return false;
}

/** Short sine blip through the Web Audio API. */
export class WebAudioBeeper implements Beeper {
  private ctx: AudioContext | null = null;

  beep(): void {
    this.ctx = this.ctx ?? new AudioContext();
    const osc = this.ctx.createOscillator();
    const gain = this.ctx.createGain();
    osc.frequency.value = 880;
    gain.gain.setValueAtTime(0.2, this.ctx.currentTime);
    gain.gain.exponentialRampToValueAtTime(1e-4, this.ctx.currentTime + 0.15);
    osc.connect(gain).connect(this.ctx.destination);
    osc.start();
    osc.stop(this.ctx.currentTime + 0.15);
  }
}

/** Thin wrapper over the platform speech synthesis, safe off-browser. */

import { FeedbackEvent } from "./api.js";

export function speechAvailable(): boolean {
    return typeof window !== "undefined" && "speechSynthesis" in window;
}

export function speak(text: string): void {
    if (!speechAvailable() || !text) {
        return;
    }
    const utterance = new SpeechSynthesisUtterance(text);
    utterance.rate = 1.2;
    window.speechSynthesis.cancel(); // feedback must track the latest press
    window.speechSynthesis.speak(utterance);
}

/** Beep for error feedback so it is distinguishable from spoken text. */
export function beep(): void {
    if (typeof window === "undefined" || !("AudioContext" in window)) {
        return;
    }
    const ctx = new AudioContext();
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = 220;
    gain.gain.value = 0.1;
    osc.connect(gain).connect(ctx.destination);
    osc.start();
    osc.stop(ctx.currentTime + 0.12);
    osc.onended = () => void ctx.close();
}

export function renderFeedback(events: FeedbackEvent[]): void {
    for (const event of events) {
        if (event.kind === "error_beep") {
            beep();
        } else {
            speak(event.utterance);
        }
    }
}

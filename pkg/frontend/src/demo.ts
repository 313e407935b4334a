/** DOM-free demo session state: calibration capture, presses, log export.
 *
 * The service owns all entry semantics; this class only captures taps,
 * forwards them, mirrors the returned transcript, and keeps the event
 * buffer that export turns into a session log. Anchor positions are
 * re-derived locally purely for rendering labeled circles.
 */

import {
    CalibrationUpload,
    LayoutInfo,
    Method,
    Point,
    PressResponse,
    SessionClient,
} from "./api.js";

export const DEFAULT_EDGE_OFFSET = 0.05;
export const DEFAULT_RADIUS = 0.18;

const CANONICAL_REGIONS = [
    "AboveIndex",
    "Index",
    "Middle",
    "Ring",
    "Little",
    "BelowLittle",
    "Center",
    "Thumb",
    "AboveThumb",
    "BelowThumb",
    "BottomCenter",
] as const;

export interface Anchor extends Point {
    region: string;
    label: string;
}

export interface CaptureResult {
    accepted: boolean;
    complete: boolean;
    /** set when the grip was rejected and capture restarted */
    redoPrompt?: string;
}

function clamp(v: number): number {
    return Math.min(1, Math.max(0, v));
}

/** Mirror of the service's anchor derivation, for on-screen rendering only. */
export function deriveAnchors(
    fingertips: Point[],
    layout: LayoutInfo,
    edgeOffset = DEFAULT_EDGE_OFFSET,
): Anchor[] {
    if (fingertips.length !== 5) {
        throw new Error(`expected 5 fingertips, got ${fingertips.length}`);
    }
    const [index, middle, ring, little, thumb] = fingertips as [Point, Point, Point, Point, Point];
    const spacing = (little.y - index.y) / 3;
    const at = new Map<string, Point>();
    at.set("Index", { x: clamp(index.x + edgeOffset), y: clamp(index.y) });
    at.set("Middle", { x: clamp(middle.x + edgeOffset), y: clamp(middle.y) });
    at.set("Ring", { x: clamp(ring.x + edgeOffset), y: clamp(ring.y) });
    at.set("Little", { x: clamp(little.x + edgeOffset), y: clamp(little.y) });
    const indexAnchor = at.get("Index")!;
    const littleAnchor = at.get("Little")!;
    at.set("AboveIndex", { x: indexAnchor.x, y: clamp(indexAnchor.y - spacing) });
    at.set("BelowLittle", { x: littleAnchor.x, y: clamp(littleAnchor.y + spacing) });
    const thumbAnchor = { x: clamp(thumb.x - edgeOffset), y: clamp(thumb.y) };
    at.set("Thumb", thumbAnchor);
    at.set("AboveThumb", { x: thumbAnchor.x, y: clamp(thumbAnchor.y - spacing) });
    at.set("BelowThumb", { x: thumbAnchor.x, y: clamp(thumbAnchor.y + spacing) });
    at.set("Center", { x: 0.5, y: 0.5 });
    at.set("BottomCenter", { x: 0.5, y: 0.95 });
    for (const spec of layout.synthetic_anchors) {
        const base = at.get(spec.relative_to);
        if (base) {
            at.set(spec.name, { x: clamp(base.x + spec.dx), y: clamp(base.y + spec.dy) });
        }
    }
    const labels = new Map(layout.bindings.map((b) => [b.region, b.label]));
    const order = [...CANONICAL_REGIONS, ...layout.synthetic_anchors.map((s) => s.name)];
    return order
        .filter((region) => at.has(region))
        .map((region) => ({
            region,
            label: labels.get(region) ?? "",
            ...at.get(region)!,
        }));
}

export interface BufferedEvent {
    t: number;
    x: number;
    y: number;
}

export class DemoSession {
    readonly method: Method;
    private client: SessionClient;
    private layout: LayoutInfo;

    private taps: Point[] = [];
    private sessionId: string | null = null;
    private calibration: CalibrationUpload | null = null;

    transcript = "";
    readonly events: BufferedEvent[] = [];
    terminated = false;

    /** presses are strictly serialized: the next awaits the previous response */
    private inFlight: Promise<unknown> = Promise.resolve();
    private startedAt: number | null = null;
    private lastT = 0;

    constructor(client: SessionClient, layout: LayoutInfo) {
        this.client = client;
        this.layout = layout;
        this.method = layout.method;
    }

    /** Calibration taps arrive in grip order: index, middle, ring, little, thumb. */
    addCalibrationTap(p: Point): CaptureResult {
        if (this.sessionId) {
            return { accepted: false, complete: true };
        }
        this.taps.push({ x: clamp(p.x), y: clamp(p.y) });
        if (this.taps.length < 5) {
            return { accepted: true, complete: false };
        }
        const fingers = this.taps.slice(0, 4);
        for (let i = 1; i < fingers.length; i++) {
            if (fingers[i]!.y <= fingers[i - 1]!.y) {
                this.taps = [];
                return {
                    accepted: false,
                    complete: false,
                    redoPrompt: "fingers must run top to bottom along the edge; tap all five again",
                };
            }
        }
        this.calibration = {
            fingertips: this.taps,
            edge_offset: DEFAULT_EDGE_OFFSET,
            radius: DEFAULT_RADIUS,
        };
        return { accepted: true, complete: true };
    }

    get calibrated(): boolean {
        return this.calibration !== null;
    }

    get tapCount(): number {
        return this.taps.length;
    }

    async start(): Promise<void> {
        if (!this.calibration) {
            throw new Error("calibrate first: five taps, index to little then thumb");
        }
        this.sessionId = await this.client.createSession(this.method, this.calibration);
    }

    get active(): boolean {
        return this.sessionId !== null;
    }

    anchors(): Anchor[] {
        if (!this.calibration) {
            return [];
        }
        return deriveAnchors(this.calibration.fingertips, this.layout, this.calibration.edge_offset);
    }

    /** Forward a pointer tap; only a successful round-trip appends to the buffer. */
    async tap(rawX: number, rawY: number, now?: number): Promise<PressResponse> {
        if (!this.sessionId) {
            throw new Error("no active session");
        }
        const x = clamp(rawX);
        const y = clamp(rawY);
        const run = this.inFlight.then(async () => {
            const wall = now ?? Date.now();
            if (this.startedAt === null) {
                this.startedAt = wall;
            }
            const t = Math.max(this.lastT, Math.round(wall - this.startedAt));
            const response = await this.client.press(this.sessionId!, { x, y, t });
            this.events.push({ t, x, y });
            this.lastT = t;
            this.transcript = response.transcript;
            if (response.events.some((e) => e.kind === "terminal")) {
                this.terminated = true;
            }
            return response;
        });
        // keep the chain alive after rejections so later taps still serialize
        this.inFlight = run.catch(() => undefined);
        return run;
    }

    canExport(): boolean {
        return this.events.length > 0;
    }

    /** Session log (JSON Lines) in the exact format the core replays. */
    exportLog(): string {
        if (!this.canExport() || !this.calibration) {
            throw new Error("nothing to export yet");
        }
        const header = {
            method: this.method,
            layout_id: this.layout.id,
            calibration: this.calibration,
        };
        const lines = [JSON.stringify(header)];
        for (const ev of this.events) {
            lines.push(JSON.stringify({ t: ev.t, x: ev.x, y: ev.y }));
        }
        return lines.join("\n") + "\n";
    }

    async close(): Promise<void> {
        if (this.sessionId) {
            await this.client.deleteSession(this.sessionId);
            this.sessionId = null;
        }
    }
}

/** Browser wiring: canvas, pointer taps, calibration flow, export. */

import { LayoutInfo, Method, SessionClient, ServiceUnreachable } from "./api.js";
import { DemoSession } from "./demo.js";
import { renderFeedback } from "./speech.js";

const client = new SessionClient("");
let layouts: LayoutInfo[] = [];
let session: DemoSession | null = null;
let eyesFree = false;

const canvas = document.getElementById("surface") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusLine = document.getElementById("status")!;
const transcriptBox = document.getElementById("transcript")!;
const banner = document.getElementById("banner")!;
const methodSelect = document.getElementById("method") as HTMLSelectElement;
const exportButton = document.getElementById("export") as HTMLButtonElement;
const resetButton = document.getElementById("reset") as HTMLButtonElement;
const eyesFreeToggle = document.getElementById("eyesfree") as HTMLInputElement;

function setStatus(text: string): void {
    statusLine.textContent = text;
}

function showBanner(text: string): void {
    banner.textContent = text;
    banner.classList.add("visible");
    setTimeout(() => banner.classList.remove("visible"), 2500);
}

function fitCanvas(): void {
    canvas.width = canvas.clientWidth * devicePixelRatio;
    canvas.height = canvas.clientHeight * devicePixelRatio;
    draw();
}

function draw(): void {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.fillStyle = "#101418";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    if (eyesFree || !session) {
        return; // blank surface: audio-only condition
    }
    const radiusPx = 0.05 * Math.min(canvas.width, canvas.height);
    for (const anchor of session.anchors()) {
        const x = anchor.x * canvas.width;
        const y = anchor.y * canvas.height;
        ctx.beginPath();
        ctx.arc(x, y, radiusPx, 0, Math.PI * 2);
        ctx.fillStyle = "#27425f";
        ctx.fill();
        ctx.strokeStyle = "#6fa8dc";
        ctx.stroke();
        ctx.fillStyle = "#dce8f5";
        ctx.font = `${Math.round(radiusPx * 0.55)}px system-ui`;
        ctx.textAlign = "center";
        ctx.textBaseline = "middle";
        ctx.fillText(anchor.label || anchor.region, x, y);
    }
}

function updateControls(): void {
    exportButton.disabled = !(session && session.canExport());
    transcriptBox.textContent = session ? session.transcript : "";
}

async function startCalibration(): Promise<void> {
    const method = methodSelect.value as Method;
    const layout = layouts.find((l) => l.method === method);
    if (!layout) {
        showBanner("service offers no layout for this method");
        return;
    }
    session = new DemoSession(client, layout);
    setStatus("calibrate: tap index, middle, ring, little along one edge, then the thumb side");
    updateControls();
    draw();
}

async function handleTap(nx: number, ny: number): Promise<void> {
    if (!session) {
        return;
    }
    if (!session.calibrated) {
        const result = session.addCalibrationTap({ x: nx, y: ny });
        if (result.redoPrompt) {
            setStatus(result.redoPrompt);
            return;
        }
        if (!result.complete) {
            setStatus(`calibrating: ${session.tapCount}/5 taps`);
            return;
        }
        try {
            await session.start();
        } catch (err) {
            showBanner(String(err));
            return;
        }
        setStatus("session live: tap the anchors to type");
        draw();
        return;
    }
    try {
        const response = await session.tap(nx, ny);
        renderFeedback(response.events);
        if (response.region === null) {
            showBanner("no region");
        }
        if (session.terminated) {
            setStatus("session terminated; export the log or reset");
        }
    } catch (err) {
        if (err instanceof ServiceUnreachable) {
            showBanner("service unreachable; tap not recorded");
        } else {
            showBanner(String(err));
        }
    }
    updateControls();
}

canvas.addEventListener("pointerdown", (ev) => {
    const rect = canvas.getBoundingClientRect();
    void handleTap((ev.clientX - rect.left) / rect.width, (ev.clientY - rect.top) / rect.height);
});

exportButton.addEventListener("click", () => {
    if (!session || !session.canExport()) {
        return;
    }
    const blob = new Blob([session.exportLog()], { type: "application/x-ndjson" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${session.method}_session.jsonl`;
    link.click();
    URL.revokeObjectURL(link.href);
});

resetButton.addEventListener("click", () => {
    void session?.close();
    session = null;
    void startCalibration();
});

eyesFreeToggle.addEventListener("change", () => {
    eyesFree = eyesFreeToggle.checked;
    draw();
});

methodSelect.addEventListener("change", () => void startCalibration());
window.addEventListener("resize", fitCanvas);

async function boot(): Promise<void> {
    try {
        layouts = await client.layouts();
    } catch {
        setStatus("cannot reach the session service; run `fingertap serve` and reload");
        return;
    }
    await startCalibration();
    fitCanvas();
}

void boot();

/** Cross-component fidelity: a scripted demo session's exported log must
 * replay through the core CLI to the exact transcript shown on screen.
 * The test spawns the real Python session service and drives the same
 * DemoSession class the browser uses.
 */

import assert from "node:assert/strict";
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { after, before, test } from "node:test";

import { LayoutInfo, SessionClient } from "../src/api.js";
import { DemoSession, deriveAnchors } from "../src/demo.js";

const PYTHON = process.env.PYTHON ?? "python3";

const GRIP = [
    { x: 0.07, y: 0.2 },
    { x: 0.07, y: 0.35 },
    { x: 0.07, y: 0.5 },
    { x: 0.07, y: 0.65 },
    { x: 0.93, y: 0.45 },
];

let server: ReturnType<typeof spawn>;
let baseUrl = "";
let client: SessionClient;
let layouts: LayoutInfo[] = [];

before(async () => {
    server = spawn(PYTHON, ["-m", "fingertap.cli", "serve", "--port", "0"], {
        stdio: ["ignore", "pipe", "pipe"],
    });
    baseUrl = await new Promise<string>((resolve, reject) => {
        const timer = setTimeout(() => reject(new Error("service did not start")), 15000);
        let buffered = "";
        server.stdout!.on("data", (chunk: Buffer) => {
            buffered += chunk.toString();
            const match = buffered.match(/listening on (http:\/\/[^\s]+)/);
            if (match) {
                clearTimeout(timer);
                resolve(match[1]!);
            }
        });
        server.on("exit", (code) => reject(new Error(`service exited early: ${code}`)));
    });
    client = new SessionClient(baseUrl);
    layouts = await client.layouts();
});

after(() => {
    server.kill();
});

function layoutFor(method: string): LayoutInfo {
    const layout = layouts.find((l) => l.method === method);
    assert.ok(layout, `no layout for ${method}`);
    return layout;
}

async function calibrated(method: string): Promise<DemoSession> {
    const session = new DemoSession(client, layoutFor(method));
    for (const tap of GRIP) {
        session.addCalibrationTap(tap);
    }
    assert.ok(session.calibrated);
    await session.start();
    return session;
}

function anchorOf(session: DemoSession, region: string) {
    const anchor = session.anchors().find((a) => a.region === region);
    assert.ok(anchor, `no anchor for ${region}`);
    return anchor;
}

function replayWithCore(logText: string): string {
    const dir = mkdtempSync(join(tmpdir(), "fingertap-demo-"));
    const path = join(dir, "export.jsonl");
    writeFileSync(path, logText);
    const result = spawnSync(PYTHON, ["-m", "fingertap.cli", "replay", path], {
        encoding: "utf-8",
    });
    assert.equal(result.status, 0, result.stderr);
    return (JSON.parse(result.stdout) as { transcript: string }).transcript;
}

test("double digit: typing 2 exports a log the core replays identically", async () => {
    const session = await calibrated("double_digit_fdi");
    const index = anchorOf(session, "Index");
    const enter = anchorOf(session, "Thumb");

    let response = await session.tap(index.x, index.y);
    assert.deepEqual(
        response.events.map((e) => e.utterance),
        ["one"],
    );
    response = await session.tap(index.x, index.y);
    assert.deepEqual(
        response.events.map((e) => e.utterance),
        ["two"],
    );
    response = await session.tap(enter.x, enter.y);
    assert.deepEqual(
        response.events.map((e) => e.utterance),
        ["committed two"],
    );
    assert.equal(session.transcript, "2");

    const replayed = replayWithCore(session.exportLog());
    assert.equal(replayed, session.transcript);
    await session.close();
});

test("text entry: typing S exports a log the core replays identically", async () => {
    const session = await calibrated("fti");
    const group = anchorOf(session, "AboveThumb"); // QRST
    const enter = anchorOf(session, "Thumb");

    for (const expected of ["Q", "R", "S"]) {
        const response = await session.tap(group.x, group.y);
        assert.deepEqual(
            response.events.map((e) => e.utterance),
            [expected],
        );
    }
    await session.tap(enter.x, enter.y);
    assert.equal(session.transcript, "S");

    const replayed = replayWithCore(session.exportLog());
    assert.equal(replayed, session.transcript);
    await session.close();
});

test("taps outside every region produce no utterance but stay in the log", async () => {
    const session = await calibrated("single_digit_fdi");
    const response = await session.tap(0.31, 0.95);
    assert.equal(response.region, null);
    assert.deepEqual(response.events, []);

    const four = anchorOf(session, "Index");
    await session.tap(four.x, four.y);
    assert.equal(session.transcript, "4");

    const replayed = replayWithCore(session.exportLog());
    assert.equal(replayed, "4");
    assert.equal(session.events.length, 2);
    await session.close();
});

test("non-monotone calibration taps prompt a redo", () => {
    const session = new DemoSession(client, layoutFor("fti"));
    const scrambled = [GRIP[0]!, GRIP[2]!, GRIP[1]!, GRIP[3]!, GRIP[4]!];
    let lastPrompt: string | undefined;
    for (const tap of scrambled) {
        lastPrompt = session.addCalibrationTap(tap).redoPrompt;
    }
    assert.ok(lastPrompt && lastPrompt.includes("tap all five again"));
    assert.equal(session.tapCount, 0);
    assert.equal(session.calibrated, false);
});

test("export is blocked before any press", async () => {
    const session = new DemoSession(client, layoutFor("fti"));
    for (const tap of GRIP.slice(0, 4)) {
        session.addCalibrationTap(tap);
    }
    assert.equal(session.canExport(), false);
    assert.throws(() => session.exportLog(), /nothing to export/);
    session.addCalibrationTap(GRIP[4]!);
    await session.start();
    assert.equal(session.canExport(), false); // calibrated but still no events
    assert.throws(() => session.exportLog(), /nothing to export/);
    await session.close();
});

test("event buffer timestamps never decrease and export parses line by line", async () => {
    const session = await calibrated("double_digit_fdi");
    const index = anchorOf(session, "Index");
    for (let i = 0; i < 5; i++) {
        await session.tap(index.x, index.y);
    }
    const ts = session.events.map((e) => e.t);
    for (let i = 1; i < ts.length; i++) {
        assert.ok(ts[i]! >= ts[i - 1]!);
    }
    const lines = session.exportLog().trim().split("\n");
    assert.equal(lines.length, 6);
    const header = JSON.parse(lines[0]!) as { method: string; layout_id: string };
    assert.equal(header.method, "double_digit_fdi");
    assert.equal(header.layout_id, "double-digit-default");
    for (const line of lines.slice(1)) {
        const event = JSON.parse(line) as { t: number; x: number; y: number };
        assert.ok(Number.isInteger(event.t));
    }
    await session.close();
});

test("presses stay strictly ordered even when fired concurrently", async () => {
    const session = await calibrated("double_digit_fdi");
    const index = anchorOf(session, "Index");
    const enter = anchorOf(session, "Thumb");
    // fire without awaiting: the client must still serialize them
    const all = Promise.all([
        session.tap(index.x, index.y),
        session.tap(index.x, index.y),
        session.tap(enter.x, enter.y),
    ]);
    await all;
    assert.equal(session.transcript, "2");
    assert.equal(replayWithCore(session.exportLog()), "2");
    await session.close();
});

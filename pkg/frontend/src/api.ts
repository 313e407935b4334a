/** Typed client for the fingertap session service. */

export type Method = "single_digit_fdi" | "double_digit_fdi" | "fti";

export interface Point {
    x: number;
    y: number;
}

export interface CalibrationUpload {
    fingertips: Point[];
    edge_offset: number;
    radius: number;
}

export interface FeedbackEvent {
    kind: "announce" | "commit_echo" | "error_beep" | "mode_change" | "terminal";
    utterance: string;
}

export interface PressResponse {
    events: FeedbackEvent[];
    transcript: string;
    region: string | null;
}

export interface SyntheticAnchorSpec {
    name: string;
    dx: number;
    dy: number;
    relative_to: string;
}

export interface LayoutInfo {
    id: string;
    method: Method;
    bindings: { region: string; label: string }[];
    synthetic_anchors: SyntheticAnchorSpec[];
}

export class ServiceUnreachable extends Error {}

export class ServiceRejected extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

export class SessionClient {
    constructor(private baseUrl: string) {}

    private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
        let response: Response;
        try {
            response = await fetch(this.baseUrl + path, {
                method,
                headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
                body: body !== undefined ? JSON.stringify(body) : undefined,
            });
        } catch (err) {
            throw new ServiceUnreachable(`service unreachable: ${err}`);
        }
        const text = await response.text();
        if (!response.ok) {
            let message = text;
            try {
                message = (JSON.parse(text) as { error?: string }).error ?? text;
            } catch {
                /* non-JSON error body */
            }
            throw new ServiceRejected(response.status, message);
        }
        const contentType = response.headers.get("Content-Type") ?? "";
        return (contentType.startsWith("application/json") ? JSON.parse(text) : text) as T;
    }

    async layouts(): Promise<LayoutInfo[]> {
        const body = await this.call<{ layouts: LayoutInfo[] }>("GET", "/v1/layouts");
        return body.layouts;
    }

    async createSession(method: Method, profile?: CalibrationUpload): Promise<string> {
        const body = await this.call<{ session_id: string }>("POST", "/v1/session", {
            method,
            ...(profile ? { profile } : {}),
        });
        return body.session_id;
    }

    async press(sessionId: string, payload: { region: string; t?: number } | { x: number; y: number; t?: number }): Promise<PressResponse> {
        return this.call<PressResponse>("POST", `/v1/session/${sessionId}/press`, payload);
    }

    async fetchLog(sessionId: string): Promise<string> {
        return this.call<string>("GET", `/v1/session/${sessionId}/log`);
    }

    async deleteSession(sessionId: string): Promise<void> {
        await this.call<unknown>("DELETE", `/v1/session/${sessionId}`);
    }
}

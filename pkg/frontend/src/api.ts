// Typed client for the local service API. The UI is a pure consumer of
// these endpoints: every number it displays comes from these responses.

export type Stance = 'favored' | 'disfavored';
export type Policy = Record<string, Stance>;

export interface SearchResult {
    url: string;
    title: string;
    snippet: string;
    score: number;
    ascore: number;
    labels: Record<string, number>;
}

export interface SourceRow {
    id: string;
    tier: number;
    reputation: number;
    fetchedAt: string | null;
    lastError: string | null;
}

export interface SearchResponse {
    query: string;
    results: SearchResult[];
    policy: Policy;
    sources: SourceRow[];
}

export interface LabelAssertion {
    source: string;
    tier: number;
    label: string;
    value: 1 | -1;
}

export interface LabelView {
    url: string;
    assertions: LabelAssertion[];
    expectations: Record<string, number>;
}

export interface RefreshOutcome {
    id: string;
    ok: boolean;
    records: number;
    warnings: number;
    error: string | null;
}

export class ApiError extends Error {
    constructor(
        public status: number,
        message: string,
    ) {
        super(message);
        this.name = 'ApiError';
    }
}

async function throwApiError(resp: Response): Promise<never> {
    let message = `${resp.status} ${resp.statusText}`;
    try {
        const body = await resp.json();
        const detail = body?.detail;
        if (typeof detail === 'string') message = detail;
        else if (detail?.detail) message = String(detail.detail);
    } catch {
        // non-JSON error body: keep the status text
    }
    throw new ApiError(resp.status, message);
}

// What the app actually consumes; tests substitute fakes.
export interface Api {
    search(query: string, limit?: number): Promise<SearchResponse>;
    getPolicy(): Promise<Policy>;
    putPolicy(policy: Policy): Promise<Policy>;
    getLabels(url: string): Promise<LabelView>;
    postLabel(url: string, label: string, value: 1 | -1): Promise<{ url: string; label: string; value: number }>;
    getSources(): Promise<SourceRow[]>;
    refreshSources(): Promise<RefreshOutcome[]>;
}

export class ApiClient implements Api {
    // base is '' in the browser (same origin); tests point it at a live service
    constructor(private base: string = '') {}

    private async get<T>(path: string): Promise<T> {
        const resp = await fetch(this.base + path);
        if (!resp.ok) await throwApiError(resp);
        return (await resp.json()) as T;
    }

    private async send<T>(method: string, path: string, body: unknown): Promise<T> {
        const resp = await fetch(this.base + path, {
            method,
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(body),
        });
        if (!resp.ok) await throwApiError(resp);
        return (await resp.json()) as T;
    }

    search(query: string, limit?: number): Promise<SearchResponse> {
        const params = new URLSearchParams({ q: query });
        if (limit !== undefined) params.set('limit', String(limit));
        return this.get(`/api/search?${params}`);
    }

    getPolicy(): Promise<Policy> {
        return this.get('/api/policy');
    }

    putPolicy(policy: Policy): Promise<Policy> {
        return this.send('PUT', '/api/policy', policy);
    }

    getLabels(url: string): Promise<LabelView> {
        return this.get(`/api/labels?${new URLSearchParams({ url })}`);
    }

    postLabel(url: string, label: string, value: 1 | -1): Promise<{ url: string; label: string; value: number }> {
        return this.send('POST', '/api/labels', { url, label, value });
    }

    getSources(): Promise<SourceRow[]> {
        return this.get('/api/sources');
    }

    refreshSources(): Promise<RefreshOutcome[]> {
        return this.send('POST', '/api/sources/refresh', {});
    }
}

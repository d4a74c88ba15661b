/** Typed client for the search service HTTP API. */

export interface SearchMatch {
	doc_id: number;
	start_offset: number;
	tokens: string[];
	scores: number[];
	min_score: number;
	left: string;
	right: string;
}

export interface SearchStats {
	n: number;
	k_total: number;
	soften_seconds: number;
	match_seconds: number;
}

export interface SearchResponse {
	matches: SearchMatch[];
	total_hits: number;
	oov_words: string[];
	stats: SearchStats;
}

export interface ServiceInfo {
	corpus: string;
	n_tokens: number;
	vocab_size: number;
	doc_count: number;
	embedding_dim: number;
	default_alpha: number;
}

export interface SearchParams {
	q: string;
	alpha: number;
	limit: number;
	offset?: number;
}

export class ApiError extends Error {
	constructor(public status: number, detail: string) {
		super(detail);
	}
}

async function getJson<T>(url: string): Promise<T> {
	let response: Response;
	try {
		response = await fetch(url);
	} catch (err) {
		throw new ApiError(0, `service unreachable: ${String(err)}`);
	}
	if (!response.ok) {
		let detail = `HTTP ${response.status}`;
		try {
			const body = (await response.json()) as { detail?: string };
			if (body.detail) detail = body.detail;
		} catch {
			// non-JSON error body; keep the status text
		}
		throw new ApiError(response.status, detail);
	}
	return (await response.json()) as T;
}

/** What the UI needs from the service; SearchClient is the live implementation. */
export interface SearchApi {
	search(params: SearchParams): Promise<SearchResponse>;
}

export class SearchClient implements SearchApi {
	constructor(private readonly baseUrl: string = '') {}

	async info(): Promise<ServiceInfo> {
		return getJson<ServiceInfo>(`${this.baseUrl}/api/info`);
	}

	async search(params: SearchParams): Promise<SearchResponse> {
		const query = new URLSearchParams({
			q: params.q,
			alpha: String(params.alpha),
			limit: String(params.limit)
		});
		if (params.offset) {
			query.set('offset', String(params.offset));
		}
		return getJson<SearchResponse>(`${this.baseUrl}/api/search?${query}`);
	}
}

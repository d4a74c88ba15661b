/** Search state serialized in the URL query string, so results are shareable. */

export interface SearchState {
	q: string;
	alpha: number;
	limit: number;
}

export const DEFAULT_LIMIT = 20;
export const ALPHA_STEP = 0.05;

/** Snap alpha onto the slider grid (0.05 steps) inside (0, 1]. */
export function clampAlpha(value: number): number {
	if (!Number.isFinite(value)) return 1.0;
	const snapped = Math.round(value / ALPHA_STEP) * ALPHA_STEP;
	const bounded = Math.min(1.0, Math.max(ALPHA_STEP, snapped));
	return Number(bounded.toFixed(2));
}

export function parseState(params: URLSearchParams, defaultAlpha: number): SearchState {
	const alphaRaw = params.get('alpha');
	const limitRaw = params.get('limit');
	const limit = limitRaw ? Number.parseInt(limitRaw, 10) : DEFAULT_LIMIT;
	return {
		q: params.get('q') ?? '',
		alpha: alphaRaw === null ? clampAlpha(defaultAlpha) : clampAlpha(Number(alphaRaw)),
		limit: Number.isFinite(limit) && limit >= 1 ? limit : DEFAULT_LIMIT
	};
}

export function stateToParams(state: SearchState): URLSearchParams {
	const params = new URLSearchParams();
	if (state.q) params.set('q', state.q);
	params.set('alpha', state.alpha.toFixed(2));
	if (state.limit !== DEFAULT_LIMIT) params.set('limit', String(state.limit));
	return params;
}

/**
 * Wires the form, slider, and result table to the API client.
 *
 * Only the latest request is honored: every search increments a sequence
 * number and a response is dropped if a newer request has been issued since
 * (out-of-order arrival must not repaint stale results).  All search state
 * lives in the URL query string.
 */

import { ApiError, SearchApi, SearchResponse } from './api.js';
import { debounce } from './debounce.js';
import { clampAlpha, parseState, stateToParams, SearchState } from './state.js';
import { renderError, renderMatches, renderOovBanner, renderStats } from './render.js';

export interface ControllerElements {
	form: HTMLFormElement;
	queryInput: HTMLInputElement;
	alphaSlider: HTMLInputElement;
	alphaValue: HTMLElement;
	resultsBody: HTMLTableSectionElement;
	statsPanel: HTMLElement;
	oovBanner: HTMLElement;
	errorBox: HTMLElement;
	loadMoreButton: HTMLButtonElement;
}

export class SearchController {
	private sequence = 0;
	private shownCount = 0;
	private lastResponse: SearchResponse | null = null;
	state: SearchState;

	constructor(
		private readonly client: SearchApi,
		private readonly el: ControllerElements,
		defaultAlpha: number,
		private readonly updateUrl: (params: URLSearchParams) => void = (params) => {
			const query = params.toString();
			window.history.replaceState(null, '', query ? `?${query}` : window.location.pathname);
		}
	) {
		this.state = parseState(new URLSearchParams(window.location.search), defaultAlpha);
	}

	/** Reflect state into the widgets and run the initial query, if any. */
	async start(): Promise<void> {
		this.el.queryInput.value = this.state.q;
		this.el.alphaSlider.value = String(this.state.alpha);
		this.el.alphaValue.textContent = this.state.alpha.toFixed(2);
		this.bind();
		if (this.state.q.trim()) {
			await this.search();
		}
	}

	private bind(): void {
		this.el.form.addEventListener('submit', (event) => {
			event.preventDefault();
			this.state.q = this.el.queryInput.value;
			void this.search();
		});
		const debouncedTyping = debounce(() => {
			this.state.q = this.el.queryInput.value;
			void this.search();
		}, 300);
		this.el.queryInput.addEventListener('input', debouncedTyping);
		// "input" fires during a drag: only preview the value; "change"
		// fires on release and triggers the re-query.
		this.el.alphaSlider.addEventListener('input', () => {
			this.el.alphaValue.textContent = clampAlpha(Number(this.el.alphaSlider.value)).toFixed(2);
		});
		this.el.alphaSlider.addEventListener('change', () => {
			this.state.alpha = clampAlpha(Number(this.el.alphaSlider.value));
			void this.search();
		});
		this.el.loadMoreButton.addEventListener('click', () => {
			void this.loadMore();
		});
	}

	async search(): Promise<void> {
		const query = this.state.q.trim();
		this.updateUrl(stateToParams(this.state));
		if (!query) {
			this.clearResults();
			return;
		}
		const ticket = ++this.sequence;
		let response: SearchResponse;
		try {
			response = await this.client.search({
				q: query,
				alpha: this.state.alpha,
				limit: this.state.limit
			});
		} catch (err) {
			if (ticket === this.sequence) this.showError(err);
			return;
		}
		if (ticket !== this.sequence) return; // stale: a newer query is in flight
		this.lastResponse = response;
		this.shownCount = response.matches.length;
		renderError(this.el.errorBox, null);
		renderOovBanner(this.el.oovBanner, response.oov_words);
		renderMatches(this.el.resultsBody, response.matches, false);
		renderStats(this.el.statsPanel, response, this.shownCount);
		this.updateLoadMore(response.total_hits);
	}

	async loadMore(): Promise<void> {
		if (!this.lastResponse || this.shownCount >= this.lastResponse.total_hits) return;
		const ticket = ++this.sequence;
		let response: SearchResponse;
		try {
			response = await this.client.search({
				q: this.state.q.trim(),
				alpha: this.state.alpha,
				limit: this.state.limit,
				offset: this.shownCount
			});
		} catch (err) {
			if (ticket === this.sequence) this.showError(err);
			return;
		}
		if (ticket !== this.sequence) return;
		this.lastResponse = response;
		this.shownCount += response.matches.length;
		renderMatches(this.el.resultsBody, response.matches, true);
		renderStats(this.el.statsPanel, response, this.shownCount);
		this.updateLoadMore(response.total_hits);
	}

	private updateLoadMore(totalHits: number): void {
		this.el.loadMoreButton.hidden = this.shownCount >= totalHits;
	}

	private clearResults(): void {
		this.lastResponse = null;
		this.shownCount = 0;
		this.el.resultsBody.replaceChildren();
		this.el.statsPanel.textContent = '';
		renderOovBanner(this.el.oovBanner, []);
		renderError(this.el.errorBox, null);
		this.el.loadMoreButton.hidden = true;
	}

	private showError(err: unknown): void {
		const message =
			err instanceof ApiError ? `Search failed: ${err.message}` : `Search failed: ${String(err)}`;
		this.el.resultsBody.replaceChildren();
		this.el.statsPanel.textContent = '';
		renderOovBanner(this.el.oovBanner, []);
		this.el.loadMoreButton.hidden = true;
		renderError(this.el.errorBox, message);
	}
}

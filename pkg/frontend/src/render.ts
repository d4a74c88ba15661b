/** DOM rendering for KWIC rows, the stats panel, and error/warning states. */

import type { SearchMatch, SearchResponse } from './api.js';

function highlightedTokens(match: SearchMatch): DocumentFragment {
	const fragment = document.createDocumentFragment();
	match.tokens.forEach((token, i) => {
		if (i > 0) fragment.append(' ');
		const mark = document.createElement('mark');
		mark.className = 'tok';
		mark.textContent = token;
		const score = match.scores[i];
		if (score !== undefined) {
			mark.title = score.toFixed(2);
		}
		fragment.append(mark);
	});
	return fragment;
}

export function renderMatchRow(match: SearchMatch): HTMLTableRowElement {
	const row = document.createElement('tr');
	row.className = 'kwic-row';

	const pos = document.createElement('td');
	pos.className = 'pos';
	pos.textContent = `${match.doc_id}:${match.start_offset}`;

	const left = document.createElement('td');
	left.className = 'left';
	left.textContent = match.left;

	const mid = document.createElement('td');
	mid.className = 'match';
	mid.append(highlightedTokens(match));
	mid.title = `min score ${match.min_score.toFixed(2)}`;

	const right = document.createElement('td');
	right.className = 'right';
	right.textContent = match.right;

	row.append(pos, left, mid, right);
	return row;
}

/** Append or replace rows; display order is exactly the response order. */
export function renderMatches(
	tbody: HTMLTableSectionElement,
	matches: SearchMatch[],
	append: boolean
): void {
	if (!append) tbody.replaceChildren();
	for (const match of matches) {
		tbody.append(renderMatchRow(match));
	}
}

export function renderStats(
	panel: HTMLElement,
	response: SearchResponse,
	shownCount: number
): void {
	const { total_hits, stats } = response;
	const parts = [
		`${total_hits} hit${total_hits === 1 ? '' : 's'}`,
		`showing ${shownCount} of ${total_hits}`,
		`K=${stats.k_total}`,
		`soften ${(stats.soften_seconds * 1000).toFixed(2)} ms`,
		`match ${(stats.match_seconds * 1000).toFixed(2)} ms`
	];
	panel.textContent = parts.join(' · ');
}

export function renderOovBanner(banner: HTMLElement, oovWords: string[]): void {
	if (oovWords.length === 0) {
		banner.hidden = true;
		banner.textContent = '';
		return;
	}
	banner.hidden = false;
	banner.textContent = `No embeddings for: ${oovWords.join(', ')}. These words cannot match anything.`;
}

export function renderError(box: HTMLElement, message: string | null): void {
	if (message === null) {
		box.hidden = true;
		box.textContent = '';
		return;
	}
	box.hidden = false;
	box.textContent = message;
}

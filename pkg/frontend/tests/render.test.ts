import { beforeEach, describe, expect, it } from 'vitest';

import type { SearchMatch, SearchResponse } from '../src/api.js';
import { renderError, renderMatchRow, renderMatches, renderOovBanner, renderStats } from '../src/render.js';

function match(overrides: Partial<SearchMatch> = {}): SearchMatch {
	return {
		doc_id: 0,
		start_offset: 1,
		tokens: ['a', 'jazz', 'pianist'],
		scores: [0.96, 1.0, 0.96],
		min_score: 0.96,
		left: 'when',
		right: 'plays funk',
		...overrides
	};
}

function response(matches: SearchMatch[], total = matches.length): SearchResponse {
	return {
		matches,
		total_hits: total,
		oov_words: [],
		stats: { n: 3, k_total: 9, soften_seconds: 0.0001, match_seconds: 0.0002 }
	};
}

describe('renderMatchRow', () => {
	it('highlights each matched token with its score on hover', () => {
		const row = renderMatchRow(match());
		const marks = row.querySelectorAll('mark.tok');
		expect(marks).toHaveLength(3);
		expect(marks[0]?.textContent).toBe('a');
		expect(marks[0]?.getAttribute('title')).toBe('0.96');
		expect(marks[1]?.getAttribute('title')).toBe('1.00');
		expect(row.querySelector('td.pos')?.textContent).toBe('0:1');
		expect(row.querySelector('td.left')?.textContent).toBe('when');
		expect(row.querySelector('td.right')?.textContent).toBe('plays funk');
	});
});

describe('renderMatches', () => {
	let tbody: HTMLTableSectionElement;

	beforeEach(() => {
		document.body.innerHTML = '<table><tbody id="b"></tbody></table>';
		tbody = document.getElementById('b') as HTMLTableSectionElement;
	});

	it('keeps the response order exactly', () => {
		renderMatches(tbody, [match({ start_offset: 1 }), match({ start_offset: 7 })], false);
		const positions = [...tbody.querySelectorAll('td.pos')].map((td) => td.textContent);
		expect(positions).toEqual(['0:1', '0:7']);
	});

	it('replaces rows by default and appends when asked', () => {
		renderMatches(tbody, [match({ start_offset: 1 })], false);
		renderMatches(tbody, [match({ start_offset: 7 })], true);
		expect(tbody.children).toHaveLength(2);
		renderMatches(tbody, [match({ start_offset: 3 })], false);
		expect(tbody.children).toHaveLength(1);
	});
});

describe('renderStats', () => {
	it('reports hit count, shown count, K, and timings', () => {
		const panel = document.createElement('p');
		renderStats(panel, response([match()], 2), 1);
		expect(panel.textContent).toContain('2 hits');
		expect(panel.textContent).toContain('showing 1 of 2');
		expect(panel.textContent).toContain('K=9');
	});

	it('handles an empty result', () => {
		const panel = document.createElement('p');
		renderStats(panel, response([]), 0);
		expect(panel.textContent).toContain('0 hits');
	});
});

describe('banners', () => {
	it('shows unknown words and hides when none', () => {
		const banner = document.createElement('div');
		renderOovBanner(banner, ['zzzz']);
		expect(banner.hidden).toBe(false);
		expect(banner.textContent).toContain('zzzz');
		renderOovBanner(banner, []);
		expect(banner.hidden).toBe(true);
	});

	it('shows and clears the error state', () => {
		const box = document.createElement('div');
		renderError(box, 'Search failed: service unreachable');
		expect(box.hidden).toBe(false);
		expect(box.textContent).toContain('unreachable');
		renderError(box, null);
		expect(box.hidden).toBe(true);
	});
});

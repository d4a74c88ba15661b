import { SearchClient } from './api.js';
import { SearchController } from './controller.js';

function grab<T extends HTMLElement>(id: string): T {
	const el = document.getElementById(id);
	if (!el) throw new Error(`missing element #${id}`);
	return el as T;
}

async function boot(): Promise<void> {
	const client = new SearchClient('');
	const corpusLabel = grab<HTMLElement>('corpus-info');
	let defaultAlpha = 0.55;
	try {
		const info = await client.info();
		defaultAlpha = info.default_alpha;
		corpusLabel.textContent =
			`${info.corpus || 'corpus'}: ${info.n_tokens.toLocaleString()} tokens, ` +
			`${info.vocab_size.toLocaleString()} words, ${info.doc_count.toLocaleString()} documents`;
	} catch {
		corpusLabel.textContent = 'service unavailable';
	}
	const controller = new SearchController(
		client,
		{
			form: grab<HTMLFormElement>('search-form'),
			queryInput: grab<HTMLInputElement>('query'),
			alphaSlider: grab<HTMLInputElement>('alpha'),
			alphaValue: grab<HTMLElement>('alpha-value'),
			resultsBody: grab<HTMLTableSectionElement>('results-body'),
			statsPanel: grab<HTMLElement>('stats'),
			oovBanner: grab<HTMLElement>('oov-banner'),
			errorBox: grab<HTMLElement>('error-box'),
			loadMoreButton: grab<HTMLButtonElement>('load-more')
		},
		defaultAlpha
	);
	await controller.start();
}

document.addEventListener('DOMContentLoaded', () => {
	void boot();
});

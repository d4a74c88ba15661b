/**
 * Returns a debounced wrapper that runs `fn` only after `delay` ms of
 * inactivity. Prevents a request per keystroke while typing a query.
 */
export function debounce<A extends unknown[]>(
	fn: (...args: A) => void,
	delay: number
): (...args: A) => void {
	let timer: ReturnType<typeof setTimeout> | undefined;
	return (...args: A) => {
		if (timer !== undefined) clearTimeout(timer);
		timer = setTimeout(() => fn(...args), delay);
	};
}

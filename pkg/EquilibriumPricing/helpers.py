"""
Small helpers shared by the pricing, sweep and task modules.
"""

from logging import getLogger
from typing import Any, Callable, Iterable, List

logger = getLogger('eqp')


def round_half_even(value: float, places: int = 2) -> str:
    """
    Renders a float as a fixed-point string using round-half-even on the shortest decimal representation of the
    value, which is how a printed table rounds. Negative zero renders as zero.

    Args:
        value (float): The value to render.
        places (int): The number of decimal places.

    Returns:
        str: The rendered value, e.g. '3.01'.

    >>> round_half_even(0.125)
    '0.12'
    >>> round_half_even(0.135)
    '0.14'
    """

    from decimal import Decimal, ROUND_HALF_EVEN

    quantum = Decimal(1).scaleb(-places)
    rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN)

    if rounded.is_zero():
        rounded = abs(rounded)

    return f'{rounded:f}'


def partitioned_map(func: Callable[[Any], Any], items: Iterable[Any], workers: int = 1) -> List[Any]:
    """
    Applies `func` to every item and returns the results in input order. When `workers` is greater than one the items
    are split into contiguous chunks which are evaluated concurrently; the merged output is identical to the serial
    output because chunks are rejoined in order.

    Args:
        func (Callable): A pure function of one item.
        items (Iterable): The items to evaluate.
        workers (int): The number of concurrent workers.

    Returns:
        List: func(item) for each item, in order.
    """

    items = list(items)

    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]

    chunk_size = -(-len(items) // workers)
    chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]

    logger.debug(f'evaluating {len(items)} items in {len(chunks)} chunks across {workers} workers')

    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = executor.map(lambda chunk: [func(item) for item in chunk], chunks)

    return [result for chunk in results for result in chunk]

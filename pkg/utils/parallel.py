"""
utils/parallel.py
Thread-count resolution and an order-preserving parallel map
"""

import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence, TypeVar

from dotenv import load_dotenv

from config.settings import THREADS_ENV_VAR
from utils.errors import ConfigError
from utils.logger import get_logger
from utils.validators import require, validate_non_negative_int

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_thread_count(requested: Optional[int] = None) -> int:
    """
    Number of worker threads

    Args:
        requested: Explicit count; None reads GRADEPIPE_THREADS (after
            loading a .env file if present); 0 means os.cpu_count()

    Returns:
        Worker count >= 1

    Raises:
        ConfigError: Negative or non-integer value
    """
    if requested is None:
        load_dotenv(override=False)
        raw = os.environ.get(THREADS_ENV_VAR, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from e

    require(validate_non_negative_int(requested, "thread count"), ConfigError)

    return requested if requested > 0 else (os.cpu_count() or 1)


def ordered_map(func: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """
    Apply func to every item, results in input order

    The first exception (in input order) is re-raised after all workers finish.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    results: List[Optional[R]] = [None] * len(items)
    errors = {}

    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
        futures = {executor.submit(func, item): index for index, item in enumerate(items)}
        for future in as_completed(futures):
            index = futures[future]
            try:
                results[index] = future.result()
            except Exception as e:
                errors[index] = e

    if errors:
        raise errors[min(errors)]

    logger.debug(f"Processed {len(items)} item(s) on {threads} thread(s)")
    return results


__all__ = ['resolve_thread_count', 'ordered_map']

"""Helper utilities shared by the engines and the command line."""

from functools import wraps
from typing import Callable, TypeVar

from config.logging_config import get_logger
from config.settings import get_settings
from core.exceptions import InsufficientOrderError, TruncationInsufficientError

logger = get_logger(__name__)

T = TypeVar("T")


def order_doubling(
    exceptions: tuple = (InsufficientOrderError,),
):
    """Decorator to retry a truncated computation with doubled order.

    The wrapped function takes an ``order`` keyword. ``max_order`` is consumed by the wrapper;
    both default to the configured values.

    Args:
        exceptions: Tuple of exception types meaning "order too small".

    Returns:
        Decorated function.
    """

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(*args, order: int | None = None, max_order: int | None = None, **kwargs) -> T:
            settings = get_settings()
            current = order or settings.default_order
            limit = max_order or settings.max_order
            last_exception = None

            while current <= limit:
                try:
                    return func(*args, order=current, **kwargs)
                except exceptions as e:
                    last_exception = e
                    logger.warning(
                        f"Order {current} insufficient for {func.__name__}: {e}. "
                        f"Retrying with order {2 * current}..."
                    )
                    current *= 2

            logger.error(f"{func.__name__} not certified up to order {limit}")
            raise TruncationInsufficientError(
                f"{func.__name__} not certified: {last_exception}", order=limit
            )

        return wrapper

    return decorator


"""Exact Fibonacci and Lucas numbers.

Convention: F_{-1} = 1, F_0 = 0, F_1 = F_2 = 1; Lucas_0 = 2, Lucas_1 = 1.
Everything is integer recurrence, never Binet.
"""

from functools import lru_cache


@lru_cache(maxsize=None)
def _fib_pair(n: int) -> tuple[int, int]:
    # (F_n, F_{n+1}) by fast doubling
    if n == 0:
        return (0, 1)
    a, b = _fib_pair(n // 2)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n % 2 else (c, d)


def fibonacci(n: int) -> int:
    if n < -1:
        raise ValueError(f"Fibonacci index must be >= -1, got {n}")
    if n == -1:
        return 1
    return _fib_pair(n)[0]


def lucas(n: int) -> int:
    if n < 0:
        raise ValueError(f"Lucas index must be >= 0, got {n}")
    if n == 0:
        return 2
    return fibonacci(n - 1) + fibonacci(n + 1)


def path_matchings(n: int) -> int:
    """Number of partial matchings of a path with n vertices (n >= 0)."""
    return fibonacci(n + 1)


def cycle_matchings(L: int) -> int:
    """Number of partial matchings of the L-cycle; L=1 and L=2 are degenerate cycles."""
    if L == 1:
        return 1
    if L == 2:
        return 2
    return lucas(L)

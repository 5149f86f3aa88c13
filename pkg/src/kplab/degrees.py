"""Vector arithmetic on degrees in N^k (and signed Z^k for gradings).

Degrees are plain tuples of ints. Boundary-path degrees may carry ``INF``
in a coordinate; ``join``/``meet``/``le`` treat it as larger than any int.
"""

from __future__ import annotations

import math
from functools import reduce

INF = math.inf

Degree = tuple


def zero(k: int) -> tuple:
    return (0,) * k


def unit(k: int, i: int) -> tuple:
    """Basis vector for the (0-based) color ``i``."""
    return tuple(1 if j == i else 0 for j in range(k))


def ones(k: int) -> tuple:
    return (1,) * k


def add(m, n) -> tuple:
    return tuple(a + b for a, b in zip(m, n))


def sub(m, n) -> tuple:
    return tuple(a - b for a, b in zip(m, n))


def neg(m) -> tuple:
    return tuple(-a for a in m)


def le(m, n) -> bool:
    return all(a <= b for a, b in zip(m, n))


def lt_somewhere(m, n) -> bool:
    return any(a < b for a, b in zip(m, n))


def join(*ds) -> tuple:
    return reduce(lambda m, n: tuple(max(a, b) for a, b in zip(m, n)), ds)


def meet(*ds) -> tuple:
    return reduce(lambda m, n: tuple(min(a, b) for a, b in zip(m, n)), ds)


def is_zero(m) -> bool:
    return not any(m)


def support(m) -> frozenset:
    return frozenset(i for i, a in enumerate(m) if a)


def box(n):
    """All degrees m with 0 <= m <= n, in lexicographic order."""
    if not n:
        yield ()
        return
    for head in range(n[0] + 1):
        for rest in box(n[1:]):
            yield (head,) + rest


def parse(text: str, k: int | None = None) -> tuple:
    """Parse ``"1,2"`` (or ``"(1,2)"``) into a degree tuple."""
    body = text.strip().strip("()")
    try:
        out = tuple(int(t) for t in body.split(",")) if body else ()
    except ValueError:
        raise ValueError(f"bad degree {text!r}") from None
    if k is not None and len(out) != k:
        raise ValueError(f"degree {text!r} has {len(out)} coordinates, expected {k}")
    if any(a < 0 for a in out):
        raise ValueError(f"degree {text!r} has a negative coordinate")
    return out


def fmt(m) -> list:
    """JSON-friendly rendering; infinite coordinates become the string "inf"."""
    return ["inf" if a == INF else int(a) for a in m]

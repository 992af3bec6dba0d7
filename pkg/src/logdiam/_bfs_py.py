"""Pure-Python BFS kernel over flat-encoded group elements.

Elements are flat tuples of ints mod q holding one or more square matrix
blocks back to back; multiplication is blockwise matrix product.  This is
the fallback backend; the compiled kernel in _bfs_cy implements the same
contract for elements that pack into a 64-bit key.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

NAME = "python"


def mul_flat(
    a: Sequence[int], b: Sequence[int], q: int, blocks: Sequence[int]
) -> tuple[int, ...]:
    out = []
    off = 0
    for d in blocks:
        for i in range(d):
            row = a[off + i * d : off + (i + 1) * d]
            for j in range(d):
                out.append(
                    sum(row[k] * b[off + k * d + j] for k in range(d)) % q
                )
        off += d * d
    return tuple(out)


def identity_flat(blocks: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in blocks:
        out.extend(1 if i == j else 0 for i in range(d) for j in range(d))
    return tuple(out)


def bfs(
    gens: Sequence[Sequence[int]],
    q: int,
    blocks: Sequence[int],
    start: Sequence[int],
    max_elements: Optional[int] = None,
    stop: Optional[Callable[[tuple[int, ...]], bool]] = None,
):
    """Breadth-first closure from `start` under right multiplication.

    Returns (dist, parent) dicts keyed by flat element; parent maps an
    element to (previous element, generator index), with the lowest
    generator index winning ties.  Raises MemoryError past max_elements.
    If `stop` is given, expansion halts once a dequeued element satisfies
    it (its layer is still completed for minimality).
    """
    gens = [tuple(v % q for v in g) for g in gens]
    start = tuple(v % q for v in start)
    dist = {start: 0}
    parent = {start: None}
    frontier = [start]
    found = stop(start) if stop else False
    while frontier and not found:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = mul_flat(x, g, q, blocks)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (x, gi)
                    if max_elements is not None and len(dist) > max_elements:
                        raise MemoryError(
                            f"BFS exceeded element budget {max_elements}"
                        )
                    nxt.append(y)
                    if stop and stop(y):
                        found = True
        frontier = nxt
    return dist, parent


def read_word(parent: dict, elem) -> list[int]:
    """Generator indices along the BFS tree path from the start element."""
    out = []
    cur = elem
    while parent[cur] is not None:
        prev, gi = parent[cur]
        out.append(gi)
        cur = prev
    out.reverse()
    return out

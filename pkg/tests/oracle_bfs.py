"""Independent brute-force BFS oracle, deliberately naive.

Shares no code with the package BFS: plain tuple-of-rows matrices and a
textbook queue, used to cross-check diameters and group orders.
"""

from collections import deque


def mul(a, b, q):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % q for j in range(n))
        for i in range(n)
    )


def sl2_gens(q):
    mats = [
        ((1, 1), (0, 1)),
        ((1, q - 1), (0, 1)),
        ((1, 0), (1, 1)),
        ((1, 0), (q - 1, 1)),
    ]
    return [tuple(tuple(x % q for x in row) for row in m) for m in mats]


def brute_diameter(q):
    ident = ((1, 0), (0, 1))
    gens = sl2_gens(q)
    dist = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g, q)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return max(dist.values()), len(dist)

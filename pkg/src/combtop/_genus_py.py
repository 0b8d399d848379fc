"""Pure-Python rotation-system search.

Reference implementation of the genus kernel; the compiled variant in
``_genus_c`` must enumerate in exactly this order and return identical
results, which the test suite checks.
"""

from __future__ import annotations

from itertools import permutations, product


def min_genus_search(vertex_darts: list[list[int]], twin: list[int],
                     stop_at: int | None = None) -> tuple[int, int]:
    """Minimum orientable genus over all rotation systems.

    ``vertex_darts`` lists the darts at each vertex (a loop contributes
    both of its darts); ``twin`` maps each dart to its opposite.  The
    first dart of every vertex is held fixed, the rest are permuted in
    lexicographic order, vertices odometer with the last varying fastest.
    Returns ``(genus, systems_examined)``; stops early once ``stop_at``
    is reached.
    """
    num_darts = len(twin)
    num_vertices = len(vertex_darts)
    num_edges = num_darts // 2
    if num_darts == 0:
        return 0, 1
    perm_pools = [
        [(d[0],) + p for p in permutations(d[1:])] for d in vertex_darts
    ]
    succ = [0] * num_darts
    seen = [0] * num_darts
    stamp = 0
    best = None
    systems = 0
    for choice in product(*perm_pools):
        systems += 1
        for order in choice:
            k = len(order)
            for t in range(k):
                succ[order[t]] = order[(t + 1) % k]
        stamp += 1
        faces = 0
        for d0 in range(num_darts):
            if seen[d0] == stamp:
                continue
            faces += 1
            d = d0
            while seen[d] != stamp:
                seen[d] = stamp
                d = succ[twin[d]]
        chi = num_vertices - num_edges + faces
        genus = (2 - chi) // 2
        if best is None or genus < best:
            best = genus
            if stop_at is not None and best <= stop_at:
                return best, systems
    return best, systems

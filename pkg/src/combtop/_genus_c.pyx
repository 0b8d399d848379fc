# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rotation-system search; mirrors ``_genus_py`` exactly."""

from itertools import permutations

from libc.stdlib cimport free, malloc


def min_genus_search(vertex_darts, twin, stop_at=None):
    """Same contract and enumeration order as ``_genus_py.min_genus_search``."""
    cdef int num_darts = len(twin)
    cdef int num_vertices = len(vertex_darts)
    cdef int num_edges = num_darts // 2
    cdef int v, t, k, i
    cdef long stamp = 0
    cdef long systems = 0
    cdef int best = -1
    cdef int stop = 0
    cdef int have_stop = 0
    cdef int faces, d0, d, chi, genus
    cdef int *order
    cdef int done = 0
    cdef int *deg = NULL
    cdef long *pool_len = NULL
    cdef int **pool = NULL
    cdef long *idx = NULL
    cdef int *twin_a = NULL
    cdef int *succ = NULL
    cdef long *seen = NULL

    if num_darts == 0:
        return 0, 1
    if stop_at is not None:
        have_stop = 1
        stop = <int> stop_at

    pools = [[(dl[0],) + p for p in permutations(dl[1:])] for dl in vertex_darts]

    deg = <int *> malloc(num_vertices * sizeof(int))
    pool_len = <long *> malloc(num_vertices * sizeof(long))
    pool = <int **> malloc(num_vertices * sizeof(int *))
    idx = <long *> malloc(num_vertices * sizeof(long))
    twin_a = <int *> malloc(num_darts * sizeof(int))
    succ = <int *> malloc(num_darts * sizeof(int))
    seen = <long *> malloc(num_darts * sizeof(long))
    if (deg == NULL or pool_len == NULL or pool == NULL or idx == NULL
            or twin_a == NULL or succ == NULL or seen == NULL):
        raise MemoryError
    for v in range(num_vertices):
        pool[v] = NULL
    try:
        for i in range(num_darts):
            twin_a[i] = twin[i]
            seen[i] = 0
        for v in range(num_vertices):
            deg[v] = len(vertex_darts[v])
            pool_len[v] = len(pools[v])
            idx[v] = 0
            pool[v] = <int *> malloc(pool_len[v] * deg[v] * sizeof(int))
            if pool[v] == NULL:
                raise MemoryError
            t = 0
            for perm in pools[v]:
                for dd in perm:
                    pool[v][t] = dd
                    t += 1

        while not done:
            systems += 1
            for v in range(num_vertices):
                order = pool[v] + idx[v] * deg[v]
                k = deg[v]
                for t in range(k - 1):
                    succ[order[t]] = order[t + 1]
                succ[order[k - 1]] = order[0]
            stamp += 1
            faces = 0
            for d0 in range(num_darts):
                if seen[d0] == stamp:
                    continue
                faces += 1
                d = d0
                while seen[d] != stamp:
                    seen[d] = stamp
                    d = succ[twin_a[d]]
            chi = num_vertices - num_edges + faces
            genus = (2 - chi) // 2
            if best < 0 or genus < best:
                best = genus
                if have_stop and best <= stop:
                    return best, systems
            v = num_vertices - 1
            while v >= 0:
                idx[v] += 1
                if idx[v] < pool_len[v]:
                    break
                idx[v] = 0
                v -= 1
            if v < 0:
                done = 1
        return best, systems
    finally:
        if pool != NULL:
            for v in range(num_vertices):
                if pool[v] != NULL:
                    free(pool[v])
            free(pool)
        free(pool_len)
        free(deg)
        free(idx)
        free(twin_a)
        free(succ)
        free(seen)

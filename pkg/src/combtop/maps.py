"""Combinatorial maps as a basic permutation on quadricell flags.

An edge contributes four flags; two fixed involutions act by index
arithmetic (flag id = 4*edge + sort, sorts ordered plain/a/b/ab, with
``a`` flipping bit 0 and ``b`` flipping bit 1).  A map is a permutation P
of the flags that never carries a flag into its own a-image, conjugates
to its inverse under ``a``, and generates a transitive group together
with the involutions.  Vertices are P-orbit pairs, edges are quadricells,
faces are the vertices of the dual.

The module also carries the polygon-gluing bridge from surface words,
the exhaustive rotation-system genus search for graphs, and the nested
multi-embedding check over block decompositions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import words as _w
from .errors import (GraphError, GuardExceeded, InternalInconsistencyError,
                     MapError)
from .mingenus import min_genus_search

SORT_NAMES = ("", "a.", "b.", "ab.")
_FLAG_RE = re.compile(r"^(?:(ab|a|b)\.)?([A-Za-z][A-Za-z0-9_]*)$")
_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def flag_alpha(f: int) -> int:
    return f ^ 1


def flag_beta(f: int) -> int:
    return f ^ 2


def _swap_ab(f: int) -> int:
    """Exchange the roles of the two involutions in the flag encoding."""
    return f ^ 3 if f & 3 in (1, 2) else f


@dataclass(frozen=True)
class Vertex:
    key: str
    flags: tuple[int, ...]       # the P-orbit containing the least flag
    paired: tuple[int, ...]      # its a-image orbit


@dataclass(frozen=True)
class Face:
    key: str
    flags: tuple[int, ...]       # one face-tracing orbit, from the least flag
    paired: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.flags)


@dataclass(frozen=True)
class MapCensus:
    nu: int
    eps: int
    phi: int
    chi: int
    orientable: bool
    genus: int

    def __post_init__(self):
        if self.chi != self.nu - self.eps + self.phi:
            raise InternalInconsistencyError("census counts inconsistent")
        if self.orientable:
            if self.chi % 2 or self.genus != (2 - self.chi) // 2:
                raise InternalInconsistencyError("orientable genus inconsistent")
        elif self.genus != 2 - self.chi or self.genus < 1:
            raise InternalInconsistencyError("crosscap number inconsistent")


class CombMap:
    """Validated combinatorial map.  Immutable; all queries are pure."""

    __slots__ = ("edge_names", "perm", "_perm_inv")

    def __init__(self, edge_names: Sequence[str], perm: Sequence[int]):
        self.edge_names = tuple(edge_names)
        self.perm = tuple(perm)
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        self._perm_inv = tuple(inv)

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    @property
    def n_flags(self) -> int:
        return 4 * self.n_edges

    def flag_name(self, f: int) -> str:
        return SORT_NAMES[f & 3] + self.edge_names[f >> 2]

    def flag_id(self, name: str) -> int:
        m = _FLAG_RE.match(name)
        if not m:
            raise MapError(f"malformed flag {name!r}")
        sort = {None: 0, "a": 1, "b": 2, "ab": 3}[m.group(1)]
        try:
            e = self.edge_names.index(m.group(2))
        except ValueError:
            raise MapError(f"unknown edge {m.group(2)!r} in flag {name!r}")
        return 4 * e + sort

    def __eq__(self, other):
        if not isinstance(other, CombMap):
            return NotImplemented
        return self.edge_names == other.edge_names and self.perm == other.perm

    def __hash__(self):
        return hash((self.edge_names, self.perm))

    def __repr__(self):
        return f"<CombMap {self.n_edges} edges>"


def _perm_orbits(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    orbits = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbit = []
        f = start
        while not seen[f]:
            seen[f] = True
            orbit.append(f)
            f = perm[f]
        orbits.append(tuple(orbit))
    return orbits


def new_map(edges: Sequence[str], p_cycles: Iterable[Sequence[int | str]]
            ) -> CombMap:
    """Build and validate a map from edge names and the cycles of P.

    Fixed points must be listed as explicit singleton cycles.  Validation
    reports the first failed axiom: a flag whose P-power reaches its
    a-image, a flag where conjugation by ``a`` does not invert P, or the
    orbit count when the generated group is not transitive.
    """
    edges = list(edges)
    if len(set(edges)) != len(edges):
        raise MapError("duplicate edge names")
    for e in edges:
        if not _NAME_RE.match(e):
            raise MapError(f"bad edge name {e!r}")
    n_flags = 4 * len(edges)
    shell = CombMap(edges, range(n_flags))
    perm = [-1] * n_flags
    covered = [False] * n_flags
    for cyc in p_cycles:
        ids = [f if isinstance(f, int) else shell.flag_id(f) for f in cyc]
        if not ids:
            raise MapError("empty cycle")
        for f in ids:
            if not 0 <= f < n_flags:
                raise MapError(f"flag id {f} out of range")
            if covered[f]:
                raise MapError(f"flag {shell.flag_name(f)} in two cycles")
            covered[f] = True
        for a, b in zip(ids, ids[1:] + ids[:1]):
            perm[a] = b
    missing = [i for i, c in enumerate(covered) if not c]
    if missing:
        raise MapError(
            f"cycles do not cover flag {shell.flag_name(missing[0])}")
    m = CombMap(edges, perm)
    validate_map(m)
    return m


def validate_map(m: CombMap) -> None:
    perm, inv = m.perm, m._perm_inv
    for f in range(m.n_flags):
        if flag_alpha(perm[f]) != inv[flag_alpha(f)]:
            raise MapError(
                f"conjugation axiom fails at flag {m.flag_name(f)}")
    for orbit in _perm_orbits(perm):
        members = set(orbit)
        for f in orbit:
            if flag_alpha(f) in members:
                raise MapError(
                    f"not basic: orbit of {m.flag_name(orbit[0])} meets "
                    f"its a-image")
    orbits = _group_orbit_count(
        m.n_flags, (flag_alpha, flag_beta, lambda f: perm[f],
                    lambda f: inv[f]))
    if orbits != 1:
        raise MapError(f"not transitive: {orbits} orbits under the "
                       f"generated group")


def _group_orbit_count(n: int, gens) -> int:
    seen = [False] * n
    orbits = 0
    for start in range(n):
        if seen[start]:
            continue
        orbits += 1
        stack = [start]
        seen[start] = True
        while stack:
            f = stack.pop()
            for g in gens:
                t = g(f)
                if not seen[t]:
                    seen[t] = True
                    stack.append(t)
    return orbits


def _paired_orbits(m: CombMap, perm: Sequence[int], pair) -> list[tuple]:
    """Split ``perm``'s orbits into pairs {O, pair(O)} and return one
    record per pair: (key_flag, orbit_from_key, paired_orbit)."""
    orbits = _perm_orbits(perm)
    by_flag = {}
    for idx, orbit in enumerate(orbits):
        for f in orbit:
            by_flag[f] = idx
    taken = [False] * len(orbits)
    out = []
    for idx, orbit in enumerate(orbits):
        if taken[idx]:
            continue
        mate = by_flag[pair(orbit[0])]
        if mate == idx or taken[mate]:
            raise InternalInconsistencyError("orbit pairing failed")
        if len(orbits[mate]) != len(orbit):
            raise InternalInconsistencyError("paired orbits differ in length")
        taken[idx] = taken[mate] = True
        key = min(min(orbit), min(orbits[mate]))
        own = orbit if key in orbit else orbits[mate]
        other = orbits[mate] if own is orbit else orbit
        k = own.index(key)
        out.append((key, own[k:] + own[:k], other))
    out.sort(key=lambda r: r[0])
    return out


def vertices(m: CombMap) -> list[Vertex]:
    return [Vertex(m.flag_name(key), orbit, other)
            for key, orbit, other in _paired_orbits(m, m.perm, flag_alpha)]


def edges(m: CombMap) -> list[tuple[str, tuple[int, int, int, int]]]:
    """The quadricells, one per edge name."""
    return [(name, (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3))
            for i, name in enumerate(m.edge_names)]


def dual(m: CombMap) -> CombMap:
    """The dual map: compose P with the ab-involution and exchange the
    roles of the two involutions in the encoding.  An exact involution."""
    perm = [_swap_ab(m.perm[_swap_ab(f) ^ 3]) for f in range(m.n_flags)]
    d = CombMap(m.edge_names, perm)
    validate_map(d)
    return d


def faces(m: CombMap) -> list[Face]:
    face_perm = [m.perm[f ^ 3] for f in range(m.n_flags)]
    return [Face(m.flag_name(key), orbit, other)
            for key, orbit, other in _paired_orbits(m, face_perm, flag_beta)]


def valency(m: CombMap, v: Vertex) -> int:
    if len(v.flags) != len(v.paired):
        raise InternalInconsistencyError("vertex orbit pair lengths differ")
    return len(v.flags)


def orientable(m: CombMap) -> bool:
    perm = m.perm
    inv = m._perm_inv
    orbits = _group_orbit_count(
        m.n_flags, (lambda f: f ^ 3, lambda f: perm[f], lambda f: inv[f]))
    if orbits not in (1, 2):
        raise InternalInconsistencyError(
            f"orientation cover has {orbits} orbits")
    return orbits == 2


def census(m: CombMap) -> MapCensus:
    nu = len(vertices(m))
    eps = m.n_edges
    phi = len(faces(m))
    chi = nu - eps + phi
    ori = orientable(m)
    genus = (2 - chi) // 2 if ori else 2 - chi
    return MapCensus(nu, eps, phi, chi, ori, genus)


# ---------------------------------------------------------------------------
# polygon gluing: words -> one-face maps


def word_to_map(w: _w.SurfaceWord) -> CombMap:
    """Glue the polygon of ``w`` and return the resulting one-face map.

    Polygon side ends become flags; the corner involution composed with
    the side gluing gives the vertex rotation.  The construction verifies
    itself: the distinguished face must read back the input word.
    """
    raw = [(lt.symbol, lt.exp) for lt in w.letters]
    n2 = len(raw)
    symbols = w.symbols()
    edge_idx = {s: i for i, s in enumerate(symbols)}
    occ: dict[str, list[int]] = {}
    for i, (s, _) in enumerate(raw):
        occ.setdefault(s, []).append(i)

    # side-end (position, end) <-> flag id; end 0 = start, 1 = end
    end_to_flag: dict[tuple[int, int], int] = {}
    for s, (i, j) in occ.items():
        e = edge_idx[s]
        opposite = raw[i][1] == -raw[j][1]
        end_to_flag[(i, 0)] = 4 * e
        end_to_flag[(i, 1)] = 4 * e + 2
        if opposite:
            end_to_flag[(j, 1)] = 4 * e + 1
            end_to_flag[(j, 0)] = 4 * e + 3
        else:
            end_to_flag[(j, 0)] = 4 * e + 1
            end_to_flag[(j, 1)] = 4 * e + 3
    flag_to_end = {f: se for se, f in end_to_flag.items()}

    perm = [0] * (2 * n2)
    for f in range(2 * n2):
        pos, end = flag_to_end[f ^ 1]
        if end == 0:
            target = ((pos - 1) % n2, 1)
        else:
            target = ((pos + 1) % n2, 0)
        perm[f] = end_to_flag[target]

    m = CombMap(symbols, perm)
    validate_map(m)

    fs = faces(m)
    if len(fs) != 1:
        raise InternalInconsistencyError(
            f"polygon gluing produced {len(fs)} faces")
    boundary = _w.word_from_pairs(
        raw[flag_to_end[f][0]] for f in fs[0].flags)
    if boundary != w:
        raise InternalInconsistencyError(
            "polygon gluing does not read back the input word")
    return m


# ---------------------------------------------------------------------------
# graphs, genus search, multi-embedding


@dataclass(frozen=True)
class SimpleGraph:
    """Vertices plus unordered edges; loops and parallel edges allowed."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex names")
        vs = set(self.vertices)
        for u, v in self.edges:
            if u not in vs or v not in vs:
                raise GraphError(f"edge ({u},{v}) references unknown vertex")

    @staticmethod
    def build(vertices: Iterable[str],
              edges: Iterable[tuple[str, str]]) -> "SimpleGraph":
        return SimpleGraph(tuple(vertices), tuple(tuple(e) for e in edges))

    def degree(self, v: str) -> int:
        return sum((u == v) + (x == v) for u, x in self.edges)

    def neighbors(self, v: str) -> set[str]:
        out = set()
        for u, x in self.edges:
            if u == v:
                out.add(x)
            if x == v:
                out.add(u)
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        idx = {v: i for i, v in enumerate(self.vertices)}
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, x in self.edges:
            ra, rb = find(idx[u]), find(idx[x])
            if ra != rb:
                parent[rb] = ra
        return len({find(i) for i in range(len(self.vertices))}) == 1


def _rotation_count(g: SimpleGraph) -> int:
    total = 1
    for v in g.vertices:
        d = g.degree(v)
        if d > 1:
            total *= math.factorial(d - 1)
    return total


def _darts(g: SimpleGraph) -> tuple[list[list[int]], list[int]]:
    vertex_darts: dict[str, list[int]] = {v: [] for v in g.vertices}
    twin: list[int] = []
    for k, (u, v) in enumerate(g.edges):
        vertex_darts[u].append(2 * k)
        vertex_darts[v].append(2 * k + 1)
        twin += [2 * k + 1, 2 * k]
    return [vertex_darts[v] for v in g.vertices], twin


def rotation_genus(g: SimpleGraph, guard: int = 10_000_000,
                   stop_at: Optional[int] = None) -> tuple[int, int]:
    """Exhaustive minimum over rotation systems, with the count of
    systems examined.  Raises on disconnected input or a blown guard."""
    if not g.is_connected():
        raise GraphError("graph is not connected")
    total = _rotation_count(g)
    if total > guard:
        raise GuardExceeded(
            f"{total} rotation systems exceed the guard of {guard}")
    if not g.edges:
        return 0, 1
    vertex_darts, twin = _darts(g)
    genus, systems = min_genus_search(vertex_darts, twin, stop_at)
    return genus, systems


def min_orientable_genus(g: SimpleGraph, guard: int = 10_000_000) -> int:
    return rotation_genus(g, guard)[0]


def is_planar(g: SimpleGraph, guard: int = 10_000_000) -> bool:
    return rotation_genus(g, guard, stop_at=0)[0] == 0


@dataclass(frozen=True)
class MultiEmbeddingReport:
    ok: bool
    violation: Optional[str]  # None | "planarity" | "adjacency"
    detail: str

    def __bool__(self):
        return self.ok


def _components(g: SimpleGraph) -> list[SimpleGraph]:
    idx = {v: i for i, v in enumerate(g.vertices)}
    parent = list(range(len(g.vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, x in g.edges:
        ra, rb = find(idx[u]), find(idx[x])
        if ra != rb:
            parent[rb] = ra
    groups: dict[int, list[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(idx[v]), []).append(v)
    out = []
    for vs in groups.values():
        vset = set(vs)
        es = tuple(e for e in g.edges if e[0] in vset)
        out.append(SimpleGraph(tuple(vs), es))
    return out


def check_multi_embedding(g: SimpleGraph, blocks: Sequence[SimpleGraph],
                          guard: int = 10_000_000) -> MultiEmbeddingReport:
    """Decide whether the block decomposition admits a nested embedding
    on a descending chain of spheres: every block planar, and every
    vertex's neighborhood confined to the adjacent layers."""
    if not blocks:
        raise GraphError("need at least one block")
    pool: dict[tuple[str, str], int] = {}
    for u, v in g.edges:
        pool[_norm_edge(u, v)] = pool.get(_norm_edge(u, v), 0) + 1
    for b in blocks:
        for u, v in b.edges:
            key = _norm_edge(u, v)
            if pool.get(key, 0) == 0:
                raise GraphError(
                    f"blocks do not partition the edges: extra edge {key}")
            pool[key] -= 1
    leftover = [k for k, c in pool.items() if c]
    if leftover:
        raise GraphError(
            f"blocks do not partition the edges: uncovered edge {leftover[0]}")
    for i, b in enumerate(blocks):
        for comp in _components(b):
            if rotation_genus(comp, guard, stop_at=0)[0] != 0:
                return MultiEmbeddingReport(
                    False, "planarity", f"block {i + 1} is not planar")
    s = len(blocks)
    vsets = [set(b.vertices) for b in blocks]
    for i in range(s):
        allowed = set(vsets[i])
        if i > 0:
            allowed |= vsets[i - 1]
        if i < s - 1:
            allowed |= vsets[i + 1]
        for v in sorted(vsets[i]):
            for u in sorted(g.neighbors(v)):
                if u not in allowed:
                    return MultiEmbeddingReport(
                        False, "adjacency",
                        f"vertex {v} in block {i + 1} has neighbor {u} "
                        f"outside the adjacent blocks")
    return MultiEmbeddingReport(True, None, "")


def _norm_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


# ---------------------------------------------------------------------------
# file formats


def parse_map_file(text: str) -> CombMap:
    """Line 1: ``edges: e1 e2 ...``; then one parenthesised P-cycle per
    line, flag syntax ``name``, ``a.name``, ``b.name``, ``ab.name``."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MapError("empty map file")
    no, first = lines[0]
    if not first.startswith("edges:"):
        raise MapError(f"line {no}: expected 'edges:' header")
    edge_names = first[len("edges:"):].split()
    if not edge_names:
        raise MapError(f"line {no}: no edges declared")
    cycles = []
    for no, ln in lines[1:]:
        if ln.startswith("mu "):
            continue  # geometry extension lines are handled elsewhere
        if not (ln.startswith("(") and ln.endswith(")")):
            raise MapError(f"line {no}: expected a parenthesised cycle")
        body = ln[1:-1].split()
        if not body:
            raise MapError(f"line {no}: empty cycle")
        cycles.append(body)
    try:
        return new_map(edge_names, cycles)
    except MapError as exc:
        raise MapError(f"invalid map: {exc}") from exc


def format_map_file(m: CombMap) -> str:
    out = ["edges: " + " ".join(m.edge_names)]
    cycles = []
    for orbit in _perm_orbits(m.perm):
        k = orbit.index(min(orbit))
        cycles.append(orbit[k:] + orbit[:k])
    cycles.sort(key=lambda c: c[0])
    for cyc in cycles:
        out.append("(" + " ".join(m.flag_name(f) for f in cyc) + ")")
    return "\n".join(out) + "\n"


def parse_graph_file(text: str) -> SimpleGraph:
    """``vertex u`` lines followed by ``edge u v`` lines."""
    vs: list[str] = []
    es: list[tuple[str, str]] = []
    for no, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "vertex" and len(parts) == 2:
            vs.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            es.append((parts[1], parts[2]))
        elif parts[0] == "block":
            continue  # block lines are read by the multi-embedding parser
        else:
            raise GraphError(f"line {no}: malformed graph line {ln!r}")
    return SimpleGraph.build(vs, es)


def parse_blocks_file(text: str, g: SimpleGraph) -> list[SimpleGraph]:
    """``block i edge u v`` and optional ``block i vertex u`` lines."""
    data: dict[int, tuple[list[str], list[tuple[str, str]]]] = {}
    for no, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] != "block":
            continue
        try:
            i = int(parts[1])
        except (IndexError, ValueError):
            raise GraphError(f"line {no}: bad block index")
        vs, es = data.setdefault(i, ([], []))
        if len(parts) == 5 and parts[2] == "edge":
            es.append((parts[3], parts[4]))
        elif len(parts) == 4 and parts[2] == "vertex":
            vs.append(parts[3])
        else:
            raise GraphError(f"line {no}: malformed block line {ln!r}")
    if not data:
        raise GraphError("no block lines found")
    blocks = []
    for i in sorted(data):
        vs, es = data[i]
        names = list(dict.fromkeys(vs))
        for u, v in es:
            for x in (u, v):
                if x not in names:
                    names.append(x)
        blocks.append(SimpleGraph.build(names, es))
    return blocks

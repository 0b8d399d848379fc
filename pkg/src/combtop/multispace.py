"""Unions of finite groups on a shared universe, and unions of metric
intervals with piecewise contractions.

A multigroup is a list of Cayley tables, each a group on its own subset
of a common element universe, with a pairwise compatibility law checked
over all argument tuples for which every subexpression is defined.  On
top of that sit coset decompositions with exhaustive certification,
normality, and brute-force enumeration of maximal normal series.  The
metric half finds fixed points of declared contractions on a union of
closed intervals by seeded iteration.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (ContractionError, GuardExceeded,
                     InternalInconsistencyError, LagrangeError,
                     MultiGroupError)


class GroupTable:
    """A finite binary operation table; validated to be a group."""

    __slots__ = ("carrier", "_table", "identity", "_inverse")

    def __init__(self, carrier: Sequence[str],
                 table: Mapping[tuple[str, str], str]):
        self.carrier = tuple(carrier)
        if len(set(self.carrier)) != len(self.carrier):
            raise MultiGroupError("duplicate carrier elements")
        self._table = dict(table)
        self.identity: Optional[str] = None
        self._inverse: dict[str, str] = {}
        err = self._check()
        if err:
            raise MultiGroupError(err)

    @staticmethod
    def from_rows(carrier: Sequence[str],
                  rows: Iterable[tuple[str, str, str]]) -> "GroupTable":
        return GroupTable(carrier, {(a, b): c for a, b, c in rows})

    def op(self, a: str, b: str) -> str:
        return self._table[(a, b)]

    def defined(self, a: str, b: str) -> bool:
        return (a, b) in self._table

    def inverse(self, a: str) -> str:
        return self._inverse[a]

    def _check(self) -> Optional[str]:
        cs = set(self.carrier)
        for a in self.carrier:
            for b in self.carrier:
                c = self._table.get((a, b))
                if c is None:
                    return f"operation undefined at ({a},{b})"
                if c not in cs:
                    return f"not closed: {a}*{b} = {c} outside carrier"
        extra = set(self._table) - {(a, b) for a in cs for b in cs}
        if extra:
            a, b = sorted(extra)[0]
            return f"operation defined outside carrier at ({a},{b})"
        for e in self.carrier:
            if all(self.op(e, x) == x == self.op(x, e) for x in self.carrier):
                self.identity = e
                break
        if self.identity is None:
            return "no identity element"
        for a in self.carrier:
            inv = next((b for b in self.carrier
                        if self.op(a, b) == self.identity
                        and self.op(b, a) == self.identity), None)
            if inv is None:
                return f"no inverse for {a}"
            self._inverse[a] = inv
        for a in self.carrier:
            for b in self.carrier:
                for c in self.carrier:
                    if self.op(self.op(a, b), c) != self.op(a, self.op(b, c)):
                        return f"associativity fails at ({a},{b},{c})"
        return None


class _RawTable:
    """Unvalidated table used to surface precise violation reports."""

    def __init__(self, carrier: Sequence[str],
                 table: Mapping[tuple[str, str], str]):
        self.carrier = tuple(carrier)
        self.table = dict(table)


@dataclass(frozen=True)
class MultiGroupReport:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self):
        return self.ok


class MultiGroup:
    """A universe with one group table per part."""

    __slots__ = ("universe", "parts")

    def __init__(self, universe: Sequence[str], parts: Sequence[GroupTable]):
        self.universe = tuple(universe)
        self.parts = tuple(parts)
        if not self.parts:
            raise MultiGroupError("need at least one part")
        carriers = set()
        for p in self.parts:
            carriers.update(p.carrier)
        if carriers != set(self.universe):
            raise MultiGroupError("universe must equal the union of carriers")
        rep = is_multigroup(self)
        if not rep.ok:
            raise MultiGroupError(rep.violation)

    @property
    def m(self) -> int:
        return len(self.parts)


def is_multigroup(candidate) -> MultiGroupReport:
    """Validate a multigroup candidate and report the first violation.

    Each part must be a group on its carrier, and every ordered pair of
    distinct operations must satisfy the mixed associativity law
    ``(x *_i y) *_j z == x *_i (y *_j z)`` over all triples for which
    both sides are fully defined (all operands in the right carriers).
    """
    if isinstance(candidate, MultiGroup):
        parts: list = list(candidate.parts)
    else:
        parts = list(candidate)
    tables: list[GroupTable] = []
    for idx, p in enumerate(parts):
        if isinstance(p, GroupTable):
            tables.append(p)
            continue
        try:
            tables.append(GroupTable(p.carrier, p.table))
        except MultiGroupError as exc:
            return MultiGroupReport(False, f"part {idx + 1}: {exc}")
    for i, ti in enumerate(tables):
        ci = set(ti.carrier)
        for j, tj in enumerate(tables):
            if i == j:
                continue
            cj = set(tj.carrier)
            for x in ti.carrier:
                for y in ti.carrier:
                    xy = ti.op(x, y)
                    if xy not in cj:
                        continue
                    for z in tj.carrier:
                        if y not in cj or z not in cj:
                            continue
                        yz = tj.op(y, z)
                        if yz not in ci:
                            continue
                        if tj.op(xy, z) != ti.op(x, yz):
                            return MultiGroupReport(
                                False,
                                f"compatibility of operations {i + 1} and "
                                f"{j + 1} fails at ({x},{y},{z})")
    return MultiGroupReport(True)


def build_cyclic_multigroup(n: int) -> MultiGroup:
    """The cyclic-shift family: part i carries the additive group of the
    n-element cycle, translated by i (so ``a *_i b = a + b - i`` mod n,
    with identity i).  All parts share the full universe."""
    if n < 1:
        raise MultiGroupError("n must be >= 1")
    universe = [str(k) for k in range(n)]
    parts = []
    for i in range(n):
        table = {(str(a), str(b)): str((a + b - i) % n)
                 for a in range(n) for b in range(n)}
        parts.append(GroupTable(universe, table))
    return MultiGroup(universe, parts)


# ---------------------------------------------------------------------------
# sub-multigroups


class SubMultiGroup:
    """Sub-carriers for a retained subset of the parent's operations."""

    __slots__ = ("parent", "carriers")

    def __init__(self, parent: MultiGroup, carriers: Mapping[int, Iterable[str]]):
        self.parent = parent
        self.carriers = {i: tuple(sorted(set(elems), key=parent.universe.index))
                         for i, elems in carriers.items()}
        if not self.carriers:
            raise MultiGroupError("sub-multigroup retains no operations")
        for i, elems in self.carriers.items():
            if not 0 <= i < parent.m:
                raise MultiGroupError(f"no part {i + 1} in parent")
            part = parent.parts[i]
            cs = set(part.carrier)
            if not elems:
                raise MultiGroupError(f"empty sub-carrier for part {i + 1}")
            for e in elems:
                if e not in cs:
                    raise MultiGroupError(
                        f"{e} not in the carrier of part {i + 1}")
            sub = set(elems)
            for a in elems:
                for b in elems:
                    if part.op(a, b) not in sub:
                        raise MultiGroupError(
                            f"sub-carrier of part {i + 1} not closed at "
                            f"({a},{b})")
            if part.identity not in sub:
                raise MultiGroupError(
                    f"sub-carrier of part {i + 1} misses the identity")
            for a in elems:
                if part.inverse(a) not in sub:
                    raise MultiGroupError(
                        f"sub-carrier of part {i + 1} misses an inverse")

    def union(self) -> set[str]:
        out: set[str] = set()
        for elems in self.carriers.values():
            out.update(elems)
        return out


def sub_multigroup(parent: MultiGroup,
                   carriers: Mapping[int, Iterable[str]]) -> SubMultiGroup:
    return SubMultiGroup(parent, carriers)


def generate_sub_multigroup(parent: MultiGroup,
                            seeds: Mapping[int, Iterable[str]]
                            ) -> SubMultiGroup:
    """Close each part's seed set under the operation and inverses."""
    carriers = {}
    for i, seed in seeds.items():
        part = parent.parts[i]
        current = set(seed) | {part.identity}
        while True:
            nxt = set(current)
            for a in current:
                nxt.add(part.inverse(a))
                for b in current:
                    nxt.add(part.op(a, b))
            if nxt == current:
                break
            current = nxt
        carriers[i] = current
    return SubMultiGroup(parent, carriers)


@dataclass(frozen=True)
class LagrangeResult:
    representatives: tuple[str, ...]
    cosets: tuple[tuple[str, tuple[str, ...]], ...]


def lagrange_decomposition(g: MultiGroup, h: SubMultiGroup) -> LagrangeResult:
    """Greedy coset decomposition with exhaustive certification.

    The coset of x is the union, over the parent operations whose carrier
    contains x, of ``x *_i h`` for all h in the sub-multigroup's element
    union that the operation is defined on.  Representatives are chosen
    greedily in universe order; any overlap is reported as an error with
    a witness, and the union must come back to the whole universe.
    """
    if h.parent is not g:
        raise MultiGroupError("sub-multigroup belongs to a different parent")
    h_union = h.union()
    covered: dict[str, str] = {}
    reps: list[str] = []
    cosets: list[tuple[str, tuple[str, ...]]] = []
    for x in g.universe:
        if x in covered:
            continue
        coset: set[str] = set()
        for part in g.parts:
            cs = set(part.carrier)
            if x not in cs:
                continue
            for hh in h_union:
                if hh in cs:
                    coset.add(part.op(x, hh))
        if x not in coset:
            raise LagrangeError(
                f"coset of {x} does not contain its representative")
        clash = sorted(coset & set(covered))
        if clash:
            w = clash[0]
            raise LagrangeError(
                f"cosets of {covered[w]} and {x} overlap at {w}")
        for e in coset:
            covered[e] = x
        reps.append(x)
        cosets.append((x, tuple(sorted(coset, key=g.universe.index))))
    if set(covered) != set(g.universe):
        raise LagrangeError("cosets do not cover the universe")
    return LagrangeResult(tuple(reps), tuple(cosets))


def is_normal(h: SubMultiGroup, g: MultiGroup) -> bool:
    """Conjugation-closed: for every retained operation, every g in its
    carrier and h in the sub-union on which the product is defined,
    g*h*g^-1 stays inside the sub-union."""
    if h.parent is not g:
        raise MultiGroupError("sub-multigroup belongs to a different parent")
    h_union = h.union()
    for i in h.carriers:
        part = g.parts[i]
        cs = set(part.carrier)
        for gg in part.carrier:
            for hh in h_union:
                if hh not in cs:
                    continue
                if part.op(part.op(gg, hh), part.inverse(gg)) not in h_union:
                    return False
    return True


# ---------------------------------------------------------------------------
# maximal normal series (brute force)


def _subgroups(part: GroupTable, carrier: Sequence[str]) -> list[frozenset]:
    """All subgroups of the restriction of ``part`` to ``carrier``."""
    elems = list(carrier)
    found = {frozenset([part.identity])}
    frontier = [frozenset([part.identity])]
    while frontier:
        base = frontier.pop()
        for x in elems:
            if x in base:
                continue
            current = set(base) | {x}
            while True:
                nxt = set(current)
                for a in current:
                    nxt.add(part.inverse(a))
                    for b in current:
                        nxt.add(part.op(a, b))
                if nxt == current:
                    break
                current = nxt
            if not current <= set(elems):
                continue
            fs = frozenset(current)
            if fs not in found:
                found.add(fs)
                frontier.append(fs)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def maximal_normal_series_lengths(g: MultiGroup, size_guard: int = 12,
                                  structure_guard: int = 200_000) -> set[int]:
    """Lengths of all maximal descending chains of normal sub-structures.

    Chain elements keep every operation and shrink per-part carriers to
    subgroups; each step must be normal in its predecessor and maximal
    among its proper normal sub-structures.  Chains stop at the structure
    whose parts are all trivial.  Returns the set of observed lengths,
    which the uniqueness theorem predicts to be a singleton.
    """
    if len(g.universe) > size_guard:
        raise GuardExceeded(
            f"universe of {len(g.universe)} exceeds guard {size_guard}")
    per_part = [_subgroups(p, p.carrier) for p in g.parts]
    total = 1
    for subs in per_part:
        total *= len(subs)
        if total > structure_guard:
            raise GuardExceeded("too many candidate sub-structures")

    def subs_within(structure: tuple[frozenset, ...]) -> list[tuple]:
        out = []
        for i, p in enumerate(g.parts):
            out.append([s for s in per_part[i] if s <= structure[i]])
        combos: list[tuple] = [()]
        for options in out:
            combos = [c + (s,) for c in combos for s in options]
        return combos

    def union_of(structure: tuple[frozenset, ...]) -> set[str]:
        u: set[str] = set()
        for s in structure:
            u |= s
        return u

    def normal_in(sub: tuple[frozenset, ...],
                  sup: tuple[frozenset, ...]) -> bool:
        h_union = union_of(sub)
        for i, p in enumerate(g.parts):
            for gg in sup[i]:
                for hh in h_union:
                    if hh not in sup[i]:
                        continue
                    if p.op(p.op(gg, hh), p.inverse(gg)) not in h_union:
                        return False
        return True

    memo: dict[tuple, set[int]] = {}

    def lengths(structure: tuple[frozenset, ...]) -> set[int]:
        if structure in memo:
            return memo[structure]
        proper_normal = [s for s in subs_within(structure)
                         if s != structure and normal_in(s, structure)]
        maximal = [s for s in proper_normal
                   if not any(_strictly_between(s, t, structure)
                              for t in proper_normal)]
        if not maximal:
            memo[structure] = {0}
            return {0}
        out: set[int] = set()
        for s in maximal:
            out |= {1 + l for l in lengths(s)}
        memo[structure] = out
        return out

    top = tuple(frozenset(p.carrier) for p in g.parts)
    return lengths(top)


def _strictly_between(s: tuple, t: tuple, top: tuple) -> bool:
    if s == t or t == top:
        return False
    le_st = all(a <= b for a, b in zip(s, t))
    lt = le_st and s != t
    return lt


# ---------------------------------------------------------------------------
# multi-metric spaces and contraction fixed points


@dataclass(frozen=True)
class MetricInterval:
    lo: float
    hi: float
    scale: float = 1.0

    def __post_init__(self):
        if self.hi < self.lo:
            raise ContractionError("empty interval")
        if self.scale <= 0:
            raise ContractionError("metric scale must be positive")

    def contains(self, x: float, slack: float = 1e-9) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def distance(self, x: float, y: float) -> float:
        return self.scale * abs(x - y)


@dataclass(frozen=True)
class MultiMetricSpace:
    parts: tuple[MetricInterval, ...]

    def __post_init__(self):
        if not self.parts:
            raise ContractionError("need at least one part")

    @property
    def m(self) -> int:
        return len(self.parts)

    def part_of(self, x: float) -> Optional[int]:
        for i, p in enumerate(self.parts):
            if p.contains(x):
                return i
        return None


@dataclass(frozen=True)
class PiecewiseAffineMap:
    """x -> a_i * x + b_i on the i-th interval; the declared contraction
    factor of part i is |a_i|."""

    coefficients: tuple[tuple[float, float], ...]

    def factor(self, i: int) -> float:
        return abs(self.coefficients[i][0])

    def apply(self, space: MultiMetricSpace, x: float) -> float:
        i = space.part_of(x)
        if i is None:
            raise ContractionError(f"point {x!r} escaped the union")
        a, b = self.coefficients[i]
        return a * x + b


def fixed_points(space: MultiMetricSpace, t: PiecewiseAffineMap,
                 seeds_per_part: int = 5, tol: float = 1e-12,
                 max_iter: int = 1_000_000, samples: int = 1000,
                 seed: int = 0) -> list[float]:
    """Distinct fixed points of a declared contraction on the union.

    The declared per-part factors are spot-checked on sampled pairs, then
    the map is iterated from a uniform seed grid on every part until
    successive distance drops below ``tol``.  Limits within ten
    tolerances of each other are merged.  The count always lands between
    one and the number of parts.
    """
    if tol <= 0:
        raise ContractionError("tolerance must be positive")
    if len(t.coefficients) != space.m:
        raise ContractionError("map must declare one piece per part")
    rng = random.Random(seed)
    for i, part in enumerate(space.parts):
        q = t.factor(i)
        if q >= 1:
            raise ContractionError(
                f"declared factor {q} on part {i + 1} is not below 1")
        for _ in range(samples):
            x = rng.uniform(part.lo, part.hi)
            y = rng.uniform(part.lo, part.hi)
            tx, ty = t.apply(space, x), t.apply(space, y)
            if space.part_of(tx) is None or space.part_of(ty) is None:
                raise ContractionError(
                    f"image of part {i + 1} leaves the union")
            if x != y and abs(tx - ty) > q * abs(x - y) + 1e-12:
                raise ContractionError(
                    f"contraction violated on part {i + 1} at ({x}, {y})")
    found: list[float] = []
    for part in space.parts:
        if seeds_per_part < 2 or part.hi == part.lo:
            grid = [(part.lo + part.hi) / 2]
        else:
            step = (part.hi - part.lo) / (seeds_per_part - 1)
            grid = [part.lo + k * step for k in range(seeds_per_part)]
        for x in grid:
            prev = x
            for _ in range(max_iter):
                nxt = t.apply(space, prev)
                if abs(nxt - prev) < tol:
                    prev = nxt
                    break
                prev = nxt
            else:
                raise ContractionError("iteration budget exceeded")
            if abs(t.apply(space, prev) - prev) >= tol:
                raise ContractionError("iterate did not settle")
            if not any(abs(prev - p) <= 10 * tol for p in found):
                found.append(prev)
    found.sort()
    if not 1 <= len(found) <= space.m:
        raise InternalInconsistencyError(
            f"fixed point count {len(found)} outside [1, {space.m}]")
    return found


# ---------------------------------------------------------------------------
# file formats


def parse_multigroup_file(text: str
                          ) -> tuple[MultiGroup, Optional[SubMultiGroup]]:
    """``universe ...``, then per part ``part i carrier ...`` followed by
    ``row a b c`` lines; optional ``sub i e1 e2 ...`` lines define a
    sub-multigroup."""
    universe: Optional[list[str]] = None
    raw_parts: dict[int, tuple[list[str], dict]] = {}
    subs: dict[int, list[str]] = {}
    current: Optional[int] = None
    for no, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "universe":
            universe = parts[1:]
        elif parts[0] == "part":
            if len(parts) < 4 or parts[2] != "carrier":
                raise MultiGroupError(f"line {no}: malformed part line")
            current = int(parts[1]) - 1
            raw_parts[current] = (parts[3:], {})
        elif parts[0] == "row":
            if current is None:
                raise MultiGroupError(f"line {no}: row before any part")
            if len(parts) != 4:
                raise MultiGroupError(f"line {no}: row needs three elements")
            raw_parts[current][1][(parts[1], parts[2])] = parts[3]
        elif parts[0] == "sub":
            subs.setdefault(int(parts[1]) - 1, []).extend(parts[2:])
        else:
            raise MultiGroupError(f"line {no}: unknown directive {parts[0]!r}")
    if universe is None:
        raise MultiGroupError("missing universe line")
    if not raw_parts:
        raise MultiGroupError("no parts defined")
    tables = []
    for i in sorted(raw_parts):
        carrier, table = raw_parts[i]
        try:
            tables.append(GroupTable(carrier, table))
        except MultiGroupError as exc:
            raise MultiGroupError(f"part {i + 1}: {exc}") from exc
    g = MultiGroup(universe, tables)
    h = SubMultiGroup(g, subs) if subs else None
    return g, h


_PART_RE = re.compile(
    r"^part\s+(\d+)\s*:\s*(-?[\d./]+)\s*\*\s*x\s*"
    r"(?:([+-])\s*([\d./]+))?\s+on\s+\[\s*(-?[\d./]+)\s*,\s*(-?[\d./]+)\s*\]$")


def _num(s: str) -> float:
    return float(Fraction(s))


def parse_fixpoint_file(text: str
                        ) -> tuple[MultiMetricSpace, PiecewiseAffineMap]:
    """Affine-map descriptors, one line per part:
    ``part i: a*x+b on [lo,hi]``."""
    entries: dict[int, tuple[float, float, float, float]] = {}
    for no, ln in enumerate(text.splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        m = _PART_RE.match(ln)
        if not m:
            raise ContractionError(f"line {no}: malformed part descriptor")
        i = int(m.group(1)) - 1
        a = _num(m.group(2))
        b = _num(m.group(4)) if m.group(4) else 0.0
        if m.group(3) == "-":
            b = -b
        entries[i] = (a, b, _num(m.group(5)), _num(m.group(6)))
    if not entries:
        raise ContractionError("no part descriptors found")
    if sorted(entries) != list(range(len(entries))):
        raise ContractionError("part indices must be 1..m without gaps")
    parts = tuple(MetricInterval(entries[i][2], entries[i][3])
                  for i in sorted(entries))
    coeffs = tuple((entries[i][0], entries[i][1]) for i in sorted(entries))
    return MultiMetricSpace(parts), PiecewiseAffineMap(coeffs)

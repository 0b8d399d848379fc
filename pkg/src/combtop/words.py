"""Cyclic polygon words over a signed alphabet.

A word encodes a compact surface as a polygon whose sides are glued in
pairs: every symbol occurs exactly twice, with exponent +1 or -1 per
occurrence.  The module provides parsing, the five elementary rewrites
(cancellation, the two pair merges and the two transpositions), an Euler
characteristic computed by corner tracing, orientability, classification
against the standard sphere / torus-sum / crosscap-sum forms, and a
rewrite-based normalizer that emits a replayable move trace.

Classification is invariant-based (Euler characteristic plus
orientability); normalization is rewrite-based.  The two must agree, and
the test suite holds them against each other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Iterable, Optional, Sequence

from .errors import InternalInconsistencyError, MoveError, WordError

_TOKEN_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(-?)$")

MOVES = ("O1", "O2i", "O2ii", "O3i", "O3ii")
FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class SignedLetter:
    symbol: str
    exp: int

    def __post_init__(self):
        if not self.symbol:
            raise WordError("empty symbol")
        if self.exp not in (1, -1):
            raise WordError(f"exponent must be +1 or -1, got {self.exp!r}")

    def inverse(self) -> "SignedLetter":
        return SignedLetter(self.symbol, -self.exp)

    def __str__(self) -> str:
        return self.symbol + ("-" if self.exp < 0 else "")


class SurfaceWord:
    """A cyclic word in which every symbol occurs exactly twice.

    Storage is a linear tuple with cyclic semantics: rotations are equal,
    and equality additionally ignores symbol names (lexicographically
    least rotation after renaming in first-appearance order).
    """

    __slots__ = ("letters", "_key")

    def __init__(self, letters: Iterable[SignedLetter]):
        letters = tuple(letters)
        if not letters:
            raise WordError("empty word")
        if len(letters) % 2:
            raise WordError(f"odd length {len(letters)}")
        counts: dict[str, int] = {}
        for lt in letters:
            counts[lt.symbol] = counts.get(lt.symbol, 0) + 1
        bad = {s: c for s, c in counts.items() if c != 2}
        if bad:
            sym, c = sorted(bad.items())[0]
            raise WordError(f"symbol {sym!r} appears {c} time(s), expected 2")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_key", None)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        return " ".join(str(lt) for lt in self.letters)

    def __repr__(self) -> str:
        return f"SurfaceWord({str(self)!r})"

    def canonical_key(self) -> tuple:
        """Rotation- and renaming-invariant key used for equality."""
        if self._key is None:
            object.__setattr__(self, "_key", _canonical_key(_raw(self)))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, SurfaceWord):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def symbols(self) -> list[str]:
        seen: list[str] = []
        for lt in self.letters:
            if lt.symbol not in seen:
                seen.append(lt.symbol)
        return seen


@dataclass(frozen=True)
class StandardForm:
    """One of the classification targets: sphere, torus sum, crosscap sum."""

    kind: str  # "sphere" | "orientable" | "nonorientable"
    genus: int

    def __post_init__(self):
        if self.kind == "sphere":
            if self.genus != 0:
                raise WordError("sphere has genus 0")
        elif self.kind in ("orientable", "nonorientable"):
            if self.genus < 1:
                raise WordError(f"{self.kind} form needs genus >= 1")
        else:
            raise WordError(f"unknown form kind {self.kind!r}")

    @staticmethod
    def sphere() -> "StandardForm":
        return StandardForm("sphere", 0)

    @staticmethod
    def orientable(genus: int) -> "StandardForm":
        return StandardForm("orientable", genus)

    @staticmethod
    def non_orientable(crosscaps: int) -> "StandardForm":
        return StandardForm("nonorientable", crosscaps)

    @property
    def euler(self) -> int:
        if self.kind == "sphere":
            return 2
        if self.kind == "orientable":
            return 2 - 2 * self.genus
        return 2 - self.genus

    def __str__(self) -> str:
        if self.kind == "sphere":
            return "sphere"
        return f"{self.kind}({self.genus})"


@dataclass(frozen=True)
class MoveApplication:
    """One rewrite: the move name, a direction, and its position data.

    Position data (indices into the linear representation of the word the
    move is applied to, cyclic where needed):

    * O1 forward  ``(i,)``                -- cancel the pair at (i, i+1)
    * O1 backward ``(i, e)``              -- insert a fresh pair z^e z^-e at i
    * O2i/O2ii forward ``(i, j)``         -- merge the two-letter sites at
      (i, i+1) and (j, j+1) into a single fresh letter per site
    * O2i/O2ii backward ``(p, q, ea, eb)``-- split the pair occurrences at
      p and q into two fresh letters with exponents (ea, eb)
    * O3i/O3ii ``(p, q, k1, k2)``         -- transpose around the pair at
      (p, q); k1 splits the inside arc, k2 the outside arc
    """

    move: str
    direction: str
    data: tuple

    def __post_init__(self):
        if self.move not in MOVES:
            raise MoveError(f"unknown move {self.move!r}")
        if self.direction not in (FORWARD, BACKWARD):
            raise MoveError(f"unknown direction {self.direction!r}")

    def code(self) -> str:
        d = "f" if self.direction == FORWARD else "b"
        return f"{self.move}:{d}:{','.join(str(x) for x in self.data)}"


@dataclass(frozen=True)
class NormalizeResult:
    form: StandardForm
    moves: tuple[MoveApplication, ...]
    complete: bool


# ---------------------------------------------------------------------------
# raw-list helpers: algorithms work on lists of (symbol, exp) pairs


def _raw(w: SurfaceWord) -> list[tuple[str, int]]:
    return [(lt.symbol, lt.exp) for lt in w.letters]


def _wrap(raw: Sequence[tuple[str, int]]) -> SurfaceWord:
    return SurfaceWord(SignedLetter(s, e) for s, e in raw)


def _canonical_key(raw: Sequence[tuple[str, int]]) -> tuple:
    best = None
    n = len(raw)
    for r in range(n):
        names: dict[str, int] = {}
        seq = []
        for i in range(n):
            s, e = raw[(r + i) % n]
            if s not in names:
                names[s] = len(names)
            seq.append((names[s], e))
        t = tuple(seq)
        if best is None or t < best:
            best = t
    return best


def _arc(raw: Sequence, start: int, length: int) -> list:
    n = len(raw)
    return [raw[(start + k) % n] for k in range(length)]


def _rev_inv(seg: Sequence[tuple[str, int]]) -> list[tuple[str, int]]:
    return [(s, -e) for s, e in reversed(seg)]


def _positions(raw: Sequence[tuple[str, int]]) -> dict[str, list[int]]:
    occ: dict[str, list[int]] = {}
    for i, (s, _) in enumerate(raw):
        occ.setdefault(s, []).append(i)
    return occ


def _fresh_symbols(raw: Sequence[tuple[str, int]], k: int) -> list[str]:
    used = {s for s, _ in raw}
    out = []
    for i in count():
        name = f"c{i}"
        if name not in used:
            out.append(name)
            if len(out) == k:
                break
    return out


# ---------------------------------------------------------------------------
# parsing and construction


def parse_word(text: str) -> SurfaceWord:
    """Parse whitespace-separated tokens; ``x`` is x^+1, ``x-`` is x^-1."""
    tokens = text.split()
    if not tokens:
        raise WordError("empty input")
    letters = []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if not m:
            raise WordError(f"malformed token {tok!r}")
        letters.append(SignedLetter(m.group(1), -1 if m.group(2) else 1))
    return SurfaceWord(letters)


def word_from_pairs(pairs: Iterable[tuple[str, int]]) -> SurfaceWord:
    return _wrap(list(pairs))


def standard_word(form: StandardForm) -> SurfaceWord:
    """The canonical word of a standard form.

    Sphere: ``a a-``; orientable genus n: ``a1 b1 a1- b1- ...``;
    non-orientable with k crosscaps: ``a1 a1 a2 a2 ...``.
    """
    if form.kind == "sphere":
        return parse_word("a a-")
    raw: list[tuple[str, int]] = []
    if form.kind == "orientable":
        for i in range(1, form.genus + 1):
            raw += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    else:
        for i in range(1, form.genus + 1):
            raw += [(f"a{i}", 1), (f"a{i}", 1)]
    return _wrap(raw)


# ---------------------------------------------------------------------------
# invariant oracles


def _corner_labels(raw: Sequence[tuple[str, int]]) -> list[int]:
    """Corner classes under edge identification; corner i sits between
    positions i-1 and i.  Two corners share a class iff the gluing maps
    one onto the other."""
    n = len(raw)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for idxs in _positions(raw).values():
        i, j = idxs
        if raw[i][1] == raw[j][1]:
            union(i, j)
            union((i + 1) % n, (j + 1) % n)
        else:
            union(i, (j + 1) % n)
            union((i + 1) % n, j)
    return [find(i) for i in range(n)]


def corner_trace_euler(w: SurfaceWord) -> int:
    """Euler characteristic of the glued polygon: corner classes minus
    symbol count plus one face.  Independent of the rewrite machinery."""
    raw = _raw(w)
    v = len(set(_corner_labels(raw)))
    chi = v - len(raw) // 2 + 1
    if chi > 2:
        raise InternalInconsistencyError(f"chi={chi} > 2 for {w!r}")
    return chi


def is_orientable_word(w: SurfaceWord) -> bool:
    """True iff every symbol occurs once with each exponent."""
    for idxs in _positions(_raw(w)).values():
        i, j = idxs
        if w.letters[i].exp == w.letters[j].exp:
            return False
    return True


def classify(w: SurfaceWord) -> StandardForm:
    """Invariant-based classification from Euler characteristic and
    orientability."""
    chi = corner_trace_euler(w)
    orientable = is_orientable_word(w)
    if chi == 2:
        if not orientable:
            raise InternalInconsistencyError("non-orientable word with chi=2")
        return StandardForm.sphere()
    if orientable:
        if chi % 2:
            raise InternalInconsistencyError(f"orientable word with odd chi={chi}")
        return StandardForm.orientable((2 - chi) // 2)
    return StandardForm.non_orientable(2 - chi)


def connected_sum(w1: SurfaceWord, w2: SurfaceWord) -> SurfaceWord:
    """Concatenate after renaming the second word's symbols away from the
    first's.  The result's Euler characteristic is chi1 + chi2 - 2."""
    used = {lt.symbol for lt in w1.letters}
    rename: dict[str, str] = {}
    for sym in w2.symbols():
        if sym not in used:
            rename[sym] = sym
            used.add(sym)
        else:
            for k in count(2):
                cand = f"{sym}_{k}"
                if cand not in used:
                    rename[sym] = cand
                    used.add(cand)
                    break
    raw = _raw(w1) + [(rename[s], e) for s, e in _raw(w2)]
    return _wrap(raw)


# ---------------------------------------------------------------------------
# move application


def apply_move(w: SurfaceWord, m: MoveApplication) -> SurfaceWord:
    """Apply one elementary rewrite, validating the pattern first.

    The result is emitted in a deterministic linear representation so
    that recorded traces replay exactly.
    """
    raw = _raw(w)
    n = len(raw)

    def at(i: int) -> tuple[str, int]:
        return raw[i % n]

    def check(cond: bool, msg: str) -> None:
        if not cond:
            raise MoveError(f"{m.move} {m.direction} at {m.data}: {msg}")

    if m.move == "O1" and m.direction == FORWARD:
        (i,) = m.data
        check(n > 2, "cancellation would empty the word")
        s, e = at(i)
        s2, e2 = at(i + 1)
        check(s == s2 and e == -e2, "no cancelling pair here")
        return _wrap(_arc(raw, i + 2, n - 2))

    if m.move == "O1" and m.direction == BACKWARD:
        i, e = m.data
        check(0 <= i <= n, "insertion index out of range")
        check(e in (1, -1), "bad exponent")
        (z,) = _fresh_symbols(raw, 1)
        return _wrap(raw[:i] + [(z, e), (z, -e)] + raw[i:])

    if m.move in ("O2i", "O2ii") and m.direction == FORWARD:
        i, j = m.data
        sites = {i % n, (i + 1) % n, j % n, (j + 1) % n}
        check(len(sites) == 4, "overlapping sites")
        x, y = at(i), at(i + 1)
        check(x[0] != y[0], "site letters must be distinct symbols")
        if m.move == "O2i":
            check(at(j) == (y[0], -y[1]) and at(j + 1) == (x[0], -x[1]),
                  "partner site is not the reversed inverse pair")
        else:
            check(at(j) == x and at(j + 1) == y,
                  "partner site is not an identical pair")
        (c,) = _fresh_symbols(raw, 1)
        a_len = (i - j - 2) % n
        b_len = (j - i - 2) % n
        seg_a = _arc(raw, j + 2, a_len)
        seg_b = _arc(raw, i + 2, b_len)
        second = (c, -1) if m.move == "O2i" else (c, 1)
        return _wrap(seg_a + [(c, 1)] + seg_b + [second])

    if m.move in ("O2i", "O2ii") and m.direction == BACKWARD:
        p, q, ea, eb = m.data
        check(p % n != q % n, "pair positions must differ")
        check(ea in (1, -1) and eb in (1, -1), "bad exponents")
        sp, ep = at(p)
        sq, eq = at(q)
        check(sp == sq, "positions do not hold the same symbol")
        if m.move == "O2i":
            check(ep == -eq, "pair must be mixed-exponent")
        else:
            check(ep == eq, "pair must be same-exponent")
        a, b = _fresh_symbols(raw, 2)
        seg_a = _arc(raw, q + 1, (p - q - 1) % n)
        seg_b = _arc(raw, p + 1, (q - p - 1) % n)
        if m.move == "O2i":
            return _wrap(seg_a + [(a, ea), (b, eb)] + seg_b
                         + [(b, -eb), (a, -ea)])
        return _wrap(seg_a + [(a, ea), (b, eb)] + seg_b + [(a, ea), (b, eb)])

    if m.move in ("O3i", "O3ii"):
        p, q, k1, k2 = m.data
        check(p % n != q % n, "pair positions must differ")
        sp, ep = at(p)
        sq, eq = at(q)
        check(sp == sq, "positions do not hold the same symbol")
        if m.move == "O3i":
            check(ep == -eq, "transposition O3i needs a mixed-exponent pair")
        else:
            check(ep == eq, "transposition O3ii needs a same-exponent pair")
        inside = _arc(raw, p + 1, (q - p - 1) % n)
        outside = _arc(raw, q + 1, (p - q - 1) % n)
        check(0 <= k1 <= len(inside), "inside split out of range")
        check(0 <= k2 <= len(outside), "outside split out of range")
        if m.direction == FORWARD:
            b_seg, c_seg = inside[:k1], inside[k1:]
            d_seg, a_seg = outside[:k2], outside[k2:]
            if m.move == "O3i":
                return _wrap(b_seg + [at(p)] + a_seg + d_seg + [at(q)] + c_seg)
            return _wrap(b_seg + [at(p)] + a_seg + _rev_inv(c_seg)
                         + [at(q)] + _rev_inv(d_seg))
        # backward: invert the forward assembly
        if m.move == "O3i":
            a_seg, d_seg = inside[:k1], inside[k1:]
            c_seg, b_seg = outside[:k2], outside[k2:]
            return _wrap([at(p)] + b_seg + c_seg + [at(q)] + d_seg + a_seg)
        a_seg, c_rev = inside[:k1], inside[k1:]
        d_rev, b_seg = outside[:k2], outside[k2:]
        return _wrap([at(p)] + b_seg + _rev_inv(c_rev) + [at(q)]
                     + _rev_inv(d_rev) + a_seg)

    raise MoveError(f"unsupported move {m.move} {m.direction}")


def inverse_application(m: MoveApplication, w: SurfaceWord) -> MoveApplication:
    """The counterpart that undoes ``m`` when applied to ``apply_move(w, m)``
    (up to rotation and renaming)."""
    raw = _raw(w)
    n = len(raw)
    if m.move == "O1":
        if m.direction == FORWARD:
            (i,) = m.data
            return MoveApplication("O1", BACKWARD, (n - 2, raw[i % n][1]))
        i, _e = m.data
        return MoveApplication("O1", FORWARD, (i,))

    if m.move in ("O2i", "O2ii"):
        if m.direction == FORWARD:
            i, j = m.data
            a_len = (i - j - 2) % n
            b_len = (j - i - 2) % n
            p, q = a_len, a_len + 1 + b_len
            ea, eb = raw[i % n][1], raw[(i + 1) % n][1]
            return MoveApplication(m.move, BACKWARD, (p, q, ea, eb))
        p, q, _ea, _eb = m.data
        a_len = (p - q - 1) % n
        b_len = (q - p - 1) % n
        return MoveApplication(m.move, FORWARD, (a_len, a_len + 2 + b_len))

    p, q, k1, k2 = m.data
    in_len = (q - p - 1) % n
    out_len = (p - q - 1) % n
    if m.direction == FORWARD:
        b_len, c_len = k1, in_len - k1
        d_len, a_len = k2, out_len - k2
        return MoveApplication(
            m.move, BACKWARD,
            (b_len, b_len + 1 + a_len + d_len, a_len, c_len))
    a_len, rest = k1, in_len - k1
    mid, b_len = k2, out_len - k2
    return MoveApplication(m.move, FORWARD, (0, 1 + b_len + rest, b_len, mid))


def replay(w: SurfaceWord, moves: Iterable[MoveApplication]) -> SurfaceWord:
    cur = w
    for m in moves:
        cur = apply_move(cur, m)
    return cur


# ---------------------------------------------------------------------------
# pattern scanners


def _find_cancel(raw: Sequence[tuple[str, int]]) -> Optional[int]:
    n = len(raw)
    for i in range(n):
        s, e = raw[i]
        s2, e2 = raw[(i + 1) % n]
        if s == s2 and e == -e2:
            return i
    return None


def _find_o2i(raw: Sequence[tuple[str, int]]) -> Optional[tuple[int, int]]:
    n = len(raw)
    occ = _positions(raw)
    for i in range(n):
        x = raw[i]
        y = raw[(i + 1) % n]
        if x[0] == y[0]:
            continue
        for j in occ[y[0]]:
            if raw[j] != (y[0], -y[1]):
                continue
            if raw[(j + 1) % n] != (x[0], -x[1]):
                continue
            if len({i, (i + 1) % n, j, (j + 1) % n}) == 4:
                return i, j
    return None


def _find_o2ii(raw: Sequence[tuple[str, int]]) -> Optional[tuple[int, int]]:
    n = len(raw)
    occ = _positions(raw)
    for i in range(n):
        x = raw[i]
        y = raw[(i + 1) % n]
        if x[0] == y[0]:
            continue
        for j in occ[x[0]]:
            if j == i or raw[j] != x:
                continue
            if raw[(j + 1) % n] != y:
                continue
            if len({i, (i + 1) % n, j, (j + 1) % n}) == 4:
                return i, j
    return None


def enumerate_moves(w: SurfaceWord, include_backward: bool = True
                    ) -> list[MoveApplication]:
    """All applicable move instances (used by property tests and search)."""
    raw = _raw(w)
    n = len(raw)
    occ = _positions(raw)
    out: list[MoveApplication] = []
    if n > 2:
        for i in range(n):
            s, e = raw[i]
            s2, e2 = raw[(i + 1) % n]
            if s == s2 and e == -e2:
                out.append(MoveApplication("O1", FORWARD, (i,)))
    for i in range(n):
        x, y = raw[i], raw[(i + 1) % n]
        if x[0] == y[0]:
            continue
        for j in occ[y[0]]:
            if (raw[j] == (y[0], -y[1]) and raw[(j + 1) % n] == (x[0], -x[1])
                    and len({i, (i + 1) % n, j, (j + 1) % n}) == 4):
                out.append(MoveApplication("O2i", FORWARD, (i, j)))
        for j in occ[x[0]]:
            if (j != i and raw[j] == x and raw[(j + 1) % n] == y
                    and len({i, (i + 1) % n, j, (j + 1) % n}) == 4):
                out.append(MoveApplication("O2ii", FORWARD, (i, j)))
    for idxs in occ.values():
        p, q = idxs
        mixed = raw[p][1] == -raw[q][1]
        move = "O3i" if mixed else "O3ii"
        in_len = (q - p - 1) % n
        out_len = (p - q - 1) % n
        for k1 in range(in_len + 1):
            for k2 in range(out_len + 1):
                out.append(MoveApplication(move, FORWARD, (p, q, k1, k2)))
    if include_backward:
        for i in range(n + 1):
            out.append(MoveApplication("O1", BACKWARD, (i, 1)))
        for idxs in occ.values():
            p, q = idxs
            if raw[p][1] == -raw[q][1]:
                out.append(MoveApplication("O2i", BACKWARD, (p, q, 1, 1)))
            else:
                out.append(MoveApplication("O2ii", BACKWARD, (p, q, 1, 1)))
    return out


# ---------------------------------------------------------------------------
# normalization


class _StepLimit(Exception):
    pass


class _Normalizer:
    def __init__(self, w: SurfaceWord, step_limit: int):
        self.word = w
        self.trace: list[MoveApplication] = []
        self.left = step_limit

    @property
    def raw(self) -> list[tuple[str, int]]:
        return _raw(self.word)

    def do(self, m: MoveApplication) -> None:
        if self.left <= 0:
            raise _StepLimit
        self.left -= 1
        self.word = apply_move(self.word, m)
        self.trace.append(m)

    # --- shared reductions -------------------------------------------------

    def sweep(self) -> None:
        """Cancel adjacent inverse pairs while the word stays above the
        two-letter floor."""
        while len(self.word) > 2:
            i = _find_cancel(self.raw)
            if i is None:
                return
            self.do(MoveApplication("O1", FORWARD, (i,)))

    # --- orientable branch ---------------------------------------------------

    def _corner_stats(self, raw) -> tuple[dict[int, list[int]], int]:
        labels = _corner_labels(raw)
        classes: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            classes.setdefault(lab, []).append(i)
        min_size = min(len(v) for v in classes.values())
        return classes, min_size

    def _corner_move(self) -> MoveApplication:
        """One transposition that shrinks the smallest corner class.

        Pick the smallest class P, a corner p in P whose successor corner
        lies elsewhere, and transpose around the pair of the side entering
        p, carrying the single side that leaves p across.  Shrinking P to a
        singleton exposes a cancelling pair for the sweep.
        """
        raw = self.raw
        n = len(raw)
        classes, min_size = self._corner_stats(raw)
        labels = _corner_labels(raw)
        cand = min(classes.values(), key=lambda v: (len(v), v[0]))
        p = None
        for c in cand:
            if labels[(c + 1) % n] != labels[c]:
                p = c
                break
        if p is not None:
            pos_x = (p - 1) % n
            sym = raw[pos_x][0]
            a, b = _positions(raw)[sym]
            r = b if a == pos_x else a
            out_len = (pos_x - r - 1) % n
            m = MoveApplication("O3i", FORWARD, (pos_x, r, 1, out_len))
            trial = _raw(apply_move(self.word, m))
            _, new_min = self._corner_stats(trial)
            if new_min < min_size:
                return m
        # fallback: scan every transposition instance for one that shrinks
        for idxs in _positions(raw).values():
            for pp, qq in (idxs, idxs[::-1]):
                if raw[pp][1] != -raw[qq][1]:
                    continue
                in_len = (qq - pp - 1) % n
                o_len = (pp - qq - 1) % n
                for k1 in range(in_len + 1):
                    for k2 in range(o_len + 1):
                        m = MoveApplication("O3i", FORWARD, (pp, qq, k1, k2))
                        trial = _raw(apply_move(self.word, m))
                        _, new_min = self._corner_stats(trial)
                        if new_min < min_size:
                            return m
        raise InternalInconsistencyError("no corner-reducing transposition found")

    def _scan_blocks(self, raw) -> list[int]:
        """Greedy disjoint scan for contiguous interleaved quadruples
        x y x^-1 y^-1 (any exponent pattern, both pairs mixed)."""
        n = len(raw)
        used: set[int] = set()
        starts: list[int] = []
        for i in range(n):
            idx = [i, (i + 1) % n, (i + 2) % n, (i + 3) % n]
            if any(k in used for k in idx):
                continue
            a, b, c, d = (raw[k] for k in idx)
            if (a[0] == c[0] and b[0] == d[0] and a[0] != b[0]
                    and a[1] == -c[1] and b[1] == -d[1]):
                used.update(idx)
                starts.append(i)
        return starts

    def _block_positions(self, raw) -> set[int]:
        pos: set[int] = set()
        n = len(raw)
        for s in self._scan_blocks(raw):
            pos.update((s + k) % n for k in range(4))
        return pos

    def _gather(self, a_sym: str, b_sym: str) -> None:
        """Three transpositions that make the interleaved pair (a, b)
        contiguous without disturbing previously gathered quadruples."""
        raw = self.raw
        n = len(raw)
        occ = _positions(raw)
        ua, va = occ[a_sym]
        xb, yb = occ[b_sym]
        # orient the a-pair so that exactly one b occurrence is inside
        span = lambda u, v, t: (t - u) % n < (v - u) % n and t != u
        if span(ua, va, xb) ^ span(ua, va, yb):
            pa1, pa2 = ua, va
        else:
            pa1, pa2 = va, ua
        pb1 = xb if span(pa1, pa2, xb) else yb
        pb2 = yb if pb1 == xb else xb
        in_len = (pb2 - pb1 - 1) % n
        k2 = (pa1 - pb2 - 1) % n
        self.do(MoveApplication("O3i", FORWARD, (pb1, pb2, in_len, k2)))

        raw = self.raw
        n = len(raw)
        occ = _positions(raw)
        ib = next(p for p in occ[b_sym] if raw[(p + 1) % n][0] == a_sym)
        jb = next(p for p in occ[b_sym] if p != ib)
        pa2 = next(p for p in occ[a_sym] if p != (ib + 1) % n)
        k2 = (pa2 - jb - 1) % n
        self.do(MoveApplication("O3i", FORWARD, (ib, jb, 1, k2)))

        raw = self.raw
        n = len(raw)
        occ = _positions(raw)
        ia = next(p for p in occ[a_sym]
                  if raw[(p + 1) % n][0] == b_sym
                  and raw[(p + 2) % n][0] == a_sym)
        ja = (ia + 2) % n
        pb2 = next(p for p in occ[b_sym] if p != (ia + 1) % n)
        k2 = (pb2 - ja - 1) % n + 1
        self.do(MoveApplication("O3i", FORWARD, (ia, ja, 0, k2)))

    def normalize_orientable(self, target_len: int) -> None:
        while True:
            self.sweep()
            if len(self.word) <= target_len:
                break
            ij = _find_o2i(self.raw)
            if ij is not None:
                self.do(MoveApplication("O2i", FORWARD, ij))
                continue
            self.do(self._corner_move())
        if len(self.word) != target_len:
            raise InternalInconsistencyError("orientable reduction overshot")
        if len(self.word) == 2:
            return
        # gather interleaved pairs into contiguous quadruples
        while True:
            raw = self.raw
            n = len(raw)
            blocked = self._block_positions(raw)
            free = [s for s, idxs in sorted(_positions(raw).items(),
                                            key=lambda kv: min(kv[1]))
                    if not any(p in blocked for p in idxs)]
            if not free:
                break
            a_sym = free[0]
            occ = _positions(raw)
            ua, va = occ[a_sym]
            b_sym = None
            for t in free[1:]:
                x, y = occ[t]
                inside = sum(1 for p in (x, y)
                             if (p - ua) % n < (va - ua) % n and p != ua)
                if inside == 1:
                    b_sym = t
                    break
            if b_sym is None:
                raise InternalInconsistencyError(
                    f"no interleaving partner for {a_sym!r}")
            self._gather(a_sym, b_sym)

    # --- non-orientable branch ----------------------------------------------

    def normalize_nonorientable(self) -> None:
        while True:
            self.sweep()
            raw = self.raw
            n = len(raw)
            occ = _positions(raw)
            same = {s: idxs for s, idxs in occ.items()
                    if raw[idxs[0]][1] == raw[idxs[1]][1]}
            # collect a non-adjacent same-sign pair
            pick = None
            for s in sorted(same, key=lambda s: same[s][0]):
                p, q = same[s]
                if (q - p) % n != 1 and (p - q) % n != 1:
                    pick = (p, q)
                    break
            if pick is not None:
                p, q = pick
                in_len = (q - p - 1) % n
                out_len = (p - q - 1) % n
                self.do(MoveApplication("O3ii", FORWARD, (p, q, in_len, out_len)))
                continue
            # all same-sign pairs adjacent; convert one mixed pair if any
            mixed = [s for s, idxs in occ.items()
                     if raw[idxs[0]][1] == -raw[idxs[1]][1]]
            if not mixed:
                break
            anchor = None
            for i in range(n):
                s, e = raw[i]
                s2, e2 = raw[(i + 1) % n]
                if s == s2 and e == e2:
                    anchor = i
                    break
            if anchor is None:
                raise InternalInconsistencyError("no adjacent same-sign pair")
            rest = _arc(raw, anchor + 2, n - 2)
            t = next(k for k, (s, _) in enumerate(rest) if s in mixed)
            self.do(MoveApplication(
                "O3ii", FORWARD, (anchor, (anchor + 1) % n, 0, t + 1)))

    # --- exponent polish ------------------------------------------------------

    def _fix_pair(self, move: str, p: int, q: int) -> None:
        m1 = MoveApplication(move, BACKWARD, (p, q, 1, 1))
        m2 = inverse_application(m1, self.word)
        self.do(m1)
        self.do(m2)

    def polish_orientable(self) -> None:
        while True:
            raw = self.raw
            n = len(raw)
            starts = self._scan_blocks(raw)
            if 4 * len(starts) != n:
                raise InternalInconsistencyError("gather left non-block letters")
            fix = None
            for s in starts:
                if raw[s][1] != 1:
                    fix = (s, (s + 2) % n)
                    break
                if raw[(s + 1) % n][1] != 1:
                    fix = ((s + 1) % n, (s + 3) % n)
                    break
            if fix is None:
                return
            self._fix_pair("O2i", *fix)

    def polish_nonorientable(self) -> None:
        while True:
            raw = self.raw
            n = len(raw)
            offset = 0 if raw[0][0] == raw[1][0] else 1
            fix = None
            for k in range(n // 2):
                p = (offset + 2 * k) % n
                q = (p + 1) % n
                if raw[p][0] != raw[q][0] or raw[p][1] != raw[q][1]:
                    raise InternalInconsistencyError("pairs not tiled adjacently")
                if raw[p][1] != 1:
                    fix = (p, q)
                    break
            if fix is None:
                return
            self._fix_pair("O2ii", *fix)


def normalize_with_trace(w: SurfaceWord, step_limit: int = 10_000
                         ) -> NormalizeResult:
    """Rewrite ``w`` to the standard word of its class, returning the form
    and a move trace that replays to exactly ``standard_word(form)``.

    On step-limit exhaustion the classification is still returned, with an
    empty trace and ``complete=False``.
    """
    form = classify(w)
    target = standard_word(form)
    n = _Normalizer(w, step_limit)
    try:
        if form.kind in ("sphere", "orientable"):
            n.normalize_orientable(len(target))
            if form.kind == "orientable":
                n.polish_orientable()
        else:
            n.normalize_nonorientable()
            n.polish_nonorientable()
    except _StepLimit:
        return NormalizeResult(form, (), False)
    if n.word != target:
        raise InternalInconsistencyError(
            f"normalization of {w!r} ended at {n.word!r}, "
            f"expected {target!r}")
    return NormalizeResult(form, tuple(n.trace), True)

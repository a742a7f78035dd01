"""Exact rational geometry for the shipped compact metric spaces.

Five space kinds: the unit interval, the circle R/Z, the binary-stream
space with metric 2^(-(i+1)) at first difference i, finite metric spaces
given by rational distance matrices, and binary products under the max
metric.  Every predicate is exact; no floats anywhere.

Cells are plain data interpreted by their space: interval cells are raw
open intervals (u, v) clamped to [0, 1] by the predicates, circle cells
are arcs (start, length) with start normalized into [0, 1), stream cells
are cylinder words, finite cells are sorted index tuples, product cells
are pairs.  The same cell doubles as its own closure; predicates take an
open or closed reading as documented per method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from .errors import CertificationError
from .transducers import Stream

F = Fraction

Cell = Any
Point = Any


def _open_chain_cover(a: Fraction, b: Fraction, intervals) -> bool:
    """Closed [a, b] inside a union of open line intervals, by chaining."""
    if a > b:
        return True
    reach = a
    for _ in range(len(intervals) + 2):
        best = None
        for u, v in intervals:
            if u < reach < v and (best is None or v > best):
                best = v
        if best is None:
            return False
        if best > b:
            return True
        reach = best
    return False


def _closed_chain_cover(a: Fraction, b: Fraction, intervals) -> bool:
    """Closed [a, b] inside a union of closed line intervals."""
    if a > b:
        return True
    reach = a
    started = any(p <= a <= q for p, q in intervals)
    if not started:
        return False
    for _ in range(len(intervals) + 2):
        if reach >= b:
            return True
        best = None
        for p, q in intervals:
            if p <= reach and (best is None or q > best):
                best = q
        if best is None or best <= reach:
            return False
        reach = best
    return reach >= b


class Space:
    """Shared selection and product plumbing; geometry lives in subclasses."""

    kind = "abstract"

    #每 subclass provides: whole, mesh, child_arity, meets_closure,
    # intersect, diam, contains, closed_subset, closure_in_open,
    # eroded_contains, open_cover_of_closure, eroded_cover_of_closure,
    # level_epsilon, point_cell, sample_point, shrink_cell, describe.

    def select_children(self, base: Cell, k: int) -> list[Cell]:
        """Level-k mesh cells meeting the closure of base, padded to the
        fixed arity by repeating the last member."""
        pool = [c for c in self.mesh(k) if self.meets_closure(c, base)]
        return self._pad(pool, self.child_arity(k))

    def _pad(self, pool: list[Cell], arity: int) -> list[Cell]:
        if not pool:
            raise CertificationError(f"{self.kind}: empty child pool")
        if len(pool) > arity:
            raise CertificationError(
                f"{self.kind}: pool of {len(pool)} exceeds arity {arity}"
            )
        return pool + [pool[-1]] * (arity - len(pool))


# === unit interval ===


@dataclass(frozen=True)
class IntervalSpace(Space):
    kind = "interval"

    def whole(self) -> Cell:
        return (F(-1), F(2))

    def child_arity(self, k: int) -> int:
        return 5 if k == 1 else 6

    def level_epsilon(self, k: int) -> Fraction:
        return F(3, 2 ** (k + 5))

    def _mesh_params(self, k: int):
        h = F(1, 2 ** (k + 1))
        return h, F(7, 8) * h

    def mesh(self, k: int) -> list[Cell]:
        h, r = self._mesh_params(k)
        return [(j * h - r, j * h + r) for j in range(2 ** (k + 1) + 1)]

    def select_children(self, base: Cell, k: int) -> list[Cell]:
        a, b = self.hull(base)
        h, r = self._mesh_params(k)
        pool = []
        for j in range(max(0, math.floor((a - r) / h)), min(2 ** (k + 1), math.ceil((b + r) / h)) + 1):
            cell = (j * h - r, j * h + r)
            if self.meets_closure(cell, base):
                pool.append(cell)
        return self._pad(pool, self.child_arity(k))

    def hull(self, cell: Cell):
        u, v = cell
        return max(u, F(0)), min(v, F(1))

    def meets_closure(self, open_cell: Cell, base: Cell) -> bool:
        u, v = open_cell
        a, b = self.hull(base)
        return u < b and v > a

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        return (lo, hi) if lo < hi else None

    def diam(self, cell: Cell) -> Fraction:
        a, b = self.hull(cell)
        return max(b - a, F(0))

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        u, v = cell
        if closed:
            a, b = self.hull(cell)
            return a <= x <= b
        return u < x < v

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        a, b = self.hull(inner)
        c, d = self.hull(outer)
        return c <= a and b <= d

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        a, b = self.hull(inner)
        u, v = outer
        return (u < 0 or u < a) and (v > 1 or b < v)

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        """Every point of the closed region keeps its open radius-ball
        inside the open outer cell (relative to [0, 1])."""
        u, v = outer
        p, q = self.hull(region)
        left = u < 0 or (p - radius >= u and p > u)
        right = v > 1 or (q + radius <= v and q < v)
        return left and right

    def _erode(self, cell: Cell, eps: Fraction) -> Optional[Cell]:
        u, v = cell
        lo = F(0) if u < 0 else u + eps
        hi = F(1) if v > 1 else v - eps
        return (lo, hi) if lo <= hi else None

    def open_cover_of_closure(self, base: Cell, cells) -> bool:
        a, b = self.hull(base)
        return _open_chain_cover(a, b, list(cells))

    def eroded_cover_of_closure(self, base: Cell, cells, eps: Fraction) -> bool:
        a, b = self.hull(base)
        eroded = [e for e in (self._erode(c, eps) for c in cells) if e is not None]
        return _closed_chain_cover(a, b, eroded)

    def point_cell(self, x: Point, bound=None) -> Cell:
        return (x, x)

    def distance(self, x: Point, y: Point) -> Fraction:
        return abs(x - y)

    def witness_point(self, cell: Cell) -> Point:
        a, b = self.hull(cell)
        return (a + b) / 2

    def sample_point(self, rng) -> Point:
        return F(rng.randrange(2 ** 20 + 1), 2 ** 20)

    def shrink_cell(self, cell: Cell) -> Cell:
        u, v = cell
        mid = (u + v) / 2
        return (mid - (v - u) / 200, mid + (v - u) / 200)

    def describe(self, cell: Cell) -> str:
        return f"interval({cell[0]}, {cell[1]})"


# === circle R/Z ===


def _norm_arc(start: Fraction, length: Fraction) -> Cell:
    if length >= 1:
        return (F(0), F(1))
    return (start % 1, length)


@dataclass(frozen=True)
class CircleSpace(Space):
    kind = "circle"

    def whole(self) -> Cell:
        return (F(0), F(1))

    def child_arity(self, k: int) -> int:
        return 4 if k == 1 else 6

    def level_epsilon(self, k: int) -> Fraction:
        return F(3, 2 ** (k + 5))

    def _mesh_params(self, k: int):
        h = F(1, 2 ** (k + 1))
        return h, F(7, 8) * h

    def mesh(self, k: int) -> list[Cell]:
        h, r = self._mesh_params(k)
        return [_norm_arc(j * h - r, 2 * r) for j in range(2 ** (k + 1))]

    def select_children(self, base: Cell, k: int) -> list[Cell]:
        bs, bl = base
        h, r = self._mesh_params(k)
        n = 2 ** (k + 1)
        seen = []
        for j in range(math.floor((bs - r) / h), math.ceil((bs + bl + r) / h) + 1):
            jn = j % n
            cell = _norm_arc(jn * h - r, 2 * r)
            if jn not in seen and self.meets_closure(cell, base):
                seen.append(jn)
        pool = [_norm_arc(jn * h - r, 2 * r) for jn in sorted(seen)]
        return self._pad(pool, self.child_arity(k))

    def meets_closure(self, open_cell: Cell, base: Cell) -> bool:
        u, l1 = open_cell
        s, l2 = base
        if l1 >= 1 or l2 >= 1:
            return True
        d = (s - u) % 1
        for d2 in (d, d - 1):
            if d2 < l1 and d2 + l2 > 0:
                return True
        return False

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        sa, la = a
        sb, lb = b
        if la >= 1:
            return b
        if lb >= 1:
            return a
        if la + lb >= 1:
            raise CertificationError("arc intersection may be disconnected")
        d = (sb - sa) % 1
        for d2 in (d, d - 1):
            lo, hi = max(F(0), d2), min(la, d2 + lb)
            if lo < hi:
                return _norm_arc(sa + lo, hi - lo)
        return None

    def diam(self, cell: Cell) -> Fraction:
        return min(cell[1], F(1, 2))

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        s, l = cell
        if l >= 1:
            return True
        t = (x - s) % 1
        return t <= l if closed else 0 < t < l

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        si, li = inner
        so, lo = outer
        if lo >= 1:
            return True
        if li > lo:
            return False
        return (si - so) % 1 + li <= lo

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        si, li = inner
        so, lo = outer
        if lo >= 1:
            return True
        d = (si - so) % 1
        return 0 < d and d + li < lo

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        s, l = outer
        if l >= 1:
            return True
        if l - 2 * radius < 0:
            return False
        if radius == 0:
            return self.closure_in_open(region, outer)
        return self.closed_subset(region, ((s + radius) % 1, l - 2 * radius))

    def _unroll(self, base_start: Fraction, arcs):
        """Line placements of arcs relative to a base start point."""
        out = []
        for s, l in arcs:
            d = (s - base_start) % 1
            out.append((d, d + l))
            out.append((d - 1, d - 1 + l))
        return out

    def open_cover_of_closure(self, base: Cell, cells) -> bool:
        bs, bl = base
        return _open_chain_cover(F(0), bl, self._unroll(bs, cells))

    def eroded_cover_of_closure(self, base: Cell, cells, eps: Fraction) -> bool:
        bs, bl = base
        eroded = []
        for s, l in cells:
            if l >= 1:
                return True
            if l - 2 * eps >= 0:
                eroded.append(_norm_arc(s + eps, l - 2 * eps))
        return _closed_chain_cover(F(0), bl, self._unroll(bs, eroded))

    def point_cell(self, x: Point, bound=None) -> Cell:
        return (x % 1, F(0))

    def distance(self, x: Point, y: Point) -> Fraction:
        d = (x - y) % 1
        return min(d, 1 - d)

    def witness_point(self, cell: Cell) -> Point:
        s, l = cell
        return (s + l / 2) % 1

    def sample_point(self, rng) -> Point:
        return F(rng.randrange(2 ** 20), 2 ** 20)

    def shrink_cell(self, cell: Cell) -> Cell:
        s, l = cell
        return _norm_arc(s + l / 2 - l / 200, l / 100)

    def describe(self, cell: Cell) -> str:
        return f"arc(start={cell[0]}, length={cell[1]})"


# === binary streams ===


def stream_ball_depth(radius: Fraction) -> int:
    """Symbols pinned down by an open ball: the count of levels i with
    2^(-(i+1)) >= radius."""
    if radius <= 0:
        raise CertificationError("ball depth needs a positive radius")
    m = 0
    while F(1, 2 ** (m + 1)) >= radius:
        m += 1
    return m


def _stream_distance(x, y) -> Fraction:
    # eventually periodic streams agreeing past both preambles for a full
    # common period agree everywhere
    bound = max(len(x.pre), len(y.pre)) + math.lcm(len(x.cycle), len(y.cycle))
    a, b = x.prefix(bound), y.prefix(bound)
    for i in range(bound):
        if a[i] != b[i]:
            return F(1, 2 ** (i + 1))
    return F(0)


@dataclass(frozen=True)
class CantorSpace(Space):
    kind = "cantor"

    def whole(self) -> Cell:
        return ()

    def child_arity(self, k: int) -> int:
        return 2

    def level_epsilon(self, k: int) -> Fraction:
        return F(1, 2 ** (k + 2))

    def mesh(self, k: int) -> list[Cell]:
        cells = [()]
        for _ in range(k):
            cells = [c + (b,) for c in cells for b in (0, 1)]
        return cells

    def select_children(self, base: Cell, k: int) -> list[Cell]:
        pool = [c for c in self.mesh(k) if self._compatible(c, base)]
        return self._pad(pool, 2)

    @staticmethod
    def _compatible(a: Cell, b: Cell) -> bool:
        n = min(len(a), len(b))
        return a[:n] == b[:n]

    def meets_closure(self, open_cell: Cell, base: Cell) -> bool:
        return self._compatible(open_cell, base)

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        if not self._compatible(a, b):
            return None
        return a if len(a) >= len(b) else b

    def diam(self, cell: Cell) -> Fraction:
        return F(1, 2 ** (len(cell) + 1))

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        return x.prefix(len(cell)) == cell

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        return inner[: len(outer)] == outer

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        return self.closed_subset(inner, outer)

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        if not self.closed_subset(region, outer):
            return False
        return radius == 0 or stream_ball_depth(radius) >= len(outer)

    def _brute_cover(self, base: Cell, cells) -> bool:
        words = [w for w in cells if self._compatible(w, base)]
        depth = max([len(base)] + [len(w) for w in words])
        if depth - len(base) > 14:
            raise CertificationError("cylinder cover check too deep")
        frontier = [base]
        for _ in range(depth - len(base)):
            frontier = [c + (b,) for c in frontier for b in (0, 1)]
        return all(any(e[: len(w)] == w for w in words) for e in frontier)

    def open_cover_of_closure(self, base: Cell, cells) -> bool:
        return self._brute_cover(base, cells)

    def eroded_cover_of_closure(self, base: Cell, cells, eps: Fraction) -> bool:
        m = stream_ball_depth(eps)
        return self._brute_cover(base, [w for w in cells if m >= len(w)])

    def point_cell(self, x: Point, bound=None) -> Cell:
        bound = bound if bound is not None else F(1, 2 ** 33)
        m = 0
        while F(1, 2 ** (m + 1)) >= bound:
            m += 1
        return x.prefix(m)

    def distance(self, x: Point, y: Point) -> Fraction:
        return _stream_distance(x, y)

    def witness_point(self, cell: Cell) -> Point:
        return Stream(cell, (0,))

    def sample_point(self, rng) -> Point:
        pre = tuple(rng.randrange(2) for _ in range(24))
        return Stream(pre, (rng.randrange(2),))

    def shrink_cell(self, cell: Cell) -> Cell:
        return cell + (0, 0, 0)

    def describe(self, cell: Cell) -> str:
        return "cyl[" + "".join(map(str, cell)) + "]"


@dataclass(frozen=True)
class BaireStreamSpace:
    """Streams over all of N with the first-difference metric.  Not compact,
    so it carries no mesh or cover system; cylinders still behave exactly
    like their binary cousins for containment and erosion."""

    kind = "baire"

    def whole(self) -> Cell:
        return ()

    def diam(self, cell: Cell) -> Fraction:
        return F(1, 2 ** (len(cell) + 1))

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        return x.prefix(len(cell)) == cell

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        return inner[: len(outer)] == outer

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        return self.closed_subset(inner, outer)

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        n = min(len(a), len(b))
        if a[:n] != b[:n]:
            return None
        return a if len(a) >= len(b) else b

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        if not self.closed_subset(region, outer):
            return False
        return radius == 0 or stream_ball_depth(radius) >= len(outer)

    def point_cell(self, x: Point, bound=None) -> Cell:
        bound = bound if bound is not None else F(1, 2 ** 33)
        m = 0
        while F(1, 2 ** (m + 1)) >= bound:
            m += 1
        return x.prefix(m)

    def distance(self, x: Point, y: Point) -> Fraction:
        return _stream_distance(x, y)

    def witness_point(self, cell: Cell) -> Point:
        return Stream(cell, (0,))

    def sample_point(self, rng) -> Point:
        pre = tuple(rng.randrange(5) for _ in range(24))
        return Stream(pre, (rng.randrange(5),))

    def describe(self, cell: Cell) -> str:
        return "cyl[" + ",".join(map(str, cell)) + "]"


# === finite metric spaces ===


@dataclass(frozen=True)
class FiniteMetricSpace(Space):
    distances: tuple

    kind = "finite"

    def __post_init__(self):
        d = self.distances
        n = len(d)
        if n < 2:
            raise CertificationError("finite space needs at least 2 points")
        for i in range(n):
            if len(d[i]) != n or d[i][i] != 0:
                raise CertificationError("bad distance matrix diagonal/shape")
            for j in range(n):
                if d[i][j] != d[j][i] or (i != j and d[i][j] <= 0):
                    raise CertificationError("distance matrix not symmetric positive")
                for m in range(n):
                    if d[i][j] > d[i][m] + d[m][j]:
                        raise CertificationError("triangle inequality fails")

    @property
    def size(self) -> int:
        return len(self.distances)

    def min_distance(self) -> Fraction:
        n = self.size
        return min(self.distances[i][j] for i in range(n) for j in range(n) if i != j)

    def whole(self) -> Cell:
        return tuple(range(self.size))

    def child_arity(self, k: int) -> int:
        return self.size if k == 1 else 2

    def level_epsilon(self, k: int) -> Fraction:
        return min(self.min_distance() / 4, F(1, 2 ** (k + 2)))

    def mesh(self, k: int) -> list[Cell]:
        return [(i,) for i in range(self.size)]

    def meets_closure(self, open_cell: Cell, base: Cell) -> bool:
        return bool(set(open_cell) & set(base))

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        common = tuple(sorted(set(a) & set(b)))
        return common or None

    def diam(self, cell: Cell) -> Fraction:
        return max(
            (self.distances[i][j] for i in cell for j in cell), default=F(0)
        )

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        return x in cell

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        return set(inner) <= set(outer)

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        return self.closed_subset(inner, outer)

    def _ball(self, x: int, radius: Fraction) -> set:
        return {y for y in range(self.size) if self.distances[x][y] < radius}

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        members = set(outer)
        for x in region:
            if x not in members or not self._ball(x, radius) <= members:
                return False
        return True

    def open_cover_of_closure(self, base: Cell, cells) -> bool:
        return all(any(x in c for c in cells) for x in base)

    def eroded_cover_of_closure(self, base: Cell, cells, eps: Fraction) -> bool:
        return all(
            any(self._ball(x, eps) <= set(c) for c in cells) for x in base
        )

    def point_cell(self, x: Point, bound=None) -> Cell:
        return (x,)

    def distance(self, x: Point, y: Point) -> Fraction:
        return self.distances[x][y]

    def witness_point(self, cell: Cell) -> Point:
        return cell[0]

    def sample_point(self, rng) -> Point:
        return rng.randrange(self.size)

    def shrink_cell(self, cell: Cell) -> Cell:
        return ((cell[0] + 1) % self.size,)

    def describe(self, cell: Cell) -> str:
        return f"points{tuple(cell)}"


# === binary products, max metric ===


@dataclass(frozen=True)
class ProductSpace(Space):
    left: Space
    right: Space

    kind = "product"

    def whole(self) -> Cell:
        return (self.left.whole(), self.right.whole())

    def child_arity(self, k: int) -> int:
        return self.left.child_arity(k) * self.right.child_arity(k)

    def level_epsilon(self, k: int) -> Fraction:
        return min(self.left.level_epsilon(k), self.right.level_epsilon(k))

    def mesh(self, k: int) -> list[Cell]:
        return [(a, b) for a in self.left.mesh(k) for b in self.right.mesh(k)]

    def select_children(self, base: Cell, k: int) -> list[Cell]:
        sel_a = self.left.select_children(base[0], k)
        sel_b = self.right.select_children(base[1], k)
        return [(a, b) for a in sel_a for b in sel_b]

    def meets_closure(self, open_cell: Cell, base: Cell) -> bool:
        return self.left.meets_closure(open_cell[0], base[0]) and self.right.meets_closure(
            open_cell[1], base[1]
        )

    def intersect(self, a: Cell, b: Cell) -> Optional[Cell]:
        ia = self.left.intersect(a[0], b[0])
        ib = self.right.intersect(a[1], b[1])
        return (ia, ib) if ia is not None and ib is not None else None

    def diam(self, cell: Cell) -> Fraction:
        return max(self.left.diam(cell[0]), self.right.diam(cell[1]))

    def contains(self, cell: Cell, x: Point, closed: bool = True) -> bool:
        return self.left.contains(cell[0], x[0], closed) and self.right.contains(
            cell[1], x[1], closed
        )

    def closed_subset(self, inner: Cell, outer: Cell) -> bool:
        return self.left.closed_subset(inner[0], outer[0]) and self.right.closed_subset(
            inner[1], outer[1]
        )

    def closure_in_open(self, inner: Cell, outer: Cell) -> bool:
        return self.left.closure_in_open(
            inner[0], outer[0]
        ) and self.right.closure_in_open(inner[1], outer[1])

    def eroded_contains(self, outer: Cell, region: Cell, radius: Fraction) -> bool:
        return self.left.eroded_contains(
            outer[0], region[0], radius
        ) and self.right.eroded_contains(outer[1], region[1], radius)

    def _split(self, cells):
        """Undo the cross-product layout of a child selection."""
        firsts = list(dict.fromkeys(a for a, _ in cells))
        seconds = list(dict.fromkeys(b for _, b in cells))
        if set(cells) != {(a, b) for a in firsts for b in seconds}:
            return None
        return firsts, seconds

    def open_cover_of_closure(self, base: Cell, cells) -> bool:
        split = self._split(list(cells))
        if split is None:
            return False
        return self.left.open_cover_of_closure(
            base[0], split[0]
        ) and self.right.open_cover_of_closure(base[1], split[1])

    def eroded_cover_of_closure(self, base: Cell, cells, eps: Fraction) -> bool:
        split = self._split(list(cells))
        if split is None:
            return False
        return self.left.eroded_cover_of_closure(
            base[0], split[0], eps
        ) and self.right.eroded_cover_of_closure(base[1], split[1], eps)

    def point_cell(self, x: Point, bound=None) -> Cell:
        return (self.left.point_cell(x[0], bound), self.right.point_cell(x[1], bound))

    def distance(self, x: Point, y: Point) -> Fraction:
        return max(self.left.distance(x[0], y[0]), self.right.distance(x[1], y[1]))

    def witness_point(self, cell: Cell) -> Point:
        return (self.left.witness_point(cell[0]), self.right.witness_point(cell[1]))

    def sample_point(self, rng) -> Point:
        return (self.left.sample_point(rng), self.right.sample_point(rng))

    def shrink_cell(self, cell: Cell) -> Cell:
        return (self.left.shrink_cell(cell[0]), cell[1])

    def describe(self, cell: Cell) -> str:
        return f"({self.left.describe(cell[0])}) x ({self.right.describe(cell[1])})"


# === point approximations ===


@dataclass
class PointApprox:
    """A point known either exactly or through a nested chain of closed
    cells, finest last."""

    space: Space
    exact: Any = None
    cells: tuple = ()

    def __post_init__(self):
        if self.exact is None and not self.cells:
            raise CertificationError("point approximation carries no information")
        self.cells = tuple(self.cells)
        for fine, coarse in zip(self.cells[1:], self.cells):
            if not self.space.closed_subset(fine, coarse):
                raise CertificationError(
                    f"approximation cells not nested: "
                    f"{self.space.describe(fine)} vs {self.space.describe(coarse)}"
                )

    @classmethod
    def exact_point(cls, space: Space, x: Point) -> "PointApprox":
        return cls(space, exact=x)

    @classmethod
    def from_cells(cls, space: Space, cells: Sequence[Cell]) -> "PointApprox":
        return cls(space, cells=tuple(cells))

    def enclosure(self, bound: Optional[Fraction] = None) -> Cell:
        if self.exact is not None:
            return self.space.point_cell(self.exact, bound)
        return self.cells[-1]

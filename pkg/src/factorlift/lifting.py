"""Lifting continuous maps through cover-system projections.

A cover system's branch words name points, so a uniformly continuous map
into the space can be traced at the symbolic level: at each output
resolution, read enough input to pin the image region below the slack
allowance, then descend one more level of the cover tree around that
region.  The slack schedule halves at least once per resolution, which is
what guarantees the next region (a subset of the current one, suitably
fattened) still fits inside the cell the previous resolution chose; the
located branch therefore extends forever and names the image point.

The same search works for maps out of a Polish branch space, where no
uniform modulus exists: the branch itself reveals how much of it must be
read, and the minimal prefixes doing so at a fixed resolution form an
antichain discovered lazily, branch by branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .certificates import CertNode
from .covers import CoverSystem, locate_ball
from .errors import (
    CertificationError,
    InsufficientInput,
    InvalidBranch,
    NoCell,
    NotAntichain,
    SpaceMismatch,
)
from .geometry import (
    BaireStreamSpace,
    IntervalSpace,
    PointApprox,
    stream_ball_depth,
)
from .pairing import pair, unpair
from .pointmaps import (
    ParameterizedFamily,
    PointMap,
    PolishPointMap,
    family_from_map,
)
from .transducers import BAIRE, PrefixTransducer, SymbolicSpace

F = Fraction

Word = tuple[int, ...]


def slack_schedule(cs: CoverSystem, k: int) -> Fraction:
    """Radius allowance at output resolution k.

    Small enough that a ball of twice this radius descends one level by
    the certified Lebesgue numbers, and at most half the previous
    allowance, so regions located now still fit where the previous
    resolution parked them."""
    if k < 1:
        raise CertificationError("resolution starts at 1")
    r = cs.epsilon(0) / 4
    for level in range(2, k + 1):
        r = min(r / 2, cs.epsilon(level - 1) / 4)
    return r


@dataclass
class StrongLift:
    """A parameterized family traced through a cover system.

    ``prefix(q, s, k)`` is the length-k branch word naming the family's
    value, read off a parameter prefix q and a branch prefix s.  Outputs
    are coherent: they depend only on the prefixes the moduli demand, so
    extending either input extends the output.
    """

    cs: CoverSystem
    family: ParameterizedFamily
    name: str = "strong-lift"
    _memo: dict = field(default_factory=dict, repr=False)
    _moduli: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.family.space != self.cs.space:
            raise SpaceMismatch(
                f"family {self.family.name} does not land in the "
                f"{self.cs.name} space"
            )

    def slack(self, k: int) -> Fraction:
        return slack_schedule(self.cs, k)

    def moduli(self, k: int) -> tuple:
        """Prefix lengths (parameter, branch) consumed at resolution k;
        running maxima keep them monotone in k."""
        while len(self._moduli) < k:
            kk = len(self._moduli) + 1
            l, m = self.family.moduli(self.slack(kk) / 2)
            if self._moduli:
                l, m = max(l, self._moduli[-1][0]), max(m, self._moduli[-1][1])
            self._moduli.append((l, m))
        return self._moduli[k - 1]

    def max_resolution(self, q_len: int, s_len: int) -> int:
        """Deepest resolution the given prefix lengths support, capped at
        one output symbol per branch symbol."""
        k = 0
        while k < s_len:
            l, m = self.moduli(k + 1)
            if l > q_len or m > s_len:
                break
            k += 1
        return k

    def prefix(self, q: Sequence[int], s: Sequence[int], k: int) -> Word:
        q, s = tuple(q), tuple(s)
        t: Word = ()
        for kk in range(1, k + 1):
            l, m = self.moduli(kk)
            if len(q) < l:
                raise InsufficientInput(
                    f"{self.name}: resolution {kk} reads {l} parameter "
                    f"symbols, got {len(q)}"
                )
            if len(s) < m:
                raise InsufficientInput(
                    f"{self.name}: resolution {kk} reads {m} branch "
                    f"symbols, got {len(s)}"
                )
            key = (kk, q[:l], s[:m])
            hit = self._memo.get(key)
            if hit is None:
                r = self.slack(kk)
                region = self.family.region(q[:l], s[:m])
                if self.cs.space.diam(region) > r / 2:
                    raise NoCell(
                        f"{self.name}: region at ({q[:l]}, {s[:m]}) is wider "
                        f"than {r}/2; moduli too coarse for resolution {kk}"
                    )
                hit = locate_ball(
                    self.cs,
                    PointApprox.from_cells(self.cs.space, [region]),
                    r,
                    kk,
                    constraint=t,
                )
                self._memo[key] = hit
            t = hit
        return t

    def certificate(
        self, resolution: int, samples: int, rng, name: Optional[str] = None
    ) -> CertNode:
        """Sampled soundness: at every resolution up to the target, the
        family's region sits inside the located cell with the full slack
        to spare, and regions shrink under prefix extension."""
        cert = CertNode(name or f"{self.name}: factor identity to depth {resolution}")
        space = self.cs.space
        l_top, m_top = self.moduli(resolution)
        cert.note(
            f"moduli at resolution {resolution}: {l_top} parameter symbols, "
            f"{m_top} branch symbols; {samples} sampled inputs"
        )
        enclosure_bad = []
        shrink_bad = []
        for _ in range(samples):
            q = tuple(rng.randrange(2) for _ in range(l_top))
            s = tuple(
                rng.randrange(self.cs.child_arity(i + 1)) for i in range(m_top)
            )
            t = self.prefix(q, s, resolution)
            previous = None
            for k in range(1, resolution + 1):
                l, m = self.moduli(k)
                region = self.family.region(q[:l], s[:m])
                if not space.eroded_contains(
                    self.cs.v_cell(t[:k]), region, self.slack(k)
                ):
                    enclosure_bad.append((q, s, k))
                if previous is not None and not space.closed_subset(region, previous):
                    shrink_bad.append((q, s, k))
                previous = region
        cert.check(
            "slack-fattened image regions sit inside the located cells "
            "at every resolution",
            not enclosure_bad,
            f"first failure at (q, s, k) = {enclosure_bad[0]}" if enclosure_bad else "",
        )
        cert.check(
            "image regions shrink as prefixes extend",
            not shrink_bad,
            f"first failure at (q, s, k) = {shrink_bad[0]}" if shrink_bad else "",
        )
        cert.note(
            "family value and located branch point share a cell of diameter "
            f"below 2^-{resolution}, so they agree to that width"
        )
        return cert


def strong_extension_map(cs: CoverSystem, family: ParameterizedFamily) -> StrongLift:
    return StrongLift(cs, family, name=f"lift[{family.name}]")


@dataclass
class LiftedSelfMap:
    """A point map rewritten as a prefix transducer on branch words, with
    the commuting-square evidence that it projects back to the map."""

    cs: CoverSystem
    point_map: PointMap
    lift: StrongLift
    transducer: PrefixTransducer

    def certificate(
        self,
        resolution: int,
        samples: int,
        rng,
        exact_samples: int = 0,
    ) -> CertNode:
        cert = self.lift.certificate(
            resolution,
            samples,
            rng,
            name=f"lift[{self.point_map.name}]: projection intertwines the map "
            f"to depth {resolution}",
        )
        if exact_samples and self.point_map.point_fn is not None:
            space = self.cs.space
            depth = max(self.lift.moduli(resolution)[1], resolution)
            bad = []
            for _ in range(exact_samples):
                x = space.sample_point(rng)
                center = PointApprox.exact_point(space, x)
                branch = locate_ball(
                    self.cs, center, self.cs.epsilon(depth) / 4, depth
                )
                t = self.transducer.step(branch)
                y = self.point_map.point(x)
                for k in range(1, resolution + 1):
                    if not space.contains(self.cs.v_cell(t[:k]), y, closed=True):
                        bad.append((x, k))
            cert.check(
                f"exact evaluation lands in every located cell on "
                f"{exact_samples} rational points",
                not bad,
                f"first failure at (x, k) = {bad[0]}" if bad else "",
            )
        return cert


def lift_self_map(cs: CoverSystem, point_map: PointMap) -> LiftedSelfMap:
    """Rewrite a uniformly continuous self-map as a self-map of branch
    words: one more output level per slack halving, located around the
    image region of the branch cell read so far."""
    lift = StrongLift(cs, family_from_map(cs, point_map), name=f"lift[{point_map.name}]")
    branch_space = cs.branch_space()

    def step(w: Word) -> Word:
        return lift.prefix((), w, lift.max_resolution(0, len(w)))

    def modulus(k: int) -> int:
        return max(k, lift.moduli(k)[1])

    machine = PrefixTransducer(
        branch_space, branch_space, step, modulus, name=f"lift[{point_map.name}]"
    )
    return LiftedSelfMap(cs, point_map, lift, machine)


# === presentations of Polish spaces over unbounded branching ===


class CylinderPresentation:
    """Unbounded-alphabet streams presented by their own cylinders."""

    name = "stream-cylinders"

    def __init__(self):
        self.target = BaireStreamSpace()

    def slack(self, k: int) -> Fraction:
        return F(1, 2 ** (k + 2))

    def v_cell(self, t: Sequence[int]) -> tuple:
        return tuple(t)

    def locate_child(self, t: Word, region, slack: Fraction) -> Optional[int]:
        region = tuple(region)
        if len(region) <= len(t) or region[: len(t)] != t:
            return None
        if stream_ball_depth(slack) < len(t) + 1:
            return None
        return region[len(t)]


class DyadicIntervalPresentation:
    """The unit interval presented over unbounded branching: children of a
    cell are the deeper mesh cells whose closure sits strictly inside it,
    enumerated by (level offset, mesh index) pairs.  Out-of-range pairs
    fall back to the leftmost qualifying cell of their level, so every
    branch word names a point and unions stay exact."""

    name = "interval-over-streams"

    def __init__(self, search_levels: int = 80):
        self.target = IntervalSpace()
        self.search_levels = search_levels
        self._memo: dict = {}

    def slack(self, k: int) -> Fraction:
        # a sixteenth per resolution: wide enough margin that some deeper
        # mesh cell both swallows the fattened region and keeps its
        # closure strictly inside the previous cell
        return F(1, 2 ** (4 * k + 2))

    def _mesh_cell(self, level: int, j: int) -> tuple:
        h = F(1, 2 ** (level + 1))
        r = F(7, 8) * h
        return (j * h - r, j * h + r)

    def _child_range(self, parent, level: int) -> Optional[tuple]:
        """Inclusive mesh-index range at the level whose cells' closures
        sit strictly inside the parent cell.  Qualification is monotone on
        each side, so the range is exactly an index interval:
        left needs j*h - r > u (unless the parent pokes past 0) and right
        needs j*h + r < v (unless it pokes past 1)."""
        h = F(1, 2 ** (level + 1))
        r = F(7, 8) * h
        j_top = 2 ** (level + 1)
        u, v = parent
        lo = 0 if u < 0 else math.floor((u + r) / h) + 1
        hi = j_top if v > 1 else math.ceil((v - r) / h) - 1
        lo, hi = max(lo, 0), min(hi, j_top)
        if lo > hi:
            return None
        return lo, hi

    def resolve(self, t: Sequence[int]) -> tuple:
        """(mesh level, cell) along a branch word."""
        t = tuple(t)
        if t not in self._memo:
            if not t:
                self._memo[t] = (0, self.target.whole())
            else:
                level, parent = self.resolve(t[:-1])
                if t[-1] < 0:
                    raise InvalidBranch(f"negative branch symbol {t[-1]}")
                offset, j = unpair(t[-1])
                child_level = level + 1 + offset
                bounds = self._child_range(parent, child_level)
                if bounds is None:
                    raise CertificationError(
                        f"{self.name}: no qualifying cell at level {child_level}"
                    )
                if not bounds[0] <= j <= bounds[1]:
                    j = bounds[0]
                self._memo[t] = (child_level, self._mesh_cell(child_level, j))
        return self._memo[t]

    def v_cell(self, t: Sequence[int]) -> tuple:
        return self.resolve(t)[1]

    def locate_child(self, t: Word, region, slack: Fraction) -> Optional[int]:
        level, parent = self.resolve(t)
        p, q = self.target.hull(region)
        for child_level in range(level + 1, level + 1 + self.search_levels):
            bounds = self._child_range(parent, child_level)
            if bounds is None:
                continue
            h = F(1, 2 ** (child_level + 1))
            lo = max(bounds[0], math.floor((p - slack) / h) - 2)
            hi = min(bounds[1], math.ceil((q + slack) / h) + 2)
            for j in range(lo, hi + 1):
                cell = self._mesh_cell(child_level, j)
                if self.target.eroded_contains(cell, region, slack):
                    return pair(child_level - level - 1, j)
        return None


def presentation_certificate(
    presentation, depth: int, samples: int, rng, symbol_bound: int = 9
) -> CertNode:
    """Spot-check the presentation laws on randomly drawn branch words:
    diameters decay geometrically and closures nest strictly."""
    cert = CertNode(f"{presentation.name}: presentation laws to depth {depth}")
    target = presentation.target
    diam_bad = []
    nest_bad = []
    for _ in range(samples):
        word: Word = ()
        for _ in range(depth):
            word = word + (rng.randrange(symbol_bound + 1),)
            cell = presentation.v_cell(word)
            if not target.diam(cell) < F(1, 2 ** len(word)):
                diam_bad.append(word)
            if not target.closure_in_open(cell, presentation.v_cell(word[:-1])):
                nest_bad.append(word)
    cert.check(
        f"cell diameters stay below 2^-depth on {samples} sampled words",
        not diam_bad,
        f"first failure at {diam_bad[0]}" if diam_bad else "",
    )
    cert.check(
        "every sampled cell's closure sits strictly inside its parent",
        not nest_bad,
        f"first failure at {nest_bad[0]}" if nest_bad else "",
    )
    cert.note("the root cell is the whole space and is exempt from the bound")
    return cert


# === lifting maps out of Polish branch spaces ===


@dataclass
class BaireLift:
    """A Polish point map factored through a presentation: reading a
    branch until its image region is narrow enough, then descending the
    presentation one cell per resolution.  The minimal prefixes read at a
    fixed resolution form an antichain, discovered branch by branch or
    supplied up front."""

    presentation: object
    point_map: PolishPointMap
    supplied: Optional[dict] = None
    name: str = "adaptive-lift"
    _memo: dict = field(default_factory=dict, repr=False)
    _antichains: dict = field(default_factory=dict, repr=False)

    def domain_space(self) -> SymbolicSpace:
        return BAIRE

    def _minimal_prefix(self, w: Word, k: int) -> Word:
        bound = self.presentation.slack(k) / 2
        if self.supplied is not None and k in self.supplied:
            members = sorted(self.supplied[k], key=len)
            for member in members:
                member = tuple(member)
                if w[: len(member)] == member:
                    if self.point_map.target.diam(self.point_map.region(member)) > bound:
                        raise NoCell(
                            f"{self.name}: supplied prefix {member} leaves the "
                            f"image wider than {bound} at resolution {k}"
                        )
                    return member
            if any(tuple(m)[: len(w)] == w for m in members):
                raise InsufficientInput(
                    f"{self.name}: supplied family at resolution {k} needs a "
                    f"longer input than {len(w)} symbols"
                )
            raise NotAntichain(
                f"supplied family at resolution {k} leaves the branch "
                f"starting {w[: min(len(w), 6)]} uncovered"
            )
        for j in range(len(w) + 1):
            if self.point_map.target.diam(self.point_map.region(w[:j])) <= bound:
                return w[:j]
        raise InsufficientInput(
            f"{self.name}: no prefix of the {len(w)}-symbol input pins the "
            f"image below {bound} for resolution {k}"
        )

    def output(self, w: Sequence[int], k: int) -> Word:
        """The length-k presentation branch naming the image point."""
        w = tuple(w)
        t: Word = ()
        chain: Word = ()
        for kk in range(1, k + 1):
            s = self._minimal_prefix(w, kk)
            chain = chain + (s,)
            key = (kk, chain)
            hit = self._memo.get(key)
            if hit is None:
                region = self.point_map.region(s)
                child = self.presentation.locate_child(
                    t, region, self.presentation.slack(kk)
                )
                if child is None:
                    raise NoCell(
                        f"{self.name}: no cell below {t} holds the image of "
                        f"{s} at resolution {kk}"
                    )
                hit = t + (child,)
                self._memo[key] = hit
                self._antichains.setdefault(kk, set()).add(s)
            t = hit
        return t

    def max_resolution(self, w: Sequence[int], limit: int = 64) -> int:
        """Deepest resolution the input supports; maps that stop reading
        their input (constants, say) are cut off at the limit."""
        w = tuple(w)
        k = 0
        while k < limit:
            try:
                self.output(w, k + 1)
            except (InsufficientInput, NoCell):
                break
            k += 1
        return k

    def antichain(self, k: int) -> list:
        """Minimal prefixes read so far at resolution k."""
        return sorted(self._antichains.get(k, ()))

    def certificate(
        self, resolution: int, samples: int, rng, symbol_bound: int = 9
    ) -> CertNode:
        cert = CertNode(
            f"{self.name}: projection matches {self.point_map.name} "
            f"to depth {resolution}"
        )
        target = self.point_map.target
        enclosure_bad = []
        diam_bad = []
        length = 8
        for _ in range(samples):
            while True:
                w = tuple(rng.randrange(symbol_bound + 1) for _ in range(length))
                try:
                    t = self.output(w, resolution)
                    break
                except InsufficientInput:
                    length *= 2
                    if length > 4096:
                        raise
            for k in range(1, resolution + 1):
                s = self._minimal_prefix(w, k)
                cell = self.presentation.v_cell(t[:k])
                if not target.eroded_contains(
                    cell, self.point_map.region(s), self.presentation.slack(k)
                ):
                    enclosure_bad.append((w, k))
                if not target.diam(cell) < F(1, 2 ** k):
                    diam_bad.append((w, k))
        cert.check(
            f"slack-fattened image regions sit inside the located cells on "
            f"{samples} sampled branches",
            not enclosure_bad,
            f"first failure at (w, k) = {enclosure_bad[0]}" if enclosure_bad else "",
        )
        cert.check(
            "located cells respect the presentation's diameter decay",
            not diam_bad,
            f"first failure at (w, k) = {diam_bad[0]}" if diam_bad else "",
        )
        overlap = []
        for k in range(1, resolution + 1):
            family = self.antichain(k)
            for i, a in enumerate(family):
                for b in family[i + 1 :]:
                    n = min(len(a), len(b))
                    if a[:n] == b[:n]:
                        overlap.append((k, a, b))
        cert.check(
            "the minimal prefixes read at each resolution form antichains",
            not overlap,
            f"first comparable pair {overlap[0]}" if overlap else "",
        )
        cert.note(
            "image point and located branch point share a cell of diameter "
            f"below 2^-{resolution}, so they agree to that width"
        )
        return cert


def baire_extension_map(
    presentation,
    point_map: PolishPointMap,
    supplied_antichains: Optional[dict] = None,
) -> BaireLift:
    if point_map.target.kind != presentation.target.kind:
        raise SpaceMismatch(
            f"{point_map.name} maps into a {point_map.target.kind} space but "
            f"the presentation covers a {presentation.target.kind} space"
        )
    return BaireLift(
        presentation,
        point_map,
        supplied=supplied_antichains,
        name=f"lift[{point_map.name}]",
    )

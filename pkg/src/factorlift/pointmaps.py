"""Uniformly continuous maps presented at the cell level.

A point map is a self-map of one of the shipped compact spaces given by an
image-region rule: a closed cell goes to a closed cell containing the image
of every point inside it.  Uniform continuity is made effective through a
modulus: for any positive width there is an input level whose cells all
produce regions at most that wide.  Regions must shrink under cell
refinement; that is what lets branch-by-branch constructions refine their
answers without backtracking.

Parameterized families add a binary parameter stream read alongside the
branch word, and Polish point maps drop the uniform modulus entirely: they
map unbounded-alphabet branch words to regions that narrow along every
branch, at a rate the branch itself reveals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from .errors import CertificationError, SpaceMismatch
from .geometry import (
    BaireStreamSpace,
    CantorSpace,
    Cell,
    CircleSpace,
    FiniteMetricSpace,
    IntervalSpace,
    ProductSpace,
    Space,
    _norm_arc,
)
from .transducers import CANTOR, PrefixTransducer

F = Fraction

Word = tuple[int, ...]


@dataclass(frozen=True)
class PointMap:
    """A self-map presented by its action on closed cells.

    ``region_fn`` must be sound (the region contains the image of every
    point of the input cell) and monotone (finer cells give smaller
    regions).  The modulus either comes from an explicit rule or from a
    rational Lipschitz bound combined with the fact that level-m cells
    have diameter below 2^-m.
    """

    space: Space
    region_fn: Callable[[Cell], Cell]
    name: str = "map"
    lipschitz: Optional[Fraction] = None
    point_fn: Optional[Callable] = None
    modulus_fn: Optional[Callable[[Fraction], int]] = None

    def image_region(self, cell: Cell) -> Cell:
        return self.region_fn(cell)

    def point(self, x):
        if self.point_fn is None:
            raise CertificationError(f"{self.name} carries no exact point rule")
        return self.point_fn(x)

    def modulus(self, width: Fraction) -> int:
        """A level whose cells all map into regions at most this wide."""
        if width <= 0:
            raise CertificationError("modulus needs a positive width")
        if self.modulus_fn is not None:
            m = self.modulus_fn(width)
        else:
            if self.lipschitz is None:
                raise CertificationError(
                    f"{self.name} has neither a modulus rule nor a Lipschitz bound"
                )
            m = 0
            while self.lipschitz * F(1, 2 ** m) > width:
                m += 1
        if m < 0:
            raise CertificationError(f"negative modulus for {self.name}")
        return m


def identity_map(space: Space) -> PointMap:
    return PointMap(space, lambda cell: cell, "id", lipschitz=F(1), point_fn=lambda x: x)


def affine_map(offset, slope, name: Optional[str] = None) -> PointMap:
    """x -> offset + slope * x on the unit interval; the image must stay
    inside [0, 1]."""
    offset, slope = F(offset), F(slope)
    lo, hi = sorted((offset, offset + slope))
    if lo < 0 or hi > 1:
        raise CertificationError(
            f"affine image [{lo}, {hi}] leaves the unit interval"
        )
    space = IntervalSpace()

    def region(cell: Cell) -> Cell:
        a, b = space.hull(cell)
        ya, yb = offset + slope * a, offset + slope * b
        return (ya, yb) if ya <= yb else (yb, ya)

    return PointMap(
        space,
        region,
        name or f"affine({offset}+{slope}x)",
        lipschitz=abs(slope),
        point_fn=lambda x: offset + slope * x,
    )


def squaring_map() -> PointMap:
    space = IntervalSpace()

    def region(cell: Cell) -> Cell:
        a, b = space.hull(cell)
        return (a * a, b * b)

    return PointMap(space, region, "square", lipschitz=F(2), point_fn=lambda x: x * x)


def tent_map() -> PointMap:
    space = IntervalSpace()
    half = F(1, 2)

    def region(cell: Cell) -> Cell:
        a, b = space.hull(cell)
        if b <= half:
            return (2 * a, 2 * b)
        if a >= half:
            return (2 - 2 * b, 2 - 2 * a)
        # cell straddles the peak, so the maximum value 1 is attained
        return (min(2 * a, 2 - 2 * b), F(1))

    def point(x):
        return 2 * x if x <= half else 2 - 2 * x

    return PointMap(space, region, "tent", lipschitz=F(2), point_fn=point)


def rotation_map(angle) -> PointMap:
    angle = F(angle) % 1
    space = CircleSpace()

    def region(cell: Cell) -> Cell:
        start, length = cell
        return _norm_arc(start + angle, length)

    return PointMap(
        space,
        region,
        f"rot({angle})",
        lipschitz=F(1),
        point_fn=lambda x: (x + angle) % 1,
    )


def stream_map(
    machine: PrefixTransducer, point_fn: Optional[Callable] = None
) -> PointMap:
    """Self-map of the binary stream space driven by a prefix transducer;
    cylinders map to the cylinder of the transduced prefix."""
    if machine.domain != CANTOR or machine.codomain != CANTOR:
        raise SpaceMismatch(f"{machine.name} is not a binary stream self-map")
    space = CantorSpace()

    def region(cell: Cell) -> Cell:
        return tuple(machine.step(tuple(cell)))

    def modulus(width: Fraction) -> int:
        n = 0
        while F(1, 2 ** (n + 1)) > width:
            n += 1
        return machine.modulus(n)

    return PointMap(space, region, machine.name, point_fn=point_fn, modulus_fn=modulus)


def table_map(
    space: FiniteMetricSpace, images: Sequence[int], name: Optional[str] = None
) -> PointMap:
    images = tuple(images)
    if len(images) != space.size or not all(0 <= y < space.size for y in images):
        raise CertificationError(f"image table {images} does not fit the space")

    def region(cell: Cell) -> Cell:
        return tuple(sorted({images[i] for i in cell}))

    return PointMap(
        space,
        region,
        name or f"table{images}",
        point_fn=lambda x: images[x],
        # level-1 cells are singletons, so their regions are singletons too
        modulus_fn=lambda width: 1,
    )


def product_map(left: PointMap, right: PointMap, name: Optional[str] = None) -> PointMap:
    space = ProductSpace(left.space, right.space)

    def region(cell: Cell) -> Cell:
        return (left.image_region(cell[0]), right.image_region(cell[1]))

    point_fn = None
    if left.point_fn is not None and right.point_fn is not None:
        point_fn = lambda xy: (left.point(xy[0]), right.point(xy[1]))

    return PointMap(
        space,
        region,
        name or f"{left.name}*{right.name}",
        point_fn=point_fn,
        modulus_fn=lambda width: max(left.modulus(width), right.modulus(width)),
    )


# === parameterized families ===


@dataclass(frozen=True)
class ParameterizedFamily:
    """A map into a space read off two finite words at once: a binary
    parameter prefix and a branch prefix.  ``modulus_fn`` turns a width
    into the pair of prefix lengths that pins the region below it."""

    space: Space
    region_fn: Callable[[Word, Word], Cell]
    modulus_fn: Callable[[Fraction], tuple]
    name: str = "family"

    def region(self, q: Sequence[int], s: Sequence[int]) -> Cell:
        return self.region_fn(tuple(q), tuple(s))

    def moduli(self, width: Fraction) -> tuple:
        if width <= 0:
            raise CertificationError("modulus needs a positive width")
        l, m = self.modulus_fn(width)
        if l < 0 or m < 0:
            raise CertificationError(f"negative moduli for {self.name}")
        return l, m


def family_from_map(cover_system, point_map: PointMap) -> ParameterizedFamily:
    """The parameter-free family tracking a point map along branch cells."""
    if point_map.space != cover_system.space:
        raise SpaceMismatch(
            f"{point_map.name} does not act on the {cover_system.name} space"
        )

    def region(q: Word, s: Word) -> Cell:
        return point_map.image_region(cover_system.v_cell(s))

    return ParameterizedFamily(
        cover_system.space,
        region,
        lambda width: (0, point_map.modulus(width)),
        name=point_map.name,
    )


def branch_family(cover_system) -> ParameterizedFamily:
    """The family that ignores the parameter and returns the branch cell
    itself; lifting it recovers a branch of the same point."""

    def region(q: Word, s: Word) -> Cell:
        return cover_system.v_cell(s)

    def moduli(width: Fraction) -> tuple:
        m = 0
        while F(1, 2 ** m) > width:
            m += 1
        return 0, m

    return ParameterizedFamily(cover_system.space, region, moduli, "branch-projection")


def rotation_family(cover_system) -> ParameterizedFamily:
    """Circle rotations indexed by a binary parameter stream: the angle is
    sum of q_i * 2^-(i+2), known to width 2^-(len(q)+1) from a prefix."""
    space = cover_system.space
    if not isinstance(space, CircleSpace):
        raise SpaceMismatch("rotation family needs the circle")

    def region(q: Word, s: Word) -> Cell:
        angle = sum(F(b, 2 ** (i + 2)) for i, b in enumerate(q))
        width = F(1, 2 ** (len(q) + 1))
        start, length = cover_system.v_cell(s)
        return _norm_arc(start + angle, length + width)

    def moduli(width: Fraction) -> tuple:
        l = 0
        while F(1, 2 ** (l + 1)) > width / 2:
            l += 1
        m = 0
        while F(1, 2 ** m) > width / 2:
            m += 1
        return l, m

    return ParameterizedFamily(space, region, moduli, "rotation-family")


def weakened_family(family: ParameterizedFamily, factor) -> ParameterizedFamily:
    """Deliberately under-read prefixes: moduli are taken for a width
    several times larger than requested.  Lifting such a family must fail
    with a diagnosable error rather than a wrong answer."""
    factor = F(factor)
    if factor <= 1:
        raise CertificationError("weakening factor must exceed 1")
    return ParameterizedFamily(
        family.space,
        family.region_fn,
        lambda width: family.modulus_fn(width * factor),
        f"{family.name}-weakened",
    )


# === maps out of Polish branch spaces ===


@dataclass(frozen=True)
class PolishPointMap:
    """A map from unbounded-alphabet branch words into a target space,
    with no uniform modulus: the image region narrows along every branch,
    but how fast is only discovered by reading the branch."""

    target: Any
    region_fn: Callable[[Word], Cell]
    name: str = "polish-map"
    point_fn: Optional[Callable] = None

    def region(self, word: Sequence[int]) -> Cell:
        return self.region_fn(tuple(word))

    def point(self, x):
        if self.point_fn is None:
            raise CertificationError(f"{self.name} carries no exact point rule")
        return self.point_fn(x)


def baire_identity_map() -> PolishPointMap:
    return PolishPointMap(BaireStreamSpace(), lambda w: tuple(w), "id")


def parity_expansion_map() -> PolishPointMap:
    """Binary expansion read off the parities of the input symbols."""
    space = IntervalSpace()

    def region(w: Word) -> Cell:
        low = sum(F(b % 2, 2 ** (i + 1)) for i, b in enumerate(w))
        return (low, low + F(1, 2 ** len(w)))

    return PolishPointMap(space, region, "parity-expansion")


def constant_interval_map(value) -> PolishPointMap:
    value = F(value)
    if not 0 <= value <= 1:
        raise CertificationError("constant value outside the unit interval")
    return PolishPointMap(
        IntervalSpace(),
        lambda w: (value, value),
        f"const({value})",
        point_fn=lambda x: value,
    )

"""Tree-structured cover systems over the shipped compact spaces.

A cover system assigns to every finite branch word s an open cell V_s and,
for each child index j below a fixed per-level arity, a mesh cell W_{sj};
the child cell is V_{sj} = V_s ∩ W_{sj}.  Levels shrink strictly (diameter
below 2^-k at depth k >= 1), each level covers the space, the selected
W-children cover the closure of their parent, and every level carries an
exact rational Lebesgue number.  Branch words therefore name points: the
closures of the cells along an infinite branch intersect to a single
point, which is what the locate/project operations manipulate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .certificates import CertNode, FAIL, PASS
from .errors import CertificationError, InvalidBranch, NoCell
from .geometry import (
    CantorSpace,
    Cell,
    CircleSpace,
    FiniteMetricSpace,
    IntervalSpace,
    PointApprox,
    ProductSpace,
    Space,
)
from .transducers import SymbolicSpace

F = Fraction

Word = tuple[int, ...]


@dataclass
class CoverSystem:
    space: Space
    name: str = "cover-system"
    tamper: dict = field(default_factory=dict)
    _v_memo: dict = field(default_factory=dict, repr=False)
    _sel_memo: dict = field(default_factory=dict, repr=False)

    def child_arity(self, k: int) -> int:
        return self.space.child_arity(k)

    def branch_space(self) -> SymbolicSpace:
        # arities stabilize after the first level for every shipped kind
        return SymbolicSpace((self.child_arity(1),), self.child_arity(2))

    def epsilon(self, k: int) -> Fraction:
        return self.space.level_epsilon(k)

    def validate_word(self, s: Sequence[int]) -> Word:
        s = tuple(s)
        for i, j in enumerate(s):
            if not 0 <= j < self.child_arity(i + 1):
                raise InvalidBranch(
                    f"symbol {j} at level {i + 1} exceeds arity "
                    f"{self.child_arity(i + 1)}"
                )
        return s

    def selection(self, s: Word) -> list[Cell]:
        """The padded W-cells for the children of word s."""
        if s not in self._sel_memo:
            sel = self.space.select_children(self.v_cell(s), len(s) + 1)
            sel = [
                self.tamper.get(s + (j,), cell) for j, cell in enumerate(sel)
            ]
            self._sel_memo[s] = sel
        return self._sel_memo[s]

    def w_cell(self, s: Sequence[int]) -> Cell:
        s = self.validate_word(s)
        if not s:
            return self.space.whole()
        return self.selection(s[:-1])[s[-1]]

    def v_cell(self, s: Sequence[int]) -> Cell:
        s = self.validate_word(s)
        if s not in self._v_memo:
            if not s:
                self._v_memo[s] = self.space.whole()
            else:
                cell = self.space.intersect(self.v_cell(s[:-1]), self.w_cell(s))
                if cell is None:
                    raise CertificationError(
                        f"{self.name}: empty cell at branch {s}"
                    )
                self._v_memo[s] = cell
        return self._v_memo[s]

    def words_at(self, k: int):
        words = [()]
        for level in range(1, k + 1):
            arity = self.child_arity(level)
            words = [s + (j,) for s in words for j in range(arity)]
        return words


def interval_system() -> CoverSystem:
    return CoverSystem(IntervalSpace(), "unit-interval")


def circle_system() -> CoverSystem:
    return CoverSystem(CircleSpace(), "circle")


def cantor_system() -> CoverSystem:
    return CoverSystem(CantorSpace(), "binary-streams")


def finite_system(distances=None) -> CoverSystem:
    if distances is None:
        one = F(1)
        distances = ((F(0), one, one), (one, F(0), one), (one, one, F(0)))
    return CoverSystem(FiniteMetricSpace(tuple(map(tuple, distances))), "finite")


def product_system(left: Space, right: Space, name="product") -> CoverSystem:
    return CoverSystem(ProductSpace(left, right), name)


def shipped_systems() -> dict[str, CoverSystem]:
    return {
        "interval": interval_system(),
        "circle": circle_system(),
        "cantor": cantor_system(),
        "finite": finite_system(),
        "cantor-product": product_system(
            CantorSpace(), CantorSpace(), "cantor-product"
        ),
    }


def corrupt_system(cs: CoverSystem, word: Word = (0,)) -> CoverSystem:
    """Shrink one W cell so child coverage fails; negative control."""
    word = cs.validate_word(word)
    if not word:
        raise CertificationError("corruption needs a nonempty branch word")
    bad = cs.space.shrink_cell(cs.w_cell(word))
    return CoverSystem(cs.space, cs.name + "-corrupted", tamper={word: bad})


def verify_cover_system(cs: CoverSystem, depth: int) -> CertNode:
    """Check every structural condition at all levels up to depth."""
    cert = CertNode(f"cover system '{cs.name}' to depth {depth}")
    space = cs.space
    level_cells: dict[int, list[Cell]] = {k: [] for k in range(1, depth + 1)}

    words = [()]
    for k in range(depth):
        bound = F(1, 2 ** (k + 1))
        eps = cs.epsilon(k)
        diam_bad = []
        cover_bad = []
        lebesgue_bad = []
        glue_bad = []
        for s in words:
            parent = cs.v_cell(s)
            children = cs.selection(s)
            for j, w in enumerate(children):
                sj = s + (j,)
                v = space.intersect(parent, w)
                if v is None or v != cs.v_cell(sj):
                    glue_bad.append(sj)
                    continue
                level_cells[k + 1].append(v)
                if not (space.diam(v) < bound and space.diam(w) < bound):
                    diam_bad.append(sj)
                if not space.closed_subset(v, parent):
                    glue_bad.append(sj)
            if not space.open_cover_of_closure(parent, children):
                cover_bad.append(s)
            if not space.eroded_cover_of_closure(parent, children, eps):
                lebesgue_bad.append(s)

        node = cert.section(f"level {k} -> {k + 1} ({len(words)} cells)")
        _report(node, "child cells glue exactly (V = parent ∩ W, nested)", glue_bad, cs)
        _report(node, f"diameters below {bound}", diam_bad, cs)
        _report(node, "children cover parent closure", cover_bad, cs)
        _report(node, f"Lebesgue number {eps} certified by erosion", lebesgue_bad, cs)
        words = [s + (j,) for s in words for j in range(cs.child_arity(k + 1))]

    whole = space.whole()
    for k in range(1, depth + 1):
        distinct = list(dict.fromkeys(level_cells[k]))
        ok = space.open_cover_of_closure(whole, distinct)
        cert.check(
            f"level {k} covers the whole space",
            ok,
            f"{len(distinct)} distinct cells",
        )
    cert.note("root cell is the whole space; decay enforced from level 1")
    return cert


def _report(node: CertNode, title: str, bad: list, cs: CoverSystem):
    if not bad:
        node.check(title, True)
    else:
        witness = bad[0]
        node.check(
            title,
            False,
            f"{len(bad)} failures, first at branch {witness}: "
            f"{cs.space.describe(cs.v_cell(witness) if witness else cs.space.whole())}",
        )


def project_symbol_to_point(cs: CoverSystem, prefix: Sequence[int], k: int) -> Cell:
    """The closed level-k cell a branch prefix pins down."""
    prefix = cs.validate_word(prefix)
    if len(prefix) < k:
        raise InvalidBranch(f"prefix of length {len(prefix)} cannot reach level {k}")
    return cs.v_cell(prefix[:k])


def branch_point(cs: CoverSystem, prefix: Sequence[int]) -> PointApprox:
    """The point named by a branch prefix, as its chain of closed cells."""
    prefix = cs.validate_word(prefix)
    cells = [cs.v_cell(prefix[:i]) for i in range(1, len(prefix) + 1)]
    return PointApprox.from_cells(cs.space, cells or [cs.space.whole()])


def lebesgue_number(cs: CoverSystem, s: Sequence[int]) -> Fraction:
    """Every ball of this radius centered in the closure of V_s lies in
    one of the selected child W cells."""
    s = cs.validate_word(s)
    eps = cs.epsilon(len(s))
    if not cs.space.eroded_cover_of_closure(cs.v_cell(s), cs.selection(s), eps):
        raise CertificationError(f"Lebesgue number {eps} failed at branch {s}")
    return eps


def locate_ball(
    cs: CoverSystem,
    center: PointApprox,
    radius: Fraction,
    k: int,
    constraint: Sequence[int] = (),
) -> Word:
    """Lexicographically least branch word of length k, extending the
    constraint, whose open cell contains the ball around the center."""
    if radius < 0:
        raise CertificationError("negative radius")
    t = cs.validate_word(constraint)
    if k < len(t):
        raise NoCell(f"depth {k} below constraint length {len(t)}")
    bound = F(1, 2 ** (k + 2))
    if 0 < radius < bound:
        bound = radius
    enclosure = center.enclosure(bound)
    if k == len(t):
        if not cs.space.eroded_contains(cs.v_cell(t), enclosure, radius):
            raise NoCell(f"ball escapes constrained cell at {t}")
        return t
    while len(t) < k:
        arity = cs.child_arity(len(t) + 1)
        for j in range(arity):
            if cs.space.eroded_contains(cs.v_cell(t + (j,)), enclosure, radius):
                t = t + (j,)
                break
        else:
            raise NoCell(
                f"no level-{len(t) + 1} cell holds the ball of radius {radius} "
                f"below branch {t}; moduli too coarse"
            )
    return t

"""The basis-shift operator on l1 and certified factoring of matrix operators.

The operator U sends basis vector e_i to e_{successor(i)}.  Because the
successor map is injective, U is a linear isometry of l1.  Any matrix
operator T on a finite-dimensional space factors through a scalar multiple
of U: enumerate a countable dense subset of the unit ball that is closed
under (1/rho)T, realize the index dynamics as a finite injection, embed that
injection into the layout, and read the factor map off the embedding.  All
arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .certificates import CertNode
from .errors import (
    CertificationError,
    NormBoundViolated,
    NotInjective,
)
from .injections import (
    EmbeddingCertificate,
    PartialInjection,
    embed_injection,
    encode_line,
    successor,
)
from .pairing import pair, unpair
from .rationals import format_fraction

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


# === sparse vectors over the layout basis ===


class SparseL1Vector:
    """Finitely supported rational vector indexed by N, zero terms dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction | int | str] | None = None):
        clean: dict[int, Fraction] = {}
        for i, c in (coeffs or {}).items():
            if i < 0:
                raise CertificationError(f"basis index {i} is negative")
            f = Fraction(c)
            if f != 0:
                clean[i] = f
        self.coeffs = clean

    def norm1(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs.values()), Fraction(0))

    def scale(self, a) -> "SparseL1Vector":
        a = Fraction(a)
        return SparseL1Vector({i: a * c for i, c in self.coeffs.items()})

    def add(self, other: "SparseL1Vector") -> "SparseL1Vector":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, Fraction(0)) + c
        return SparseL1Vector(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseL1Vector) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = " + ".join(
            f"{format_fraction(c)}*e{i}" for i, c in sorted(self.coeffs.items())
        )
        return f"<{terms or '0'}>"


def apply_universal(x: SparseL1Vector) -> SparseL1Vector:
    """U(x): relabel the support along `successor`.  Exact isometry."""
    out: dict[int, Fraction] = {}
    for i, c in x.coeffs.items():
        j = successor(i)
        if j in out:  # successor is injective, so this is unreachable
            raise NotInjective(f"support collision at {j}")
        out[j] = c
    return SparseL1Vector(out)


def frechet_apply(xs: Sequence[SparseL1Vector]) -> list[SparseL1Vector]:
    """Componentwise scaled shift: component n (1-based) maps to n*U(x_n).

    This is the coordinate rule of the product operator whose factors realize
    operators of arbitrarily large norm.
    """
    return [apply_universal(x).scale(n + 1) for n, x in enumerate(xs)]


# === finite-dimensional models with decidable unit balls ===


class NormKind(Enum):
    L1 = "l1"
    LINF = "linf"
    L2SQ = "l2sq"  # membership decided on the squared norm


@dataclass(frozen=True)
class BanachModel:
    dim: int
    kind: NormKind = NormKind.L1

    def vector(self, entries: Iterable) -> Vector:
        v = tuple(Fraction(e) for e in entries)
        if len(v) != self.dim:
            raise CertificationError(f"expected dim {self.dim}, got {len(v)}")
        return v

    def in_unit_ball(self, v: Vector) -> bool:
        if self.kind is NormKind.L1:
            return sum(abs(c) for c in v) <= 1
        if self.kind is NormKind.LINF:
            return max((abs(c) for c in v), default=Fraction(0)) <= 1
        return sum(c * c for c in v) <= 1

    def norm(self, v: Vector) -> Fraction:
        """Exact for L1/LINF; for L2 only the square is rational."""
        if self.kind is NormKind.L1:
            return sum((abs(c) for c in v), Fraction(0))
        if self.kind is NormKind.LINF:
            return max((abs(c) for c in v), default=Fraction(0))
        raise CertificationError("L2 norms are certified via norm_squared")

    def norm_squared(self, v: Vector) -> Fraction:
        return sum((c * c for c in v), Fraction(0))

    def matrix(self, rows: Iterable[Iterable]) -> Matrix:
        m = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if len(m) != self.dim or any(len(r) != self.dim for r in m):
            raise CertificationError(f"expected {self.dim}x{self.dim} matrix")
        return m

    def apply(self, mat: Matrix, v: Vector) -> Vector:
        return tuple(
            sum((r[j] * v[j] for j in range(self.dim)), Fraction(0)) for r in mat
        )

    def mat_mul(self, a: Matrix, b: Matrix) -> Matrix:
        n = self.dim
        return tuple(
            tuple(
                sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0))
                for j in range(n)
            )
            for i in range(n)
        )

    def identity(self) -> Matrix:
        return tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(self.dim))
            for i in range(self.dim)
        )

    def operator_norm(self, mat: Matrix) -> Fraction:
        """Exact operator norm: max column sum (L1) / max row sum (LINF)."""
        if self.kind is NormKind.L1:
            return max(
                sum((abs(mat[i][j]) for i in range(self.dim)), Fraction(0))
                for j in range(self.dim)
            )
        if self.kind is NormKind.LINF:
            return max(
                sum((abs(c) for c in row), Fraction(0)) for row in mat
            )
        raise CertificationError(
            "L2 operator norms are not rational; supply a certified bound"
        )


def unit_ball_grid(model: BanachModel, count: int) -> list[Vector]:
    """First `count` rational unit-ball points, by denominator then lex order.

    Deterministic: denominator q = 1, 2, ... and numerator tuples in
    lexicographic order; points already produced with a smaller denominator
    are skipped.
    """
    out: list[Vector] = []
    seen: set[Vector] = set()
    for q in itertools.count(1):
        if len(out) >= count:
            break
        for nums in itertools.product(range(-q, q + 1), repeat=model.dim):
            v = tuple(Fraction(p, q) for p in nums)
            if v in seen or not model.in_unit_ball(v):
                continue
            seen.add(v)
            out.append(v)
            if len(out) >= count:
                break
    return out


# === dense enumerations closed under the scaled operator ===


@dataclass
class OrbitEnumeration:
    """A dense-ball enumeration z with z_{pair(e,r)} = points[e], plus the
    index dynamics sigma realizing (1/rho)T as an injection on indices."""

    model: BanachModel
    matrix: Matrix
    rho: Fraction
    points: list[Vector]
    sigma: PartialInjection
    covered: list[int]            # indices pair(e, r) forming sigma's domain pool
    frontier: list[int]           # covered indices omitted: image past the frontier
    repetitions: int

    def value(self, index: int) -> Vector:
        e, _ = unpair(index)
        if e >= len(self.points):
            raise CertificationError(f"index {index} beyond the enumeration")
        return self.points[e]

    def scaled_image(self, v: Vector) -> Vector:
        return tuple(c / self.rho for c in self.model.apply(self.matrix, v))


def dense_orbit_enumeration(
    model: BanachModel,
    matrix: Matrix,
    rho,
    base_count: int = 16,
    orbit_depth: int = 8,
    repetitions: int = 4,
) -> OrbitEnumeration:
    """Build the enumeration and its index dynamics.

    The point list is the deterministic ball grid extended with forward
    orbits of (1/rho)T to `orbit_depth`.  sigma maps pair(e, r) to a strictly
    later, previously unused repetition of the image point's index; images
    falling outside the point list (orbit frontier) are omitted and recorded.
    """
    rho = Fraction(rho)
    if rho <= 0:
        raise NormBoundViolated(f"rho must be positive, got {format_fraction(rho)}")
    try:
        exact = model.operator_norm(matrix)
        if rho < exact:
            raise NormBoundViolated(
                f"rho = {format_fraction(rho)} < exact norm {format_fraction(exact)}"
            )
    except CertificationError:
        pass  # L2: bound is caller-certified, membership is still re-checked below
    points = list(unit_ball_grid(model, base_count))
    index: dict[Vector, int] = {v: e for e, v in enumerate(points)}
    enum = OrbitEnumeration(
        model, matrix, rho, points, PartialInjection({}), [], [], repetitions
    )
    depth = {e: 0 for e in range(len(points))}
    queue = list(range(len(points)))
    while queue:
        e = queue.pop(0)
        if depth[e] >= orbit_depth:
            continue
        y = enum.scaled_image(points[e])
        if not model.in_unit_ball(y):
            raise NormBoundViolated(
                f"(1/rho)T leaves the unit ball at point {e}: rho too small"
            )
        if y not in index:
            index[y] = len(points)
            points.append(y)
            depth[index[y]] = depth[e] + 1
            queue.append(index[y])
    covered = sorted(
        pair(e, r) for e in range(len(points)) for r in range(repetitions)
    )
    entries: dict[int, int] = {}
    used: dict[int, set[int]] = {}
    frontier: list[int] = []
    for i in covered:
        e, _ = unpair(i)
        y = enum.scaled_image(points[e])
        target = index.get(y)
        if target is None:
            frontier.append(i)
            continue
        r2 = 0
        taken = used.setdefault(target, set())
        while pair(target, r2) <= i or r2 in taken:
            r2 += 1
        taken.add(r2)
        entries[i] = pair(target, r2)
    enum.sigma = PartialInjection(entries)
    enum.covered = covered
    enum.frontier = frontier
    return enum


def enumeration_certificate(enum: OrbitEnumeration) -> CertNode:
    """Exactness and structure checks for an orbit enumeration."""
    cert = CertNode("dense orbit enumeration")
    cert.check(
        "sigma is injective on its domain",
        len(set(enum.sigma.entries.values())) == len(enum.sigma.entries),
    )
    bad = [
        i
        for i, j in enum.sigma.entries.items()
        if enum.scaled_image(enum.value(i)) != enum.value(j)
    ]
    cert.check(
        "scaled image matches the enumeration on every covered index",
        not bad,
        f"first witness index {bad[0]}" if bad else f"{len(enum.sigma.entries)} indices",
    )
    cert.check(
        "every point appears at infinitely many indices (spot check)",
        all(
            enum.value(pair(e, r)) == enum.points[e]
            for e in range(min(4, len(enum.points)))
            for r in (0, 5, 100)
        ),
    )
    cert.note(
        "frontier",
        f"{len(enum.frontier)} covered indices omitted (image past orbit depth)",
    )
    return cert


# === factor maps ===


@dataclass
class FactorMap:
    """pi(e_i) = z at the enumeration index embedded at layout index i, else 0.

    Satisfies T . pi = pi . (rho U) exactly on every covered basis index.
    """

    enum: OrbitEnumeration
    embedding: EmbeddingCertificate
    layout_of: dict[int, int] = field(default_factory=dict)  # enum idx -> layout idx
    enum_of: dict[int, int] = field(default_factory=dict)    # layout idx -> enum idx

    def basis_image(self, layout_index: int) -> Vector:
        n = self.enum_of.get(layout_index)
        if n is None:
            return tuple(Fraction(0) for _ in range(self.enum.model.dim))
        return self.enum.value(n)

    def apply(self, x: SparseL1Vector) -> Vector:
        out = [Fraction(0)] * self.enum.model.dim
        for i, c in x.coeffs.items():
            img = self.basis_image(i)
            for k in range(self.enum.model.dim):
                out[k] += c * img[k]
        return tuple(out)


def synthesize_factor_map(enum: OrbitEnumeration) -> FactorMap:
    """Embed the index dynamics and read the factor map off the embedding.

    Covered indices that sigma omits (frontier) still get fresh layout slots
    so that every enumeration point is attained by some basis vector.
    """
    cert = embed_injection(enum.sigma)
    layout_of = dict(cert.relabel)
    extra_copy = cert.copies.get("line", 0)
    for i in enum.covered:
        if i not in layout_of:
            layout_of[i] = encode_line(extra_copy, 0)
            extra_copy += 1
    enum_of = {v: k for k, v in layout_of.items()}
    if len(enum_of) != len(layout_of):
        raise NotInjective("layout relabeling collides")
    return FactorMap(enum, cert, layout_of, enum_of)


def commutation_certificate(
    fmap: FactorMap,
    outside_samples: int = 64,
    rng=None,
) -> CertNode:
    """Certify T(pi(e_i)) = pi(rho U(e_i)) index by index, exactly.

    Covered edges are checked exhaustively.  Off-support indices are sampled;
    the both-sides-zero claim applies when the successor also lies off the
    support (left frontiers of line components are recorded, not claimed).
    """
    enum, model = fmap.enum, fmap.enum.model
    cert = CertNode("factor map commutation")
    bad = []
    checked = 0
    for n, n_next in enum.sigma.entries.items():
        i = fmap.layout_of[n]
        lhs = model.apply(enum.matrix, fmap.basis_image(i))
        rhs = tuple(enum.rho * c for c in fmap.basis_image(successor(i)))
        if lhs != rhs:
            bad.append(i)
        checked += 1
    cert.check(
        "exact commutation on every covered basis index",
        not bad,
        f"first witness layout index {bad[0]}" if bad else f"{checked} indices",
    )
    zero = tuple(Fraction(0) for _ in range(model.dim))
    support = set(fmap.enum_of)
    sampled = skipped = attempts = 0
    witness = None
    if rng is not None:
        while sampled < outside_samples and attempts < 50 * outside_samples:
            attempts += 1
            i = rng.randrange(10**6)
            try:
                s = successor(i)
            except CertificationError:
                continue  # not a layout index: e_i is not a basis vector
            if i in support:
                continue
            if s in support:
                skipped += 1  # left frontier of a line copy: no claim made
                continue
            lhs = model.apply(enum.matrix, fmap.basis_image(i))
            rhs = tuple(enum.rho * c for c in fmap.basis_image(s))
            if lhs != zero or rhs != zero:
                witness = i
                break
            sampled += 1
        cert.check(
            "both sides vanish off the embedded support (sampled)",
            witness is None,
            f"witness {witness}" if witness is not None else
            f"{sampled} sampled, {skipped} frontier-adjacent skipped",
        )
    surj = all(
        fmap.basis_image(fmap.layout_of[pair(e, 0)]) == enum.points[e]
        for e in range(len(enum.points))
    )
    cert.check("every enumeration point is attained by a basis vector", surj,
               f"{len(enum.points)} points")
    return cert


# === norm growth ===


@dataclass
class NormGrowthReport:
    powers: list[Fraction]          # ||T^n||, n = 1..N
    reference: list[Fraction]       # ||U^n|| (1 for the isometric shift)
    ratios: list[Fraction]
    min_admissible_constant: Fraction
    strictly_growing: bool


def norm_growth_certificate(
    model: BanachModel,
    matrix: Matrix,
    steps: int,
    reference_norms: Sequence[Fraction] | None = None,
) -> tuple[NormGrowthReport, CertNode]:
    """Exact ||T^n|| tabulation against a reference operator's power norms.

    The default reference is the basis-shift isometry, whose powers all have
    norm exactly 1.  The report carries the least constant C with
    ||T^n|| <= C * ||U^n|| over the tabulated range; unbounded growth of the
    ratios is evidence that no finite C works globally.
    """
    if steps < 1:
        raise CertificationError("need at least one power")
    ref = (
        [Fraction(r) for r in reference_norms]
        if reference_norms is not None
        else [Fraction(1)] * steps
    )
    if len(ref) < steps:
        raise CertificationError("reference norm sequence too short")
    powers: list[Fraction] = []
    acc = matrix
    for _ in range(steps):
        powers.append(model.operator_norm(acc))
        acc = model.mat_mul(acc, matrix)
    ratios = [p / r for p, r in zip(powers, ref)]
    growing = all(b > a for a, b in zip(ratios, ratios[1:]))
    report = NormGrowthReport(powers, ref[:steps], ratios, max(ratios), growing)
    cert = CertNode("norm growth against the reference operator")
    cert.note(
        "ratios",
        ", ".join(format_fraction(r) for r in ratios[: min(8, len(ratios))])
        + ("..." if len(ratios) > 8 else ""),
    )
    cert.check(
        "least admissible constant tabulated exactly",
        report.min_admissible_constant == max(ratios),
        f"C >= {format_fraction(report.min_admissible_constant)}",
    )
    if growing:
        cert.note(
            "strict growth",
            "ratio sequence strictly increases: no tabulated C is final",
        )
    return report, cert

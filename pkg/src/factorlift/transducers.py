"""Symbolic spaces and prefix transducers.

A symbolic space is a countable product of discrete alphabets (size >= 2 per
level, or unbounded).  A prefix transducer is a monotone, productive map on
finite words with an explicit modulus: inputs of length modulus(k) determine
at least k output symbols.  These are the finite, checkable avatars of
continuous maps between the corresponding infinite-product spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .errors import (
    CertificationError,
    EmptyFamily,
    InsufficientInput,
    InvalidBranch,
    SpaceMismatch,
)
from .pairing import pair, unpair

Word = tuple[int, ...]


# === spaces ===


@dataclass(frozen=True)
class SymbolicSpace:
    """Alphabet sizes per level: an explicit head, then a constant tail.
    None means an unbounded (N-valued) level."""

    head: tuple[Optional[int], ...] = ()
    tail: Optional[int] = 2

    def __post_init__(self):
        for a in (*self.head, self.tail):
            if a is not None and a < 2:
                raise CertificationError(f"alphabet size {a} < 2")

    def arity(self, i: int) -> Optional[int]:
        return self.head[i] if i < len(self.head) else self.tail


@dataclass(frozen=True)
class InterleavedSpace:
    """Countably many component spaces packed on one index line: position
    pair(n, i) carries symbol i of component n; components beyond the
    explicit list follow the tail component."""

    components: tuple = ()
    tail_component: Union[SymbolicSpace, "InterleavedSpace"] = None  # type: ignore

    def arity(self, p: int) -> Optional[int]:
        n, i = unpair(p)
        space = (
            self.components[n] if n < len(self.components) else self.tail_component
        )
        return space.arity(i)


Space = Union[SymbolicSpace, InterleavedSpace]

CANTOR = SymbolicSpace((), 2)
BAIRE = SymbolicSpace((), None)


def full_product(arities: Sequence[Optional[int]], tail: Optional[int]) -> SymbolicSpace:
    return SymbolicSpace(tuple(arities), tail)


def validate_word(space: Space, w: Sequence[int]) -> Word:
    for i, s in enumerate(w):
        a = space.arity(i)
        if s < 0 or (a is not None and s >= a):
            raise InvalidBranch(f"symbol {s} at level {i} leaves alphabet of size {a}")
    return tuple(w)


@dataclass(frozen=True)
class Stream:
    """Eventually periodic infinite symbol sequence: pre, then cycle forever."""

    pre: Word = ()
    cycle: Word = (0,)

    def __post_init__(self):
        if not self.cycle:
            raise CertificationError("stream cycle must be nonempty")

    def prefix(self, k: int) -> Word:
        out = list(self.pre[:k])
        i = 0
        while len(out) < k:
            out.append(self.cycle[i % len(self.cycle)])
            i += 1
        return tuple(out)


# === transducers ===


@dataclass
class PrefixTransducer:
    domain: Space
    codomain: Space
    step_fn: Callable[[Word], Word]
    modulus_fn: Callable[[int], int]
    name: str = "map"

    def step(self, w: Sequence[int]) -> Word:
        return self.step_fn(validate_word(self.domain, w))

    def modulus(self, k: int) -> int:
        m = self.modulus_fn(k)
        if m < 0:
            raise CertificationError(f"negative modulus {m}")
        return m

    def __repr__(self):
        return f"<transducer {self.name}>"


def evaluate_transducer(f: PrefixTransducer, w: Sequence[int], k: int) -> Word:
    """Run f on w, demanding at least k determined output symbols."""
    need = f.modulus(k)
    if len(w) < need:
        raise InsufficientInput(
            f"{f.name}: resolution {k} needs {need} input symbols, got {len(w)}"
        )
    out = f.step(w)
    if len(out) < k:
        raise CertificationError(
            f"{f.name}: productivity violated: modulus({k}) = {need} "
            f"but only {len(out)} symbols determined"
        )
    return validate_word(f.codomain, out)


def compose_transducers(f: PrefixTransducer, g: PrefixTransducer) -> PrefixTransducer:
    """f after g.  Modulus law: (f.g).modulus(k) = g.modulus(f.modulus(k))."""
    if g.codomain != f.domain:
        raise SpaceMismatch(f"cannot compose {f.name} after {g.name}")
    return PrefixTransducer(
        g.domain,
        f.codomain,
        lambda w: f.step_fn(g.step_fn(w)),
        lambda k: g.modulus(f.modulus(k)),
        name=f"({f.name} . {g.name})",
    )


# === built-ins ===


def identity_transducer(space: Space) -> PrefixTransducer:
    return PrefixTransducer(space, space, lambda w: w, lambda k: k, "id")


def shift_transducer(space: Space) -> PrefixTransducer:
    if isinstance(space, SymbolicSpace) and space.head:
        raise SpaceMismatch("shift needs a level-independent alphabet")
    return PrefixTransducer(space, space, lambda w: w[1:], lambda k: k + 1, "shift")


def constant_transducer(domain: Space, codomain: Space, value: Stream) -> PrefixTransducer:
    return PrefixTransducer(
        domain,
        codomain,
        lambda w: value.prefix(len(w)),
        lambda k: k,
        f"const:{','.join(map(str, value.pre))};{','.join(map(str, value.cycle))}",
    )


def odometer_transducer() -> PrefixTransducer:
    """Binary add-one-with-carry on the two-symbol space."""

    def step(w: Word) -> Word:
        out = []
        carry = True
        for b in w:
            if carry:
                out.append(1 - b)
                carry = b == 1
            else:
                out.append(b)
        # with carry still pending the next output symbol is undetermined,
        # but all |w| flips emitted so far are final
        return tuple(out)

    return PrefixTransducer(CANTOR, CANTOR, step, lambda k: k, "odometer")


def substitution_transducer(rules: dict[int, Word], space: Space = CANTOR) -> PrefixTransducer:
    if not rules:
        raise EmptyFamily("substitution needs at least one rule")
    if any(len(img) == 0 for img in rules.values()):
        raise CertificationError("substitution images must be nonempty")
    min_len = min(len(img) for img in rules.values())

    def step(w: Word) -> Word:
        out: list[int] = []
        for s in w:
            if s not in rules:
                raise InvalidBranch(f"no substitution rule for symbol {s}")
            out.extend(rules[s])
        return tuple(out)

    return PrefixTransducer(
        space, space, step, lambda k: -(-k // min_len), "substitution"
    )


def block_transducer(
    domain: Space,
    codomain: Space,
    table: dict[Word, Word],
    in_block: int,
    out_block: int,
) -> PrefixTransducer:
    """Tabulated map applied to consecutive input blocks of fixed length."""
    if any(len(k) != in_block or len(v) != out_block for k, v in table.items()):
        raise CertificationError("table entries must match the block lengths")

    def step(w: Word) -> Word:
        out: list[int] = []
        for j in range(len(w) // in_block):
            key = w[j * in_block : (j + 1) * in_block]
            if key not in table:
                raise InvalidBranch(f"no table entry for block {key}")
            out.extend(table[key])
        return tuple(out)

    return PrefixTransducer(
        domain,
        codomain,
        step,
        lambda k: in_block * (-(-k // out_block)),
        "block-map",
    )


# === interleaving ===


def extract_stream(packed: Sequence[int], n: int) -> Word:
    """Contiguous determined prefix of component n inside a packed word."""
    out = []
    i = 0
    while True:
        p = pair(n, i)
        if p >= len(packed):
            return tuple(out)
        out.append(packed[p])
        i += 1


def pack_streams(
    streams: Sequence[Sequence[int]],
    default: int = 0,
    length: Optional[int] = None,
) -> Word:
    """Interleave finite prefixes; components beyond the list read `default`.

    Without an explicit length the result is the maximal packed prefix all of
    whose positions are determined by the given streams.
    """
    if length is None:
        if not streams:
            raise CertificationError("packing no streams needs an explicit length")
        length = min(pair(n, len(s)) for n, s in enumerate(streams))
    out = []
    for p in range(length):
        n, i = unpair(p)
        if n < len(streams):
            if i >= len(streams[n]):
                raise InsufficientInput(
                    f"position {p} needs symbol {i} of stream {n}"
                )
            out.append(streams[n][i])
        else:
            out.append(default)
    return tuple(out)


# === the product lift ===


@dataclass
class ProductLift:
    """A self-transducer of the packed space acting componentwise, with its
    projections.  Projection n intertwines the lift with component map n."""

    maps: list[PrefixTransducer]
    tail_map: PrefixTransducer
    packed_space: InterleavedSpace
    lift: PrefixTransducer = field(init=False)

    def __post_init__(self):
        self.lift = PrefixTransducer(
            self.packed_space,
            self.packed_space,
            self._step,
            self._modulus,
            "product-lift",
        )

    def component_map(self, n: int) -> PrefixTransducer:
        return self.maps[n] if n < len(self.maps) else self.tail_map

    def _step(self, w: Word) -> Word:
        outs: dict[int, Word] = {}
        result: list[int] = []
        p = 0
        while True:
            n, i = unpair(p)
            if n not in outs:
                outs[n] = self.component_map(n).step_fn(extract_stream(w, n))
            if i >= len(outs[n]):
                return tuple(result)
            result.append(outs[n][i])
            p += 1

    def _modulus(self, k: int) -> int:
        need = k
        for p in range(k):
            n, i = unpair(p)
            m = self.component_map(n).modulus(i + 1)
            if m > 0:
                need = max(need, pair(n, m - 1) + 1)
        return need

    def projection(self, n: int) -> PrefixTransducer:
        return PrefixTransducer(
            self.packed_space,
            self.component_space(n),
            lambda w: extract_stream(w, n),
            lambda k: pair(n, k - 1) + 1 if k > 0 else 0,
            f"proj[{n}]",
        )

    def component_space(self, n: int) -> Space:
        return (
            self.packed_space.components[n]
            if n < len(self.packed_space.components)
            else self.packed_space.tail_component
        )

    def projection_preimage(self, n: int, u: Sequence[int], default: int = 0) -> Word:
        """A packed word whose component n reads exactly u: surjectivity witness."""
        length = pair(n, len(u) - 1) + 1 if u else 0
        out = []
        for p in range(length):
            pn, pi = unpair(p)
            out.append(u[pi] if pn == n and pi < len(u) else default)
        return tuple(out)


def product_lift(
    maps: Sequence[PrefixTransducer],
    tail: Optional[PrefixTransducer] = None,
    tail_space: Optional[Space] = None,
    require_same_space: bool = True,
) -> ProductLift:
    """Lift countably many self-maps to one self-map of the packed space.

    `maps` is the explicit finite list; components beyond it follow `tail`
    (identity on `tail_space` by default).  The classical construction holds
    all maps on one space; pass require_same_space=False for the
    heterogeneous variant used by multi-space pipelines.
    """
    for f in maps:
        if f.domain != f.codomain:
            raise SpaceMismatch(f"{f.name} is not a self-transducer")
    if require_same_space and maps:
        base = maps[0].domain
        if any(f.domain != base for f in maps):
            raise SpaceMismatch("all lifted maps must live on one space")
    if tail is None:
        space = tail_space
        if space is None:
            space = maps[0].domain if maps else CANTOR
        tail = identity_transducer(space)
    elif tail.domain != tail.codomain:
        raise SpaceMismatch("tail rule must be a self-transducer")
    packed = InterleavedSpace(
        tuple(f.domain for f in maps), tail.domain
    )
    return ProductLift(list(maps), tail, packed)

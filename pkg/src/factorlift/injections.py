"""A universal injection on N and certified embeddings of finite injections into it.

The functional digraph of an injection decomposes into cycles, one-sided
infinite forward rays, and bi-infinite lines.  The layout below realizes one
copy of every component shape for every copy index, so any injection embeds:

    index = pair(pair(shape, copy), pos)

shape 0 is the bi-infinite line (pos holds a zig-zag code for a signed
position), shape 1 the forward ray (pos in N), shape n+1 the cycle of length
n (pos reduced mod n).  `successor` advances one step inside a component and
is injective on the whole layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import CertificationError, InvalidIndex, NotInjective
from .pairing import pair, unpair

LAYOUT_VERSION = 1

LINE_SHAPE = 0
RAY_SHAPE = 1


class ComponentType(Enum):
    CYCLE = "cycle"
    FORWARD_RAY = "ray"
    BI_INFINITE_LINE = "line"
    UNRESOLVED = "unresolved"


# === layout codecs ===


def zigzag(p: int) -> int:
    """Signed position -> N: 0,1,2,... for p = 0,-1,1,-2,2,..."""
    return 2 * p if p >= 0 else -2 * p - 1


def unzigzag(q: int) -> int:
    return q // 2 if q % 2 == 0 else -(q + 1) // 2


def encode_line(copy: int, position: int) -> int:
    return pair(pair(LINE_SHAPE, copy), zigzag(position))


def encode_ray(copy: int, position: int) -> int:
    if position < 0:
        raise InvalidIndex(f"ray positions live in N, got {position}")
    return pair(pair(RAY_SHAPE, copy), position)


def encode_cycle(length: int, copy: int, position: int) -> int:
    if length < 1:
        raise InvalidIndex(f"cycle length must be >= 1, got {length}")
    return pair(pair(length + 1, copy), position % length)


@dataclass(frozen=True)
class DecodedIndex:
    kind: ComponentType
    copy: int
    position: int  # signed for lines, >= 0 for rays, 0..len-1 for cycles
    cycle_length: int | None = None


def decode_index(index: int) -> DecodedIndex:
    if index < 0:
        raise InvalidIndex(f"layout indices are nonnegative, got {index}")
    inner, q = unpair(index)
    shape, copy = unpair(inner)
    if shape == LINE_SHAPE:
        return DecodedIndex(ComponentType.BI_INFINITE_LINE, copy, unzigzag(q))
    if shape == RAY_SHAPE:
        return DecodedIndex(ComponentType.FORWARD_RAY, copy, q)
    length = shape - 1
    if q >= length:
        raise InvalidIndex(
            f"index {index} claims position {q} on a cycle of length {length}"
        )
    return DecodedIndex(ComponentType.CYCLE, copy, q, cycle_length=length)


def successor(index: int) -> int:
    """One forward step inside the component of `index`.  Injective on N."""
    d = decode_index(index)
    if d.kind is ComponentType.BI_INFINITE_LINE:
        return encode_line(d.copy, d.position + 1)
    if d.kind is ComponentType.FORWARD_RAY:
        return encode_ray(d.copy, d.position + 1)
    return encode_cycle(d.cycle_length, d.copy, d.position + 1)


# === finite injections ===


@dataclass(frozen=True)
class OracleEntry:
    """Caller-certified component data for one member.

    component: any stable id (the serialized form uses the anchor member);
    offset: position within the component, consistent along entries
    (successor adds 1; cycles wrap mod length).
    """

    component: int
    kind: ComponentType
    offset: int = 0


@dataclass
class PartialInjection:
    """A finite injective map on N plus optional component declarations."""

    entries: dict[int, int]
    component_oracle: dict[int, OracleEntry] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: dict[int, int] = {}
        for i, j in self.entries.items():
            if i < 0 or j < 0:
                raise InvalidIndex(f"entry {i} -> {j} leaves N")
            if j in seen:
                raise NotInjective(f"both {seen[j]} and {i} map to {j}")
            seen[j] = i

    def inverse(self) -> dict[int, int]:
        return {j: i for i, j in self.entries.items()}

    def nodes(self) -> set[int]:
        ns = set(self.entries) | set(self.entries.values())
        ns.update(self.component_oracle)
        return ns


@dataclass(frozen=True)
class Component:
    kind: ComponentType
    members: tuple[int, ...]   # path order (cycle: anchor first, then forward)
    positions: tuple[int, ...]  # layout positions, parallel to members
    resolved: bool


def classify_components(
    sigma: PartialInjection, depth: int | None = None
) -> list[Component]:
    """Split the functional digraph of `sigma` into typed components.

    A closed walk certifies a cycle on its own.  Paths become FORWARD_RAY or
    BI_INFINITE_LINE only when the oracle declares them; otherwise they stay
    UNRESOLVED (a finite path embeds into a line regardless).  `depth` caps
    the number of members explored per component.
    """
    inv = sigma.inverse()
    cap = depth if depth is not None else len(sigma.nodes()) + 1
    out: list[Component] = []
    visited: set[int] = set()
    for start in sorted(sigma.nodes()):
        if start in visited:
            continue
        comp = _walk_component(start, sigma.entries, inv, cap)
        visited.update(comp.members)
        out.append(_type_component(comp, sigma))
    return out


@dataclass
class _RawComponent:
    members: list[int]
    is_cycle: bool


def _walk_component(start, entries, inv, cap) -> _RawComponent:
    # Backward first: in an injective graph every node has at most one
    # predecessor, so this finds the unique back end or closes a cycle.
    chain = [start]
    seen = {start}
    node = start
    while node in inv:
        node = inv[node]
        if node in seen:
            break  # came around a cycle
        chain.append(node)
        if len(chain) > cap:
            raise CertificationError(
                f"component through {start} exceeds exploration depth {cap}"
            )
    chain.reverse()  # back end first
    # Forward from the back end.
    members = [chain[0]]
    pos = {chain[0]: 0}
    node = chain[0]
    while node in entries:
        nxt = entries[node]
        if nxt in pos:
            # Injectivity forces the revisit to close at the very first node.
            if nxt != members[0]:
                raise NotInjective(
                    f"walk from {start} re-enters mid-path at {nxt}"
                )
            return _RawComponent(members, True)
        members.append(nxt)
        pos[nxt] = len(members) - 1
        node = nxt
        if len(members) > cap:
            raise CertificationError(
                f"component through {start} exceeds exploration depth {cap}"
            )
    return _RawComponent(members, False)


def _type_component(raw: _RawComponent, sigma: PartialInjection) -> Component:
    members = raw.members
    oracle = {m: sigma.component_oracle[m] for m in members if m in sigma.component_oracle}
    if raw.is_cycle:
        n = len(members)
        for m, entry in oracle.items():
            if entry.kind is not ComponentType.CYCLE:
                raise CertificationError(
                    f"oracle declares {entry.kind.value} but {m} lies on a {n}-cycle"
                )
        _check_cycle_offsets(members, oracle, n)
        # Anchor the smallest member at position 0.
        k = members.index(min(members))
        ordered = members[k:] + members[:k]
        return Component(
            ComponentType.CYCLE,
            tuple(ordered),
            tuple(range(n)),
            resolved=True,
        )
    kinds = {e.kind for e in oracle.values()}
    if not kinds or kinds == {ComponentType.UNRESOLVED}:
        # Finite path of unknown type: smallest explored member sits at 0.
        anchor = min(members)
        base = members.index(anchor)
        positions = tuple(i - base for i in range(len(members)))
        return Component(
            ComponentType.UNRESOLVED, tuple(members), positions, resolved=False
        )
    if len(kinds) > 1:
        raise CertificationError(f"oracle conflicts on one component: {kinds}")
    kind = kinds.pop()
    if kind is ComponentType.CYCLE:
        raise CertificationError(
            "oracle declares a cycle but the explored walk does not close"
        )
    offsets = _propagate_offsets(members, oracle)
    if kind is ComponentType.FORWARD_RAY:
        if offsets[0] < 0:
            raise CertificationError(
                f"ray offsets must stay in N, back end sits at {offsets[0]}"
            )
        return Component(kind, tuple(members), tuple(offsets), resolved=True)
    return Component(
        ComponentType.BI_INFINITE_LINE, tuple(members), tuple(offsets), resolved=True
    )


def _check_cycle_offsets(members, oracle, n) -> None:
    # Offsets of a declared cycle only need to be consistent up to rotation.
    if not oracle:
        return
    anchor_member, anchor = next(iter(sorted(oracle.items())))
    base = members.index(anchor_member)
    for m, entry in oracle.items():
        steps = (members.index(m) - base) % n
        if (entry.offset - anchor.offset) % n != steps:
            raise CertificationError(
                f"cycle offsets inconsistent at {m}: "
                f"declared {entry.offset}, expected {anchor.offset}+{steps} mod {n}"
            )


def _propagate_offsets(members, oracle) -> list[int]:
    anchor_member, anchor = next(iter(sorted(oracle.items())))
    base = members.index(anchor_member)
    offsets = [anchor.offset + (i - base) for i in range(len(members))]
    for m, entry in oracle.items():
        if offsets[members.index(m)] != entry.offset:
            raise CertificationError(
                f"path offsets inconsistent at {m}: declared {entry.offset}, "
                f"walk gives {offsets[members.index(m)]}"
            )
    return offsets


# === embedding ===


@dataclass
class EmbeddingCertificate:
    """A verified conjugacy between a finite injection and the layout.

    relabel is injective; for every edge i -> sigma(i) with both ends
    relabeled, successor(relabel[i]) == relabel[sigma(i)] holds exactly.
    """

    relabel: dict[int, int]
    components: list[Component]
    copies: dict[str, int]           # how many fresh copies each shape used
    checked_edges: int
    layout_version: int = LAYOUT_VERSION

    def image_set(self) -> set[int]:
        return set(self.relabel.values())


def embed_injection(
    sigma: PartialInjection, depth: int | None = None
) -> EmbeddingCertificate:
    """Embed a finite injection into the layout, one fresh copy per component.

    Components are allocated in order of their smallest member, so the result
    is deterministic.  Unresolved finite paths are placed on bi-infinite
    lines, which is always sound for an injection.
    """
    components = classify_components(sigma, depth)
    components.sort(key=lambda c: min(c.members))
    relabel: dict[int, int] = {}
    copies = {"line": 0, "ray": 0}
    cycle_copies: dict[int, int] = {}
    for comp in components:
        if comp.kind is ComponentType.CYCLE:
            n = len(comp.members)
            copy = cycle_copies.get(n, 0)
            cycle_copies[n] = copy + 1
            for m, p in zip(comp.members, comp.positions):
                relabel[m] = encode_cycle(n, copy, p)
        elif comp.kind is ComponentType.FORWARD_RAY:
            copy = copies["ray"]
            copies["ray"] += 1
            for m, p in zip(comp.members, comp.positions):
                relabel[m] = encode_ray(copy, p)
        else:  # declared line or unresolved path
            copy = copies["line"]
            copies["line"] += 1
            for m, p in zip(comp.members, comp.positions):
                relabel[m] = encode_line(copy, p)
    cert = EmbeddingCertificate(
        relabel=relabel,
        components=components,
        copies={**copies, **{f"cycle[{n}]": c for n, c in sorted(cycle_copies.items())}},
        checked_edges=0,
    )
    _verify_embedding(sigma, cert)
    return cert


def _verify_embedding(sigma: PartialInjection, cert: EmbeddingCertificate) -> None:
    if len(cert.image_set()) != len(cert.relabel):
        raise NotInjective("relabeling collides")
    checked = 0
    for i, j in sigma.entries.items():
        if i in cert.relabel and j in cert.relabel:
            got = successor(cert.relabel[i])
            if got != cert.relabel[j]:
                raise CertificationError(
                    f"conjugacy fails on edge {i} -> {j}: "
                    f"successor({cert.relabel[i]}) = {got} != {cert.relabel[j]}"
                )
            checked += 1
    cert.checked_edges = checked


# === serialization ===


def dump_injection(sigma: PartialInjection) -> str:
    """Text form: one `i -> j` line per entry, `# component` lines for oracle."""
    lines = []
    declared: set[tuple[int, str, int]] = set()
    for m in sorted(sigma.component_oracle):
        e = sigma.component_oracle[m]
        key = (e.component, e.kind.value, 0)
        lines.append(f"# component {m}: {e.kind.value} @ {e.offset}")
        declared.add(key)
    for i in sorted(sigma.entries):
        lines.append(f"{i} -> {sigma.entries[i]}")
    return "\n".join(lines) + "\n"


def load_injection(text: str) -> PartialInjection:
    entries: dict[int, int] = {}
    oracle: dict[int, OracleEntry] = {}
    kind_names = {k.value: k for k in ComponentType}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if not body.startswith("component"):
                continue  # plain comment
            try:
                head, decl = body.split(":", 1)
                member = int(head.split()[1])
                parts = decl.strip().split("@")
                kind = kind_names[parts[0].strip()]
                offset = int(parts[1]) if len(parts) > 1 else 0
            except (ValueError, KeyError, IndexError) as exc:
                raise CertificationError(
                    f"line {lineno}: bad component declaration {line!r}"
                ) from exc
            oracle[member] = OracleEntry(member, kind, offset)
            continue
        if "->" not in line:
            raise CertificationError(f"line {lineno}: expected `i -> j`, got {line!r}")
        left, right = line.split("->", 1)
        try:
            entries[int(left)] = int(right)
        except ValueError as exc:
            raise CertificationError(f"line {lineno}: bad entry {line!r}") from exc
    return PartialInjection(entries, oracle)

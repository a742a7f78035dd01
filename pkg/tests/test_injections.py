"""Layout codec, component classification, and embedding certificates."""

import random
from itertools import permutations

import pytest

from factorlift.errors import CertificationError, InvalidIndex, NotInjective
from factorlift.injections import (
    ComponentType,
    OracleEntry,
    PartialInjection,
    classify_components,
    decode_index,
    dump_injection,
    embed_injection,
    encode_cycle,
    encode_line,
    encode_ray,
    load_injection,
    successor,
    unzigzag,
    zigzag,
)
from factorlift.pairing import pair, unpair


# === pairing ===

@pytest.mark.parametrize("a,b,n", [(0, 0, 0), (1, 0, 1), (0, 1, 2), (2, 0, 3),
                                   (1, 1, 4), (0, 2, 5), (3, 0, 6), (1, 2, 8),
                                   (6, 0, 21), (6, 1, 29)])
def test_pair_frozen_values(a, b, n):
    assert pair(a, b) == n
    assert unpair(n) == (a, b)


def test_pair_roundtrip_bulk():
    rng = random.Random(7)
    for _ in range(2000):
        a, b = rng.randrange(10**6), rng.randrange(10**6)
        assert unpair(pair(a, b)) == (a, b)
    for n in range(5000):
        a, b = unpair(n)
        assert pair(a, b) == n


def test_zigzag_is_a_bijection_on_window():
    codes = {zigzag(p) for p in range(-50, 51)}
    assert codes == set(range(101))
    for q in range(101):
        assert zigzag(unzigzag(q)) == q


# === successor on the layout, frozen oracle values ===

def test_fixed_point_cycle_of_length_one():
    # cycle length 1, copy 0, position 0 sits at index pair(pair(2,0),0) = 6
    idx = encode_cycle(1, 0, 0)
    assert idx == 6
    assert successor(6) == 6


def test_ray_steps_one_four_eight():
    assert encode_ray(0, 0) == 1
    assert successor(1) == 4
    assert successor(4) == 8


def test_line_steps_two_zero_five():
    assert encode_line(0, -1) == 2
    assert encode_line(0, 0) == 0
    assert encode_line(0, 1) == 5
    assert successor(2) == 0
    assert successor(0) == 5


def test_two_cycle_21_29():
    assert encode_cycle(2, 0, 0) == 21
    assert encode_cycle(2, 0, 1) == 29
    assert successor(21) == 29
    assert successor(29) == 21


def test_successor_is_injective_on_window():
    seen = {}
    count = 0
    for n in range(20000):
        try:
            s = successor(n)
        except InvalidIndex:
            continue  # position beyond its cycle length: not a layout index
        assert s not in seen, f"{n} and {seen[s]} both step to {s}"
        seen[s] = n
        count += 1
    assert count > 5000


def test_distinct_components_never_collide():
    idxs = set()
    for copy in range(5):
        for p in range(-6, 7):
            idxs.add(encode_line(copy, p))
        for p in range(12):
            idxs.add(encode_ray(copy, p))
        for n in range(1, 6):
            for p in range(n):
                idxs.add(encode_cycle(n, copy, p))
    # all distinct by construction of the set; decode agrees with encode
    for i in idxs:
        d = decode_index(i)
        if d.kind is ComponentType.CYCLE:
            assert encode_cycle(d.cycle_length, d.copy, d.position) == i
        elif d.kind is ComponentType.FORWARD_RAY:
            assert encode_ray(d.copy, d.position) == i
        else:
            assert encode_line(d.copy, d.position) == i


def test_decode_rejects_bad_cycle_position():
    # shape 2 = cycle of length 1, so position 1 is not a layout index
    bad = pair(pair(2, 0), 1)
    with pytest.raises(InvalidIndex):
        decode_index(bad)


# === classification ===

def test_injectivity_validated():
    with pytest.raises(NotInjective):
        PartialInjection({0: 2, 1: 2})


def test_cycle_detected_without_oracle():
    sigma = PartialInjection({3: 7, 7: 5, 5: 3})
    comps = classify_components(sigma)
    assert len(comps) == 1
    c = comps[0]
    assert c.kind is ComponentType.CYCLE and c.resolved
    assert c.members[0] == 3  # smallest member anchors position 0
    assert list(c.positions) == [0, 1, 2]


def test_path_without_oracle_is_unresolved():
    sigma = PartialInjection({5: 0, 0: 7})
    comps = classify_components(sigma)
    assert len(comps) == 1
    c = comps[0]
    assert c.kind is ComponentType.UNRESOLVED and not c.resolved
    # path order 5 -> 0 -> 7 with smallest member 0 at position 0
    assert c.members == (5, 0, 7)
    assert c.positions == (-1, 0, 1)


def test_declared_ray_uses_offsets():
    sigma = PartialInjection(
        {4: 9, 9: 11},
        {4: OracleEntry(4, ComponentType.FORWARD_RAY, 0)},
    )
    c = classify_components(sigma)[0]
    assert c.kind is ComponentType.FORWARD_RAY and c.resolved
    assert c.members == (4, 9, 11)
    assert c.positions == (0, 1, 2)


def test_declared_ray_rejects_negative_offsets():
    sigma = PartialInjection(
        {4: 9},
        {4: OracleEntry(4, ComponentType.FORWARD_RAY, -1)},
    )
    with pytest.raises(CertificationError):
        classify_components(sigma)


def test_oracle_cycle_on_open_path_rejected():
    sigma = PartialInjection(
        {1: 2}, {1: OracleEntry(1, ComponentType.CYCLE, 0)}
    )
    with pytest.raises(CertificationError):
        classify_components(sigma)


def test_oracle_offset_conflict_rejected():
    sigma = PartialInjection(
        {1: 2, 2: 3},
        {
            1: OracleEntry(1, ComponentType.BI_INFINITE_LINE, 0),
            3: OracleEntry(1, ComponentType.BI_INFINITE_LINE, 7),
        },
    )
    with pytest.raises(CertificationError):
        classify_components(sigma)


# === embedding ===

def test_embed_swap_matches_frozen_two_cycle():
    cert = embed_injection(PartialInjection({0: 1, 1: 0}))
    assert cert.relabel == {0: 21, 1: 29}
    assert cert.checked_edges == 2


def test_embed_mixed_structure():
    sigma = PartialInjection(
        {0: 1, 1: 0, 2: 3, 3: 4, 10: 10},
        {2: OracleEntry(2, ComponentType.FORWARD_RAY, 0)},
    )
    cert = embed_injection(sigma)
    # conjugacy on every covered edge, via the public successor function
    for i, j in sigma.entries.items():
        assert successor(cert.relabel[i]) == cert.relabel[j]
    kinds = {tuple(sorted(c.members)): c.kind for c in cert.components}
    assert kinds[(0, 1)] is ComponentType.CYCLE
    assert kinds[(2, 3, 4)] is ComponentType.FORWARD_RAY
    assert kinds[(10,)] is ComponentType.CYCLE


def test_embed_uses_fresh_copies_per_component():
    sigma = PartialInjection({0: 1, 2: 3, 4: 5})  # three unresolved paths
    cert = embed_injection(sigma)
    copies = {decode_index(cert.relabel[m]).copy for m in (0, 2, 4)}
    assert copies == {0, 1, 2}
    assert all(
        decode_index(cert.relabel[m]).kind is ComponentType.BI_INFINITE_LINE
        for m in cert.relabel
    )


def test_embed_exhaustive_small_permutations():
    # brute-force oracle on a small domain: every total injection on {0..4}
    base = list(range(5))
    for perm in permutations(base):
        sigma = PartialInjection(dict(zip(base, perm)))
        cert = embed_injection(sigma)
        assert len(cert.relabel) == 5
        for i, j in sigma.entries.items():
            assert successor(cert.relabel[i]) == cert.relabel[j]


def _random_partial_injection(rng: random.Random, n: int) -> PartialInjection:
    domain = rng.sample(range(n), k=rng.randrange(1, n))
    codomain = rng.sample(range(n), k=len(domain))
    return PartialInjection(dict(zip(domain, codomain)))


def test_embed_random_partial_injections():
    rng = random.Random(20260822)
    for _ in range(50):
        sigma = _random_partial_injection(rng, 200)
        cert = embed_injection(sigma)
        assert len(set(cert.relabel.values())) == len(cert.relabel)
        for i, j in sigma.entries.items():
            assert successor(cert.relabel[i]) == cert.relabel[j]


def test_embedding_is_deterministic():
    rng = random.Random(5)
    sigma = _random_partial_injection(rng, 80)
    a = embed_injection(sigma)
    b = embed_injection(sigma)
    assert a.relabel == b.relabel


# === serialization ===

def test_dump_load_roundtrip():
    sigma = PartialInjection(
        {0: 1, 1: 0, 5: 6},
        {5: OracleEntry(5, ComponentType.FORWARD_RAY, 2)},
    )
    text = dump_injection(sigma)
    back = load_injection(text)
    assert back.entries == sigma.entries
    assert back.component_oracle[5].kind is ComponentType.FORWARD_RAY
    assert back.component_oracle[5].offset == 2


def test_load_rejects_garbage():
    with pytest.raises(CertificationError):
        load_injection("0 => 1\n")
    with pytest.raises(CertificationError):
        load_injection("# component x: ray\n0 -> 1\n")

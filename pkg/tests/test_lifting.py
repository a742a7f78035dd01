import random
from fractions import Fraction as F

import pytest

from factorlift.covers import (
    cantor_system,
    circle_system,
    finite_system,
    interval_system,
    locate_ball,
    product_system,
)
from factorlift.errors import (
    CertificationError,
    InsufficientInput,
    NoCell,
    NotAntichain,
    SpaceMismatch,
)
from factorlift.geometry import CantorSpace, PointApprox
from factorlift.lifting import (
    CylinderPresentation,
    DyadicIntervalPresentation,
    baire_extension_map,
    lift_self_map,
    presentation_certificate,
    slack_schedule,
    strong_extension_map,
)
from factorlift.pointmaps import (
    baire_identity_map,
    branch_family,
    constant_interval_map,
    identity_map,
    parity_expansion_map,
    product_map,
    rotation_family,
    rotation_map,
    squaring_map,
    stream_map,
    table_map,
    tent_map,
    weakened_family,
)
from factorlift.transducers import (
    CANTOR,
    Stream,
    evaluate_transducer,
    odometer_transducer,
    shift_transducer,
)


def rand_branch(cs, length, rng):
    return tuple(rng.randrange(cs.child_arity(i + 1)) for i in range(length))


# --- slack schedule ---


def test_slack_schedule_frozen_values():
    cs = interval_system()
    assert [slack_schedule(cs, k) for k in (1, 2, 3)] == [
        F(3, 128),
        F(3, 256),
        F(3, 512),
    ]
    cb = cantor_system()
    assert [slack_schedule(cb, k) for k in (1, 2, 3)] == [
        F(1, 16),
        F(1, 32),
        F(1, 64),
    ]


def test_slack_schedule_halves_and_respects_lebesgue():
    for cs in (interval_system(), circle_system(), finite_system()):
        previous = None
        for k in range(1, 8):
            r = slack_schedule(cs, k)
            assert 4 * r <= cs.epsilon(k - 1)
            if previous is not None:
                assert r <= previous / 2
            previous = r
    with pytest.raises(CertificationError):
        slack_schedule(interval_system(), 0)


# --- exact lifts on binary streams ---


def test_branch_family_lift_recovers_the_branch():
    cs = cantor_system()
    lift = strong_extension_map(cs, branch_family(cs))
    rng = random.Random(20260822)
    for _ in range(30):
        k = rng.randrange(1, 7)
        s = rand_branch(cs, k + 6, rng)
        assert lift.prefix((), s, k) == s[:k]


def test_shift_lifts_to_shift():
    cs = cantor_system()
    lifted = lift_self_map(cs, stream_map(shift_transducer(CANTOR)))
    rng = random.Random(4)
    for _ in range(30):
        w = rand_branch(cs, 12, rng)
        out = lifted.transducer.step(w)
        assert out == w[1:9]


def test_odometer_lifts_to_odometer():
    cs = cantor_system()
    machine = odometer_transducer()
    lifted = lift_self_map(cs, stream_map(machine))
    rng = random.Random(9)
    for _ in range(30):
        w = rand_branch(cs, 10, rng)
        out = lifted.transducer.step(w)
        assert len(out) == 7
        assert out == machine.step(w)[:7]


def test_lifted_transducer_is_monotone_and_productive():
    cs = cantor_system()
    lifted = lift_self_map(cs, stream_map(odometer_transducer()))
    rng = random.Random(7)
    for _ in range(20):
        w = rand_branch(cs, 14, rng)
        full = lifted.transducer.step(w)
        partial = lifted.transducer.step(w[:9])
        assert full[: len(partial)] == partial
        assert evaluate_transducer(lifted.transducer, w, 5) == full


# --- interval and circle lifts ---


def shift_stream(s: Stream) -> Stream:
    if s.pre:
        return Stream(s.pre[1:], s.cycle)
    return Stream((), s.cycle[1:] + s.cycle[:1])


@pytest.mark.parametrize(
    "system, point_map",
    [
        (interval_system(), squaring_map()),
        (interval_system(), tent_map()),
        (interval_system(), identity_map(interval_system().space)),
        (circle_system(), rotation_map(F(1, 3))),
        (cantor_system(), stream_map(shift_transducer(CANTOR), point_fn=shift_stream)),
    ],
)
def test_lift_certificates_pass(system, point_map):
    rng = random.Random(20260822)
    lifted = lift_self_map(system, point_map)
    cert = lifted.certificate(6, 30, rng, exact_samples=8)
    assert cert.ok, cert.render()


def test_squaring_lift_tracks_exact_points():
    cs = interval_system()
    lifted = lift_self_map(cs, squaring_map())
    depth = lifted.lift.moduli(6)[1]
    branch = locate_ball(
        cs,
        PointApprox.exact_point(cs.space, F(1, 3)),
        cs.epsilon(depth) / 4,
        depth,
    )
    t = lifted.transducer.step(branch)
    for k in range(1, 7):
        assert cs.space.contains(cs.v_cell(t[:k]), F(1, 9), closed=True)


def test_identity_lift_names_the_same_point():
    cs = interval_system()
    lifted = lift_self_map(cs, identity_map(cs.space))
    rng = random.Random(99)
    for _ in range(20):
        w = rand_branch(cs, 12, rng)
        t = lifted.transducer.step(w)
        k = min(len(t), 6)
        assert cs.space.intersect(cs.v_cell(t[:k]), cs.v_cell(w[:k])) is not None


def test_table_lift_frozen_output():
    cs = finite_system()
    lifted = lift_self_map(cs, table_map(cs.space, (1, 2, 0)))
    assert lifted.transducer.step((2, 0, 1, 0)) == (0, 0, 0, 0)
    assert lifted.transducer.step((0, 1)) == (1, 0)
    rng = random.Random(11)
    assert lifted.certificate(4, 20, rng, exact_samples=10).ok


def test_product_lift_certificate():
    cs = product_system(CantorSpace(), CantorSpace(), "stream-pair")
    point_map = product_map(
        stream_map(shift_transducer(CANTOR), point_fn=shift_stream),
        stream_map(odometer_transducer()),
    )
    rng = random.Random(5)
    assert lift_self_map(cs, point_map).certificate(4, 15, rng).ok


def test_lift_requires_enough_input():
    lifted = lift_self_map(interval_system(), squaring_map())
    with pytest.raises(InsufficientInput):
        lifted.lift.prefix((), (0, 1, 2), 6)


def test_lift_outputs_are_coherent_under_extension():
    cs = interval_system()
    lifted = lift_self_map(cs, tent_map())
    rng = random.Random(13)
    for _ in range(15):
        w = rand_branch(cs, 16, rng)
        short = lifted.transducer.step(w[:12])
        long = lifted.transducer.step(w)
        assert long[: len(short)] == short


# --- parameterized families ---


def test_rotation_family_certificate():
    cs = circle_system()
    lift = strong_extension_map(cs, rotation_family(cs))
    rng = random.Random(20260822)
    cert = lift.certificate(5, 30, rng)
    assert cert.ok, cert.render()


def test_rotation_family_matches_fixed_rotation():
    cs = circle_system()
    fam_lift = strong_extension_map(cs, rotation_family(cs))
    map_lift = lift_self_map(cs, rotation_map(F(1, 4)))
    rng = random.Random(3)
    k = 4
    q = (1,) + (0,) * 15
    s = rand_branch(cs, 20, rng)
    t_fam = fam_lift.prefix(q, s, k)
    t_map = map_lift.lift.prefix((), s, k)
    # the parameter prefix 100... pins the angle to [1/4, 1/4 + tail], so
    # both branches must name overlapping cells around the rotated point
    assert cs.space.intersect(cs.v_cell(t_fam), cs.v_cell(t_map)) is not None


def test_rotation_family_truncation_coherence():
    cs = circle_system()
    lift = strong_extension_map(cs, rotation_family(cs))
    rng = random.Random(17)
    s = rand_branch(cs, 20, rng)
    l, m = lift.moduli(3)
    q = tuple(rng.randrange(2) for _ in range(l))
    other = q + (1, 1, 0)
    assert lift.prefix(q, s, 3) == lift.prefix(other, s, 3)
    assert lift.prefix(other, s, 4)[:3] == lift.prefix(q, s, 3)


def test_weakened_moduli_fail_loudly():
    cs = circle_system()
    lift = strong_extension_map(cs, weakened_family(rotation_family(cs), 8))
    rng = random.Random(21)
    q = tuple(rng.randrange(2) for _ in range(10))
    s = rand_branch(cs, 10, rng)
    with pytest.raises(NoCell):
        lift.prefix(q, s, 2)


# --- presentations over unbounded branching ---


def test_cylinder_presentation_laws():
    rng = random.Random(20260822)
    cert = presentation_certificate(CylinderPresentation(), 6, 20, rng)
    assert cert.ok, cert.render()


def test_dyadic_interval_presentation_laws():
    rng = random.Random(20260822)
    cert = presentation_certificate(DyadicIntervalPresentation(), 5, 12, rng)
    assert cert.ok, cert.render()


def test_dyadic_presentation_reindexes_out_of_range_symbols():
    ps = DyadicIntervalPresentation()
    cell = ps.v_cell((10 ** 6,))
    assert ps.v_cell((10 ** 6,)) == cell
    assert ps.target.closure_in_open(cell, ps.target.whole())
    level, _ = ps.resolve((10 ** 6,))
    assert ps.target.diam(cell) < F(1, 2)


def test_baire_identity_lift_is_identity():
    bl = baire_extension_map(CylinderPresentation(), baire_identity_map())
    rng = random.Random(8)
    for _ in range(20):
        w = tuple(rng.randrange(7) for _ in range(9))
        assert bl.output(w, 7) == w[:7]
    assert bl.max_resolution(w) == 7
    with pytest.raises(InsufficientInput):
        bl.output(w[:4], 3)


def test_constant_lift_ignores_the_branch():
    bl = baire_extension_map(DyadicIntervalPresentation(), constant_interval_map(F(1, 3)))
    a = bl.output((0, 5, 2), 6)
    b = bl.output((9, 9, 9, 9), 6)
    assert a == b
    assert bl.point_map.target.contains(bl.presentation.v_cell(a), F(1, 3), closed=True)
    assert bl.max_resolution((0,), limit=10) == 10


def test_parity_expansion_lift_certificate():
    bl = baire_extension_map(DyadicIntervalPresentation(), parity_expansion_map())
    rng = random.Random(20260822)
    cert = bl.certificate(8, 25, rng)
    assert cert.ok, cert.render()


def test_parity_expansion_lift_tracks_a_known_point():
    bl = baire_extension_map(DyadicIntervalPresentation(), parity_expansion_map())
    w = (1,) + (0,) * 30
    t = bl.output(w, 5)
    for k in range(1, 6):
        cell = bl.presentation.v_cell(t[:k])
        assert bl.point_map.target.contains(cell, F(1, 2), closed=True)


def test_baire_outputs_extend():
    bl = baire_extension_map(DyadicIntervalPresentation(), parity_expansion_map())
    w = tuple(random.Random(31).randrange(10) for _ in range(40))
    assert bl.output(w, 5)[:3] == bl.output(w, 3)


def test_discovered_prefixes_are_minimal_antichains():
    bl = baire_extension_map(DyadicIntervalPresentation(), parity_expansion_map())
    rng = random.Random(41)
    for _ in range(15):
        w = tuple(rng.randrange(10) for _ in range(40))
        bl.output(w, 4)
    target = bl.point_map.target
    for k in (1, 2, 3, 4):
        family = bl.antichain(k)
        assert family
        bound = bl.presentation.slack(k) / 2
        for s in family:
            assert target.diam(bl.point_map.region(s)) <= bound
            if s:
                assert target.diam(bl.point_map.region(s[:-1])) > bound
        for i, a in enumerate(family):
            for b in family[i + 1 :]:
                n = min(len(a), len(b))
                assert a[:n] != b[:n]


def test_supplied_antichain_paths():
    ps = CylinderPresentation()
    members = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    bl = baire_extension_map(ps, baire_identity_map(), supplied_antichains={1: members})
    assert bl.output((0, 1, 0, 1, 0), 1) == (0,)
    with pytest.raises(NotAntichain):
        bl.output((5, 0, 0, 0, 0), 1)
    with pytest.raises(InsufficientInput):
        bl.output((0, 1), 1)
    short = baire_extension_map(ps, baire_identity_map(), supplied_antichains={1: [()]})
    with pytest.raises(NoCell):
        short.output((0, 1, 0, 1, 0), 1)


def test_supplied_families_merge_with_adaptive_resolutions():
    ps = CylinderPresentation()
    members = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    bl = baire_extension_map(ps, baire_identity_map(), supplied_antichains={1: members})
    # resolution 2 has no supplied family and falls back to minimal prefixes
    assert bl.output((0, 1, 0, 1, 0), 2) == (0, 1)


def test_baire_lift_checks_target_space():
    with pytest.raises(SpaceMismatch):
        baire_extension_map(CylinderPresentation(), parity_expansion_map())

"""Partition construction, refinement, quotient build and text export."""

import random
from fractions import Fraction

import pytest

from polybisim.abstraction import (
    OBS_EMPTY,
    OBS_TARGET,
    Observation,
    ObservedRegion,
    audit_partition,
    build_quotient,
    export_quotient,
    find_pre,
    initial_partition,
    observation_of,
    parse_quotient,
    quotient_word,
    refine,
)
from polybisim.geometry import (
    Cell,
    Region,
    constraint,
    contains_point,
    difference,
    region_contains_point,
    sample_point,
    vec,
)
from polybisim.lyapunov import (
    ContractionError,
    LinearSystem,
    PolyhedralLF,
    level_sequence,
    slices,
    sublevel_cell,
)


def F(v):
    return Fraction(v)


def box2(xlo, xhi, ylo, yhi):
    return Cell(
        2,
        [
            constraint([1, 0], xhi),
            constraint([-1, 0], -xlo),
            constraint([0, 1], yhi),
            constraint([0, -1], -ylo),
        ],
    )


@pytest.fixture(scope="module")
def small2d():
    sys = LinearSystem.of([["0.5", "0"], ["0", "0.5"]])
    lf = PolyhedralLF.of([["1", "0"], ["0", "1"]], "0.5")
    regions = [ObservedRegion("r1", box2(2, 3, -1, 1))]
    quotient, partition = build_quotient(sys, lf, 1, 4, regions)
    return sys, lf, regions, quotient, partition


def test_observation_letters():
    assert OBS_EMPTY.letter() == frozenset()
    assert OBS_TARGET.letter() == frozenset({"pid"})
    assert Observation("r1").letter() == frozenset({"r1"})
    assert OBS_TARGET.is_target and not OBS_TARGET.is_region
    assert Observation("r1").is_region


def test_reserved_region_labels_rejected():
    cell = box2(0, 1, 0, 1)
    for bad in ("EMPTY", "PI_D", "pid"):
        with pytest.raises(ValueError):
            ObservedRegion(bad, cell)


def test_observation_of():
    d_cell = box2(-1, 1, -1, 1)
    regions = [ObservedRegion("r1", box2(2, 3, -1, 1))]
    assert observation_of([0, 0], regions, d_cell) == OBS_TARGET
    assert observation_of([F("2.5"), 0], regions, d_cell) == Observation("r1")
    assert observation_of([5, 5], regions, d_cell) == OBS_EMPTY


def test_initial_partition_structure():
    lf = PolyhedralLF.of([["1", "0"], ["0", "1"]], "0.5")
    seq = level_sequence(1, 4, "0.5")
    x_cell = sublevel_cell(lf, 4)
    d_cell = sublevel_cell(lf, 1)
    regions = [ObservedRegion("r1", box2(2, 3, -1, 1))]
    part = initial_partition(x_cell, d_cell, regions, slices(lf, seq))
    audits = audit_partition(part, regions)
    assert all(audits.values()), audits
    labels = {b.observation.label for b in part.blocks.values()}
    assert labels == {"PI_D", "EMPTY", "r1"}
    # the target block is block 0 with a self loop already assigned
    assert part.blocks[0].observation == OBS_TARGET
    assert part.blocks[0].successor == 0


def test_initial_partition_rejects_bad_regions():
    lf = PolyhedralLF.of([["1", "0"], ["0", "1"]], "0.5")
    seq = level_sequence(1, 4, "0.5")
    x_cell = sublevel_cell(lf, 4)
    d_cell = sublevel_cell(lf, 1)
    sl = slices(lf, seq)
    with pytest.raises(ValueError):  # overlaps the target set
        initial_partition(
            x_cell, d_cell, [ObservedRegion("r1", box2(0, 2, 0, 1))], sl
        )
    with pytest.raises(ValueError):  # duplicate labels
        initial_partition(
            x_cell,
            d_cell,
            [
                ObservedRegion("r1", box2(2, 3, -1, 1)),
                ObservedRegion("r1", box2(-3, -2, -1, 1)),
            ],
            sl,
        )
    with pytest.raises(ValueError):  # mutual overlap
        initial_partition(
            x_cell,
            d_cell,
            [
                ObservedRegion("r1", box2(2, 3, -1, 1)),
                ObservedRegion("r2", box2(2, 4, 0, 2)),
            ],
            sl,
        )


def test_find_pre_1d():
    sys = LinearSystem.of([["0.5"]])
    d_cell = Cell(1, [constraint([1], 1), constraint([-1], 1)])
    x_cell = Cell(1, [constraint([1], 2), constraint([-1], 2)])
    outside = difference(Region.of([x_cell]), Region.of([d_cell]))
    pre = find_pre(Region.of([d_cell]), sys, outside)
    # preimage of [-1,1] under x/2 is [-2,2]; outside the target that is
    # the two outer intervals
    assert region_contains_point(pre, [F("1.5")])
    assert region_contains_point(pre, [F("-2")])
    assert not region_contains_point(pre, [F("0.5")])


def test_refine_splits_and_preserves(small2d):
    _, lf, regions, _, _ = small2d
    seq = level_sequence(1, 4, "0.5")
    x_cell = sublevel_cell(lf, 4)
    d_cell = sublevel_cell(lf, 1)
    part = initial_partition(x_cell, d_cell, regions, slices(lf, seq))
    cutter = Region.of([Cell(2, [constraint([1, 0], 0)])])  # halfplane x<=0
    refined = refine(part, cutter)
    assert len(refined.blocks) > len(part.blocks)
    audits = audit_partition(refined, regions)
    assert all(audits.values()), audits
    # pieces straddle nothing: each non-target block is inside or outside
    # the halfplane (the target block is never split)
    from polybisim.geometry import cells_disjoint

    cut_cell = cutter.cells[0]
    for b in refined.blocks.values():
        if b.id == refined.d_block_id:
            continue
        inside = difference(Region((b.cell,)), cutter).is_empty()
        outside = cells_disjoint(b.cell, cut_cell)
        assert inside or outside
    # refining again by the same region changes nothing
    again = refine(refined, cutter)
    assert len(again.blocks) == len(refined.blocks)


def test_refine_keeps_observations_and_slices(small2d):
    _, lf, regions, _, _ = small2d
    seq = level_sequence(1, 4, "0.5")
    part = initial_partition(
        sublevel_cell(lf, 4), sublevel_cell(lf, 1), regions, slices(lf, seq)
    )
    cutter = Region.of([Cell(2, [constraint([0, 1], 0)])])
    refined = refine(part, cutter)
    for b in refined.blocks.values():
        p = sample_point(b.cell)
        assert b.observation == observation_of(p, regions, part.d_cell)
        assert region_contains_point(part.slice_regions[b.slice_index], p)


def test_build_quotient_small2d(small2d):
    sys, lf, regions, quotient, partition = small2d
    audits = audit_partition(partition, regions)
    assert all(audits.values()), audits
    assert quotient.target_state == 0
    assert quotient.transitions[0] == 0
    # determinism: one successor per state, all states present
    assert set(quotient.transitions) == set(quotient.states)
    # successors always sit in a strictly lower slice (except the target)
    for s in quotient.states:
        if s == 0:
            continue
        b = partition.blocks[s]
        nb = partition.blocks[quotient.transitions[s]]
        assert nb.slice_index < b.slice_index


def test_successor_agreement_on_samples(small2d):
    sys, lf, regions, quotient, partition = small2d
    from polybisim.geometry import apply_matrix

    for b in partition.ordered_blocks():
        if b.id == quotient.target_state:
            continue
        x = sample_point(b.cell)
        nxt = partition.cell_of(apply_matrix(sys.a_matrix, x))
        assert nxt == b.successor


def test_build_quotient_rejects_uncertified_rate():
    sys = LinearSystem.of([["0.9"]])
    lf = PolyhedralLF.of([["1"]], "0.5")
    with pytest.raises(ContractionError):
        build_quotient(sys, lf, 1, 4, [])


def test_quotient_word_1d():
    sys = LinearSystem.of([["0.5"]])
    lf = PolyhedralLF.of([["1"]], "0.5")
    quotient, partition = build_quotient(sys, lf, 1, 2, [])
    outer = partition.cell_of([F("1.5")])
    word = quotient_word(quotient, outer)
    assert [o.label for o in word] == ["EMPTY", "PI_D"]
    assert [o.label for o in quotient_word(quotient, 0)] == ["PI_D"]


def test_cell_of_outside_raises(small2d):
    _, _, _, _, partition = small2d
    with pytest.raises(ValueError):
        partition.cell_of([100, 100])


def test_audit_detects_injected_defects(small2d):
    sys, lf, regions, _, _ = small2d
    quotient, part = build_quotient(sys, lf, 1, 4, regions)
    victim = max(part.blocks)
    removed = part.blocks.pop(victim)
    res = audit_partition(part, regions)
    assert res["coverage"] is False
    assert res["disjointness"] is True
    # duplicate a block under a fresh id: disjointness must now fail
    part.blocks[victim] = removed
    clone = removed.__class__(
        part.fresh_id(),
        removed.cell,
        removed.observation,
        removed.slice_index,
        removed.successor,
    )
    part.blocks[clone.id] = clone
    res = audit_partition(part, regions)
    assert res["disjointness"] is False


def test_export_round_trip(small2d):
    _, _, _, quotient, partition = small2d
    text = export_quotient(quotient, partition)
    transitions, observations, slice_idx, cells = parse_quotient(text)
    assert transitions == quotient.transitions
    assert observations == {
        s: o.label for s, o in quotient.observations.items()
    }
    for b in partition.blocks.values():
        assert slice_idx[b.id] == b.slice_index
        assert len(cells[b.id]) == len(b.cell.constraints)
        for (normal, rel, offset), c in zip(cells[b.id], b.cell.constraints):
            assert normal == c.normal
            assert offset == c.offset
            assert (rel == "<") == c.strict


def test_export_deterministic():
    sys = LinearSystem.of([["0.5", "0"], ["0", "0.5"]])
    lf = PolyhedralLF.of([["1", "0"], ["0", "1"]], "0.5")
    regions = [ObservedRegion("r1", box2(2, 3, -1, 1))]
    q1, p1 = build_quotient(sys, lf, 1, 4, regions)
    q2, p2 = build_quotient(sys, lf, 1, 4, regions)
    assert export_quotient(q1, p1) == export_quotient(q2, p2)

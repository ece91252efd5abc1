"""Catalog loading, pin-head ratios, and pose enumeration."""

from fractions import Fraction

import pytest

from technicgen.catalog import (
    CatalogError,
    default_catalog,
    enumerate_mechanism_poses,
    load_catalog,
    pin_head_ratio,
)
from technicgen.geometry import ROTATIONS_24, quantize, rotate, vdist


def test_default_catalog_has_single_hole_brick():
    cat = default_catalog()
    brick = cat.brick("18654")
    assert brick.kind == "single-hole"
    assert brick.length == 1


def test_default_catalog_indexes():
    cat = default_catalog()
    beams = cat.beams_by_length()
    lengths = [b.length for b in beams]
    assert lengths == sorted(lengths)
    assert 9 in lengths
    assert cat.by_kind("L-beam")
    assert "2780" in cat.mechanisms


def test_empty_catalog():
    cat = load_catalog({"version": 1, "bricks": [], "mechanisms": []})
    assert cat.beams_by_length() == []
    assert cat.mechanisms == {}


def test_single_beam_catalog_index():
    doc = {
        "version": 1,
        "bricks": [
            {
                "id": "40490",
                "kind": "beam",
                "holes": [{"at": [i, 0, 0], "type": "regular"} for i in range(9)],
            }
        ],
    }
    cat = load_catalog(doc)
    beams = cat.beams_by_length()
    assert len(beams) == 1
    assert beams[0].length == 9


def test_duplicate_id_rejected():
    doc = {
        "bricks": [
            {"id": "x", "holes": [{"at": [0, 0, 0], "type": "regular"}]},
            {"id": "x", "holes": [{"at": [0, 0, 0], "type": "regular"}]},
        ]
    }
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog(doc)


def test_non_unit_spacing_rejected():
    doc = {
        "bricks": [
            {
                "id": "bad",
                "kind": "beam",
                "holes": [
                    {"at": [0, 0, 0], "type": "regular"},
                    {"at": [2, 0, 0], "type": "regular"},
                ],
            }
        ]
    }
    with pytest.raises(CatalogError):
        load_catalog(doc)


def test_unknown_hole_type_rejected():
    doc = {"bricks": [{"id": "bad", "holes": [{"at": [0, 0, 0], "type": "weird"}]}]}
    with pytest.raises(CatalogError, match="hole type"):
        load_catalog(doc)


def test_pin_head_ratio_tee_is_three_quarters():
    cat = default_catalog()
    assert pin_head_ratio(cat.mechanism("tee")) == Fraction(3, 4)


def test_pin_head_ratio_plain_pin_is_one():
    cat = default_catalog()
    assert pin_head_ratio(cat.mechanism("2780")) == Fraction(1, 1)


def test_pin_head_ratio_half():
    doc = {
        "mechanisms": [
            {
                "id": "m",
                "nodes": [
                    {"at": [0, 0, 0], "label": "pin-head", "headType": "regular"},
                    {"at": [1, 0, 0], "label": "connector-body"},
                ],
                "edges": [[0, 1]],
            }
        ]
    }
    cat = load_catalog(doc)
    assert pin_head_ratio(cat.mechanism("m")) == Fraction(1, 2)


def test_zero_node_mechanism_rejected():
    with pytest.raises(CatalogError, match="zero nodes"):
        load_catalog({"mechanisms": [{"id": "m", "nodes": []}]})


def test_stored_rho_matches_recomputation():
    cat = default_catalog()
    for mech in cat.mechanisms.values():
        heads = sum(1 for n in mech.nodes if n.is_head)
        assert mech.rho == Fraction(heads, len(mech.nodes))
        assert 0 < mech.rho <= 1


def test_pin_has_three_poses():
    cat = default_catalog()
    poses = enumerate_mechanism_poses(cat.mechanism("2780"), cat)
    assert len(poses) == 3
    axes = sorted({p.head_slots[0].axis for p in poses})
    assert axes == ["X", "Y", "Z"]


def test_single_hole_brick_has_three_poses():
    cat = default_catalog()
    poses = enumerate_mechanism_poses(cat.brick("18654"), cat)
    assert len(poses) == 3
    assert sorted(p.head_slots[0].axis for p in poses) == ["X", "Y", "Z"]


def test_fully_asymmetric_mechanism_has_24_poses():
    cat = default_catalog()
    poses = enumerate_mechanism_poses(cat.mechanism("elbow-long"), cat)
    assert len(poses) == 24


def test_pose_count_divides_24():
    cat = default_catalog()
    for mid in cat.mechanisms:
        poses = cat.poses(mid)
        assert 24 % len(poses) == 0


def test_pose_enumeration_closed_under_rotation():
    cat = default_catalog()
    for mid in ("2780", "elbow", "tee", "elbow-long"):
        poses = cat.poses(mid)
        sigs = set()
        for p in poses:
            heads = tuple(sorted((h.at, h.axis, h.head_type) for h in p.head_slots))
            sigs.add((heads, tuple(sorted(p.body_cells))))
        for p in poses:
            for rot in ROTATIONS_24:
                pts = [rotate(rot, c) for c in p.cells]
                lo = tuple(min(c[i] for c in pts) for i in range(3))
                heads = []
                for h in p.head_slots:
                    at = quantize(tuple(rotate(rot, h.at)[i] - lo[i] for i in range(3)))
                    vec = rotate(rot, {"X": (1, 0, 0), "Y": (0, 1, 0), "Z": (0, 0, 1)}[h.axis])
                    axis = "XYZ"[[i for i, c in enumerate(vec) if c][0]]
                    heads.append((at, axis, h.head_type))
                bodies = tuple(
                    sorted(
                        quantize(tuple(rotate(rot, c)[i] - lo[i] for i in range(3)))
                        for c in p.body_cells
                    )
                )
                assert (tuple(sorted(heads)), bodies) in sigs


def test_beam_occupancy_is_collinear_unit_spaced():
    cat = default_catalog()
    for beam in cat.beams_by_length():
        cells = beam.occupancy
        assert len(cells) == beam.length
        for a, b in zip(cells, cells[1:]):
            assert abs(vdist(a, b) - 1.0) < 1e-9

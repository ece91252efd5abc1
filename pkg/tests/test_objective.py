"""Objective terms, full/simplified evaluation, and incremental equality."""

import math
import random

import pytest

from technicgen.catalog import default_catalog, load_catalog
from technicgen.connect import Connector
from technicgen.fixtures import grid_sketch, line_sketch, plane_sketch, square_sketch
from technicgen.layout import Layout, LocalChange, choose_layer
from technicgen.objective import (
    IncrementalObjective,
    ObjectiveWeights,
    collision_count,
    compactness_term,
    deviation_term,
    direct_rigid_pairs,
    eval_full,
    eval_simplified,
    gap_at,
    gap_total,
    incremental_update,
    rigid_partition,
    rigidity_term,
    symmetry_term,
)
from technicgen.orientation import OrientationAssignment, decompose_components
from technicgen.placements import index_placements
from technicgen.sketch import build_guiding_graph, expand_symmetry, parse_sketch


def beam_doc(length):
    return {
        "id": f"beam{length}",
        "kind": "beam",
        "holes": [{"at": [i, 0, 0], "type": "regular"} for i in range(length)],
    }


def catalog_of(*lengths):
    return load_catalog({"version": 1, "bricks": [beam_doc(m) for m in lengths]})


def make_setup(doc, axis="Z", lengths=(2, 3, 5, 9), catalog=None):
    sk = parse_sketch(doc)
    g = build_guiding_graph(sk)
    a = OrientationAssignment(axes=tuple(axis for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    cat = catalog or catalog_of(*lengths)
    idx = index_placements(comps, g, cat, a)
    return sk, g, comps, idx, cat


def place(idx, brick_id, first_node):
    for p in idx.placements:
        if p.brick_id == brick_id and p.nodes[0] == first_node:
            return p
    raise LookupError((brick_id, first_node))


# -- deviation ----------------------------------------------------------------


def test_deviation_zero_when_all_on_line():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(9,))
    layout = Layout(g, idx)
    layout.add_beam(idx.placements[0], 0)
    assert deviation_term(layout) == 0.0


def test_deviation_single_beam_layer_one():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(9,))
    layout = Layout(g, idx)
    layout.add_beam(idx.placements[0], 1)
    assert deviation_term(layout) == pytest.approx(1.0)


def test_deviation_mixed_layers():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p0 = place(idx, "beam5", 0)
    p4 = place(idx, "beam5", 4)
    layout.add_beam(p0, 0)
    layout.add_beam(p4, 2)
    # (5*0 + 5*4) / 10 = 2 -> sqrt(2)
    assert deviation_term(layout) == pytest.approx(math.sqrt(2.0))


def test_deviation_empty_layout_zero():
    _, g, _, idx, _ = make_setup(line_sketch(4), axis="Y", lengths=(5,))
    assert deviation_term(Layout(g, idx)) == 0.0


# -- compactness ---------------------------------------------------------------


def test_compactness_uniform_layers_zero():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    layout.add_beam(place(idx, "beam5", 0), 1)
    layout.add_beam(place(idx, "beam5", 4), 1)
    assert compactness_term(layout) == 0.0


def test_compactness_range_squared():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    layout.add_beam(place(idx, "beam5", 0), -1)
    layout.add_beam(place(idx, "beam5", 4), 1)
    assert compactness_term(layout) == 4.0


def test_compactness_max_over_components():
    doc = {
        "segments": [
            {"id": "a", "a": [0, 0, 0], "b": [4, 0, 0]},
            {"id": "b", "a": [0, 4, 4], "b": [4, 4, 4]},
        ]
    }
    _, g, _, idx, _ = make_setup(doc, axis="Z", lengths=(5,))
    layout = Layout(g, idx)
    comps = sorted({p.component for p in idx.placements})
    by_comp = {c: [p for p in idx.placements if p.component == c] for c in comps}
    layout.add_beam(by_comp[comps[0]][0], 0)
    layout.add_beam(by_comp[comps[0]][0], 1)  # range 1
    layout.add_beam(by_comp[comps[1]][0], -1)
    layout.add_beam(by_comp[comps[1]][0], 2)  # range 3
    assert compactness_term(layout) == 9.0


# -- gaps ------------------------------------------------------------------


def test_gap_examples():
    _, g, _, idx, _ = make_setup(line_sketch(4), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p = idx.placements[0]
    b0 = layout.add_beam(p, 0)
    layout.add_beam(p, 2)
    node = p.nodes[0]
    assert gap_at(node, layout) == 1
    layout.remove_beam(b0.uid)
    layout.add_beam(p, 1)
    assert gap_at(node, layout) == 0
    assert all(gap_at(n.id, layout) == 0 for n in g.nodes)


def test_gap_single_beam_zero():
    _, g, _, idx, _ = make_setup(line_sketch(4), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p = idx.placements[0]
    layout.add_beam(p, 0)
    assert gap_at(p.nodes[0], layout) == 0


def test_gap_uncovered_node_zero():
    _, g, _, idx, _ = make_setup(line_sketch(4), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    assert gap_at(0, layout) == 0


def test_gap_total_matches_brute_force():
    _, g, _, idx, _ = make_setup(grid_sketch(2), axis="Z", lengths=(3, 5, 9))
    rng = random.Random(7)
    layout = Layout(g, idx)
    for _ in range(12):
        p = idx.placements[rng.randrange(len(idx.placements))]
        layout.add_beam(p, rng.choice([-1, 0, 1, 2]))
    brute = 0
    for n in g.nodes:
        layers = sorted(
            {layout.beams[uid].layer for uid in layout.beams_at_node(n.id)}
        )
        if layers:
            brute += layers[-1] - layers[0] + 1 - len(layers)
    assert gap_total(layout) == brute == layout.gap_sum


# -- collisions ----------------------------------------------------------------


def test_collision_examples():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p = place(idx, "beam5", 0)
    layout.add_beam(p, 0)
    layout.add_beam(p, 1)
    assert collision_count(layout) == 0  # different layers, disjoint cells
    layout.add_beam(p, 0)
    assert collision_count(layout) == 1  # identical beams overlap fully
    layout.add_beam(p, 0)
    assert collision_count(layout) == 3  # three mutually overlapping


def test_collision_count_matches_brute_force():
    _, g, _, idx, _ = make_setup(grid_sketch(2), axis="Z", lengths=(3, 5, 9))
    rng = random.Random(3)
    layout = Layout(g, idx)
    for _ in range(15):
        p = idx.placements[rng.randrange(len(idx.placements))]
        layout.add_beam(p, rng.choice([-1, 0, 1]))
    beams = list(layout.beams.values())
    brute = 0
    for i in range(len(beams)):
        ci = set(beams[i].cells(g))
        for j in range(i + 1, len(beams)):
            if ci & set(beams[j].cells(g)):
                brute += 1
    assert collision_count(layout) == brute


# -- rigidity ----------------------------------------------------------------


def test_two_pins_make_rigid_subset():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5, 9))
    layout = Layout(g, idx)
    layout.add_beam(place(idx, "beam9", 0), 0)
    layout.add_beam(place(idx, "beam5", 0), 1)  # overlaps 5 columns
    connected, rigid = direct_rigid_pairs(layout)
    assert len(connected) == 1 and len(rigid) == 1
    subsets = rigid_partition(layout, g, rigid)
    assert len(subsets) == 1


def test_one_pin_stays_rotatable():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5, 9))
    cat = default_catalog()
    layout = Layout(g, idx)
    b1 = layout.add_beam(place(idx, "beam5", 0), 0)
    b2 = layout.add_beam(place(idx, "beam5", 4), 1)  # single shared column
    connector = Connector(g, cat)
    plan = connector(layout)
    assert (b1.uid, b2.uid) in plan.connected_pairs
    assert (b1.uid, b2.uid) not in plan.rigid_pairs
    subsets = rigid_partition(layout, g, set(plan.rigid_pairs))
    assert len(subsets) == 2


def test_joint_never_merged():
    doc = {
        "segments": [
            {"id": "a", "a": [0, 0, 0], "b": [4, 0, 0]},
            {"id": "b", "a": [4, 0, 0], "b": [8, 0, 0]},
        ],
        "joints": [{"at": [4, 0, 0], "axis": "Z"}],
    }
    _, g, _, idx, _ = make_setup(doc, axis="Z", lengths=(5,))
    cat = default_catalog()
    layout = Layout(g, idx)
    b1 = layout.add_beam(place(idx, "beam5", 0), 0)
    # second beam covers the other arm, stopping at the joint node
    other = next(
        p for p in idx.placements if p.nodes[0] != 0 and p.brick_id == "beam5"
    )
    b2 = layout.add_beam(other, 1)
    plan = Connector(g, cat)(layout)
    pair = (b1.uid, b2.uid)
    assert pair in plan.connected_pairs
    assert pair not in plan.rigid_pairs
    joint_uses = [u for u in plan.uses if u.joint]
    assert len(joint_uses) == 1  # exactly one hinge pin at the joint


def test_rigidity_denominator():
    _, g, _, idx, _ = make_setup(square_sketch(4), axis="Z", lengths=(5,))
    # square of side 4: 4 corners deg 2, 12 interior deg 2
    assert rigidity_term(1, g) == pytest.approx(1.0 / 16.0)


# -- symmetry ----------------------------------------------------------------


def test_symmetry_mirrored_zero():
    sk = parse_sketch(plane_sketch())
    g = build_guiding_graph(sk)
    sym = expand_symmetry(sk, g)
    a = OrientationAssignment(axes=tuple("Z" for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    idx = index_placements(comps, g, catalog_of(3, 8), a)
    layout = Layout(g, idx)
    left = next(
        p for p in idx.placements
        if all(g.edges[e].segment == "wing-l" for e in p.covered_edges)
        and p.length == 8
    )
    right = next(
        p for p in idx.placements
        if all(g.edges[e].segment == "wing-r" for e in p.covered_edges)
        and p.length == 8
    )
    layout.add_beam(left, 0)
    layout.add_beam(right, 0)
    assert symmetry_term(layout, g, sym) == 0.0


def test_symmetry_empty_index_zero():
    _, g, _, idx, _ = make_setup(line_sketch(4), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    layout.add_beam(idx.placements[0], 0)
    assert symmetry_term(layout, g, None) == 0.0


def test_symmetry_one_unit_shift():
    sk = parse_sketch(plane_sketch())
    g = build_guiding_graph(sk)
    sym = expand_symmetry(sk, g)
    a = OrientationAssignment(axes=tuple("Z" for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    idx = index_placements(comps, g, catalog_of(3, 8), a)
    layout = Layout(g, idx)
    left = next(
        p for p in idx.placements
        if all(g.edges[e].segment == "wing-l" for e in p.covered_edges)
        and p.length == 8
    )
    right = next(
        p for p in idx.placements
        if all(g.edges[e].segment == "wing-r" for e in p.covered_edges)
        and p.length == 8
    )
    layout.add_beam(left, 0)
    layout.add_beam(right, 1)  # mirrored but shifted one unit along Z
    # only the wings group is populated; the tail group is empty on both sides
    # d_H = 1 between the two 8-hole point sets; normalized by left length 8
    expected = (1.0 / len(sym)) * (1.0 / 8.0) * 1.0
    assert symmetry_term(layout, g, sym) == pytest.approx(expected)


# -- whole evaluations -----------------------------------------------------


def grid_cover_layout(n=1):
    cat = default_catalog()
    _, g, comps, idx, _ = make_setup(grid_sketch(n), axis="Z", catalog=cat)
    layout = Layout(g, idx)
    # cover each side line with one 5-hole beam, alternating layers
    lines = {}
    for p in idx.placements:
        if p.brick_id == "32316" and p.length == 5 and len(p.covered_edges) == 4:
            lines[tuple(sorted(p.covered_edges))] = p
    for i, key in enumerate(sorted(lines)):
        layout.add_beam(lines[key], i % 2)
    return g, idx, layout, cat


def test_eval_full_zero_terms_on_clean_layout():
    g, idx, layout, cat = grid_cover_layout(1)
    # drop layers to 0/1 alternating: dev nonzero; rebuild at layer 0 for all
    for uid in list(layout.beams):
        layout.remove_beam(uid)
    lines = {}
    for p in idx.placements:
        if p.brick_id == "32316" and len(p.covered_edges) == 4:
            lines[tuple(sorted(p.covered_edges))] = p
    keys = sorted(lines)
    layout.add_beam(lines[keys[0]], 0)
    w = ObjectiveWeights()
    connector = Connector(g, cat)
    bd = eval_full(layout, g, w, connector)
    assert bd.f_dev == 0 and bd.f_cpt == 0 and bd.f_sym == 0
    assert bd.f_col == 0 and bd.n_col == 0


def test_eval_full_gap_term_weighting():
    _, g, _, idx, _ = make_setup(square_sketch(9), axis="Z", lengths=(5, 9))
    cat = default_catalog()
    layout = Layout(g, idx)
    p9 = next(p for p in idx.placements if p.length == 9)
    layout.add_beam(p9, 0)
    layout.add_beam(p9, 2)  # one gap at each of nine nodes? no: same nodes
    w = ObjectiveWeights()
    bd = eval_full(layout, g, w, Connector(g, cat))
    # gap of 1 at each of the 9 covered nodes; |V| = 36
    assert bd.n_gap == 9
    assert bd.f_gap == pytest.approx(9 / 36)
    assert w.w_gap * (1 / 36) == pytest.approx(100 / 36)


def test_simplified_le_full():
    g, idx, layout, cat = grid_cover_layout(1)
    w = ObjectiveWeights()
    f0 = eval_simplified(layout, g, w)
    f = eval_full(layout, g, w, Connector(g, cat))
    assert f0.total <= f.total + 1e-9


def test_simplified_ignores_collisions():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p = place(idx, "beam5", 0)
    layout.add_beam(p, 0)
    layout.add_beam(p, 0)
    bd = eval_simplified(layout, g, ObjectiveWeights())
    assert bd.f_col == 0.0 and bd.n_col == 0


def test_weight_monotonicity_in_gap():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    p = place(idx, "beam5", 0)
    layout.add_beam(p, 0)
    layout.add_beam(p, 2)
    lo = eval_simplified(layout, g, ObjectiveWeights(w_gap=50.0)).total
    hi = eval_simplified(layout, g, ObjectiveWeights(w_gap=150.0)).total
    assert hi >= lo


def test_relabeling_invariance():
    g, idx, layout, cat = grid_cover_layout(2)
    w = ObjectiveWeights()
    base = eval_full(layout, g, w, Connector(g, cat))
    # rebuild the same geometry with shuffled insertion order (new uids)
    shuffled = Layout(g, idx)
    beams = sorted(layout.beams.values(), key=lambda b: -b.uid)
    for b in beams:
        shuffled.add_beam(b.placement, b.layer, b.axis)
    again = eval_full(shuffled, g, w, Connector(g, cat))
    assert base.total == pytest.approx(again.total, abs=1e-12)
    assert base.rigid_subsets == again.rigid_subsets
    assert base.n_col == again.n_col


def test_preset_argmin_sanity():
    # under the simplicity preset, of two gap-free layouts the one with
    # smaller total beam length scores strictly lower
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(3, 9))
    w = ObjectiveWeights.preset("simple")
    small = Layout(g, idx)
    small.add_beam(place(idx, "beam9", 0), 0)
    big = Layout(g, idx)
    for start in (0, 2, 4, 6):
        big.add_beam(place(idx, "beam3", start), 0)
    assert eval_simplified(small, g, w).total < eval_simplified(big, g, w).total


def test_presets():
    assert ObjectiveWeights.preset("faithful") == ObjectiveWeights(
        w_dev=100, w_tbl=0, w_rgd=0
    )
    assert ObjectiveWeights.preset("simple").w_tbl == 100
    assert ObjectiveWeights.preset("rigid-faithful").w_rgd == 100
    assert ObjectiveWeights.preset("rigid-simple").w_tbl == 100
    with pytest.raises(ValueError):
        ObjectiveWeights.preset("nope")


# -- incremental equality -----------------------------------------------------


def _random_change(layout, idx, rng):
    removed = []
    if layout.beams and rng.random() < 0.5:
        uids = sorted(layout.beams)
        for uid in rng.sample(uids, k=min(len(uids), rng.randrange(1, 3))):
            removed.append(layout.beams[uid])
    added = []
    for _ in range(rng.randrange(0, 3)):
        p = idx.placements[rng.randrange(len(idx.placements))]
        added.append(
            # uid assignment mimics the engine: monotonically increasing
            layout.beams[max(layout.beams)].__class__(
                uid=max(list(layout.beams) + [b.uid for b in added]) + 1,
                placement=p,
                layer=rng.choice([-1, 0, 1]),
                axis=p.axis,
            )
        )
    return LocalChange(removed=tuple(removed), added=tuple(added))


@pytest.mark.parametrize("fixture", ["grid2", "square", "plane"])
def test_incremental_matches_full(fixture):
    docs = {"grid2": grid_sketch(2), "square": square_sketch(9), "plane": plane_sketch()}
    sk = parse_sketch(docs[fixture])
    g = build_guiding_graph(sk)
    sym = expand_symmetry(sk, g)
    a = OrientationAssignment(axes=tuple("Z" for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    cat = default_catalog()
    idx = index_placements(comps, g, cat, a, max_beam_length=9)
    layout = Layout(g, idx)
    rng = random.Random(42)
    p = idx.placements[0]
    layout.add_beam(p, 0)

    w = ObjectiveWeights()
    connector = Connector(g, cat)
    inc = IncrementalObjective(layout, g, w, symmetry=sym, connector=connector,
                               simplified=False)
    steps = 120
    for step in range(steps):
        change = _random_change(layout, idx, rng)
        bd = incremental_update(inc, change)
        oracle = eval_full(layout, g, w, connector, sym)
        assert bd.total == pytest.approx(oracle.total, abs=1e-9), f"step {step}"
        assert bd.n_gap == oracle.n_gap
        assert bd.n_col == oracle.n_col
        assert bd.n_cfail == oracle.n_cfail
        assert bd.rigid_subsets == oracle.rigid_subsets


def test_incremental_empty_change_identity():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    layout.add_beam(place(idx, "beam5", 0), 0)
    inc = IncrementalObjective(layout, g, ObjectiveWeights())
    before = inc.breakdown()
    after = incremental_update(inc, LocalChange())
    assert before == after


def test_incremental_remove_readd_restores():
    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    b = layout.add_beam(place(idx, "beam5", 0), 1)
    inc = IncrementalObjective(layout, g, ObjectiveWeights())
    before = inc.breakdown()
    change = LocalChange(removed=(b,))
    incremental_update(inc, change)
    restored = incremental_update(inc, change.inverse())
    assert restored.total == pytest.approx(before.total, abs=1e-12)
    assert restored.n_gap == before.n_gap


def test_inconsistent_change_raises():
    from technicgen.layout import InconsistentChangeError, LayoutBeam

    _, g, _, idx, _ = make_setup(line_sketch(8), axis="Y", lengths=(5,))
    layout = Layout(g, idx)
    ghost = LayoutBeam(uid=99, placement=idx.placements[0], layer=0, axis="Y")
    inc = IncrementalObjective(layout, g, ObjectiveWeights())
    with pytest.raises(InconsistentChangeError):
        incremental_update(inc, LocalChange(removed=(ghost,)))


def test_gap_zero_iff_contiguous_stacks():
    import random as rnd

    _, g, _, idx, _ = make_setup(grid_sketch(2), axis="Z", lengths=(3, 5, 9))
    rng = rnd.Random(17)
    for _ in range(40):
        layout = Layout(g, idx)
        for _k in range(rng.randrange(1, 12)):
            p = idx.placements[rng.randrange(len(idx.placements))]
            layout.add_beam(p, rng.choice([-2, -1, 0, 1, 2]))
        contiguous = True
        for n in g.nodes:
            layers = sorted(
                {layout.beams[u].layer for u in layout.beams_at_node(n.id)}
            )
            if layers and layers[-1] - layers[0] + 1 != len(layers):
                contiguous = False
                break
        assert (gap_total(layout) == 0) == contiguous


def test_eval_full_matches_naive_oracle_on_grid1_optimum():
    """Every term recomputed naively on the known-optimal 1x1 grid cover."""
    import itertools

    from technicgen.fixtures import grid_sketch as grid_doc

    cat = default_catalog()
    sk = parse_sketch(grid_doc(1))
    g = build_guiding_graph(sk)
    a = OrientationAssignment(axes=tuple("Z" for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    idx = index_placements(comps, g, cat, a, straight_only=True)
    layout = Layout(g, idx)
    sides = sorted(
        (p for p in idx.placements if p.length == 5),
        key=lambda p: p.nodes,
    )
    assert len(sides) == 4
    # alternate layers around the ring so corners stack cleanly
    corner_order = []
    for p in sides:
        # order sides into a cycle by shared endpoints
        corner_order.append(p)
    ring = [corner_order[0]]
    rest = corner_order[1:]
    while rest:
        last = ring[-1]
        nxt = next(p for p in rest if set(p.nodes) & set(last.nodes))
        ring.append(nxt)
        rest.remove(nxt)
    for i, p in enumerate(ring):
        layout.add_beam(p, i % 2)

    w = ObjectiveWeights.preset("simple")
    bd = eval_full(layout, g, w, Connector(g, cat))

    beams = list(layout.beams.values())
    total_len = sum(b.length for b in beams)
    f_dev = math.sqrt(sum(b.length * b.layer**2 for b in beams) / total_len)
    layers = [b.layer for b in beams]
    f_cpt = (max(layers) - min(layers)) ** 2
    cells = {b.uid: set(b.cells(g)) for b in beams}
    n_col = sum(
        1 for x, y in itertools.combinations(sorted(cells), 2)
        if cells[x] & cells[y]
    )
    gap = 0
    for node in g.nodes:
        ls = sorted({b.layer for b in beams if node.id in b.placement.nodes})
        if ls:
            gap += ls[-1] - ls[0] + 1 - len(ls)
    assert bd.f_dev == pytest.approx(f_dev)
    assert bd.f_cpt == pytest.approx(f_cpt)
    assert bd.n_col == n_col == 0
    assert bd.n_gap == gap == 0
    assert bd.f_tbl == pytest.approx(total_len / g.node_count)
    assert bd.n_cfail == 0
    assert bd.rho_bar == 1.0  # corner joins are plain pins
    naive_total = (
        w.w_dev * f_dev + w.w_cpt * f_cpt + w.w_tbl * total_len / g.node_count
        + w.w_phr * (1 - bd.rho_bar) + w.w_col * 0 + w.w_gap * 0 + w.w_coh * 0
        + w.w_rgd * bd.f_rgd
    )
    assert bd.total == pytest.approx(naive_total)


def test_symmetry_empty_side_uses_bbox_diagonal():
    sk = parse_sketch(plane_sketch())
    g = build_guiding_graph(sk)
    sym = expand_symmetry(sk, g)
    a = OrientationAssignment(axes=tuple("Z" for _ in range(g.node_count)))
    comps = decompose_components(g, a)
    idx = index_placements(comps, g, catalog_of(3, 8), a)
    layout = Layout(g, idx)
    left = next(
        p for p in idx.placements
        if p.length == 8
        and all(g.edges[e].segment == "wing-l" for e in p.covered_edges)
    )
    layout.add_beam(left, 0)  # right wing stays empty
    wings = sym.groups[0]
    pts = [g.nodes[n].pos for n in wings.left_nodes | wings.right_nodes]
    lo = [min(p[i] for p in pts) for i in range(3)]
    hi = [max(p[i] for p in pts) for i in range(3)]
    diag = math.dist(lo, hi)
    expected = (1.0 / len(sym)) * (diag * diag / 8.0)
    assert symmetry_term(layout, g, sym) == pytest.approx(expected)

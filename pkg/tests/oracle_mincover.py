"""Branch-and-bound oracle: minimal gap-free beam count on tiny grids.

Independent of the search machinery: enumerates per-line interval coverings
directly from the benchmark beam lengths, then backtracks over layer
assignments under the gap-free and collision-free node constraints
(distinct, contiguous layers at every node).
"""

from __future__ import annotations

from itertools import combinations, product

BEAM_LENGTHS = (2, 3, 4, 5, 6, 7, 9, 11, 13, 15)  # bench catalog, <= 15 holes
COVER_LAYERS = (-1, 0, 1)


def _line_coverings(num_nodes: int, max_beams: int):
    """All interval sets of size <= max_beams covering every edge of a line."""
    intervals = [
        (s, s + m - 1)
        for m in BEAM_LENGTHS
        if m <= num_nodes
        for s in range(num_nodes - m + 1)
    ]
    out = []
    for k in range(1, max_beams + 1):
        for combo in combinations(intervals, k):
            covered = set()
            for a, b in combo:
                covered.update(range(a, b))
            if len(covered) == num_nodes - 1:
                out.append(combo)
    return out


def _grid_lines(n: int, cell: int = 4):
    """Node coordinates of every horizontal and vertical grid line."""
    size = n * cell
    lines = []
    for j in range(n + 1):
        lines.append([(x, j * cell) for x in range(size + 1)])
    for i in range(n + 1):
        lines.append([(i * cell, y) for y in range(size + 1)])
    return lines


def min_gap_free_beams(n: int, cell: int = 4, max_total: int = 12) -> int | None:
    """Smallest beam count of a gap-free, collision-free full grid cover."""
    lines = _grid_lines(n, cell)
    num_nodes = n * cell + 1
    per_line: dict[int, list] = {}
    for budget in range(1, 4):
        per_line[budget] = _line_coverings(num_nodes, budget)

    def beams_of(assignments):
        beams = []
        for line, combo in zip(lines, assignments):
            for a, b in combo:
                beams.append(tuple(line[a : b + 1]))
        return beams

    def layers_feasible(beams) -> bool:
        node_beams: dict[tuple, list[int]] = {}
        for i, nodes in enumerate(beams):
            for p in nodes:
                node_beams.setdefault(p, []).append(i)
        layer = [None] * len(beams)
        order = sorted(range(len(beams)), key=lambda i: -len(beams[i]))

        def ok(i) -> bool:
            for p in beams[i]:
                chosen = sorted(
                    layer[j] for j in node_beams[p] if layer[j] is not None
                )
                if len(set(chosen)) != len(chosen):
                    return False
                if chosen and chosen[-1] - chosen[0] + 1 != len(chosen):
                    # permit temporary holes only if unassigned beams remain here
                    if all(layer[j] is not None for j in node_beams[p]):
                        return False
            return True

        def backtrack(k) -> bool:
            if k == len(order):
                return True
            i = order[k]
            for l in COVER_LAYERS:
                layer[i] = l
                if ok(i) and backtrack(k + 1):
                    return True
            layer[i] = None
            return False

        return backtrack(0)

    total_lines = len(lines)
    for total in range(total_lines, max_total + 1):
        # distribute `total` beams over lines, each line >= 1
        def distributions(remaining, line_idx):
            if line_idx == total_lines - 1:
                yield (remaining,)
                return
            upper = min(3, remaining - (total_lines - line_idx - 1))
            for c in range(1, upper + 1):
                for rest in distributions(remaining - c, line_idx + 1):
                    yield (c,) + rest

        for dist in distributions(total, 0):
            if any(c > 3 for c in dist):
                continue
            pools = [per_line[c] for c in dist]
            sized = []
            okay = True
            for c, pool in zip(dist, pools):
                exact = [combo for combo in pool if len(combo) == c]
                if not exact:
                    okay = False
                    break
                sized.append(exact)
            if not okay:
                continue
            for assignment in product(*sized):
                beams = beams_of(assignment)
                if layers_feasible(beams):
                    return total
    return None

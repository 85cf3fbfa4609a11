"""Monochromatic clique analysis of colored complete graphs.

Each color class is searched with an exact branch-and-bound maximum clique
solver (pivoting plus degeneracy seed order, bitset adjacency).  The
overall maximum over colors upper-bounds the opposite-Ramsey number of the
graph's parameters, and the winning clique doubles as a separation
certificate: shifting its vertices by the winning color must leave them
pairwise 1/(4*alpha) apart.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .action import LatticeVector, ShiftSystem, ring_vectors, shift_min_diff
from .colorer import ColoredGraph
from .errors import CapExceeded, UnknownColor
from .sepset import separation_check

DEFAULT_CLIQUE_CAP = 5000


def color_class_adjacency(graph: ColoredGraph, color_index: int) -> list[int]:
    """Bitmask adjacency (one int per vertex) of the edges in one color."""
    if not 0 <= color_index < len(graph.colors):
        raise UnknownColor(
            f"color {color_index} outside palette of {len(graph.colors)}"
        )
    masks = [0] * graph.vertex_count
    for i, j, c, _ in graph.iter_edges():
        if c == color_index:
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


def color_classes(graph: ColoredGraph) -> list[list[int]]:
    """Adjacency bitmasks of every color class in one pass."""
    classes = [[0] * graph.vertex_count for _ in range(len(graph.colors))]
    for i, j, c, _ in graph.iter_edges():
        classes[c][i] |= 1 << j
        classes[c][j] |= 1 << i
    return classes


def max_clique(adjacency: Sequence[int], cap: int = DEFAULT_CLIQUE_CAP) -> tuple[int, list[int]]:
    """Exact maximum clique order and one witness clique.

    Branch and bound with pivoting; vertices are seeded in degeneracy
    order.  Deterministic: the witness is the first maximum found by the
    fixed branch order.  Raises CapExceeded above `cap` vertices.
    """
    q = len(adjacency)
    if q == 0:
        return 0, []
    if q > cap:
        raise CapExceeded(f"{q} vertices exceeds clique search cap {cap}")
    masks = [adjacency[v] & ~(1 << v) for v in range(q)]

    order = _degeneracy_order(masks)
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * q
    for v in range(q):
        m = masks[v]
        nm = 0
        while m:
            low = m & -m
            nm |= 1 << pos[low.bit_length() - 1]
            m ^= low
        radj[pos[v]] = nm

    best = 1
    best_clique = [0]

    def expand(r: list[int], p: int):
        nonlocal best, best_clique
        if p == 0:
            if len(r) > best:
                best = len(r)
                best_clique = r.copy()
            return
        if len(r) + p.bit_count() <= best:
            return
        pivot = _pick_pivot(p, radj)
        cand = p & ~radj[pivot]
        while cand:
            if len(r) + p.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            r.append(v)
            expand(r, p & radj[v])
            r.pop()
            p &= ~low
            cand ^= low
        # remaining vertices all neighbor the pivot; any clique among them
        # extends by the pivot, which was branched above

    for i in range(q):
        later = ((1 << q) - 1) >> (i + 1) << (i + 1)
        p = radj[i] & later
        if 1 + p.bit_count() <= best:
            continue
        expand([i], p)

    witness = sorted(order[i] for i in best_clique)
    return best, witness


def _degeneracy_order(masks: Sequence[int]) -> list[int]:
    q = len(masks)
    remaining = (1 << q) - 1
    order = []
    for _ in range(q):
        best_v = -1
        best_deg = q + 1
        m = remaining
        while m:
            low = m & -m
            v = low.bit_length() - 1
            deg = (masks[v] & remaining).bit_count()
            if deg < best_deg:
                best_deg = deg
                best_v = v
            m ^= low
        order.append(best_v)
        remaining &= ~(1 << best_v)
    return order


def _pick_pivot(p: int, radj: Sequence[int]) -> int:
    best_v = -1
    best_count = -1
    m = p
    while m:
        low = m & -m
        v = low.bit_length() - 1
        c = (p & radj[v]).bit_count()
        if c > best_count:
            best_count = c
            best_v = v
        m ^= low
    return best_v


@dataclass(frozen=True)
class ColorCliqueEntry:
    index: int
    vector: LatticeVector
    order: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class CliqueReport:
    """Per-color maximum cliques and the separation certificate of the
    winning one.

    `attained_exponent` is the exponent of the smallest pairwise distance
    of the winning clique's image under the winning shift (None for a
    one-vertex witness); passing means it is at most the threshold.
    """

    colors: tuple[ColorCliqueEntry, ...]
    overall_max: int
    winning_color: int
    threshold_exponent: int
    attained_exponent: int | None
    separation_passed: bool

    def to_json(self) -> dict:
        return {
            "colors": [
                {
                    "index": e.index,
                    "v": [e.vector.x, e.vector.y],
                    "order": e.order,
                    "witness": list(e.witness),
                }
                for e in self.colors
            ],
            "overall_max": self.overall_max,
            "certificate": {
                "winning_color": self.winning_color,
                "threshold_exponent": self.threshold_exponent,
                "attained_exponent": self.attained_exponent,
                "separation_passed": self.separation_passed,
            },
        }


def mono_clique_report(
    graph: ColoredGraph, cap: int = DEFAULT_CLIQUE_CAP, threads: int = 1
) -> CliqueReport:
    """Run max_clique on every color class and certify the winner.

    The winning clique's image under the winning color's shift is
    re-checked to be pairwise separated at the 1/(4*alpha) threshold.
    """
    classes = color_classes(graph)
    if threads <= 1:
        results = [max_clique(cls, cap) for cls in classes]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda cls: max_clique(cls, cap), classes))
    vectors = graph.colors.vectors
    entries = tuple(
        ColorCliqueEntry(c, vectors[c], order, tuple(witness))
        for c, (order, witness) in enumerate(results)
    )
    overall = max(e.order for e in entries)
    winner = next(e for e in entries if e.order == overall)
    system = graph.system
    images = [system.apply(winner.vector, graph.vertices[i]) for i in winner.witness]
    ok, _ = separation_check(system, images, system.threshold)
    smallest = None  # least pairwise distance of the image set
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            d = shift_min_diff(images[a], images[b])
            if smallest is None or d < smallest:
                smallest = d
    attained = smallest.exponent if smallest is not None else None
    return CliqueReport(
        colors=entries,
        overall_max=overall,
        winning_color=winner.index,
        threshold_exponent=system.threshold_exponent,
        attained_exponent=attained,
        separation_passed=ok,
    )


def revalidate_edges(graph: ColoredGraph, threads: int = 1):
    """Independently recheck every edge's witness.

    For each edge {x, y} colored v, rescans the pair around v to find the
    exact achieved exponent; the edge is valid when that exponent is at
    most the threshold and equals the stored value.  Returns None when all
    edges pass, else (i, j, reason) for the first bad edge.
    """
    if threads <= 1:
        return _revalidate_range(graph, 0, graph.vertex_count)
    rows = list(range(graph.vertex_count))
    step = max(1, len(rows) // (threads * 4))
    spans = [(rows[s], min(rows[s] + step, graph.vertex_count)) for s in range(0, len(rows), step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda span: _revalidate_range(graph, *span), spans))
    for r in results:
        if r is not None:
            return r
    return None


def _revalidate_range(graph: ColoredGraph, row_start: int, row_end: int):
    system: ShiftSystem = graph.system
    t = system.threshold_exponent
    vectors = graph.colors.vectors
    verts = graph.vertices
    q = graph.vertex_count
    width = verts[0].width
    for i in range(row_start, row_end):
        ci = verts[i].cells
        base = i * (2 * q - i - 1) // 2 - i - 1
        for j in range(i + 1, q):
            e = base + j
            c = graph.edge_colors[e]
            stored = graph.edge_quality[e]
            vx, vy = vectors[c]
            cj = verts[j].cells
            achieved = None
            for r in range(width + 1):
                for u in ring_vectors(r):
                    idx = ((u.x + vx) % width) * width + ((u.y + vy) % width)
                    if ci[idx] != cj[idx]:
                        achieved = r
                        break
                if achieved is not None:
                    break
            if achieved is None:
                return (i, j, "endpoints are identical points")
            if achieved > t:
                return (i, j, f"achieved exponent {achieved} exceeds threshold {t}")
            if achieved != stored:
                return (i, j, f"stored exponent {stored}, recomputed {achieved}")
    return None


@dataclass(frozen=True)
class BoundCertificate:
    """Machine-checkable record that a concrete coloring of K_q with p
    colors has no monochromatic clique of order `bound` + 1, hence the
    p-color Ramsey number of `bound` + 1 exceeds q."""

    bound: int
    p: int
    k: int
    q: int
    statement: str
    graph_checksum: str
    verified: bool

    def to_json(self) -> dict:
        return {
            "kind": "ramsey_lower_bound",
            "statement": self.statement,
            "p": self.p,
            "k": self.k,
            "q": self.q,
            "graph_checksum": self.graph_checksum,
            "verified": self.verified,
        }


def opposite_upper_bound(
    report: CliqueReport, graph: ColoredGraph, revalidated: bool | None = None
) -> BoundCertificate | None:
    """Turn a clique report into the classical-bound certificate.

    Returns None for graphs with no edges (nothing to certify).  When
    `revalidated` is None the edge witnesses are rechecked here; pass the
    outcome of an earlier `revalidate_edges` run to skip the repeat.
    """
    q = graph.vertex_count
    if q < 2:
        return None
    if revalidated is None:
        revalidated = revalidate_edges(graph) is None
    r = report.overall_max
    p = len(graph.colors)
    return BoundCertificate(
        bound=r,
        p=p,
        k=r + 1,
        q=q,
        statement=f"R_{p}({r + 1}) > {q}",
        graph_checksum=graph.checksum_hex(),
        verified=bool(revalidated) and report.separation_passed,
    )

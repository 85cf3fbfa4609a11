"""Tests for the edge colorer and the DECG file format."""

import io
import random

import pytest

from decg import (
    BadFormat,
    ChecksumMismatch,
    LatticeVector,
    NoWitness,
    PeriodicConfiguration,
    ShiftSystem,
    UnknownColor,
    build_color_set,
    color_graph,
    decg_dumps,
    enumerate_periodic_points,
    find_witness,
    fnv1a64,
    greedy_separated,
    read_decg,
    sample_periodic_points,
    write_decg,
)

SYSTEM = ShiftSystem(2)


def _graph(width, n, count=None, seed=7, threads=1):
    if count is None:
        pts = list(enumerate_periodic_points(2, width))
        sampled = "full"
    else:
        pts = sample_periodic_points(2, width, count, seed)
        sampled = f"subsampled seed={seed}"
    sep = greedy_separated(SYSTEM, pts, SYSTEM.epsilon(n))
    return color_graph(SYSTEM, sep, n, sampled=sampled, threads=threads)


def test_fnv1a64_reference_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_build_color_set():
    c0 = build_color_set(0)
    assert c0.vectors == (LatticeVector(0, 0),)
    c1 = build_color_set(1)
    assert len(c1) == 9
    assert c1.vectors[0] == LatticeVector(-1, -1)
    assert c1.vectors[-1] == LatticeVector(1, 1)
    assert c1.index_of(LatticeVector(0, 0)) == 4
    c2 = build_color_set(2)
    assert len(c2) == 25
    assert c2.index_of(LatticeVector(0, 0)) == 12
    for i, v in enumerate(c2.vectors):
        assert c2.index_of(v) == i


def test_color_set_rejects_outside_vectors():
    with pytest.raises(UnknownColor):
        build_color_set(1).index_of(LatticeVector(2, 0))


def test_single_edge_graph():
    x = PeriodicConfiguration.constant(2, 3)
    y = x.with_cell(2, 1, 1)
    g = color_graph(SYSTEM, [x, y], 1)
    assert g.edge_count == 1
    assert g.color_vector_of(0, 1) == LatticeVector(-1, 1)
    assert g.edge_quality == (0,)


def test_mini_pipeline_k16():
    g = _graph(2, 1)
    assert g.vertex_count == 16
    assert g.edge_count == 120
    assert len(g.colors) == 9
    assert g.colors_used() <= set(range(9))
    # every edge's color matches the witness search, and shifting by it
    # separates the endpoints maximally
    for i, j, c, quality in g.iter_edges():
        res = find_witness(SYSTEM, g.vertices[i], g.vertices[j], 1)
        assert g.colors.vectors[c] == res.vector
        assert quality == 0
        vi = SYSTEM.apply(res.vector, g.vertices[i])
        vj = SYSTEM.apply(res.vector, g.vertices[j])
        assert vi.at(0, 0) != vj.at(0, 0)


def test_color_graph_threads_deterministic():
    a = _graph(3, 1, count=120, threads=1)
    b = _graph(3, 1, count=120, threads=4)
    assert a.edge_colors == b.edge_colors
    assert a.edge_quality == b.edge_quality
    assert decg_dumps(a) == decg_dumps(b)


def test_color_graph_rejects_unseparated_input():
    x = PeriodicConfiguration.constant(2, 11)
    y = x.with_cell(5, 0, 1)  # distance 2^-5 < 2^-1
    with pytest.raises(NoWitness):
        color_graph(SYSTEM, [x, y], 1)


def test_color_graph_rejects_mixed_periods():
    from decg import MismatchedSystems

    x = PeriodicConfiguration.constant(2, 3)
    y = PeriodicConfiguration.constant(2, 5).with_cell(0, 0, 1)
    with pytest.raises(MismatchedSystems):
        color_graph(SYSTEM, [x, y], 1)


def test_edge_colors_follow_points_not_indices():
    pts = sample_periodic_points(2, 3, 40, seed=3)
    g = color_graph(SYSTEM, pts, 1)
    perm = list(range(40))
    random.Random(0).shuffle(perm)
    permuted = [pts[i] for i in perm]
    h = color_graph(SYSTEM, permuted, 1)
    where = {p: idx for idx, p in enumerate(permuted)}
    for i in range(40):
        for j in range(i + 1, 40):
            a, b = where[pts[i]], where[pts[j]]
            lo, hi = min(a, b), max(a, b)
            assert g.color_vector_of(i, j) == h.color_vector_of(lo, hi)


def test_decg_round_trip_single_vertex():
    g = color_graph(SYSTEM, [PeriodicConfiguration.constant(2, 3)], 1)
    text = decg_dumps(g)
    back = read_decg(text.encode())
    assert decg_dumps(back) == text
    assert back.vertex_count == 1
    assert back.edge_count == 0


def test_decg_round_trip_bytes_stable():
    g = _graph(2, 1)
    buf = io.BytesIO()
    write_decg(g, buf)
    data = buf.getvalue()
    back = read_decg(data)
    assert decg_dumps(back).encode() == data
    assert back.sampled == "full"
    assert back.system == g.system
    assert back.vertices == g.vertices
    assert back.edge_colors == g.edge_colors


def test_decg_round_trip_file(tmp_path):
    g = _graph(3, 1, count=30)
    path = tmp_path / "g.decg"
    write_decg(g, path)
    back = read_decg(path)
    assert back.sampled == "subsampled seed=7"
    assert decg_dumps(back) == decg_dumps(g)


def test_decg_truncated_file():
    g = _graph(2, 1)
    text = decg_dumps(g)
    lines = text.split("\n")
    cut = "\n".join(lines[:30]) + "\n"
    with pytest.raises(BadFormat) as info:
        read_decg(cut.encode())
    assert info.value.line_no == 31
    # cutting mid-line drops the final newline
    with pytest.raises(BadFormat):
        read_decg(text[: len(text) // 2].encode())


def test_decg_checksum_mismatch():
    g = _graph(2, 1)
    text = decg_dumps(g)
    tampered = text.replace("e 0 1 ", "e 0 1  ", 1)
    with pytest.raises((ChecksumMismatch, BadFormat)):
        read_decg(tampered.encode())


def test_decg_stored_checksum_tampered():
    g = _graph(2, 1)
    text = decg_dumps(g)
    stored = text.rsplit("end ", 1)[1].strip()
    flipped = ("0" if stored[0] != "0" else "1") + stored[1:]
    with pytest.raises(ChecksumMismatch):
        read_decg(text.replace(f"end {stored}", f"end {flipped}").encode())


def test_decg_color_vector_consistency():
    g = color_graph(
        SYSTEM,
        [PeriodicConfiguration.constant(2, 3), PeriodicConfiguration.constant(2, 3).with_cell(0, 0, 1)],
        1,
    )
    text = decg_dumps(g)
    # edge line says color 4 = (0, 0); claim a different vector
    bad_line = text.replace("e 0 1 4 0 0 0", "e 0 1 4 1 0 0")
    body, _, _ = bad_line.rpartition("end ")
    rebuilt = body + f"end {fnv1a64(body.encode()):016x}\n"
    with pytest.raises(BadFormat):
        read_decg(rebuilt.encode())


def test_decg_bad_header():
    with pytest.raises(BadFormat) as info:
        read_decg(b"decg 2\n")
    assert info.value.line_no == 1

from __future__ import annotations

import itertools
import random

import pytest

import trisweep as ts
from trisweep.errors import ComplexError


def test_load_tetrahedron(tetra):
    assert len(tetra.edges) == 6
    assert len(tetra.triangles) == 4
    assert tetra.vertices == frozenset("abcd")
    assert tetra.pure_dim2


def test_load_single_vertex():
    K = ts.load_complex('{"vertices": ["a"]}')
    assert K.vertices == frozenset("a")
    assert len(K.edges) == 0


def test_load_derives_triangle_faces():
    K = ts.load_complex('{"vertices": ["a","b","c"], "triangles": [["a","b","c"]]}')
    assert K.edges == frozenset({frozenset("ab"), frozenset("ac"), frozenset("bc")})


def test_load_parse_error_has_line_and_column():
    with pytest.raises(ComplexError) as err:
        ts.load_complex('{"vertices": [}')
    assert err.value.line == 1
    assert err.value.column is not None
    assert "parse error" in str(err.value)


def test_load_rejects_duplicate_vertex():
    with pytest.raises(ComplexError, match="duplicate vertex"):
        ts.load_complex('{"vertices": ["a", "a"]}')


def test_load_rejects_closure_violation():
    with pytest.raises(ComplexError, match="closure violation"):
        ts.load_complex('{"vertices": ["a","b"], "triangles": [["a","b","c"]]}')


def test_load_rejects_unknown_keys():
    with pytest.raises(ComplexError, match="unknown keys"):
        ts.load_complex('{"vertices": [], "extra": 1}')


def test_load_rejects_whitespace_vertex():
    with pytest.raises(ComplexError, match="bad vertex name"):
        ts.load_complex('{"vertices": ["a b"]}')


def test_validate_tetrahedron_clean(tetra):
    assert ts.validate_complex(tetra, require_pure_dim2=True) == []


def test_validate_isolated_vertex():
    K = ts.SimplicialComplex.build("abcx", [("a", "b", "c")])
    diags = ts.validate_complex(K, require_pure_dim2=True)
    assert len(diags) == 1
    assert diags[0].rule == "pure_dim2"
    assert "vertex x not in any 2-simplex" in diags[0].message


def test_validate_undeclared_triangle_vertex():
    K = ts.SimplicialComplex.build("ab", [("a", "b", "c")])
    diags = ts.validate_complex(K)
    assert any(d.rule == "closure" and "undeclared vertex c" in d.message for d in diags)


def test_validate_dangling_edge_under_pure_dim2():
    K = ts.SimplicialComplex.build("abcd", [("a", "b", "c")], edges=[("a", "d")])
    diags = ts.validate_complex(K, require_pure_dim2=True)
    assert any("not in any 2-simplex" in d.message for d in diags)


def test_alpha_count_on_tetrahedron(tetra):
    # oracle: exhaustive enumeration of oriented markings over the four faces
    expected = set()
    for tri in tetra.sorted_triangles:
        for src, apex, tgt in itertools.permutations(tri):
            expected.add((src, apex, tgt))
    cells = ts.oriented_triangles(tetra, "alpha")
    assert len(cells) == 24
    assert {(c.source, c.apex, c.target) for c in cells} == expected


def test_oriented_triangles_empty_complex():
    K = ts.SimplicialComplex.build([])
    assert ts.oriented_triangles(K) == []


def test_beta_cells_single_triangle():
    K = ts.SimplicialComplex.build("abc", [("a", "b", "c")])
    cells = ts.oriented_triangles(K, "beta")
    assert [c.name for c in cells] == ["a.b.c.a", "b.c.a.b", "c.a.b.c"]
    assert all(c.direction == 1 for c in cells)
    assert all(c.source_path.is_identity() for c in cells)


def test_identity_cell_counts(tetra):
    assert len(ts.oriented_triangles(tetra, "identity_edge")) == 12
    assert len(ts.oriented_triangles(tetra, "identity_vertex")) == 4
    assert len(ts.oriented_triangles(tetra, "alpha_star")) == 24
    assert len(ts.oriented_triangles(tetra, "beta_star")) == 12


def test_enumeration_counts_random_complexes():
    rng = random.Random(7)
    letters = "pqrstuvw"
    for _ in range(20):
        n_faces = rng.randrange(1, 11)
        faces = set()
        while len(faces) < n_faces:
            faces.add(frozenset(rng.sample(letters, 3)))
        K = ts.SimplicialComplex.build(letters, faces)
        T = len(K.triangles)
        assert len(ts.oriented_triangles(K, "alpha")) == 6 * T
        assert len(ts.oriented_triangles(K, "beta")) == 3 * T


def test_classify_alpha(tetra):
    cell = ts.classify_cell(
        ts.EdgePath((("a", "b"),)), ts.EdgePath((("a", "c"), ("c", "b"))), tetra
    )
    assert cell is not None
    assert cell.kind == "alpha"
    assert cell.name == "a.c.b"
    assert cell.marked_vertices == ("a", "b")


def test_classify_identity_edge(tetra):
    p = ts.EdgePath((("a", "b"),))
    cell = ts.classify_cell(p, p, tetra)
    assert cell.kind == "identity_edge"
    assert cell.marked_vertices == ("a", "b")


def test_classify_missing_face():
    K = ts.SimplicialComplex.build("abcd", [("a", "b", "c")])
    got = ts.classify_cell(
        ts.EdgePath((("a", "b"),)),
        ts.EdgePath((("a", "d"), ("d", "b"))),
        K,
    )
    assert got is None


def test_classify_reduces_before_matching(tetra):
    # a redundant degenerate step must not block recognition
    src = ts.EdgePath((("a", "b"), ("b", "b")))
    tgt = ts.EdgePath((("a", "c"), ("c", "b")))
    cell = ts.classify_cell(src, tgt, tetra)
    assert cell is not None and cell.kind == "alpha"


def test_classify_beta_both_directions(tetra):
    loop = ts.EdgePath.identity("c")
    forward = ts.EdgePath((("c", "a"), ("a", "b"), ("b", "c")))
    backward = ts.EdgePath((("c", "b"), ("b", "a"), ("a", "c")))
    assert ts.classify_cell(loop, forward, tetra).kind == "beta"
    cell = ts.classify_cell(loop, backward, tetra)
    assert cell.kind == "beta" and cell.direction == -1
    assert ts.classify_cell(forward, loop, tetra).kind == "beta_star"


def test_classified_cell_is_homotopic_to_inputs(tetra):
    rng = random.Random(3)
    from conftest import random_walk

    for _ in range(200):
        p = random_walk(tetra, rng, rng.randrange(1, 5), stay_prob=0.2)
        q = random_walk(tetra, rng, rng.randrange(1, 5), stay_prob=0.2)
        cell = ts.classify_cell(p, q, tetra)
        if cell is None:
            continue
        assert ts.x1_homotopic(cell.source_path, p)
        assert ts.x1_homotopic(cell.target_path, q)


def test_not_elementary_for_equal_long_paths(tetra):
    p = ts.EdgePath((("a", "b"), ("b", "c")))
    assert ts.classify_cell(p, p, tetra) is None


def test_dump_complex_round_trips(tetra):
    again = ts.load_complex(ts.dump_complex(tetra))
    assert again == tetra

import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkmult.graph import (
    Graph,
    GraphFormatError,
    VertexPair,
    WeightedIndicatorVector,
    apply_permutation,
    cone_over,
    delete_vertices,
    graph_from_edges,
    load_graph,
    parse_weight,
    save_graph,
    set_edge,
)
from walkmult.linalg import FLOAT, RATIONAL, char_poly


class TestVertexPair:
    def test_ordering_normalized(self):
        p = VertexPair(5, 2)
        assert (p.u, p.v) == (2, 5)

    def test_equal_vertices_rejected(self):
        with pytest.raises(ValueError):
            VertexPair(3, 3)


class TestWeightedIndicatorVector:
    def test_zero_gamma_rejected(self):
        with pytest.raises(ValueError):
            WeightedIndicatorVector(support=(1, 2), gamma=(F(1), F(0)),
                                    ambient=3)

    def test_dense(self):
        e = WeightedIndicatorVector(support=(1, 3), gamma=(F(2), F(-1)),
                                    ambient=4)
        assert e.dense() == (F(2), F(0), F(-1), F(0))


class TestParseWeight:
    def test_rational_forms(self):
        assert parse_weight("-1", RATIONAL) == F(-1)
        assert parse_weight("1/2", RATIONAL) == F(1, 2)
        assert parse_weight("0.25", RATIONAL) == F(1, 4)

    def test_float_mode(self):
        assert parse_weight("0.5", FLOAT) == 0.5

    def test_garbage_rejected(self):
        with pytest.raises(GraphFormatError):
            parse_weight("spam", RATIONAL)


class TestLoadSave:
    def test_json_p3(self):
        g = load_graph(
            '{"n": 3, "mode": "rational", "edges": [[1,2,"1"],[2,3,"1"]]}')
        assert g.n == 3
        assert g.weight(1, 2) == F(1)
        assert g.weight(1, 3) == F(0)

    def test_edge_list(self):
        g = load_graph("n 3 mode rational\n1 2 1\n2 3 1/2\n")
        assert g.weight(2, 3) == F(1, 2)

    def test_conflicting_duplicate_edge(self):
        with pytest.raises(GraphFormatError):
            load_graph("n 2 mode rational\n1 2 1\n2 1 2\n")

    def test_vertex_out_of_range(self):
        with pytest.raises(GraphFormatError):
            load_graph("n 2 mode rational\n1 3 1\n")

    def test_round_trip_both_formats(self, tmp_path):
        g = graph_from_edges(
            4, [(1, 2, F(1, 3)), (2, 3, F(-2)), (4, 4, F(5, 4))])
        for fmt in ("json", "edges"):
            text = save_graph(g, fmt=fmt)
            assert load_graph(text) == g

    def test_load_from_path(self, tmp_path):
        p = tmp_path / "g.json"
        g = graph_from_edges(2, [(1, 2, F(7))])
        p.write_text(save_graph(g))
        assert load_graph(p) == g

    def test_loop_encoded_as_equal_indices(self):
        g = load_graph('{"n": 2, "mode": "rational", "edges": [[1,1,"3"]]}')
        assert g.weight(1, 1) == F(3)


class TestDeleteVertices:
    def test_p3_delete_middle(self, p3):
        h = delete_vertices(p3, [2])
        assert h.n == 2
        assert h.weight(1, 2) == F(0)

    def test_delete_none_is_identity(self, p3):
        assert delete_vertices(p3, []) == p3

    def test_index_map(self, ladder):
        h = delete_vertices(ladder, [1])
        assert h.index_map == {2: 1, 3: 2, 4: 3, 5: 4, 6: 5}
        rebuilt = graph_from_edges(
            5, [(h.index_map[i], h.index_map[j], w)
                for (i, j, w) in ladder.edges() if 1 not in (i, j)])
        assert char_poly(h.weights) == char_poly(rebuilt.weights)

    def test_delete_all_rejected(self, p3):
        with pytest.raises(ValueError):
            delete_vertices(p3, [1, 2, 3])


class TestConeOver:
    def test_pendant(self, p3):
        e = WeightedIndicatorVector(support=(2,), gamma=(F(1),), ambient=3)
        h = cone_over(p3, e)
        assert h.n == 4
        assert h.weight(2, 4) == F(1)
        assert h.weight(4, 4) == F(0)

    def test_principal_submatrix_untouched(self, ladder):
        e = WeightedIndicatorVector(support=(1, 6), gamma=(F(-1), F(1)),
                                    ambient=6)
        h = cone_over(ladder, e)
        for i in range(1, 7):
            for j in range(1, 7):
                assert h.weight(i, j) == ladder.weight(i, j)

    def test_cone_then_delete_is_identity(self, ladder):
        e = WeightedIndicatorVector(support=(2, 5), gamma=(F(1), F(1)),
                                    ambient=6)
        h = cone_over(ladder, e)
        assert delete_vertices(h, [7]).weights == ladder.weights


class TestApplyPermutation:
    def test_identity(self, p3):
        assert apply_permutation(p3, [1, 2, 3]) == p3

    def test_p3_swap_is_automorphism(self, p3):
        assert apply_permutation(p3, [3, 2, 1]).weights == p3.weights

    def test_char_poly_invariant(self, ladder):
        h = apply_permutation(ladder, [3, 1, 4, 6, 2, 5])
        assert char_poly(h.weights) == char_poly(ladder.weights)

    def test_non_bijection_rejected(self, p3):
        with pytest.raises(ValueError):
            apply_permutation(p3, [1, 1, 2])


class TestSetEdge:
    def test_set_and_clear(self, p3):
        h = set_edge(p3, 1, 3, F(2))
        assert h.weight(1, 3) == F(2)
        assert set_edge(h, 1, 3, F(0)).weights == p3.weights


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=30, deadline=None)
def test_save_load_round_trip_random(seed):
    import random
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    edges = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if rng.random() < 0.5:
                edges.append((i, j, F(rng.randint(-9, 9), rng.randint(1, 4))))
    edges = [(i, j, w) for (i, j, w) in edges if w != 0]
    g = graph_from_edges(n, edges)
    assert load_graph(save_graph(g, fmt="json")) == g
    assert load_graph(save_graph(g, fmt="edges")) == g

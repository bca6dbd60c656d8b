import itertools
import json

import pytest

from qcluster.cartan import is_reduced, longest_word, make_cartan
from qcluster.errors import InvalidMove, SizeLimit, UnknownType
from qcluster.words import (
    CoxeterMove,
    apply_move,
    available_moves,
    build_word_graph,
    commutation_class,
    m_count,
    move_between,
    parse_word,
    quotient,
    stack_notation,
    word_str,
)


def reflection_matrices(datum):
    """s_i on the root lattice: alpha_j -> alpha_j - a_ij alpha_i (independent of cartan.py's root code)."""
    idx = list(datum.index_set)
    n = len(idx)
    mats = {}
    for p, i in enumerate(idx):
        M = [[int(r == c) for c in range(n)] for r in range(n)]
        for q, j in enumerate(idx):
            M[p][q] -= datum.a(i, j)
        mats[i] = tuple(map(tuple, M))
    return mats


def matmul(A, B):
    return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(len(B))) for c in range(len(B[0]))) for r in range(len(A)))


def brute_force_words(datum, target_word):
    mats = reflection_matrices(datum)
    n = len(datum.index_set)
    ident = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))

    def elem(w):
        M = ident
        for c in w:
            M = matmul(M, mats[c])
        return M

    goal = elem(target_word)
    return {w for w in itertools.product(datum.index_set, repeat=len(target_word)) if elem(w) == goal}


@pytest.mark.parametrize("label,count", [("A3", 16), ("B3", 42), ("C3", 42), ("A2xA1", 8), ("A1xA1xA1", 6), ("B2xA1", 10)])
def test_word_graph_matches_brute_force(label, count):
    d = make_cartan(label)
    g = build_word_graph(d, longest_word(d))
    assert len(g.vertices) == count
    assert set(g.vertices) == brute_force_words(d, longest_word(d))


@pytest.mark.parametrize("label,gon", [("A3", 8), ("B3", 14), ("C3", 14)])
def test_quotient_is_a_cycle(label, gon):
    d = make_cartan(label)
    Q = quotient(build_word_graph(d, longest_word(d)))
    assert Q.is_cycle() and len(Q.classes) == gon and len(Q.cycle_order()) == gon


def test_rank3_decomposable_graphs_are_polygons():
    # the word graphs of A1xA1xA1, A2xA1 and B2xA1 are 6-, 8- and 10-gons
    for label, n in [("A1xA1xA1", 6), ("A2xA1", 8), ("B2xA1", 10)]:
        d = make_cartan(label)
        g = build_word_graph(d, longest_word(d))
        assert len(g.edges) == n and all(len(g.neighbours(u)) == 2 for u in g.vertices)


def test_a2xa1_quotient_has_double_edge():
    d = make_cartan("A2xA1")
    g = build_word_graph(d, longest_word(d))
    kinds = sorted(m.kind for _, _, m in g.edges)
    assert kinds == [2] * 6 + [3] * 2
    Q = quotient(g)
    assert len(Q.classes) == 2
    # two parallel braid edges between the two classes
    assert [(a, b) for a, b, _ in Q.edges] == [(0, 1), (0, 1)]
    assert Q.is_cycle()  # a bigon


def test_edges_symmetric_and_moves_involutive():
    d = make_cartan("B3")
    g = build_word_graph(d, longest_word(d))
    for u, v, mv in g.edges:
        assert g.has_edge(v, u)
        assert apply_move(v, mv.mirror()) == u
        assert apply_move(apply_move(u, mv), mv.mirror()) == u
        assert move_between(d, u, v) == mv


def test_moves_by_kind():
    d = make_cartan("B3")
    w = (1, 2, 1, 2, 3, 2, 1, 2, 3)
    assert is_reduced(d, w)
    kinds = {m.kind for m in available_moves(d, w)}
    assert kinds <= {2, 3, 4}
    mv = CoxeterMove(1, (1, 2), 4)
    assert apply_move(w, mv)[:4] == (2, 1, 2, 1)
    with pytest.raises(InvalidMove):
        apply_move(w, CoxeterMove(2, (1, 2), 4))


def test_parse_word_forms():
    assert parse_word("121321") == parse_word("1,2,1,3,2,1") == parse_word([1, 2, 1, 3, 2, 1]) == (1, 2, 1, 3, 2, 1)
    assert word_str((1, 2, 3)) == "123"


def test_stack_notation_a3_classes():
    d = make_cartan("A3")
    Q = quotient(build_word_graph(d, longest_word(d)))
    names = {stack_notation(c, d, inline=True) for c in Q.classes}
    assert "2[13]2[13]" in names
    assert commutation_class(d, (2, 1, 3, 2, 1, 3)) in Q.classes


def test_m_count_ignores_closing_vertex():
    path = [(1, 2, 1), (2, 1, 2), (1, 2, 1)]
    assert m_count(path, 1) == 1 and m_count(path, 2) == 1


def test_exports():
    d = make_cartan("A3")
    g = build_word_graph(d, longest_word(d))
    assert g.to_dot().startswith("graph")
    data = json.loads(g.to_json())
    assert len(data["vertices"]) == 16
    q = json.loads(quotient(g).to_json())
    assert q


def test_errors():
    with pytest.raises(UnknownType):
        make_cartan("E8")
    with pytest.raises(UnknownType):
        make_cartan("A3xA2")
    with pytest.raises(InvalidMove):
        build_word_graph(make_cartan("A3"), (1, 1))
    with pytest.raises(SizeLimit):
        build_word_graph(make_cartan("D4"), longest_word(make_cartan("D4")), cap=100)


def test_full_rank4_counts():
    # reduced words of w0: 768 in A4, 2316 in D4
    for label, n in [("A4", 768), ("D4", 2316)]:
        d = make_cartan(label)
        assert len(build_word_graph(d, longest_word(d)).vertices) == n

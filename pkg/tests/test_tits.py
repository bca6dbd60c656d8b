import json
import random
import time

import pytest

from qcluster.cartan import longest_word, make_cartan
from qcluster.errors import NotACycle
from qcluster.tits import (
    DecompositionWitness,
    Factor,
    NotGenerator,
    Rank3,
    Square,
    classify_generator,
    concat,
    decompose,
    free_reduce,
    is_closed_path,
    random_cycle,
    verify_witness,
)
from qcluster.verify import lift_quotient_cycle
from qcluster.words import build_word_graph, parse_word

A3 = make_cartan("A3")
B3 = make_cartan("B3")
GRAPHS = {"A3": build_word_graph(A3, longest_word(A3)), "B3": build_word_graph(B3, longest_word(B3))}
SQUARE = [parse_word(w) for w in "213213 231213 231231 213231 213213".split()]


def test_path_helpers():
    assert free_reduce([(1,), (2,), (1,), (3,)]) == [(1,), (3,)]
    assert free_reduce([(1,), (1,), (2,)]) == [(1,), (2,)]
    assert concat([(1,), (2,)], [(2,), (3,)]) == [(1,), (2,), (3,)]
    with pytest.raises(ValueError):
        concat([(1,), (2,)], [(3,)])


def test_square_example():
    g = classify_generator(A3, SQUARE)
    assert isinstance(g, Square) and g.disjoint()
    assert is_closed_path(A3, SQUARE)


def test_quotient_lifts_are_rank3():
    for datum in (A3, B3):
        g = classify_generator(datum, lift_quotient_cycle(datum))
        assert isinstance(g, Rank3) and g.letters == {1, 2, 3}


def test_not_generators():
    w = SQUARE[0]
    assert isinstance(classify_generator(A3, [w, SQUARE[1], w]), NotGenerator)
    assert isinstance(classify_generator(A3, [w, SQUARE[1]]), NotGenerator)
    assert isinstance(classify_generator(A3, [w, (1, 2, 1, 3, 2, 1), w]), NotGenerator)


def test_square_decomposes_to_itself():
    wit = decompose(GRAPHS["A3"], SQUARE)
    assert verify_witness(SQUARE, wit)
    assert wit.counts() == {"square": 1, "rank3": 0}


@pytest.mark.parametrize("typ", ["A3", "B3"])
def test_quotient_lift_decomposes(typ):
    datum = make_cartan(typ)
    path = lift_quotient_cycle(datum)
    wit = decompose(GRAPHS[typ], path)
    assert verify_witness(path, wit)
    assert wit.counts()["rank3"] == 1


@pytest.mark.parametrize("typ", ["A3", "B3"])
def test_random_cycles(typ):
    G = GRAPHS[typ]
    rng = random.Random(7)
    t0 = time.perf_counter()
    for _ in range(50):
        path = random_cycle(G, rng)
        wit = decompose(G, path)
        assert verify_witness(path, wit)
        for f in wit.factors:
            g = classify_generator(G.datum, f.generator.path)
            assert g.kind == f.generator.kind in ("square", "rank3")
    assert time.perf_counter() - t0 < 30


@pytest.mark.parametrize("typ", ["A4", "D4", "C3"])
def test_random_cycles_other_types(typ):
    datum = make_cartan(typ)
    G = build_word_graph(datum, longest_word(datum))
    rng = random.Random(11)
    for _ in range(5):
        path = random_cycle(G, rng, 14)
        assert verify_witness(path, decompose(G, path))


def test_verify_witness_rejects_wrong_witness():
    G = GRAPHS["B3"]
    path = random_cycle(G, random.Random(3))
    wit = decompose(G, path)
    f = wit.factors[0]
    flipped = DecompositionWitness(wit.base, [Factor(f.conjugator, f.generator, -f.orientation)] + wit.factors[1:])
    assert not verify_witness(path, flipped)
    assert not verify_witness(path, DecompositionWitness(wit.base, []))


def test_trivial_cycles():
    w = SQUARE[0]
    assert verify_witness([], DecompositionWitness(w, []))
    wit = decompose(GRAPHS["A3"], [w])
    assert wit.factors == [] and verify_witness([w], wit)
    back = [w, SQUARE[1], w]
    assert verify_witness(back, decompose(GRAPHS["A3"], back))


def test_invalid_input():
    G = GRAPHS["A3"]
    with pytest.raises(NotACycle):
        decompose(G, [])
    with pytest.raises(NotACycle):
        decompose(G, SQUARE[:3])
    with pytest.raises(NotACycle):
        decompose(G, [SQUARE[0], SQUARE[2], SQUARE[0]])


def test_witness_json():
    G = GRAPHS["A3"]
    path = lift_quotient_cycle(A3)
    data = json.loads(decompose(G, path).to_json())
    assert data["base"] == "".join(map(str, path[0]))
    assert {f["generator"]["kind"] for f in data["factors"]} <= {"square", "rank3"}

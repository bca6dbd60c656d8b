import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qcluster.errors import NonLaurent
from qcluster.qmutation import (
    MutationStep,
    apply_sequence,
    classical_shadow,
    coxeter_transport,
    generator_image,
    mutate_element,
    mutate_monomial_tropical,
    random_assignment,
)
from qcluster.qtorus import TWO, TorusElement, X, format_expr, one, parse_expr
from qcluster.seeds import basic_quiver, mutate_seed
from qcluster.verify import central_monomials, load_cycle_data
from qcluster.words import CoxeterMove
from qcluster.cartan import make_cartan

from strategies import A3_SEED, B3_SEED, qpolys, seeds, vectors


def laurent_sum(data, S, k, max_terms=3):
    """A sum of monomials each of whose images under mu_k is Laurent."""
    step = MutationStep.of(S, k)
    terms = {}
    for _ in range(data.draw(st.integers(1, max_terms))):
        lam = data.draw(vectors(S))
        try:
            mutate_element(step, X(S, lam))
        except NonLaurent:
            continue
        terms[lam] = data.draw(qpolys)
    assume(terms)
    return TorusElement(S, terms)


# -- unit tests -------------------------------------------------------------------


def test_single_mutation_of_a_neighbour():
    # 2 -> 3 in A3: X_3 becomes a monomial times (1 + q X_2)-type factor; check at q = 1
    S = A3_SEED
    step = MutationStep.of(S, 2)
    img = mutate_element(step, X(S, {3: 1}))
    assert img.seed == step.target
    y = random_assignment(S.vertices, random.Random(0))
    assert img.at_q_one(classical_shadow(S, [2], y)) == X(S, {3: 1}).at_q_one(y)


def test_mutated_vertex_is_inverted():
    S = B3_SEED
    for k in S.mutable:
        step = MutationStep.of(S, k)
        assert mutate_element(step, X(S, {k: 1})) == X(step.target, {k: -1})


def test_generator_image_denominators():
    frac = generator_image(MutationStep.of(A3_SEED, 2), 5)
    assert frac.k == 2
    assert frac.clear() == mutate_element(MutationStep.of(A3_SEED, 2), X(A3_SEED, {5: 1}))


def test_a3_chain_stage_two():
    # second printed stage of the X_{5,8} chain
    r = apply_sequence(A3_SEED, [2, 6], X(A3_SEED, {5: 1, 8: 1}))
    assert r.stages[1] == parse_expr(r.seeds[2], "X_{5,8} + X_{5,6,8} + X_{2,5,6,8}")


def test_b3_coefficient_two_appears():
    cyc = load_cycle_data("B3")
    S = basic_quiver(cyc.datum, cyc.word)
    m = cyc.stage_ends[1]  # printed stage (2)
    r = apply_sequence(S, cyc.sequence[:m], X(S, {9: 1, 12: 1}))
    assert any(c == TWO for c in r.value.terms.values())


def test_printed_b3_stage_nine_is_not_laurent_downstream():
    cyc = load_cycle_data("B3")
    S = basic_quiver(cyc.datum, cyc.word)
    ends = cyc.stage_ends
    res = apply_sequence(S, cyc.sequence, X(S, {12: 1}))
    seed9 = res.seeds[ends[8]]
    printed = parse_expr(seed9, cyc.chains["X_{12}"][8])
    fixed = parse_expr(seed9, cyc.errata[("X_{12}", 9)])
    assert fixed == res.stages[ends[8] - 1] != printed
    nxt = cyc.sequence[ends[8]]
    assert nxt == 7
    with pytest.raises(NonLaurent):
        mutate_element(MutationStep.of(seed9, nxt), printed)
    stage10 = mutate_element(MutationStep.of(seed9, nxt), fixed)
    assert stage10 == parse_expr(stage10.seed, cyc.chains["X_{12}"][9])


def test_sequence_relabel():
    cyc = load_cycle_data("A3")
    S = basic_quiver(cyc.datum, cyc.word)
    res = apply_sequence(S, cyc.sequence, X(S, {5: 1, 8: 1}), sigma=cyc.sigma)
    assert res.value == X(S, {5: 1, 8: 1}) and res.value.seed == S


def test_coxeter_transport_braid():
    d = make_cartan("A3")
    t = coxeter_transport(d, (1, 2, 1, 3, 2, 1), CoxeterMove(1, (1, 2), 3), X(A3_SEED, {5: 1, 8: 1}))
    assert t.word == (2, 1, 2, 3, 2, 1)
    assert t.seed.same_exchange_data(basic_quiver(d, t.word))
    assert format_expr(t.value) == "X_{4,8} + X_{4,5,8}"
    # q = 1 oracle: the renamed shadow evaluates the transported element like the original
    y = random_assignment(A3_SEED.vertices, random.Random(3))
    z = {t.renaming[v]: x for v, x in classical_shadow(A3_SEED, t.mutations, y).items()}
    assert t.value.at_q_one(z) == X(A3_SEED, {5: 1, 8: 1}).at_q_one(y)


# -- property suites ---------------------------------------------------------------


@given(st.data())
def test_mutation_involutivity(data):
    S = data.draw(seeds)
    k = data.draw(st.sampled_from(S.mutable))
    f = laurent_sum(data, S, k)
    step = MutationStep.of(S, k)
    g = mutate_element(step, f)
    assert mutate_element(step.reverse(), g) == f


@given(st.data())
def test_star_equivariance(data):
    S = data.draw(seeds)
    k = data.draw(st.sampled_from(S.mutable))
    f = laurent_sum(data, S, k)
    step = MutationStep.of(S, k)
    assert mutate_element(step, f.star()) == mutate_element(step, f).star()


@given(st.data())
def test_tropical_full_agreement_for_central_monomials(data):
    S = data.draw(seeds)
    basis = central_monomials(S)
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(basis), max_size=len(basis)))
    lam = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(S.vertices)))
    ks = data.draw(st.lists(st.sampled_from(S.mutable), min_size=1, max_size=6))
    full = apply_sequence(S, ks, X(S, lam))
    cur, s = lam, S
    for k in ks:
        cur = mutate_monomial_tropical(MutationStep.of(s, k), cur)
        s = mutate_seed(s, k)
    assert full.value == X(s, cur)


@given(st.data())
def test_q_one_shadow_consistency(data):
    S = data.draw(seeds)
    k = data.draw(st.sampled_from(S.mutable))
    f = laurent_sum(data, S, k)
    y = random_assignment(S.vertices, random.Random(data.draw(st.integers(0, 10**6))))
    g = mutate_element(MutationStep.of(S, k), f)
    assert g.at_q_one(classical_shadow(S, [k], y)) == f.at_q_one(y)


@given(st.data())
def test_shadow_of_sequences_inverts(data):
    S = data.draw(seeds)
    ks = data.draw(st.lists(st.sampled_from(S.mutable), min_size=1, max_size=6))
    y = random_assignment(S.vertices, random.Random(data.draw(st.integers(0, 10**6))))
    z = classical_shadow(S, ks, y)
    from qcluster.seeds import mutate_sequence

    assert classical_shadow(mutate_sequence(S, ks), ks[::-1], z) == y


def test_unit_is_fixed():
    step = MutationStep.of(B3_SEED, 7)
    assert mutate_element(step, one(B3_SEED)) == one(step.target)

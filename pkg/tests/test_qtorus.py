import sympy
from hypothesis import given
from hypothesis import strategies as st
import pytest

from qcluster.errors import NotDivisible, ParseError, SeedMismatch
from qcluster.qtorus import (
    TWO,
    UNIT,
    QPoly,
    X,
    format_expr,
    one,
    parse_expr,
    q_binomial,
    right_divide,
    skew_form,
    unit_vector,
)

from strategies import A3_SEED, B3_SEED, elements, seeds, vectors


# -- unit tests -------------------------------------------------------------------


def test_commutation_rule_follows_arrows():
    # 2 -> 3 in the A3 basic quiver: X_2 X_3 = q^{-2} X_3 X_2
    S = A3_SEED
    x2, x3 = X(S, {2: 1}), X(S, {3: 1})
    assert skew_form(S, {2: 1}, {3: 1}) == 1
    assert x2 * x3 == X(S, {}, QPoly.q(-2)) * x3 * x2
    assert x2 * x3 == X(S, {2: 1, 3: 1}, QPoly.q(-1))


def test_monomial_inverse_and_powers():
    S = B3_SEED
    m = X(S, {2: 1, 7: -1, 11: 2})
    assert m * m ** -1 == one(S)
    assert m ** 2 == m * m
    assert (m + one(S)) ** 0 == one(S)


def test_star_of_monomial_is_itself():
    S = B3_SEED
    assert X(S, {1: 1, 6: 2}).is_self_adjoint()
    assert X(S, {1: 1}, TWO).is_self_adjoint()
    assert not X(S, {1: 1}, QPoly.q(1)).is_self_adjoint()


def test_parse_formats():
    S = B3_SEED
    f = parse_expr(S, "X_{12} + [2]X_{2,11,12} + X_{2^2,11,12} - q^{1/2}X_1^{-1}")
    assert f == X(S, {12: 1}) + X(S, {2: 1, 11: 1, 12: 1}, TWO) + X(S, {2: 2, 11: 1, 12: 1}) - X(S, {1: -1}, QPoly.q("1/2"))
    assert parse_expr(S, "X_{1,6}^{-1}") == X(S, {1: 1, 6: 1}) ** -1
    assert parse_expr(S, "X_1^{-1}") == X(S, {1: -1})


@pytest.mark.parametrize("text", ["X_{13}", "X_{1,", "Y_1", "X_{1} +", "[3]X_1"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_expr(B3_SEED, text)


def test_seed_mismatch():
    with pytest.raises(SeedMismatch):
        X(A3_SEED, {1: 1}) + X(B3_SEED, {1: 1})


def test_right_divide_rejects_non_multiples():
    with pytest.raises(NotDivisible):
        right_divide(X(A3_SEED, {2: 1}) + one(A3_SEED), 2, UNIT)


def test_q_binomial_values():
    assert q_binomial(2, 1) == QPoly({UNIT: 1, -UNIT: 1})
    assert q_binomial(2, 1, "1/2") == TWO
    assert q_binomial(5, 0) == QPoly(1) and q_binomial(3, 4) == QPoly()


# -- property suites (>= 100 instances each) ---------------------------------------


@given(st.data())
def test_associativity(data):
    S = data.draw(seeds)
    f, g, h = (data.draw(elements(S)) for _ in range(3))
    assert (f * g) * h == f * (g * h)


@given(st.data())
def test_distributivity(data):
    S = data.draw(seeds)
    f, g, h = (data.draw(elements(S)) for _ in range(3))
    assert f * (g + h) == f * g + f * h


@given(st.data())
def test_star_is_an_anti_automorphism(data):
    S = data.draw(seeds)
    f, g = data.draw(elements(S)), data.draw(elements(S))
    assert (f * g).star() == g.star() * f.star()
    assert f.star().star() == f
    assert (f + g).star() == f.star() + g.star()


@given(st.data())
def test_parser_round_trip(data):
    S = data.draw(seeds)
    f = data.draw(elements(S, max_terms=4, lo=-3, hi=3))
    assert parse_expr(S, format_expr(f)) == f


@given(st.data())
def test_right_divide_inverts_multiplication(data):
    S = data.draw(seeds)
    k = data.draw(st.sampled_from(S.mutable))
    a = data.draw(st.integers(-24, 24))
    g = data.draw(elements(S))
    den = one(S) + X(S, unit_vector(S, k), QPoly({a: 1}))
    assert right_divide(g * den, k, a) == g


@given(st.data())
def test_commutation_exponent_is_skew(data):
    S = data.draw(seeds)
    lam, mu = data.draw(vectors(S)), data.draw(vectors(S))
    assert skew_form(S, lam, mu) == -skew_form(S, mu, lam)
    xl, xm = X(S, lam), X(S, mu)
    assert xl * xm == X(S, (0,) * len(lam), QPoly.q(-2 * skew_form(S, lam, mu))) * xm * xl


def _as_sympy(p: QPoly, z):
    return sum(c * z ** e for e, c in p.terms.items())


@given(st.integers(0, 9), st.integers(0, 9), st.sampled_from(["1", "1/2", "1/3", "2"]))
def test_q_binomial_palindromic_against_sympy(n, m, d):
    z = sympy.symbols("z")  # z = q^{1/UNIT}
    got = q_binomial(n, m, d)
    assert got.is_palindromic()
    if m > n:
        assert not got
        return
    t = z ** int(sympy.Rational(d) * UNIT)
    num = sympy.prod([t ** (n - k + 1) - t ** -(n - k + 1) for k in range(1, m + 1)])
    den = sympy.prod([t ** k - t ** -k for k in range(1, m + 1)])
    assert sympy.simplify(sympy.cancel(num / den) - _as_sympy(got, z)) == 0
    assert got.at_one() == sympy.binomial(n, m)

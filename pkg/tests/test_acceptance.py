"""One PASS/FAIL line per acceptance criterion, printed in the terminal summary.

Tolerances are exact (rational or symbolic equality) throughout; the time
limits are pinned below.
"""

import random
import time
from fractions import Fraction as F

import conftest
import test_qmutation
import test_qtorus
import test_words
from qcluster.cartan import longest_word, make_cartan
from qcluster.lusztig import classical_lusztig_move, lusztig_word_move, rank2_quantum_lusztig, reverse_slots
from qcluster.seeds import basic_quiver
from qcluster.tits import classify_generator, decompose, random_cycle, verify_witness
from qcluster.verify import DEFAULT_RNG_SEED, load_cycle_data, shadow_returns, verify_rank3
from qcluster.words import build_word_graph, quotient

LIMITS = {1: 1.0, 2: 1.0, 3: 1.0, 4: 5.0, 5: 60.0, 6: 5.0, 7: 30.0}
PROPERTY_MIN = 100


def record(n, title, ok, detail):
    conftest.ACCEPTANCE_LINES.append(f"criterion {n} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    assert ok, detail


def test_criterion_1_word_graph_counts():
    ok, parts = True, []
    for label, n_words, n_gon in (("A3", 16, 8), ("B3", 42, 14)):
        d = make_cartan(label)
        t0 = time.perf_counter()
        G = build_word_graph(d, longest_word(d))
        Q = quotient(G)
        dt = time.perf_counter() - t0
        brute = test_words.brute_force_words(d, longest_word(d))
        good = set(G.vertices) == brute and len(brute) == n_words and Q.is_cycle() and len(Q.cycle_order()) == n_gon
        good &= dt < LIMITS[1]
        ok &= good
        parts.append(f"{label} {len(G.vertices)} words, {len(Q.cycle_order())}-gon, {dt:.3f} s")
    record(1, "word-graph counts", ok, "; ".join(parts))


def test_criterion_2_classical_involutions():
    rng = random.Random(DEFAULT_RNG_SEED)

    def rand():
        return F(rng.randint(1, 999), rng.randint(1, 999))

    t0 = time.perf_counter()
    ok = True
    for _ in range(1000):
        v3 = (rand(), rand(), rand())
        ok &= classical_lusztig_move("braid", classical_lusztig_move("braid", v3)) == v3
        v4 = (rand(), rand(), rand(), rand())
        # the doubly-laced move is undone by the move back across the same edge
        ok &= lusztig_word_move("doubly-laced", lusztig_word_move("doubly-laced", v4), short_first=False) == v4
        T = lambda x: classical_lusztig_move("doubly-laced", x)
        ok &= T(reverse_slots("doubly-laced", T(v4))) == reverse_slots("doubly-laced", v4)
    ok &= classical_lusztig_move("braid", (1, 1, 1)) == (F(1, 2), F(2), F(1, 2))
    ok &= classical_lusztig_move("doubly-laced", (1, 1, 1, 1)) == (F(5, 3), F(1, 5), F(1, 3), F(9, 5))
    dt = time.perf_counter() - t0
    ok &= dt < LIMITS[2]
    record(2, "rank-2 classical involutions", ok, f"1000 tuples per move, worked values exact, {dt:.3f} s")


def test_criterion_3_rank2_quantum():
    t0 = time.perf_counter()
    results = [rank2_quantum_lusztig(k) for k in ("braid", "doubly-laced")]
    dt = time.perf_counter() - t0
    ok = all(r.ok for r in results) and dt < LIMITS[3]
    ok &= results[1].checks.get("R S = S R", False)
    failed = [f"{r.kind}: {k}" for r in results for k, v in r.checks.items() if not v]
    record(3, "rank-2 quantum transforms", ok, f"{sum(len(r.checks) for r in results)} checks, failed {failed or 'none'}, {dt:.3f} s")


def _rank3_criterion(n, label, want_seq_len, want_sigma, chains, centrals):
    cyc = load_cycle_data(label)
    t0 = time.perf_counter()
    rep = verify_rank3(cyc)
    dt = time.perf_counter() - t0
    names = [c.name for c in rep.checks]
    ok = rep.ok and len(cyc.sequence) == want_seq_len and cyc.sigma == want_sigma and dt < LIMITS[n]
    for head in chains:
        ok &= any(x.startswith(f"chain {head}: ") for x in names)
    ok &= sum(x.startswith(("f_", "K'_")) for x in names) == 6
    ok &= sum(x.endswith(" returns") and x.startswith("X_") for x in names) == centrals
    return ok, f"{len(rep.checks)} checks, {len(rep.notes) - 1} errata notes, {dt:.2f} s"


def test_criterion_4_a3_cycle():
    ok, detail = _rank3_criterion(4, "A3", 8, {2: 6, 3: 2, 6: 3}, ["X_{5,8}"], 2)
    record(4, "A3 golden cycle", ok, detail)


def test_criterion_5_b3_cycle():
    heads = ["X_{1}^{-1}", "X_{12}", "X_{9,12}", "X_{4,9,12}"]
    ok, detail = _rank3_criterion(5, "B3", 26, {}, heads, 3)
    record(5, "B3 golden cycle", ok, detail)


def test_criterion_6_classical_shadow():
    t0 = time.perf_counter()
    rng = random.Random(DEFAULT_RNG_SEED)
    ok, parts = True, []
    for label in ("A3", "B3"):
        cyc = load_cycle_data(label)
        seed = basic_quiver(cyc.datum, cyc.word)
        good, total = shadow_returns(seed, cyc.sequence, cyc.sigma, rng, 10)
        ok &= good == total >= 10
        parts.append(f"{label} {good}/{total}")
    dt = time.perf_counter() - t0
    ok &= dt < LIMITS[6]
    record(6, "classical shadow closure", ok, f"{', '.join(parts)}, rng seed {DEFAULT_RNG_SEED}, {dt:.2f} s")


def test_criterion_7_tits_decomposition():
    t0 = time.perf_counter()
    rng = random.Random(DEFAULT_RNG_SEED)
    ok, parts = True, []
    for label in ("A3", "B3"):
        d = make_cartan(label)
        G = build_word_graph(d, longest_word(d))
        good = 0
        for _ in range(100):
            path = random_cycle(G, rng)
            wit = decompose(G, path)
            kinds = {classify_generator(d, f.generator.path).kind for f in wit.factors}
            good += verify_witness(path, wit) and kinds <= {"square", "rank3"}
        ok &= good == 100
        parts.append(f"{label} {good}/100")
    dt = time.perf_counter() - t0
    ok &= dt < LIMITS[7]
    record(7, "Tits decomposition", ok, f"{', '.join(parts)}, {dt:.2f} s")


PROPERTIES = {
    "mutation involutivity": test_qmutation.test_mutation_involutivity,
    "star-equivariance": test_qmutation.test_star_equivariance,
    "tropical/full agreement": test_qmutation.test_tropical_full_agreement_for_central_monomials,
    "q-binomial palindromicity": test_qtorus.test_q_binomial_palindromic_against_sympy,
    "torus associativity": test_qtorus.test_associativity,
    "parser round-trip": test_qtorus.test_parser_round_trip,
}


def _count_runs(prop):
    inner = prop.hypothesis.inner_test
    count = [0]

    def counted(*args, **kwargs):
        inner(*args, **kwargs)
        count[0] += 1

    prop.hypothesis.inner_test = counted
    try:
        prop()
    finally:
        prop.hypothesis.inner_test = inner
    return count[0]


def test_criterion_8_property_suites():
    counts = {}
    for name, prop in PROPERTIES.items():
        try:
            counts[name] = _count_runs(prop)
        except Exception as exc:  # a falsified property
            counts[name] = f"failed ({type(exc).__name__})"
    ok = all(isinstance(c, int) and c >= PROPERTY_MIN for c in counts.values())
    record(8, "property suites", ok, ", ".join(f"{k} {v}" for k, v in counts.items()))


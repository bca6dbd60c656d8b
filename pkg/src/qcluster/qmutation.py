"""Quantum cluster mutation of torus elements.

The forward map of a step Q -> Q' = mu_k(Q) sends an element over Q to an
element over Q'.  On a basis monomial it is the monomial transform followed by
conjugation with the quantum dilogarithm of X'_k:

    X_lambda |-> X'_{lambda'} * prod_{r=0}^{n-1} (1 + q_k^{2r+1} X'_k)          (n > 0)
    X_lambda |-> X'_{lambda'} * prod_{r=1}^{-n} (1 + q_k^{1-2r} X'_k)^{-1}       (n < 0)

where lambda' sends e_k to -e_k and e_i to e_i + max(b'_ki, 0) e_k, and
n = (lambda', e_k)' / d_k is computed in Q'.  On generators this is

    X_i |-> X'_i prod_{r=1}^{|b'_ki|} (1 + q_k^{2r-1} X'_k)             (b'_ki <= 0)
    X_i |-> X'_i prod_{r=1}^{b'_ki} (1 + q_k^{2r-1} X'_k^{-1})^{-1}     (b'_ki >= 0)

with b' read in the target seed, i.e. the pullback along the inverse step.

>>> from qcluster.cartan import make_cartan
>>> from qcluster.seeds import basic_quiver
>>> from qcluster.qtorus import parse_expr, format_expr
>>> S = basic_quiver(make_cartan("A3"), (1, 2, 1, 3, 2, 1))
>>> st = MutationStep.of(S, 2)
>>> format_expr(mutate_element(st, parse_expr(S, "X_{5,8}")))
'X_{5,8} + X_{2,5,8}'
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonLaurent, NotDivisible
from .qtorus import (
    QPoly,
    TorusElement,
    TorusFraction,
    X,
    format_expr,
    one,
    right_divide,
    skew_units,
    to_units,
    unit_vector,
)
from .seeds import ClusterSeed, LabelledSeed, apply_coxeter_move, mutate_seed, rename_seed


@dataclass(frozen=True)
class MutationStep:
    source: ClusterSeed
    target: ClusterSeed
    k: int

    @classmethod
    def of(cls, seed, k):
        return cls(seed, mutate_seed(seed, k), k)

    def reverse(self):
        return MutationStep(self.target, self.source, self.k)


def mutate_monomial_tropical(step: MutationStep, lam) -> tuple:
    """The monomial part lambda' of the forward image of X_lambda."""
    T = step.target
    kk = T.pos(step.k)
    out = list(lam)
    extra = -lam[kk]
    for a, v in enumerate(T.vertices):
        if a != kk and lam[a]:
            bki = T.B[kk][a]
            if bki > 0:
                extra += lam[a] * bki
    if Fraction(extra).denominator != 1:
        raise ValueError("monomial transform left the lattice")
    out[kk] = int(extra)
    return tuple(out)


def _dilog_power(step, lam_new):
    """n = (lambda', e_k)' / d_k in the target seed."""
    T = step.target
    units = skew_units(T, lam_new, unit_vector(T, step.k))
    n = Fraction(units, to_units(T.d(step.k)))
    if n.denominator != 1:
        raise ValueError("pairing with e_k is not a multiple of d_k")
    return int(n)


def _numerator_factor(T, k, n):
    """prod_{r=0}^{n-1} (1 + q_k^{2r+1} X_k), n >= 0, as an element over T."""
    u = to_units(T.d(k))
    out = one(T)
    for r in range(n):
        out = out * (one(T) + X(T, unit_vector(T, k), QPoly({(2 * r + 1) * u: 1})))
    return out


def _den_exponents(T, k, m):
    """Exponents (in units) of the factors (1 + q_k^{1-2r} X_k), r = 1..m."""
    u = to_units(T.d(k))
    return [(1 - 2 * r) * u for r in range(1, m + 1)]


def _den_product(T, k, exps):
    out = one(T)
    for a in exps:
        out = out * (one(T) + X(T, unit_vector(T, k), QPoly({a: 1})))
    return out


def generator_image(step: MutationStep, i) -> TorusFraction:
    return monomial_image(step, unit_vector(step.source, i))


def monomial_image(step: MutationStep, lam) -> TorusFraction:
    T = step.target
    lam_new = mutate_monomial_tropical(step, lam)
    n = _dilog_power(step, lam_new)
    num = X(T, lam_new)
    if n > 0:
        return TorusFraction(num * _numerator_factor(T, step.k, n), step.k, ())
    return TorusFraction(num, step.k, _den_exponents(T, step.k, -n))


def mutate_element(step: MutationStep, f: TorusElement) -> TorusElement:
    """Forward image of f over the target seed; NonLaurent if it is not a Laurent polynomial."""
    S, T, k = step.source, step.target, step.k
    if f.seed is not S and f.seed != S:
        from .errors import SeedMismatch

        raise SeedMismatch("element is not over the step's source seed")
    images = []
    depth = 0
    for lam, c in f.terms.items():
        lam_new = mutate_monomial_tropical(step, lam)
        n = _dilog_power(step, lam_new)
        images.append((lam_new, c, n))
        depth = max(depth, -n)
    all_dens = _den_exponents(T, k, depth)
    numerator = TorusElement(T)
    for lam_new, c, n in images:
        term = X(T, lam_new, c)
        if n > 0:
            term = term * _numerator_factor(T, k, n)
        missing = all_dens[max(-n, 0) :]
        if missing:
            term = term * _den_product(T, k, missing)
        numerator = numerator + term
    g = numerator
    for a in reversed(all_dens):
        try:
            g = right_divide(g, k, a)
        except NotDivisible as exc:
            raise NonLaurent(
                {
                    "k": k,
                    "numerator": format_expr(numerator),
                    "divisor": f"1+q^{{{Fraction(a, 12)}}}X_{{{k}}}",
                    "reason": str(exc),
                }
            ) from None
    return g


@dataclass
class SequenceResult:
    seeds: list  # seed before each step, then the final seed
    stages: list  # element after each step
    value: TorusElement  # after the final relabelling


def apply_sequence(seed, ks, f, sigma=None, target=None) -> SequenceResult:
    """Forward composition of mutations, then relabel e_v -> e_{sigma(v)} over ``target``.

    ``target`` defaults to the initial seed (the usual situation for a cycle).
    """
    seeds = [seed]
    stages = []
    cur = f
    for n, k in enumerate(ks):
        step = MutationStep.of(seeds[-1], k)
        try:
            cur = mutate_element(step, cur)
        except NonLaurent as exc:
            exc.stage = n + 1
            raise
        seeds.append(step.target)
        stages.append(cur)
    if sigma is not None or target is not None:
        value = cur.relabel(target if target is not None else seed, sigma or {})
    else:
        value = cur
    return SequenceResult(seeds, stages, value)


def classical_shadow(seed, ks, y: dict) -> dict:
    """q = 1 mutation of a positive assignment, reading b in the seed the values live on.

    With this convention mutate_element(step, f) evaluated at y' equals f
    evaluated at classical_shadow(step.target, [k], y').
    """
    y = {v: Fraction(x) for v, x in y.items()}
    cur = seed
    for k in ks:
        yk = y[k]
        out = {}
        for v in cur.vertices:
            if v == k:
                out[v] = 1 / yk
                continue
            b = cur.b(k, v)
            if b <= 0:
                out[v] = y[v] * (1 + yk) ** int(-b)
            else:
                out[v] = y[v] * (1 + 1 / yk) ** int(-b)
        y = out
        cur = mutate_seed(cur, k)
    return y


def random_assignment(vertices, rng: random.Random, bound=10):
    return {v: Fraction(rng.randint(1, bound), rng.randint(1, bound)) for v in vertices}


@dataclass
class Transport:
    value: TorusElement  # over ``seed``
    seed: ClusterSeed  # the target seed, vertices renamed to canonical ids
    word: tuple
    mutations: list  # stable ids mutated, in order
    renaming: dict  # stable id -> canonical id of the target word


def coxeter_transport(datum, word, move, f: TorusElement) -> Transport:
    """Carry f across a Coxeter move: the move's mutations, then canonical renaming.

    ``f`` must live over a seed whose ``labels`` are the canonical names for
    ``word`` (a basic quiver, possibly glued with an orientation).
    """
    seed = f.seed
    ls = LabelledSeed(seed, tuple(word), dict(seed.labels))
    ls2, ks = apply_coxeter_move(datum, ls, move)
    g = apply_sequence(seed, ks, f).value
    new_word = ls2.word
    # canonical ids: level by level, slot by slot, as in basic_quiver
    order = sorted(ls2.names.items(), key=lambda kv: kv[1])
    renaming = {v: n + 1 for n, (v, _) in enumerate(order)}
    target = rename_seed(ls2.seed, renaming)
    target = target.replace(labels={renaming[v]: lab for v, lab in ls2.names.items()})
    return Transport(g.relabel(target, renaming), target, new_word, ks, renaming)

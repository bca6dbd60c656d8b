"""Shared hypothesis strategies: small elements over the A3 and B3 basic quivers."""

from hypothesis import strategies as st

from qcluster.cartan import make_cartan
from qcluster.qtorus import QPoly, TorusElement
from qcluster.seeds import basic_quiver

A3_SEED = basic_quiver(make_cartan("A3"), (1, 2, 1, 3, 2, 1))
B3_SEED = basic_quiver(make_cartan("B3"), (1, 2, 1, 2, 3, 2, 1, 2, 3))
SEEDS = [A3_SEED, B3_SEED]

qpolys = st.dictionaries(st.integers(-24, 24), st.integers(-3, 3), min_size=1, max_size=3).map(QPoly).filter(bool)


def vectors(seed, lo=-2, hi=2, support=None):
    n = len(seed.vertices)
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(tuple)


def elements(seed, max_terms=3, lo=-2, hi=2):
    return st.dictionaries(vectors(seed, lo, hi), qpolys, min_size=1, max_size=max_terms).map(
        lambda d: TorusElement(seed, d)
    )


seeds = st.sampled_from(SEEDS)

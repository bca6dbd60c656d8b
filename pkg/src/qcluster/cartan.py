"""Cartan data of finite type, Weyl group action on roots, reduced words.

Conventions: simple roots are indexed 1..n, ``cartan[i-1][j-1] = a_ij`` with
``s_i(alpha_j) = alpha_j - a_ij alpha_i``.  Multipliers d_i are 1 on long
(and simply-laced) roots, 1/2 on short roots of B/C and 1/3 on the short
root of G2, so that ``d_i a_ij = d_j a_ji``.

In type B_n the short simple root is node 1; in C_n node 1 is the long one.
With this labelling the level of node 1 is the "thin" level of the basic
quiver of B3.

>>> B3 = make_cartan("B3")
>>> B3.multipliers
(Fraction(1, 2), Fraction(1, 1), Fraction(1, 1))
>>> longest_word(B3)
(1, 2, 1, 2, 3, 2, 1, 2, 3)
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import UnknownType

Root = tuple  # integer coefficients over the simple roots

_SIMPLE = re.compile(r"^([ABCDG])(\d)$")
_SUPPORTED = {"A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"}
MAX_RANK = 4


def _simple_block(kind, n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    d = [Fraction(1)] * n
    if kind == "D":
        # node 2 is the branch point
        for j in (0, 2, 3):
            a[1][j] = a[j][1] = -1
        return a, d
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if kind == "B":
        a[0][1] = -2
        d[0] = Fraction(1, 2)
    elif kind == "C":
        a[1][0] = -2
        d = [Fraction(1)] + [Fraction(1, 2)] * (n - 1)
    elif kind == "G":
        a[0][1] = -3
        d[0] = Fraction(1, 3)
    return a, d


@dataclass(frozen=True)
class CartanDatum:
    label: str
    cartan: tuple
    multipliers: tuple
    components: tuple = field(default=(), compare=False)

    @property
    def rank(self):
        return len(self.cartan)

    @property
    def index_set(self):
        return tuple(range(1, self.rank + 1))

    def a(self, i, j):
        return self.cartan[i - 1][j - 1]

    def d(self, i):
        return self.multipliers[i - 1]

    def m(self, i, j):
        """Order of s_i s_j."""
        if i == j:
            return 1
        return {0: 2, 1: 3, 2: 4, 3: 6}[self.a(i, j) * self.a(j, i)]

    def simple_root(self, i):
        return tuple(1 if k == i else 0 for k in self.index_set)

    @cached_property
    def roots(self):
        """All roots, positive ones first, in a fixed order."""
        seen = {self.simple_root(i) for i in self.index_set}
        frontier = list(seen)
        while frontier:
            new = []
            for r in frontier:
                for i in self.index_set:
                    s = reflect(self, i, r)
                    if s not in seen:
                        seen.add(s)
                        new.append(s)
            frontier = new
        pos = sorted(r for r in seen if is_positive(r))
        neg = sorted(r for r in seen if not is_positive(r))
        return tuple(pos + neg)

    @cached_property
    def positive_roots(self):
        return tuple(r for r in self.roots if is_positive(r))

    def check(self):
        n = self.rank
        for i in range(n):
            assert self.cartan[i][i] == 2
            for j in range(n):
                if i == j:
                    continue
                aij, aji = self.cartan[i][j], self.cartan[j][i]
                assert aij <= 0 and (aij == 0) == (aji == 0)
                assert self.multipliers[i] * aij == self.multipliers[j] * aji
        return True

    def to_json(self):
        return json.dumps(
            {
                "label": self.label,
                "index_set": list(self.index_set),
                "cartan": [list(r) for r in self.cartan],
                "multipliers": [str(x) for x in self.multipliers],
            }
        )


def make_cartan(label: str) -> CartanDatum:
    parts = [p.strip() for p in re.split(r"[x×]", label.strip())]
    blocks = []
    for p in parts:
        m = _SIMPLE.match(p)
        if not m or p not in _SUPPORTED:
            raise UnknownType(f"unsupported Cartan type {label!r}")
        blocks.append(_simple_block(m.group(1), int(m.group(2))))
    n = sum(len(a) for a, _ in blocks)
    if n > MAX_RANK:
        raise UnknownType(f"rank {n} of {label!r} exceeds {MAX_RANK}")
    cartan = [[0] * n for _ in range(n)]
    mult = []
    off = 0
    for a, d in blocks:
        k = len(a)
        for i in range(k):
            for j in range(k):
                cartan[off + i][off + j] = a[i][j]
        mult.extend(d)
        off += k
    return CartanDatum(
        label="x".join(parts),
        cartan=tuple(tuple(r) for r in cartan),
        multipliers=tuple(mult),
        components=tuple(parts),
    )


def is_positive(root) -> bool:
    return all(c >= 0 for c in root) and any(root)


def reflect(datum: CartanDatum, i: int, root) -> Root:
    """s_i(root) = root - <root, alpha_i^vee> alpha_i."""
    pairing = sum(datum.a(i, j) * c for j, c in zip(datum.index_set, root))
    out = list(root)
    out[i - 1] -= pairing
    return tuple(out)


def apply_word(datum, word, root):
    """s_{i_1} ... s_{i_k}(root)."""
    for i in reversed(word):
        root = reflect(datum, i, root)
    return root


def is_reduced(datum: CartanDatum, word: Sequence[int]) -> bool:
    word = tuple(word)
    if any(i not in datum.index_set for i in word):
        return False
    for k, i in enumerate(word):
        if not is_positive(apply_word(datum, word[:k], datum.simple_root(i))):
            return False
    return True


def longest_word(datum: CartanDatum) -> tuple:
    word = ()
    while True:
        for i in datum.index_set:
            if is_reduced(datum, word + (i,)):
                word += (i,)
                break
        else:
            return word


def weyl_element(datum: CartanDatum, word) -> tuple:
    """The Weyl element of ``word`` as the permutation it induces on roots."""
    index = {r: n for n, r in enumerate(datum.roots)}
    return tuple(index[apply_word(datum, word, r)] for r in datum.roots)

"""Constructive decomposition of closed paths in reduced word graphs.

A closed path is a list of words w_0, w_1, ..., w_L = w_0 with consecutive
words one Coxeter move apart.  It is written, up to free reduction (removal
of backtracks u -> v -> u), as a product of lassos c . g^{+-1} . c^{-1} where
each g is a generator: a commuting square (two moves at disjoint positions)
or a rank-3 cycle (every word is  prefix + middle + suffix  with the middle
spelled in three letters).

The construction is the double induction on the word length n and on the
number m of distinct last letters:

* all words end in the same letter i: drop it, recurse, put it back;
* otherwise pick the smallest last letter i and a maximal run of words ending
  in i, entered through a move C_ij and left through a move C_ik.  Ladders of
  commuting squares carry the two moves to words ending in a reduced word of
  w_J (J = {i, j, k}), where a rank-3 cycle joins them.  This cuts the path
  into one whose words all end in i, and one with fewer words ending in i.

Every splice is checked by free reduction while it is built.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

from .cartan import is_reduced, weyl_element
from .errors import NotACycle, UnsupportedRank
from .words import available_moves, apply_move, move_between, word_str


# -- paths ------------------------------------------------------------------------


def free_reduce(path) -> list:
    """Remove backtracks u -> v -> u until none remain."""
    out = []
    for w in path:
        w = tuple(w)
        if len(out) >= 2 and out[-2] == w:
            out.pop()
        elif out and out[-1] == w:
            continue
        else:
            out.append(w)
    return out


def inverse(path) -> list:
    return list(path)[::-1]


def concat(*paths) -> list:
    """Join paths end to start (each must begin where the previous ended)."""
    out = []
    for p in paths:
        p = [tuple(w) for w in p]
        if not p:
            continue
        if out:
            if out[-1] != p[0]:
                raise ValueError(f"paths do not meet: {word_str(out[-1])} vs {word_str(p[0])}")
            out.extend(p[1:])
        else:
            out.extend(p)
    return out


def lasso(c, loop) -> list:
    return concat(c, loop, inverse(c))


def is_closed_path(datum, path) -> bool:
    return len(path) >= 1 and tuple(path[0]) == tuple(path[-1]) and all(
        move_between(datum, u, v) is not None for u, v in zip(path, path[1:])
    )


@dataclass
class CyclePath:
    words: list

    @property
    def base(self):
        return tuple(self.words[0])

    @property
    def edges(self):
        return list(zip(self.words, self.words[1:]))


# -- generators -------------------------------------------------------------------


@dataclass
class Square:
    path: list  # 5 words, closed
    moves: tuple  # the two moves, at the first corner

    kind = "square"

    def disjoint(self):
        a, b = self.moves
        return not set(a.support) & set(b.support)

    def to_json(self):
        return {"kind": self.kind, "path": [word_str(w) for w in self.path], "moves": [m.to_json() for m in self.moves]}


@dataclass
class Rank3:
    path: list
    letters: frozenset
    prefix: tuple
    suffix: tuple

    kind = "rank3"

    def to_json(self):
        return {
            "kind": self.kind,
            "path": [word_str(w) for w in self.path],
            "letters": sorted(self.letters),
            "prefix": word_str(self.prefix),
            "suffix": word_str(self.suffix),
        }


@dataclass
class NotGenerator:
    reason: str

    kind = "none"


def classify_generator(datum, cycle):
    """Square, Rank3 or NotGenerator for a closed path."""
    path = [tuple(w) for w in cycle]
    if len(path) < 2 or path[0] != path[-1]:
        return NotGenerator("not closed")
    if not is_closed_path(datum, path):
        return NotGenerator("consecutive words are not one move apart")
    if len(free_reduce(path)) <= 1:
        return NotGenerator("reduces to the trivial path")
    if len(path) == 5 and len(set(path[:4])) == 4:
        m = [move_between(datum, u, v) for u, v in zip(path, path[1:])]
        a, b = m[0], m[1]
        if not set(a.support) & set(b.support) and m[2] == a.mirror() and m[3] == b.mirror():
            return Square(path, (a, b))
    n = len(path[0])
    lo = 0
    while lo < n and len({w[lo] for w in path}) == 1:
        lo += 1
    hi = n
    while hi > lo and len({w[hi - 1] for w in path}) == 1:
        hi -= 1
    letters = frozenset(c for w in path for c in w[lo:hi])
    if len(letters) <= 3:
        return Rank3(path, letters, path[0][:lo], path[0][hi:])
    return NotGenerator(f"middle uses {len(letters)} letters")


# -- witnesses --------------------------------------------------------------------


@dataclass
class Factor:
    conjugator: list  # path from the base to generator.path[0]
    generator: object
    orientation: int = 1

    def expand(self):
        g = self.generator.path if self.orientation > 0 else inverse(self.generator.path)
        return lasso(self.conjugator, g)

    def to_json(self):
        return {
            "conjugator": [word_str(w) for w in self.conjugator],
            "orientation": self.orientation,
            "generator": self.generator.to_json(),
        }


@dataclass
class DecompositionWitness:
    base: tuple
    factors: list = field(default_factory=list)

    def expand(self):
        return concat(*(f.expand() for f in self.factors)) if self.factors else [self.base]

    def counts(self):
        out = {"square": 0, "rank3": 0}
        for f in self.factors:
            out[f.generator.kind] += 1
        return out

    def to_json(self):
        return json.dumps({"base": word_str(self.base), "factors": [f.to_json() for f in self.factors]}, indent=1)


def verify_witness(cycle, witness: DecompositionWitness) -> bool:
    """True iff the product of the factors freely reduces to the reduced cycle."""
    cycle = [tuple(w) for w in cycle]
    if not cycle:
        return not witness.factors
    for f in witness.factors:
        g = f.generator.path
        if tuple(g[0]) != tuple(g[-1]) or tuple(f.conjugator[0]) != cycle[0] or tuple(f.conjugator[-1]) != tuple(g[0]):
            return False
    return free_reduce(witness.expand()) == free_reduce(cycle)


# -- word utilities ---------------------------------------------------------------


def bfs_path(datum, start, goal, allowed=lambda w: True, frozen_tail=0):
    """Shortest path of words from start to goal, through allowed words,
    never moving the last ``frozen_tail`` letters."""
    start, goal = tuple(start), tuple(goal)
    n = len(start)
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            out = [u]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for mv in available_moves(datum, u):
            if mv.position - 1 + mv.kind > n - frozen_tail:
                continue
            v = apply_move(u, mv)
            if v not in prev and allowed(v):
                prev[v] = u
                queue.append(v)
    return None


def parabolic_longest(datum, J) -> tuple:
    word = ()
    while True:
        for a in sorted(J):
            if is_reduced(datum, word + (a,)):
                word += (a,)
                break
        else:
            return word


def word_ending(datum, word, tail):
    """A reduced word for the same element as ``word`` ending in ``tail``."""
    tail = tuple(tail)
    seen = {tuple(word)}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        if u[len(u) - len(tail):] == tail:
            return u
        for mv in available_moves(datum, u):
            v = apply_move(u, mv)
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return None


def strip_right(datum, word, letters):
    """A reduced word for  word . letters^{-1}  (letters must be right descents in turn)."""
    word = tuple(word)
    for a in reversed(tuple(letters)):
        target = weyl_element(datum, word + (a,))
        for t in range(len(word) - 1, -1, -1):
            cand = word[:t] + word[t + 1:]
            if weyl_element(datum, cand) == target:
                word = cand
                break
        else:
            raise ValueError(f"{a} is not a right descent of {word_str(word)}")
    return word


# -- decomposition ----------------------------------------------------------------


class _Decomposer:
    def __init__(self, datum):
        self.datum = datum

    def check(self, loop, factors):
        got = free_reduce(concat(*(f.expand() for f in factors))) if factors else [tuple(loop[0])]
        assert got == free_reduce(loop), "splice does not reproduce the path"

    def generator(self, loop):
        g = classify_generator(self.datum, loop)
        if isinstance(g, NotGenerator):
            return None
        for u, v in zip(loop, loop[1:]):
            if move_between(self.datum, u, v).kind == 6:
                raise UnsupportedRank("rank-3 window contains a G2 move")
        return g

    def run(self, loop):
        """Factors based at loop[0] whose product is loop."""
        base = tuple(loop[0])
        red = free_reduce(loop)
        if len(red) <= 1:
            return []
        # peel a common first edge: loop = e . inner . e^{-1}
        if red[1] == red[-2]:
            inner = red[1:-1]
            return self.shift([red[0], red[1]], self.run(inner))
        g = self.generator(red)
        # rank-3 windows longer than three letters go through the induction
        if isinstance(g, Square) or (isinstance(g, Rank3) and len(red[0]) - len(g.prefix) - len(g.suffix) <= 3):
            return [Factor([base], g, 1)]
        last = {w[-1] for w in red[:-1]}
        if len(last) == 1:
            return self.strip(red, next(iter(last)))
        out = self.step(red, min(last))
        self.check(red, out)
        return out

    def shift(self, c, factors):
        return [Factor(concat(c, f.conjugator), f.generator, f.orientation) for f in factors]

    def strip(self, loop, i):
        inner = self.run([w[:-1] for w in loop])
        return [
            Factor([w + (i,) for w in f.conjugator], self.append(f.generator, i), f.orientation)
            for f in inner
        ]

    def append(self, g, i):
        path = [w + (i,) for w in g.path]
        if isinstance(g, Square):
            return Square(path, g.moves)
        return Rank3(path, g.letters, g.prefix, g.suffix + (i,))

    def ladder_squares(self, top, bot, base_path):
        """Square lassos (based via base_path) whose product is
        top . (end down) . bot^{-1} . (start up)."""
        out = []
        for t in range(len(top) - 1):
            sq = [top[t], top[t + 1], bot[t + 1], bot[t], top[t]]
            g = self.generator(sq)
            out.append(Factor(concat(base_path, top[: t + 1]), g, 1))
        return out[::-1]

    def step(self, loop, i):
        d = self.datum
        cyc = loop[:-1]
        L = len(cyc)
        s = next(t for t in range(L) if cyc[t][-1] == i and cyc[t - 1][-1] != i)
        e = s
        while cyc[(e + 1) % L][-1] == i:
            e += 1
        rot = cyc[s:] + cyc[:s] + [cyc[s]]
        to_rot = loop[: s + 1]
        run_len = e - s
        i1, i2 = rot[0], rot[run_len]
        i2p, i1p = rot[run_len + 1], rot[-2]
        beta1 = rot[: run_len + 1]  # i1 .. i2, all ending in i
        beta2 = rot[run_len + 1 : -1]  # i2' .. i1'
        j, k = i1p[-1], i2p[-1]
        mj, mk = d.m(i, j), d.m(i, k)

        if j == k:
            jj, jjp, jk, jkp = i2, i2p, i2, i2p
            R = None
        else:
            J = frozenset((i, j, k))
            wJ = parabolic_longest(d, J)
            prefix = strip_right(d, i1, wJ)
            rk_ij = word_ending(d, wJ, _alt_end(j, i, mj))  # ... ending j i j.. with last letter j
            rj_ik = word_ending(d, wJ, _alt_end(k, i, mk))
            jjp = prefix + rk_ij
            jj = jjp[: len(jjp) - mj] + _alt_end(i, j, mj)
            jkp = prefix + rj_ik
            jk = jkp[: len(jkp) - mk] + _alt_end(i, k, mk)
            delta = bfs_path(d, jj, jk, allowed=lambda w: w[-1] == i)
            deltap = bfs_path(d, jjp, jkp, allowed=lambda w: w[-1] != i)
            if delta is None or deltap is None:
                raise NotACycle("no rank-3 connecting cycle found")
            R = concat([jjp, jj], delta, [jk, jkp], inverse(deltap))
        l1_top = bfs_path(d, i1, jj, frozen_tail=mj)
        l1_bot = [w[: len(w) - mj] + i1p[len(w) - mj:] for w in l1_top]
        l2_top = bfs_path(d, i2, jk, frozen_tail=mk)
        l2_bot = [w[: len(w) - mk] + i2p[len(w) - mk:] for w in l2_top]
        if R is None:
            deltap = [jjp]
            delta = [jj]

        sharp = concat(beta1, l2_top, inverse(delta), inverse(l1_top))
        out = self.run(sharp)
        out += self.ladder_squares(l1_top, l1_bot, [i1])
        p = concat([i1, i1p], l1_bot)
        if R is not None:
            g = self.generator(R)
            if g is None:
                raise NotACycle("connecting cycle is not a rank-3 generator")
            out.append(Factor(p, g, 1))
        q = concat(p, deltap, inverse(l2_bot), [i2p, i2])
        for f in reversed(self.ladder_squares(l2_top, l2_bot, [i2])):
            out.append(Factor(concat(q, f.conjugator), f.generator, -1))
        star = concat(l1_bot, deltap, inverse(l2_bot), beta2)
        out += self.shift([i1, i1p], self.run(star))
        self.check(rot, out)
        return self.shift(to_rot, out)


def _alt(a, b, m):
    return tuple(a if t % 2 == 0 else b for t in range(m))


def _alt_end(last, other, m):
    """Alternating word of length m in two letters ending with ``last``."""
    return _alt(last, other, m)[::-1]


def decompose(graph, cycle) -> DecompositionWitness:
    datum = graph.datum
    words = [tuple(w) for w in (cycle.words if isinstance(cycle, CyclePath) else cycle)]
    if not words:
        raise NotACycle("empty path")
    if words[0] != words[-1]:
        raise NotACycle("path is not closed")
    for u, v in zip(words, words[1:]):
        if u not in graph.index or not graph.has_edge(u, v):
            raise NotACycle(f"{word_str(u)} -> {word_str(v)} is not an edge of the graph")
    if len(words[0]) < 3:
        raise NotACycle("word length must be at least 3")
    factors = _Decomposer(datum).run(words)
    return DecompositionWitness(words[0], factors)


def random_cycle(graph, rng: random.Random, max_len=20) -> list:
    """A random walk closed up by a shortest path back to its start."""
    while True:
        base = rng.choice(graph.vertices)
        walk = [base]
        for _ in range(rng.randint(2, max_len // 2)):
            walk.append(rng.choice(graph.neighbours(walk[-1])))
        back = bfs_path(graph.datum, walk[-1], base)
        path = concat(walk, back)
        if len(path) - 1 <= max_len and len(free_reduce(path)) > 1:
            return path

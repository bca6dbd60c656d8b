"""Coxeter moves, reduced word graphs and their commutation-class quotients.

Words are plain tuples of letters.  A move at 1-based ``position`` with pair
``(i, j)`` rewrites the alternating window ``i j i ...`` of length m_ij into
``j i j ...``; its mirror is the move with pair ``(j, i)`` at the same place.

>>> from qcluster.cartan import make_cartan
>>> A3 = make_cartan("A3")
>>> g = build_word_graph(A3, (1, 2, 1, 3, 2, 1))
>>> len(g.vertices), len(quotient(g).classes)
(16, 8)
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .cartan import CartanDatum, is_reduced
from .errors import InvalidMove, SizeLimit

KIND_NAMES = {2: "commutative", 3: "braid", 4: "doubly-laced", 6: "triply-laced"}
DEFAULT_CAP = 20000


def parse_word(text) -> tuple:
    if isinstance(text, str):
        text = text.strip()
        if "," in text or " " in text:
            return tuple(int(t) for t in text.replace(",", " ").split())
        return tuple(int(c) for c in text)
    return tuple(int(c) for c in text)


def word_str(word) -> str:
    if all(c < 10 for c in word):
        return "".join(str(c) for c in word)
    return ",".join(str(c) for c in word)


def alternating(i, j, m):
    return tuple(i if t % 2 == 0 else j for t in range(m))


@dataclass(frozen=True, order=True)
class CoxeterMove:
    position: int  # 1-based start of the window
    pair: tuple  # (i, j): window currently starts with i
    kind: int  # m_ij

    @property
    def window(self):
        return alternating(*self.pair, self.kind)

    @property
    def support(self):
        """0-based letter positions touched by the move."""
        return range(self.position - 1, self.position - 1 + self.kind)

    def mirror(self):
        return CoxeterMove(self.position, (self.pair[1], self.pair[0]), self.kind)

    def to_json(self):
        return {"position": self.position, "pair": list(self.pair), "kind": self.kind}


def available_moves(datum: CartanDatum, word) -> list:
    word = tuple(word)
    moves = []
    for p in range(len(word) - 1):
        i, j = word[p], word[p + 1]
        if i == j:
            continue
        m = datum.m(i, j)
        if word[p : p + m] == alternating(i, j, m):
            moves.append(CoxeterMove(p + 1, (i, j), m))
    return moves


def apply_move(word, move: CoxeterMove) -> tuple:
    word = tuple(word)
    p = move.position - 1
    if word[p : p + move.kind] != move.window:
        raise InvalidMove(f"{move} does not match {word_str(word)}")
    i, j = move.pair
    return word[:p] + alternating(j, i, move.kind) + word[p + move.kind :]


def move_between(datum, u, v):
    """The unique move taking u to v (words differing in one window)."""
    for mv in available_moves(datum, u):
        if apply_move(u, mv) == tuple(v):
            return mv
    return None


@dataclass
class WordGraph:
    datum: CartanDatum
    vertices: list  # BFS order from the seed word
    adjacency: dict  # word -> list of (neighbour, move)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {w: n for n, w in enumerate(self.vertices)}

    @property
    def edges(self):
        """Each undirected edge once, as (u, v, move) with move taking u to v."""
        out = []
        for u in self.vertices:
            for v, mv in self.adjacency[u]:
                if self.index[u] < self.index[v]:
                    out.append((u, v, mv))
        return out

    def neighbours(self, u):
        return [v for v, _ in self.adjacency[u]]

    def move(self, u, v):
        for w, mv in self.adjacency[u]:
            if w == v:
                return mv
        return None

    def has_edge(self, u, v):
        return self.move(u, v) is not None

    def to_dot(self):
        lines = ["graph G {"]
        for w in self.vertices:
            lines.append(f'  "{word_str(w)}";')
        for u, v, mv in self.edges:
            style = "dashed" if mv.kind == 2 else "solid"
            lines.append(f'  "{word_str(u)}" -- "{word_str(v)}" [style={style}, label="{mv.position}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(
            {
                "type": self.datum.label,
                "vertices": [word_str(w) for w in self.vertices],
                "edges": [
                    {"source": word_str(u), "target": word_str(v), **mv.to_json()}
                    for u, v, mv in self.edges
                ],
            }
        )


def build_word_graph(datum: CartanDatum, seed_word, cap: int = DEFAULT_CAP) -> WordGraph:
    seed_word = tuple(seed_word)
    if not is_reduced(datum, seed_word):
        raise InvalidMove(f"{word_str(seed_word)} is not reduced")
    order = [seed_word]
    adjacency = {seed_word: []}
    queue = deque([seed_word])
    while queue:
        u = queue.popleft()
        for mv in available_moves(datum, u):
            v = apply_move(u, mv)
            adjacency[u].append((v, mv))
            if v not in adjacency:
                if len(order) >= cap:
                    raise SizeLimit(f"word graph exceeds {cap} vertices")
                adjacency[v] = []
                order.append(v)
                queue.append(v)
    return WordGraph(datum, order, adjacency)


@dataclass
class QuotientGraph:
    """Commutation classes joined by non-commutative moves.

    Lifts of one quotient edge are the non-commutative graph edges that are
    carried into each other by commutative moves away from the window.
    """

    graph: WordGraph
    classes: list  # frozensets of words, in order of first BFS appearance
    class_of: dict  # word -> class index
    edges: list  # (a, b, lifts); lifts are (u, v, move) with u in class a

    def degree(self, c):
        return sum((a == c) + (b == c) for a, b, _ in self.edges)

    def is_cycle(self):
        n = len(self.classes)
        if n < 2 or len(self.edges) != n:
            return False
        if any(self.degree(c) != 2 for c in range(n)):
            return False
        return len(self.cycle_order()) == n

    def cycle_order(self):
        """Class indices in walking order from class 0 (meaningful for cycles)."""
        nbrs = {c: [] for c in range(len(self.classes))}
        for n, (a, b, _) in enumerate(self.edges):
            nbrs[a].append((b, n))
            nbrs[b].append((a, n))
        path, used, cur = [0], set(), 0
        while True:
            step = [(c, n) for c, n in nbrs[cur] if n not in used]
            if not step:
                return path
            cur, n = step[0]
            used.add(n)
            if cur == 0 or cur in path:
                return path
            path.append(cur)

    def to_dot(self):
        lines = ["graph Q {"]
        for c in range(len(self.classes)):
            lines.append(f'  c{c} [label="{stack_notation(self.classes[c], self.graph.datum, inline=True)}"];')
        for a, b, lifts in self.edges:
            style = "bold" if lifts[0][2].kind == 4 else "solid"
            lines.append(f"  c{a} -- c{b} [style={style}];")
        lines.append("}")
        return "\n".join(lines)

    def to_json(self):
        datum = self.graph.datum
        return json.dumps(
            {
                "type": datum.label,
                "classes": [
                    {"words": sorted(word_str(w) for w in cl), "stack": stack_notation(cl, datum, inline=True)}
                    for cl in self.classes
                ],
                "edges": [
                    {"source": a, "target": b, "kind": lifts[0][2].kind, "lifts": len(lifts)}
                    for a, b, lifts in self.edges
                ],
            }
        )


def commutation_class(datum, word) -> frozenset:
    word = tuple(word)
    seen = {word}
    queue = deque([word])
    while queue:
        u = queue.popleft()
        for mv in available_moves(datum, u):
            if mv.kind == 2:
                v = apply_move(u, mv)
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return frozenset(seen)


def quotient(graph: WordGraph) -> QuotientGraph:
    datum = graph.datum
    class_of = {}
    classes = []
    for w in graph.vertices:
        if w in class_of:
            continue
        cl = commutation_class(datum, w)
        for u in cl:
            class_of[u] = len(classes)
        classes.append(cl)

    lifts = [(u, v, mv) for u, v, mv in graph.edges if mv.kind != 2]
    key = {}
    for n, (u, v, mv) in enumerate(lifts):
        key[(u, v)] = n
        key[(v, u)] = n
    parent = list(range(len(lifts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for n, (u, v, mv) in enumerate(lifts):
        window = set(mv.support)
        for c in available_moves(datum, u):
            if c.kind != 2 or window & set(c.support):
                continue
            m = key.get((apply_move(u, c), apply_move(v, c)))
            if m is not None:
                parent[find(m)] = find(n)
    groups = {}
    for n in range(len(lifts)):
        groups.setdefault(find(n), []).append(lifts[n])
    edges = []
    for group in groups.values():
        u, v, mv = group[0]
        a, b = class_of[u], class_of[v]
        if a > b:
            a, b = b, a
            group = [(y, x, m.mirror()) for x, y, m in group]
        edges.append((a, b, group))
    edges.sort(key=lambda e: (e[0], e[1], min(l[0] for l in e[2])))
    return QuotientGraph(graph, classes, class_of, edges)


def foata_layers(datum, word) -> list:
    """Layers of the heap of ``word``: each layer is a set of pairwise commuting letters."""
    rest = list(word)
    layers = []
    while rest:
        layer, blocked, keep = [], set(), []
        for c in rest:
            if c not in blocked and all(datum.a(c, b) == 0 and c != b for b in layer):
                layer.append(c)
            else:
                keep.append(c)
            # anything after c that fails to commute with c is blocked
            blocked |= {b for b in datum.index_set if b == c or datum.a(b, c) != 0}
        layers.append(sorted(layer))
        rest = keep
    return layers


def stack_notation(cls, datum=None, inline=False) -> str:
    """Render a commutation class with commuting letters stacked in one column.

    ``inline`` gives a one-line form with stacked columns in brackets,
    e.g. ``2[13]2[13]``; otherwise stacked letters are written vertically.
    """
    words = sorted(cls) if not isinstance(cls, tuple) else [cls]
    word = words[0]
    if datum is None:
        datum = _commutation_datum(words)
    layers = foata_layers(datum, word)
    if inline:
        return "".join(str(l[0]) if len(l) == 1 else "[" + "".join(map(str, l)) + "]" for l in layers)
    height = max(len(l) for l in layers)
    rows = []
    for r in range(height):
        rows.append("".join(str(l[r]) if r < len(l) else " " for l in layers).rstrip())
    return "\n".join(rows)


def _commutation_datum(words):
    """Recover which letters commute from the class itself (used when no datum is given)."""

    class _D:
        pass

    letters = sorted({c for w in words for c in w})
    commuting = set()
    ws = set(words)
    for w in words:
        for p in range(len(w) - 1):
            if w[p] != w[p + 1] and w[:p] + (w[p + 1], w[p]) + w[p + 2 :] in ws:
                commuting.add(frozenset((w[p], w[p + 1])))
    d = _D()
    d.index_set = letters
    d.a = lambda i, j: 0 if frozenset((i, j)) in commuting else -1
    return d


def last_letter(word):
    return tuple(word)[-1]


def m_count(path: Sequence, i) -> int:
    """Number of words on ``path`` ending in i (a closed path lists its base once)."""
    path = [tuple(w) for w in path]
    if len(path) > 1 and path[0] == path[-1]:
        path = path[:-1]
    return sum(1 for w in path if w[-1] == i)

"""Cluster seeds, elementary and basic quivers, mutation, coframing.

A seed stores its exchange matrix B (rows/columns ordered like ``vertices``)
together with multipliers D.  Vertices are stable integer ids; the canonical
name f_i^j of a vertex of a basic quiver is kept in ``labels`` as ``(i, j)``.
Mutation never renames vertices; Coxeter moves return the renaming of
canonical labels separately so that it can be audited.

Arrow convention: an arrow a -> b means ``w_ab = d_a b_ab > 0``, i.e.
``X_a X_b = q^{-2 w_ab} X_b X_a``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cartan import CartanDatum
from .errors import FrozenVertex, InvalidMove, SeedMismatch, UnsupportedRank
from .words import CoxeterMove, apply_move

F = Fraction


@dataclass(frozen=True)
class ClusterSeed:
    vertices: tuple  # stable ids
    frozen: frozenset
    B: tuple  # tuple of tuples of Fraction
    D: tuple  # multipliers, aligned with vertices
    decoration: dict = field(default_factory=dict, compare=False, hash=False)  # id -> letter
    labels: dict = field(default_factory=dict, compare=False, hash=False)  # id -> (i, j)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {v: n for n, v in enumerate(self.vertices)})

    def __hash__(self):
        return hash((self.vertices, self.frozen, self.B, self.D))

    # -- access --------------------------------------------------------------
    def pos(self, v):
        try:
            return self._pos[v]
        except KeyError:
            raise SeedMismatch(f"vertex {v} not in seed") from None

    def b(self, i, j):
        return self.B[self.pos(i)][self.pos(j)]

    def d(self, i):
        return self.D[self.pos(i)]

    def w(self, i, j):
        return self.d(i) * self.b(i, j)

    @property
    def mutable(self):
        return tuple(v for v in self.vertices if v not in self.frozen)

    def vertex_of(self, label):
        for v, lab in self.labels.items():
            if lab == tuple(label):
                return v
        raise KeyError(label)

    def label_str(self, v):
        if v in self.labels:
            i, j = self.labels[v]
            return f"f_{i}^{j}"
        return str(v)

    # -- structure -----------------------------------------------------------
    def check(self):
        n = len(self.vertices)
        for a in range(n):
            for c in range(n):
                wac = self.D[a] * self.B[a][c]
                wca = self.D[c] * self.B[c][a]
                if wac != -wca:
                    raise AssertionError(f"DB not skew at {self.vertices[a]}, {self.vertices[c]}")
                both_frozen = self.vertices[a] in self.frozen and self.vertices[c] in self.frozen
                if not both_frozen and self.B[a][c].denominator != 1:
                    raise AssertionError(f"non-integer b at {self.vertices[a]}, {self.vertices[c]}")
        return True

    def same_exchange_data(self, other, perm=None):
        """Equal B, D and frozen set, after renaming vertices of self by ``perm``."""
        perm = perm or {}
        rename = lambda v: perm.get(v, v)
        if set(map(rename, self.vertices)) != set(other.vertices):
            return False
        if {rename(v) for v in self.frozen} != set(other.frozen):
            return False
        for a in self.vertices:
            if self.d(a) != other.d(rename(a)):
                return False
            for c in self.vertices:
                if self.b(a, c) != other.b(rename(a), rename(c)):
                    return False
        return True

    def arrows(self):
        """(a, b, c_ab) for every arrow a -> b of the associated quiver."""
        out = []
        for a in self.vertices:
            for c in self.vertices:
                if self.w(a, c) > 0:
                    weight = self.b(a, c) if self.d(a) == self.d(c) else self.w(a, c)
                    out.append((a, c, weight))
        return out

    def replace(self, **kw):
        data = dict(
            vertices=self.vertices,
            frozen=self.frozen,
            B=self.B,
            D=self.D,
            decoration=self.decoration,
            labels=self.labels,
        )
        data.update(kw)
        return ClusterSeed(**data)

    # -- export --------------------------------------------------------------
    def to_dict(self):
        return {
            "Q": list(self.vertices),
            "Q0": sorted(self.frozen),
            "B": [[str(x) for x in row] for row in self.B],
            "D": [str(x) for x in self.D],
            "labels": {str(v): f"f_{i}^{j}" for v, (i, j) in sorted(self.labels.items())},
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_dot(self):
        """Squares for frozen nodes, dashed for half arrows, thin between two short nodes."""
        lines = ["digraph Q {"]
        for v in self.vertices:
            shape = "box" if v in self.frozen else "circle"
            lines.append(f'  {v} [shape={shape}, label="{v}", xlabel="{self.label_str(v)}"];')
        for a, c, weight in self.arrows():
            attrs = []
            if weight.denominator != 1:
                attrs.append("style=dashed")
            thin = self.d(a) < 1 and self.d(c) < 1
            attrs.append("penwidth=1" if thin else "penwidth=3")
            if weight not in (1, F(1, 2)):
                attrs.append(f'label="{weight}"')
            lines.append(f"  {a} -> {c} [{', '.join(attrs)}];")
        lines.append("}")
        return "\n".join(lines)


def seed_from_weights(vertices, frozen, W, D, decoration=None, labels=None):
    """Build a seed from a dict {(a, b): w_ab} of skew weights (missing = 0)."""
    vertices = tuple(vertices)
    D = tuple(F(x) for x in D)
    B = []
    for a, da in zip(vertices, D):
        row = []
        for c in vertices:
            row.append(F(W.get((a, c), 0)) / da)
        B.append(tuple(row))
    return ClusterSeed(vertices, frozenset(frozen), tuple(B), D, dict(decoration or {}), dict(labels or {}))


def seed_weights(seed):
    return {
        (a, c): seed.w(a, c) for a in seed.vertices for c in seed.vertices if seed.w(a, c) != 0
    }


def _elementary_weights(datum, i, left, right, neighbour):
    """Skew weights of J(i) with i_l = left, i_r = right, neighbour(j) the vertex of j."""
    di = datum.d(i)
    W = {}

    def add(a, c, x):
        W[(a, c)] = W.get((a, c), 0) + x
        W[(c, a)] = W.get((c, a), 0) - x

    add(left, right, di)
    for j in datum.index_set:
        if j == i or datum.a(i, j) == 0:
            continue
        x = di * datum.a(i, j) / 2
        add(left, neighbour(j), x)
        add(neighbour(j), right, x)
    return W


def elementary_quiver(datum: CartanDatum, i) -> ClusterSeed:
    """J(i) with vertices labelled f_i^0 (= i_l), f_i^1 (= i_r) and f_j^0 for j != i."""
    return basic_quiver(datum, (i,))


def basic_quiver(datum: CartanDatum, word: Sequence[int]) -> ClusterSeed:
    word = tuple(word)
    counts = {i: word.count(i) for i in datum.index_set}
    ids = {}
    n = 0
    for i in datum.index_set:
        for j in range(counts[i] + 1):
            n += 1
            ids[(i, j)] = n
    current = {i: 0 for i in datum.index_set}
    W = {}
    for i in word:
        left, right = ids[(i, current[i])], ids[(i, current[i] + 1)]
        Wi = _elementary_weights(datum, i, left, right, lambda j: ids[(j, current[j])])
        for key, x in Wi.items():
            W[key] = W.get(key, 0) + x
        current[i] += 1
    W = {k: x for k, x in W.items() if x != 0}
    touched = {a for a, _ in W}
    keep = [lab for lab in ids if ids[lab] in touched]
    # renumber consecutively, level by level
    renum = {ids[lab]: m + 1 for m, lab in enumerate(keep)}
    vertices = tuple(renum[ids[lab]] for lab in keep)
    frozen = {renum[ids[(i, j)]] for (i, j) in keep if j in (0, counts[i])}
    D = [datum.d(i) for (i, _) in keep]
    W = {(renum[a], renum[c]): x for (a, c), x in W.items()}
    labels = {renum[ids[lab]]: lab for lab in keep}
    decoration = {v: lab[0] for v, lab in labels.items()}
    return seed_from_weights(vertices, frozen, W, D, decoration, labels)


def mutate_seed(seed: ClusterSeed, k) -> ClusterSeed:
    if k in seed.frozen:
        raise FrozenVertex(f"vertex {k} is frozen")
    kk = seed.pos(k)
    B = seed.B
    n = len(B)
    out = []
    for a in range(n):
        row = []
        for c in range(n):
            if a == kk or c == kk:
                row.append(-B[a][c])
            else:
                bak, bkc = B[a][kk], B[kk][c]
                row.append(B[a][c] + (bak * abs(bkc) + abs(bak) * bkc) / 2)
        out.append(tuple(row))
    return seed.replace(B=tuple(out))


def mutate_sequence(seed, ks):
    for k in ks:
        seed = mutate_seed(seed, k)
    return seed


def permute_seed(seed: ClusterSeed, sigma: dict) -> ClusterSeed:
    """Rename vertex v to sigma(v); frozen vertices must be fixed."""
    for v in seed.frozen:
        if sigma.get(v, v) != v:
            raise InvalidMove(f"permutation moves frozen vertex {v}")
    s = lambda v: sigma.get(v, v)
    order = sorted(seed.vertices, key=s)
    B = tuple(tuple(seed.b(a, c) for c in order) for a in order)
    D = tuple(seed.d(a) for a in order)
    return ClusterSeed(
        tuple(s(v) for v in order),
        seed.frozen,
        B,
        D,
        {s(v): x for v, x in seed.decoration.items()},
        {s(v): x for v, x in seed.labels.items()},
    )


def rename_seed(seed: ClusterSeed, perm: dict) -> ClusterSeed:
    """Rename every vertex (frozen ones included) by a bijection ``perm``."""
    s = lambda v: perm.get(v, v)
    if len({s(v) for v in seed.vertices}) != len(seed.vertices):
        raise InvalidMove("renaming is not injective")
    order = sorted(seed.vertices, key=s)
    return ClusterSeed(
        tuple(s(v) for v in order),
        frozenset(s(v) for v in seed.frozen),
        tuple(tuple(seed.b(a, c) for c in order) for a in order),
        tuple(seed.d(a) for a in order),
        {s(v): x for v, x in seed.decoration.items()},
        {s(v): x for v, x in seed.labels.items()},
    )


def find_permutation(seed, target):
    """A permutation sigma of mutable vertices with sigma(seed) == target, or None."""
    if set(seed.vertices) != set(target.vertices) or seed.frozen != target.frozen:
        return None
    mut = list(seed.mutable)
    cand = {
        v: [u for u in target.mutable if target.d(u) == seed.d(v)] for v in mut
    }

    def extend(assign, rest):
        if not rest:
            return dict(assign)
        v = rest[0]
        for u in cand[v]:
            if u in assign.values():
                continue
            assign[v] = u
            ok = all(
                seed.b(v, x) == target.b(u, assign.get(x, x))
                for x in seed.vertices
                if x in assign or x in seed.frozen
            )
            if ok:
                res = extend(assign, rest[1:])
                if res is not None:
                    return res
            del assign[v]
        return None

    return extend({}, mut)


def coframe(seed: ClusterSeed) -> ClusterSeed:
    """Add a frozen k' with d_k' = d_k and an arrow k -> k' for every mutable k."""
    mut = seed.mutable
    if not mut:
        return seed
    top = max(seed.vertices)
    prime = {k: top + n + 1 for n, k in enumerate(mut)}
    W = seed_weights(seed)
    for k in mut:
        W[(k, prime[k])] = seed.d(k)
        W[(prime[k], k)] = -seed.d(k)
    vertices = seed.vertices + tuple(prime[k] for k in mut)
    D = seed.D + tuple(seed.d(k) for k in mut)
    out = seed_from_weights(vertices, set(seed.frozen) | set(prime.values()), W, D, seed.decoration, seed.labels)
    object.__setattr__(out, "coframing", prime)
    return out


def c_vectors(framed: ClusterSeed, prime: dict) -> dict:
    """Row k: exponents (b_{k, j'})_j over the coframing vertices, for each original mutable k."""
    order = sorted(prime)
    return {k: tuple(framed.b(k, prime[j]) for j in order) for k in order}


# -- Coxeter moves on basic quivers ------------------------------------------


def occurrence(word, p):
    """1-based occurrence index of the letter at 0-based position p."""
    return word[: p + 1].count(word[p])


def coxeter_move_seed(datum: CartanDatum, word, move: CoxeterMove):
    """Mutations (as canonical labels) realising ``move``, and the label renaming.

    Returns ``(sequence, relabel, new_word)`` where ``relabel`` maps every
    changed canonical label of the source quiver to its name in the target.
    """
    word = tuple(word)
    new_word = apply_move(word, move)
    p = move.position - 1
    i, j = move.pair
    if move.kind == 2:
        return [], {}, new_word
    v = occurrence(word, p)
    u = occurrence(word, p + 1)
    if move.kind == 3:
        relabel = {(i, v): (j, u)}
        for t in range(u, word.count(j) + 1):
            relabel[(j, t)] = (j, t + 1)
        for t in range(v + 1, word.count(i) + 1):
            relabel[(i, t)] = (i, t - 1)
        return [(i, v)], relabel, new_word
    if move.kind == 4:
        # both orders give the same map; the short letter goes first
        a, b = ((j, u), (i, v)) if datum.d(j) < datum.d(i) else ((i, v), (j, u))
        return [a, b, a], {}, new_word
    raise UnsupportedRank(f"no quiver move for m_ij = {move.kind}")


@dataclass
class LabelledSeed:
    """A seed with stable ids plus the current canonical name of each id."""

    seed: ClusterSeed
    word: tuple
    names: dict  # stable id -> (i, j)

    def vertex(self, label):
        for v, lab in self.names.items():
            if lab == tuple(label):
                return v
        raise KeyError(label)


def start_labelled(datum, word):
    seed = basic_quiver(datum, word)
    return LabelledSeed(seed, tuple(word), dict(seed.labels))


def apply_coxeter_move(datum, ls: LabelledSeed, move: CoxeterMove):
    """Apply a Coxeter move to a labelled seed; returns (new LabelledSeed, stable-id mutations)."""
    seq, relabel, new_word = coxeter_move_seed(datum, ls.word, move)
    ks = [ls.vertex(lab) for lab in seq]
    seed = mutate_sequence(ls.seed, ks)
    names = {v: relabel.get(lab, lab) for v, lab in ls.names.items()}
    return LabelledSeed(seed, new_word, names), ks


def canonical_view(ls: LabelledSeed, datum):
    """The seed renamed so each vertex carries the basic-quiver id of its canonical label."""
    target = basic_quiver(datum, ls.word)
    by_label = {lab: v for v, lab in target.labels.items()}
    perm = {v: by_label[lab] for v, lab in ls.names.items()}
    return perm, target

"""Quantum torus of a seed: noncommutative Laurent polynomials in X_lambda.

Basis: X_lambda for lambda in the lattice spanned by the seed vertices, with

    X_lambda X_mu = q^{-(lambda, mu)} X_{lambda + mu},   (e_a, e_b) = w_ab = d_a b_ab.

Coefficients are Laurent polynomials in a fractional power of q.  Exponents
are stored as integers in units of q^{1/UNIT}; UNIT = 12 covers q^{1/2}
and q^{1/3} multipliers as well as the quarter weights between two short
frozen vertices.

>>> from qcluster.cartan import make_cartan
>>> from qcluster.seeds import basic_quiver
>>> S = basic_quiver(make_cartan("A3"), (1, 2, 1, 3, 2, 1))
>>> format_expr(X(S, {2: 1}) * X(S, {3: 1}))
'q^{-1}X_{2,3}'
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NotDivisible, ParseError, SeedMismatch

UNIT = 12


def to_units(x) -> int:
    x = Fraction(x) * UNIT
    if x.denominator != 1:
        raise ValueError(f"exponent {x / UNIT} is not a multiple of 1/{UNIT}")
    return x.numerator


class QPoly:
    """Integer Laurent polynomial in q^{1/UNIT}; immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {0: int(terms)}
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    @classmethod
    def q(cls, exponent):
        """q^exponent for a rational exponent."""
        return cls({to_units(exponent): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly(other)
        return isinstance(other, QPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = QPoly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QPoly({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, QPoly):
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return QPoly(out)

    __rmul__ = __mul__

    def shift(self, units):
        """Multiply by q^{units / UNIT}."""
        if not units:
            return self
        return QPoly({e + units: c for e, c in self.terms.items()})

    def bar(self):
        """q -> q^{-1}."""
        return QPoly({-e: c for e, c in self.terms.items()})

    def at_one(self):
        return sum(self.terms.values())

    def is_palindromic(self):
        return self == self.bar()

    def __repr__(self):
        return f"QPoly({format_coeff(self) or '1'})"


ONE = QPoly(1)


def q_binomial(n, m, d=1) -> QPoly:
    """Symmetric Gaussian binomial [n choose m] in q_i = q^d, with [k] = (q_i^k - q_i^-k)/(q_i - q_i^-1)."""
    if m < 0 or m > n:
        return QPoly()
    u = to_units(d)
    table = {(0, 0): ONE}
    for a in range(1, n + 1):
        for b in range(0, a + 1):
            left = table.get((a - 1, b), QPoly()).shift(u * b)
            right = table.get((a - 1, b - 1), QPoly()).shift(-u * (a - b))
            table[(a, b)] = left + right
    return table[(n, m)]


# -- lattice and skew form -----------------------------------------------------


@lru_cache(maxsize=None)
def _skew_units(seed):
    """Matrix of UNIT * w_ab as integers."""
    n = len(seed.vertices)
    return tuple(tuple(to_units(seed.D[a] * seed.B[a][c]) for c in range(n)) for a in range(n))


def skew_units(seed, lam, mu) -> int:
    """(lambda, mu) in units of 1/UNIT."""
    W = _skew_units(seed)
    total = 0
    for a, la in enumerate(lam):
        if la:
            row = W[a]
            for c, mc in enumerate(mu):
                if mc:
                    total += la * mc * row[c]
    return total


def skew_form(seed, lam, mu) -> Fraction:
    return Fraction(skew_units(seed, _vec(seed, lam), _vec(seed, mu)), UNIT)


def _vec(seed, lam):
    """Accept a tuple aligned with seed.vertices or a dict {vertex: exponent}."""
    if isinstance(lam, dict):
        out = [0] * len(seed.vertices)
        for v, x in lam.items():
            out[seed.pos(v)] += x
        return tuple(out)
    lam = tuple(lam)
    if len(lam) != len(seed.vertices):
        raise SeedMismatch("lattice vector has wrong length")
    return lam


def unit_vector(seed, v, n=1):
    out = [0] * len(seed.vertices)
    out[seed.pos(v)] = n
    return tuple(out)


def vec_scale(a, s):
    return tuple(x * s for x in a)


# -- elements ------------------------------------------------------------------


class TorusElement:
    """sum c_lambda X_lambda over a fixed seed; immutable."""

    __slots__ = ("seed", "terms")

    def __init__(self, seed, terms=None):
        self.seed = seed
        self.terms = {lam: c for lam, c in (terms or {}).items() if c}

    def _check(self, other):
        if other.seed is not self.seed and other.seed != self.seed:
            raise SeedMismatch("elements live over different seeds")

    def _lift(self, other):
        if isinstance(other, TorusElement):
            self._check(other)
            return other
        if isinstance(other, int):
            other = QPoly(other)
        if isinstance(other, QPoly):
            return TorusElement(self.seed, {(0,) * len(self.seed.vertices): other})
        raise TypeError(type(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for lam, c in other.terms.items():
            out[lam] = out[lam] + c if lam in out else c
        return TorusElement(self.seed, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.seed, {lam: -c for lam, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, QPoly)):
            return TorusElement(self.seed, {lam: c * other for lam, c in self.terms.items()})
        self._check(other)
        W = _skew_units(self.seed)
        n = len(self.seed.vertices)
        out = {}
        for mu, cm in other.terms.items():
            wmu = [sum(W[a][c] * mu[c] for c in range(n) if mu[c]) for a in range(n)]
            for lam, cl in self.terms.items():
                shift = -sum(lam[a] * wmu[a] for a in range(n) if lam[a])
                key = tuple(x + y for x, y in zip(lam, mu))
                term = (cl * cm).shift(shift)
                out[key] = out[key] + term if key in out else term
        return TorusElement(self.seed, out)

    def __rmul__(self, other):
        if isinstance(other, (int, QPoly)):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        if n >= 0:
            out = one(self.seed)
            for _ in range(n):
                out = out * self
            return out
        # only monomials with coefficient +-q^e are invertible here
        if len(self.terms) == 1:
            ((lam, c),) = self.terms.items()
            if len(c.terms) == 1:
                ((e, k),) = c.terms.items()
                if k in (1, -1):
                    inv = TorusElement(self.seed, {vec_scale(lam, -1): QPoly({-e: k})})
                    return inv ** (-n)
        raise ValueError("only unit monomials can be inverted")

    def __eq__(self, other):
        if isinstance(other, (int, QPoly)):
            other = self._lift(other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return (other.seed is self.seed or other.seed == self.seed) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"TorusElement({format_expr(self)})"

    def star(self):
        return TorusElement(self.seed, {lam: c.bar() for lam, c in self.terms.items()})

    def is_self_adjoint(self):
        return self == self.star()

    def at_q_one(self, assignment: dict):
        """Evaluate at q = 1 with X_v -> assignment[v] (exact rationals)."""
        total = Fraction(0)
        verts = self.seed.vertices
        for lam, c in self.terms.items():
            val = Fraction(c.at_one())
            for v, x in zip(verts, lam):
                if x:
                    val *= Fraction(assignment[v]) ** x
            total += val
        return total

    def monomial_vector(self):
        """lambda if self is a single X_lambda with coefficient 1, else None."""
        if len(self.terms) == 1:
            ((lam, c),) = self.terms.items()
            if c == ONE:
                return lam
        return None

    def rebase(self, seed):
        """The same coefficients read over another seed with the same vertex list."""
        if tuple(seed.vertices) != tuple(self.seed.vertices):
            raise SeedMismatch("vertex sets differ")
        return TorusElement(seed, self.terms)

    def relabel(self, seed, sigma: dict):
        """Rename basis vector e_v to e_{sigma(v)} and view the result over ``seed``."""
        old = self.seed.vertices
        out = {}
        for lam, c in self.terms.items():
            new = [0] * len(seed.vertices)
            for v, x in zip(old, lam):
                if x:
                    new[seed.pos(sigma.get(v, v))] += x
            out[tuple(new)] = c
        return TorusElement(seed, out)


def X(seed, lam, coeff=1) -> TorusElement:
    c = coeff if isinstance(coeff, QPoly) else QPoly(coeff)
    return TorusElement(seed, {_vec(seed, lam): c})


def one(seed) -> TorusElement:
    return X(seed, (0,) * len(seed.vertices))


def zero(seed) -> TorusElement:
    return TorusElement(seed, {})


def multiply(f, g):
    return f * g


def star(f):
    return f.star()


def right_divide(f: TorusElement, k, a_units: int) -> TorusElement:
    """g with g * (1 + q^{a} X_k) = f, where a = a_units / UNIT; NotDivisible otherwise.

    Along each line lambda_0 + t e_k the product reads f_t = g_t + s g_{t-1}
    with s = q^{a - (lambda_0, e_k)}, which is solved upwards in t.
    """
    seed = f.seed
    kk = seed.pos(k)
    ek = unit_vector(seed, k)
    lines = {}
    for lam, c in f.terms.items():
        base = lam[:kk] + (0,) + lam[kk + 1 :]
        lines.setdefault(base, {})[lam[kk]] = c
    out = {}
    for base, coeffs in lines.items():
        s = a_units - skew_units(seed, base, ek)
        lo, hi = min(coeffs), max(coeffs)
        prev = QPoly()
        for t in range(lo, hi + 1):
            g = coeffs.get(t, QPoly()) - prev.shift(s)
            if t == hi:
                if g:
                    raise NotDivisible(f"remainder on the line through {base} in direction {k}")
                break
            if g:
                out[base[:kk] + (t,) + base[kk + 1 :]] = g
            prev = g
    return TorusElement(seed, out)


class TorusFraction:
    """numerator * prod (1 + q^a X_k)^{-1}, denominators on the right in one variable k."""

    def __init__(self, numerator: TorusElement, k=None, denominators=()):
        self.numerator = numerator
        self.k = k
        self.denominators = tuple(denominators)  # exponents a in units

    def clear(self) -> TorusElement:
        g = self.numerator
        for a in reversed(self.denominators):
            g = right_divide(g, self.k, a)
        return g

    def __repr__(self):
        if not self.denominators:
            return format_expr(self.numerator)
        den = "".join(f"(1+{_fmt_q(a)}X_{{{self.k}}})^{{-1}}" for a in self.denominators)
        return f"({format_expr(self.numerator)}){den}"


# -- text format -----------------------------------------------------------------


def _fmt_q(units):
    e = Fraction(units, UNIT)
    if e == 0:
        return ""
    if e == 1:
        return "q"
    return "q^{" + str(e) + "}"


TWO = QPoly({UNIT // 2: 1, -UNIT // 2: 1})  # [2] = q^{1/2} + q^{-1/2}


def format_coeff(c: QPoly) -> str:
    """'' for 1, otherwise a self-delimiting coefficient (possibly with leading '-')."""
    if c == ONE:
        return ""
    if c == TWO:
        return "[2]"
    if len(c.terms) == 1:
        ((e, k),) = c.terms.items()
        sign = "-" if k < 0 else ""
        k = abs(k)
        if e == 0:
            return f"{sign}{'' if k == 1 and sign else k}"
        return f"{sign}{'' if k == 1 else k}{_fmt_q(e)}"
    parts = []
    for e in sorted(c.terms, reverse=True):
        k = c.terms[e]
        body = _fmt_q(e)
        body = (str(abs(k)) if abs(k) != 1 or not body else "") + body
        parts.append(("-" if k < 0 else "+") + body)
    s = "".join(parts)
    return "(" + (s[1:] if s.startswith("+") else s) + ")"


def format_vector(seed, lam) -> str:
    entries = []
    for v, x in sorted(zip(seed.vertices, lam)):
        if x == 0:
            continue
        if x == 1:
            entries.append(str(v))
        elif 0 < x < 10:
            entries.append(f"{v}^{x}")
        else:
            entries.append(f"{v}^{{{x}}}")
    return "X_{" + ",".join(entries) + "}"


def term_key(seed, lam):
    return (sum(abs(x) for x in lam), sorted((v, x) for v, x in zip(seed.vertices, lam) if x))


def format_expr(f: TorusElement) -> str:
    if not f.terms:
        return "0"
    out = []
    for lam in sorted(f.terms, key=lambda l: term_key(f.seed, l)):
        coeff = format_coeff(f.terms[lam])
        neg = coeff.startswith("-")
        if neg:
            coeff = coeff[1:]
        body = coeff + format_vector(f.seed, lam) if any(lam) else (coeff or "1")
        if out:
            out.append((" - " if neg else " + ") + body)
        else:
            out.append(("-" if neg else "") + body)
    return "".join(out)


# -- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, seed, text):
        self.seed = seed
        self.text = text
        self.i = 0
        self.n = len(text)

    def error(self, msg):
        raise ParseError(msg, self.i)

    def skip(self):
        while self.i < self.n and self.text[self.i].isspace():
            self.i += 1

    def peek(self, s=None):
        self.skip()
        if s is None:
            return self.text[self.i] if self.i < self.n else ""
        return self.text.startswith(s, self.i)

    def eat(self, s):
        if self.peek(s):
            self.i += len(s)
            return True
        return False

    def expect(self, s):
        if not self.eat(s):
            self.error(f"expected {s!r}")

    def integer(self):
        self.skip()
        start = self.i
        if self.i < self.n and self.text[self.i] in "+-":
            self.i += 1
        digits = self.i
        while self.i < self.n and self.text[self.i].isdigit():
            self.i += 1
        if self.i == digits:
            self.i = start
            self.error("expected integer")
        return int(self.text[start : self.i])

    def rational(self):
        num = self.integer()
        if self.eat("/"):
            den = self.integer()
            if den == 0:
                self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def braced_int(self):
        if self.eat("{"):
            x = self.integer()
            self.expect("}")
            return x
        return self.integer()

    def sign(self):
        if self.eat("-"):
            return -1
        self.eat("+")
        return 1

    # element ::= ['+'|'-'] term (('+'|'-') term)*
    def element(self):
        total = zero(self.seed)
        sign = self.sign()
        while True:
            total = total + self.term() * sign
            if self.eat("+"):
                sign = 1
            elif self.eat("-"):
                sign = -1
            else:
                return total

    # term ::= coeff? monomial | coeff
    def term(self):
        coeff, seen = self.product()
        if self.peek("X"):
            return self.monomial() * coeff
        if not seen:
            self.error("expected a term")
        return one(self.seed) * coeff

    def product(self):
        coeff, seen = ONE, False
        while True:
            a = self.atom()
            if a is None:
                return coeff, seen
            coeff, seen = coeff * a, True
            self.eat("*")

    def atom(self):
        c = self.peek()
        if c.isdigit():
            return QPoly(self.integer())
        if c == "q":
            self.i += 1
            e = Fraction(1)
            if self.eat("^"):
                if self.eat("{"):
                    e = self.rational()
                    self.expect("}")
                else:
                    e = Fraction(self.integer())
            try:
                return QPoly.q(e)
            except ValueError:
                self.error(f"unsupported exponent {e}")
        if c == "[":
            self.i += 1
            if self.integer() != 2:
                self.error("only [2] is a named coefficient")
            self.expect("]")
            return TWO
        if c == "(":
            self.i += 1
            total = QPoly()
            sign = self.sign()
            while True:
                t, seen = self.product()
                if not seen:
                    self.error("expected coefficient")
                total = total + t * sign
                if self.eat("+"):
                    sign = 1
                elif self.eat("-"):
                    sign = -1
                else:
                    break
            self.expect(")")
            return total
        return None

    def monomial(self):
        self.expect("X")
        self.expect("_")
        vec = [0] * len(self.seed.vertices)
        if self.eat("{"):
            while True:
                self.entry(vec)
                if not self.eat(","):
                    break
            self.expect("}")
        else:
            self.entry(vec, bare=True)
        if self.peek("^"):
            save = self.i
            self.eat("^")
            p = self.braced_int()
            if p not in (1, -1):
                self.i = save
                self.error("only ^{-1} may follow a monomial")
            vec = [x * p for x in vec]
        return X(self.seed, tuple(vec))

    def entry(self, vec, bare=False):
        self.skip()
        start = self.i
        while self.i < self.n and self.text[self.i].isdigit():
            self.i += 1
        if start == self.i:
            self.error("expected vertex index")
        v = int(self.text[start : self.i])
        if v not in self.seed.vertices:
            self.i = start
            self.error(f"unknown vertex {v}")
        x = 1
        if not bare and self.eat("^"):
            x = self.braced_int()
        vec[self.seed.pos(v)] += x


def parse_expr(seed, text: str) -> TorusElement:
    p = _Parser(seed, text)
    out = p.element()
    p.skip()
    if p.i != p.n:
        p.error("unexpected input")
    return out

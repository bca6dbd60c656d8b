"""Command line interface: ``qcluster <command> ...``.

Exit status is 0 when every requested check passes, 1 when a check fails and
2 for bad input.
"""

from __future__ import annotations

import random
import re
import sys

import click

from .cartan import is_reduced, longest_word, make_cartan
from .errors import QClusterError
from .lusztig import lusztig_coordinates, lusztig_parameters, move_coordinates_check, parse_orientation
from .qmutation import apply_sequence
from .qtorus import format_expr, parse_expr
from .seeds import basic_quiver
from .tits import decompose as tits_decompose, random_cycle, verify_witness
from .verify import lift_quotient_cycle, load_cycle_data, verify_cycle, verify_rank3
from .words import available_moves, build_word_graph, parse_word, quotient, word_str


def _fail(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(2)


def _datum_and_word(type_, word):
    datum = make_cartan(type_) if type_ else None
    if word:
        w = parse_word(word)
        if datum is None:
            datum = _guess_datum(w)
        return datum, w
    if datum is None:
        _fail("give --type or --word")
    return datum, longest_word(datum)


def _guess_datum(word):
    """A type whose longest word has this length, else A_n if the word is reduced there."""
    n = max(word)
    for kind in "ABCD":
        try:
            d = make_cartan(f"{kind}{n}")
        except QClusterError:
            continue
        if len(longest_word(d)) == len(word):
            return d
    try:
        d = make_cartan(f"A{n}")
    except QClusterError:
        _fail("cannot infer the type from the word; pass --type")
    if is_reduced(d, word):
        return d
    _fail("cannot infer the type from the word; pass --type")


def parse_cycle(datum, text, base=None):
    """'quotient' (one turn of the quotient cycle) or words joined by '-', '>' or spaces."""
    if text == "quotient":
        return lift_quotient_cycle(datum, base)
    words = [parse_word(t) for t in re.split(r"[\s>\-]+", text.strip()) if t]
    return words


@click.group()
def main():
    """Quantum cluster mutations, basic quivers and reduced word graphs."""


@main.command()
@click.option("--type", "type_", required=True, help="Cartan type, e.g. A3, B3, A2xA1.")
@click.option("--word", default=None, help="Seed word (default: a longest word).")
@click.option("--quotient", "as_quotient", is_flag=True, help="Contract commutative moves.")
@click.option("--format", "fmt", type=click.Choice(["dot", "json", "text"]), default="text")
def words(type_, word, as_quotient, fmt):
    """Reduced word graph (or its quotient) of a Weyl group element."""
    datum, w = _datum_and_word(type_, word)
    G = build_word_graph(datum, w)
    obj = quotient(G) if as_quotient else G
    if fmt == "dot":
        click.echo(obj.to_dot())
    elif fmt == "json":
        click.echo(obj.to_json())
    elif as_quotient:
        shape = f"{len(obj.cycle_order())}-gon" if obj.is_cycle() else "not a cycle"
        click.echo(f"{len(G.vertices)} words, {len(obj.classes)} commutation classes, quotient {shape}")
    else:
        click.echo(f"{len(G.vertices)} words, {len(G.edges)} edges")
        for u in G.vertices:
            click.echo(word_str(u))


@main.command()
@click.option("--word", required=True)
@click.option("--type", "type_", default=None)
@click.option("--format", "fmt", type=click.Choice(["dot", "json"]), default="dot")
def quiver(word, type_, fmt):
    """Basic quiver of a reduced word."""
    datum, w = _datum_and_word(type_, word)
    seed = basic_quiver(datum, w)
    click.echo(seed.to_dot() if fmt == "dot" else seed.to_json())


@main.command()
@click.option("--word", required=True)
@click.option("--type", "type_", default=None)
@click.option("--seq", required=True, help="Comma separated vertex ids, e.g. 2,6,3.")
@click.option("--expr", required=True, help='Element, e.g. "X_{12} + [2]X_{2,11,12}".')
@click.option("--trace", is_flag=True, help="Print every stage as '(n) expr'.")
def mutate(word, type_, seq, expr, trace):
    """Push an element through a sequence of quantum mutations."""
    datum, w = _datum_and_word(type_, word)
    seed = basic_quiver(datum, w)
    ks = [int(x) for x in seq.split(",") if x.strip()]
    res = apply_sequence(seed, ks, parse_expr(seed, expr))
    if trace:
        for n, st in enumerate(res.stages, start=1):
            click.echo(f"({n}) {format_expr(st)}")
    else:
        click.echo(format_expr(res.value))


@main.command()
@click.option("--type", "type_", required=True)
@click.option("--cycle", "cycle", default=None, help="Words joined by '-', or 'quotient'.")
@click.option("--random", "n_random", type=int, default=0, help="Decompose N random closed paths instead.")
@click.option("--seed", "rng_seed", type=int, default=0)
@click.option("--max-len", type=int, default=20)
def decompose(type_, cycle, n_random, rng_seed, max_len):
    """Write a closed path as a product of squares and rank-3 cycles (JSON witness)."""
    datum = make_cartan(type_)
    w0 = longest_word(datum)
    if cycle:
        path = parse_cycle(datum, cycle)
        G = build_word_graph(datum, path[0])
        wit = tits_decompose(G, path)
        ok = verify_witness(path, wit)
        click.echo(wit.to_json())
        click.echo(f"# replay {'ok' if ok else 'FAILED'}: {wit.counts()}", err=True)
        sys.exit(0 if ok else 1)
    if not n_random:
        _fail("give --cycle or --random")
    G = build_word_graph(datum, w0)
    rng = random.Random(rng_seed)
    good = 0
    for _ in range(n_random):
        path = random_cycle(G, rng, max_len)
        good += verify_witness(path, tits_decompose(G, path))
    click.echo(f"{good}/{n_random} witnesses replay")
    sys.exit(0 if good == n_random else 1)


@main.group()
def verify():
    """Mechanical checks that mutation cycles act as the identity."""


def _emit(report, as_json):
    click.echo(report.to_json() if as_json else report.to_text())
    sys.exit(0 if report.ok else 1)


@verify.command("rank3")
@click.option("--type", "type_", type=click.Choice(["A3", "B3"]), required=True)
@click.option("--trace", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--seed", "rng_seed", type=int, default=None)
def verify_rank3_cmd(type_, trace, as_json, rng_seed):
    """Check the stored A3 or B3 cycle stage by stage."""
    kw = {} if rng_seed is None else {"rng_seed": rng_seed}
    _emit(verify_rank3(load_cycle_data(type_), trace=trace, **kw), as_json)


@verify.command("cycle")
@click.option("--type", "type_", required=True)
@click.option("--cycle", "cycle", required=True, help="Words joined by '-', or 'quotient'.")
@click.option("--decompose", "with_decompose", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--seed", "rng_seed", type=int, default=None)
def verify_cycle_cmd(type_, cycle, with_decompose, as_json, rng_seed):
    """Transport distinguished elements around a closed path of words."""
    datum = make_cartan(type_)
    kw = {} if rng_seed is None else {"rng_seed": rng_seed}
    _emit(verify_cycle(datum, parse_cycle(datum, cycle), decompose=with_decompose, **kw), as_json)


@main.command()
@click.option("--word", required=True)
@click.option("--type", "type_", default=None)
@click.option("--orientation", default="default", help="'default' or arrows like '3>2,2>1'.")
@click.option("--check", is_flag=True, help="Check the rank-2 transforms across every braid/doubly-laced move.")
def lusztig(word, type_, orientation, check):
    """Lusztig coordinates alpha_k on the glued basic quiver."""
    datum, w = _datum_and_word(type_, word)
    H = parse_orientation(datum, orientation)
    seed, alphas = lusztig_coordinates(datum, w, H)
    params = lusztig_parameters(seed, w)
    for k, (a, p) in enumerate(zip(alphas, params), start=1):
        click.echo(f"alpha_{k} = {format_expr(a)}    parameter {format_expr(p)}")
    if not check:
        return
    ok = True
    for mv in available_moves(datum, w):
        if mv.kind not in (3, 4):
            continue
        res = move_coordinates_check(datum, w, mv, H)
        good = res["quantum"] and res["spectators"]
        ok &= good
        flags = ", ".join(f"{k}: {'yes' if v else 'no'}" for k, v in res.items())
        click.echo(f"move at {mv.position} {mv.pair}: {flags}")
    sys.exit(0 if ok else 1)


def run():
    try:
        main(standalone_mode=True)
    except QClusterError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    run()

"""Concrete syntax: parsing, printing, and the round-trip property."""

import pytest

from picheck.checker import GeneratorConfig, generate_terms
from picheck.encodings import EncodingScheme, encode
from picheck.syntax import NIL, SUCCESS, Input, Output, Par, Repl, Restrict, alpha_eq, user
from picheck.text import ParseError, parse, pprint

x, y, z = user("x"), user("y"), user("z")


def test_parse_parallel_prefixes():
    assert parse("x!y.0 | x(z).0") == Par(Output(x, y, NIL), Input(x, z, NIL))


def test_parse_restriction_scope_extends_right():
    assert parse("new z. x!z.0") == Restrict(z, Output(x, z, NIL))
    assert parse("new z. x!z.0 | y!y.0") == Restrict(
        z, Par(Output(x, z, NIL), Output(y, y, NIL))
    )


def test_parse_replication_binds_tighter_than_par():
    assert parse("!x!y.0 | 0") == Par(Repl(Output(x, y, NIL)), NIL)


def test_parse_requires_continuation():
    with pytest.raises(ParseError):
        parse("x!y")


def test_parse_rejects_fresh_spellings():
    with pytest.raises(ParseError):
        parse("#0(x).0")


def test_parse_rejects_trailing_input():
    with pytest.raises(ParseError):
        parse("0 0")


def test_parse_rejects_comment_character():
    with pytest.raises(ParseError):
        parse("0 # nil")


def test_parse_parenthesized_continuation():
    got = parse("x(y).(x!y.0 | 0)")
    assert got == Input(x, y, Par(Output(x, y, NIL), NIL))


def test_pprint_nil_and_success():
    assert pprint(NIL) == "0"
    assert pprint(SUCCESS) == "ok"


def test_pprint_renders_boudol_output_clause():
    got = pprint(encode(parse("x!y.0"), EncodingScheme.BOUDOL))
    assert got == "new #0. (x!#0.0 | #0(#1).(#1!y.0 | 0))"


def test_round_trip_exhaustive_small_corpus():
    cfg = GeneratorConfig(max_nodes=3)
    for p in generate_terms(cfg):
        assert alpha_eq(parse(pprint(p)), p), pprint(p)


def test_round_trip_random_terms_three_names():
    cfg = GeneratorConfig(
        max_nodes=8,
        name_alphabet=(user("x"), user("y"), user("z")),
        random_count=2000,
        seed=11,
    )
    for p in generate_terms(cfg):
        assert alpha_eq(parse(pprint(p)), p), pprint(p)


def test_par_spine_is_reassociated_on_parse():
    p = parse("x!y.0 | x!y.0 | x!y.0")
    assert alpha_eq(parse(pprint(p)), p)

import os
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logalg import dsl
from logalg.cli import corpus_source
from logalg.errors import ParseError, ResolveError
from logalg.monoid import MonoidPresentation, group_completion
from logalg.sqzero import LogSquareZero

GOLDEN = Path(__file__).parent / "golden"


def _check_golden(name: str, text: str) -> None:
    path = GOLDEN / name
    if os.environ.get("LOGALG_UPDATE_GOLDEN"):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8")


def test_free_monoid_literal():
    s = dsl.parse("monoid N = <a|>;")
    env = dsl.resolve(s)
    assert env["N"] == MonoidPresentation.free(1, ("a",))


def test_relations_and_gens_literals():
    env = dsl.resolve(dsl.parse("monoid M = <a, b | a + b = 2 a, 3 b = 0>; monoid C = gens (2,0) (1,1) (0,2);"))
    M = env["M"]
    assert M.relations == (((1, 1), (2, 0)), ((0, 3), (0, 0)))
    assert str(group_completion(env["C"]).group) == "Z^2"


def test_dangling_plus_is_located():
    with pytest.raises(ParseError) as e:
        dsl.parse("monoid M = <a| a+ >;")
    assert (e.value.line, e.value.col) == (1, 17)
    assert e.value.expected


def test_missing_semicolon():
    with pytest.raises(ParseError) as e:
        dsl.parse("monoid M = <a|>\nmonoid N = <b|>;")
    assert e.value.line == 2


def test_unknown_name_is_a_resolve_error():
    with pytest.raises(ResolveError) as e:
        dsl.resolve(dsl.parse("map f : A -> B { ring: ; monoid: ; }"))
    assert e.value.line == 1


def test_duplicate_names_rejected():
    with pytest.raises(ResolveError):
        dsl.resolve(dsl.parse("monoid N = <a|>; monoid N = <b|>;"))


def test_corpus_file_size_and_resolution():
    script = dsl.parse(corpus_source())
    assert len(script.declarations) >= 40
    env = dsl.resolve(script)
    assert isinstance(env["dual"], LogSquareZero)
    assert isinstance(env["half"], dsl.PointValue)


def test_corpus_golden_roundtrip():
    script = dsl.parse(corpus_source())
    text = dsl.to_source(script)
    _check_golden("corpus.golden", text)
    assert dsl.parse(text) == script
    assert dsl.to_source(dsl.parse(text)) == text


def test_char_override():
    env = dsl.resolve(dsl.parse(corpus_source()), char=5)
    assert env["A1"].field.char == 5


def test_commands_parse():
    s = dsl.parse("gp N; sqz verify dual; lift x5 dual --mode etale; verify-corpus group-completion; bar-homology Z2 3;")
    verbs = [c.verb for c in s.commands]
    assert verbs == ["gp", "sqz verify", "lift", "verify-corpus", "bar-homology"]
    assert s.commands[2].options == (("mode", "etale"),)
    assert s.commands[4].args[1] == 3


def test_bad_command_and_subcommand():
    with pytest.raises(ParseError):
        dsl.parse("frobnicate N;")
    with pytest.raises(ParseError):
        dsl.parse("sqz explode dual;")


def test_spans_do_not_affect_equality():
    assert dsl.parse("gp N;") == dsl.parse("\n\n   gp   N ;")


ALPHABET = "<>|=+-,;:(){}[]^*/ \n#abcxyzN0123456789\"->mapmonoidprelogsqzGFQQ"


@settings(max_examples=400, deadline=None)
@given(st.text(alphabet=ALPHABET, max_size=60))
def test_parser_is_total(src):
    try:
        dsl.parse(src)
    except ParseError as e:
        assert isinstance(e.line, int) and isinstance(e.col, int)
        assert e.line >= 1 and e.col >= 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(dsl.parse(corpus_source()).statements), min_size=1, max_size=8))
def test_parser_is_total_on_mutated_corpus(stmts):
    src = "".join(dsl.statement_source(s) for s in stmts)
    for cut in range(0, len(src), max(1, len(src) // 7)):
        mutated = src[:cut] + src[cut + 1 :]
        try:
            dsl.resolve(dsl.parse(mutated))
        except ParseError as e:
            assert e.line >= 1 and e.col >= 1

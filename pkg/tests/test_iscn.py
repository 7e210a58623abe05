import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from karyotest import iscn
from karyotest.iscn import (
    Band,
    Breakpoint,
    Deletion,
    Duplication,
    Gain,
    Inversion,
    Karyotype,
    KaryotypeBounds,
    Loss,
    ParseError,
    Translocation,
    parse,
    random_karyotype,
    render,
)


@pytest.mark.parametrize("text, expected", [
    ("46,XY,t(1;3)(p22;q13.1)",
     Karyotype(46, ("X", "Y"), (Translocation(Breakpoint("1", Band("p", "22")),
                                               Breakpoint("3", Band("q", "13", "1"))),))),
    ("45,X", Karyotype(45, ("X",))),
    ("45,XX,-22", Karyotype(45, ("X", "X"), (Loss("22"),))),
    ("46,XX", Karyotype(46, ("X", "X"))),
    ("47,XX,+21", Karyotype(47, ("X", "X"), (Gain("21"),))),
    ("46,XX,del(5)(p15.2)", Karyotype(46, ("X", "X"), (Deletion("5", Band("p", "15", "2")),))),
    ("46,XY,del(1)(q21q31)",
     Karyotype(46, ("X", "Y"), (Deletion("1", Band("q", "21"), Band("q", "31")),))),
    ("46,XX,inv(9)(p11q13)",
     Karyotype(46, ("X", "X"), (Inversion("9", Band("p", "11"), Band("q", "13")),))),
    ("46,XY,dup(1)(q21q32)",
     Karyotype(46, ("X", "Y"), (Duplication("1", Band("q", "21"), Band("q", "32")),))),
])
def test_parse_examples(text, expected):
    assert parse(text) == expected
    assert render(expected) == text


def test_render_examples():
    assert render(Karyotype(45, ["X"], [Loss("Y")])) == "45,X,-Y"
    assert render(Karyotype(46, ["X", "N"], [])) == "46,XN"


def test_events_keep_source_order():
    k = parse("48,XY,+21,-X,+13")
    assert k.events == (Gain("21"), Loss("X"), Gain("13"))


@pytest.mark.parametrize("text, position", [
    ("", 0),
    ("046,XY", 0),
    ("46XY", 2),
    ("46,", 3),
    ("46,XZ", 4),
    ("46,XY,", 6),
    ("46,XY,+23", 8),
    ("46,XY,+0", 7),
    ("46,XY,t(1;3)(p22q13)", 16),
    ("46,XY,del(1)(r21)", 13),
    ("46,XY,inv(9)(p11)", 16),
    ("46,XY,dup(1)(q21.)", 17),
    ("46,xy", 3),
    ("46, XY", 3),
])
def test_error_positions(text, position):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == position
    assert 0 <= info.value.position <= len(text)


@pytest.mark.parametrize("text", [
    "46,XX,der(1)t(1;3)(p22;q13.1)",
    "45,X/46,XX",
    "46,XY,t(1;?)(p22;q13)",
    "46,XY,del(1)(q2?)",
    "47,XXY,+21c",
])
def test_non_goals_rejected(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_rejects_non_text():
    with pytest.raises(TypeError):
        parse(b"46,XY")


@pytest.mark.parametrize("total, sex", [(0, ("X",)), (46, ()), (46, ("Z",))])
def test_karyotype_invariants(total, sex):
    with pytest.raises(ValueError):
        Karyotype(total, sex)


def test_random_karyotype_deterministic():
    assert random_karyotype(7) == random_karyotype(7)
    assert len({random_karyotype(s) for s in range(50)}) > 40


def test_random_round_trip():
    for seed in range(1000):
        k = random_karyotype(seed)
        assert parse(render(k)) == k, seed


def test_zero_events_bound():
    bounds = KaryotypeBounds(max_events=0)
    assert all(random_karyotype(s, bounds).events == () for s in range(200))


def test_random_with_band_catalogue():
    bounds = KaryotypeBounds(bands={"1": ["p11.1", "q21"]})
    for seed in range(200):
        for e in random_karyotype(seed, bounds).events:
            if isinstance(e, (Deletion, Inversion, Duplication)):
                assert e.chromosome == "1"


@pytest.mark.parametrize("kwargs", [
    {"min_total": 0}, {"min_total": 10, "max_total": 5}, {"max_sex": 0}, {"max_events": -1},
])
def test_bad_bounds(kwargs):
    with pytest.raises(ValueError):
        KaryotypeBounds(**kwargs)


def test_corpus_idempotent(data_dir):
    corpus = iscn.load_corpus(data_dir / "corpus.txt")
    for s in ("46,XY,t(1;3)(p22;q13.1)", "46,XN", "45,X", "45,XX,-22", "45,X,-X", "45,X,-Y"):
        assert s in corpus
    for s in corpus:
        canonical = render(parse(s))
        assert render(parse(canonical)) == canonical


def test_load_corpus_skips_comments(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# header\n46,XY  # trailing\n\n  45,X\n")
    assert iscn.load_corpus(path) == ["46,XY", "45,X"]


def _parse_or_error(text):
    try:
        return parse(text)
    except ParseError as e:
        assert 0 <= e.position <= len(text)
        return e


def test_fuzzed_bytes_never_crash():
    rng = random.Random(1234)
    alphabet = b"0123456789,XYNpq.;()+-tdelinvup?/ \x00\xff"
    for i in range(10_000):
        n = rng.randint(0, 30)
        if i % 2:
            raw = bytes(rng.choice(alphabet) for _ in range(n))
        else:
            raw = bytes(rng.randrange(256) for _ in range(n))
        _parse_or_error(raw.decode("latin-1"))


def test_mutated_valid_strings_never_crash():
    rng = random.Random(99)
    for seed in range(2000):
        s = list(render(random_karyotype(seed)))
        for _ in range(rng.randint(1, 3)):
            op = rng.random()
            i = rng.randrange(len(s) + 1)
            if op < 0.4 and s:
                del s[min(i, len(s) - 1)]
            elif op < 0.8:
                s.insert(i, chr(rng.randrange(32, 127)))
            elif s:
                s[min(i, len(s) - 1)] = chr(rng.randrange(32, 127))
        result = _parse_or_error("".join(s))
        if isinstance(result, Karyotype):
            assert parse(render(result)) == result


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=40))
def test_parse_total_on_text(text):
    _parse_or_error(text)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_round_trip_property(seed):
    k = random_karyotype(seed)
    assert parse(render(k)) == k

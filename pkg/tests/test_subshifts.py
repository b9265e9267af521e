import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from subshift_gibbs.subshifts import (
    EmptySubshiftError,
    EnumerationCapError,
    ForbiddenSet,
    LabeledGraph,
    SpecParseError,
    SubshiftSpec,
    dump_spec,
    hereditary_closure_graph,
    hereditary_closure_language,
    is_hereditary_sufficient,
    language,
    normalize,
    parse_spec,
    sft_to_graph,
    upgrade_embedding,
)
from subshift_gibbs.words import Block, dominates

forbidden_sets = st.lists(st.text("01", min_size=2, max_size=3), min_size=1, max_size=3, unique=True)


def strs(blocks):
    return {str(w) for w in blocks}


def test_normalize_examples():
    assert strs(normalize(ForbiddenSet.of("00", "000"))) == {"00"}
    assert strs(normalize(ForbiddenSet.of("00", "111"))) == {"00", "111"}
    assert strs(normalize(ForbiddenSet.of())) == set()


def test_golden_mean_graph():
    G = sft_to_graph(ForbiddenSet.of("11"))
    assert G.names == ("0", "1")
    assert sorted(G.edges) == [(0, 0, 0), (0, 1, 1), (1, 0, 0)]


def test_x00_111_graph_in_documented_order():
    G = sft_to_graph(ForbiddenSet.of("00", "111"))
    A = G.adjacency_matrix(order=["11", "10", "01"])
    assert A.tolist() == [[0, 1, 0], [0, 0, 1], [1, 1, 0]]


def test_empty_subshift_rejected():
    with pytest.raises(EmptySubshiftError):
        sft_to_graph(ForbiddenSet.of("0", "1"))


def test_language_examples():
    assert strs(language(SubshiftSpec.sft("11"), 2)) == {"00", "01", "10"}
    assert [len(language(SubshiftSpec.sft("11"), n)) for n in range(1, 9)] == [2, 3, 5, 8, 13, 21, 34, 55]
    assert strs(language(SubshiftSpec.sft("00", "111"), 2)) == {"11", "10", "01"}


def test_language_cap():
    with pytest.raises(EnumerationCapError):
        language(SubshiftSpec.full(), 25)
    assert len(language(SubshiftSpec.full(), 3, cap=3)) == 8


@settings(max_examples=40)
@given(forbidden_sets, st.integers(1, 7))
def test_language_matches_brute_force(F, n):
    try:
        G = sft_to_graph(ForbiddenSet.of(*F))
    except EmptySubshiftError:
        assert oracles.sft_language(F, n) == set()
        return
    assert strs(language(G, n)) == oracles.sft_language(F, n)


@settings(max_examples=25)
@given(forbidden_sets)
def test_language_factorial_and_submultiplicative(F):
    try:
        G = sft_to_graph(ForbiddenSet.of(*F))
    except EmptySubshiftError:
        return
    L = {n: strs(language(G, n)) for n in range(1, 9)}
    for n in range(1, 8):
        assert {w[:n] for w in L[n + 1]} <= L[n]
        assert {w[1:] for w in L[n + 1]} <= L[n]
    for m in range(1, 5):
        for n in range(1, 5):
            assert len(L[m + n]) <= len(L[m]) * len(L[n])


def test_hereditary_sufficient_examples():
    assert is_hereditary_sufficient(ForbiddenSet.of("11"))
    assert not is_hereditary_sufficient(ForbiddenSet.of("00", "111"))
    assert is_hereditary_sufficient(ForbiddenSet.of())


def test_closure_graph_examples():
    gm = sft_to_graph(ForbiddenSet.of("11"))
    assert len(hereditary_closure_graph(gm).edges) == 4
    full = SubshiftSpec.full().graph()
    for n in range(1, 9):
        assert language(hereditary_closure_graph(full), n) == language(full, n)


@pytest.mark.parametrize("F", [("00", "111"), ("11",), ("000", "11011"), ("010",)])
def test_closure_graph_language_is_downward_closure(F):
    G = sft_to_graph(ForbiddenSet.of(*F))
    closure = hereditary_closure_graph(G)
    for n in range(1, 11):
        want = oracles.downward_closure(strs(language(G, n)))
        assert strs(language(closure, n)) == want


def test_closure_language_examples():
    assert strs(hereditary_closure_language([Block.from_str("11")])) == {"00", "01", "10", "11"}
    assert strs(hereditary_closure_language([Block.from_str("00")])) == {"00"}
    gm2 = [Block.from_str(s) for s in ("00", "01", "10")]
    assert strs(hereditary_closure_language(gm2)) == {"00", "01", "10"}


@given(st.lists(st.text("01", min_size=5, max_size=5), max_size=6), st.lists(st.text("01", min_size=5, max_size=5), max_size=6))
def test_closure_language_idempotent_and_monotone(a, b):
    A = [Block.from_str(s) for s in a]
    AB = A + [Block.from_str(s) for s in b]
    once = hereditary_closure_language(A)
    assert hereditary_closure_language(once) == once
    assert once <= hereditary_closure_language(AB)
    assert strs(once) == oracles.downward_closure(a)


def test_upgrade_examples():
    assert str(upgrade_embedding("101")) == "101"
    assert str(upgrade_embedding("100001")) == "101101"
    assert str(upgrade_embedding("10001")) == "10101"


def test_upgrade_rejects_words_outside_y():
    with pytest.raises(ValueError):
        upgrade_embedding("0111")
    with pytest.raises(ValueError):
        upgrade_embedding("10010")


@pytest.mark.parametrize("n", range(1, 13))
def test_upgrade_exhaustive_small(n):
    for y in language(SubshiftSpec.sft("111", "1001"), n):
        x = upgrade_embedding(y)
        assert x.length == n
        assert dominates(x, y)
        s = str(x)
        assert "00" not in s and "111" not in s, (str(y), s)


SPECS = [
    SubshiftSpec.sft("00", "111"),
    SubshiftSpec.sft(),
    SubshiftSpec.full(),
    SubshiftSpec.periodic("0011"),
    SubshiftSpec.sofic(LabeledGraph(2, ((0, 1, 1), (1, 0, 0), (1, 0, 1)))),
    SubshiftSpec.bfree([4, 9, 25], 1000),
    SubshiftSpec.sturmian(0.6180339887498949, 500, 0.25),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_spec_roundtrip(spec):
    assert parse_spec(dump_spec(spec)) == spec


def test_spec_parse_errors_carry_line_and_field():
    with pytest.raises(SpecParseError) as info:
        parse_spec("kind: sft\n# comment\nforbidden: 0a1\n")
    assert info.value.line == 3 and info.value.field == "forbidden"
    with pytest.raises(SpecParseError) as info:
        parse_spec("kind: banana\n")
    assert info.value.field == "kind"
    with pytest.raises(SpecParseError) as info:
        parse_spec("kind: sofic\nvertices: 2\nedge: 0 1\n")
    assert info.value.line == 3 and info.value.field == "edge"


def test_random_walk_stays_in_language():
    from subshift_gibbs.subshifts import random_walk

    G = sft_to_graph(ForbiddenSet.of("00", "111"))
    x = "".join(map(str, random_walk(G, 2000, random.Random(3))))
    assert "00" not in x and "111" not in x

import random

import pytest
from hypothesis import given, settings, strategies as st

import gen
from corpus import BOOKS_DATA, BOOKS_SCHEMA
from vcp import (
    BOTTOM,
    DOM,
    Atom,
    EMPTY_SET,
    NoSuchPath,
    ParseError,
    SetType,
    SetV,
    TupleType,
    TupleV,
    conforms,
    deep_equal,
    match_nodes,
    parse_path,
    parse_type,
    parse_value,
    print_path,
    print_type,
    print_value,
    resolve,
)
from vcp.values import value_key


def V(text):
    return parse_value(text)


def T(text):
    return parse_type(text)


# ---------------------------------------------------------------------------
# deep equality
# ---------------------------------------------------------------------------


def test_set_extensionality():
    assert deep_equal(V("{1,2}"), V("{2,1}"))


def test_differing_attribute_sets():
    assert not deep_equal(V("<A:1>"), V("<A:1,B:2>"))


def test_cardinality():
    assert not deep_equal(V("{}"), V("{<A:1>}"))


def test_cross_kind_comparisons_are_false():
    assert not deep_equal(V("1"), V("{1}"))
    assert not deep_equal(V("{}"), V("<>"))
    assert not deep_equal(V('"1"'), V("1"))


def test_mutual_membership_oracle():
    # sets compare as sets: membership both ways, against a naive check
    rng = random.Random(5)
    for _ in range(100):
        t = SetType(gen.gen_type(rng, 2))
        a, b = gen.gen_value(rng, t, 3), gen.gen_value(rng, t, 3)
        naive = all(any(deep_equal(m, n) for n in b.members) for m in a.members) and all(
            any(deep_equal(m, n) for n in a.members) for m in b.members
        )
        assert deep_equal(a, b) == naive


# ---------------------------------------------------------------------------
# conformance
# ---------------------------------------------------------------------------


def test_books_data_conforms():
    assert conforms(V(BOOKS_DATA), T(BOOKS_SCHEMA))


def test_empty_set_conforms_to_bottom_and_all_sets():
    assert conforms(V("{}"), BOTTOM)
    assert conforms(V("{}"), T("{dom}"))
    assert conforms(V("{}"), T("{{<A:dom>}}"))


def test_kind_mismatch():
    assert not conforms(Atom("x"), T("{dom}"))
    assert not conforms(V("{1}"), BOTTOM)
    assert not conforms(V("<A:1>"), T("<A:dom,B:dom>"))


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------


def test_resolve_books_isbn():
    assert resolve(T(BOOKS_SCHEMA), parse_path("books/*/isbn")) == DOM


def test_resolve_empty_path_is_identity():
    t = T(BOOKS_SCHEMA)
    assert resolve(t, ()) == t


def test_resolve_attr_under_set_node_fails():
    with pytest.raises(NoSuchPath):
        resolve(T(BOOKS_SCHEMA), parse_path("books/isbn"))


def test_resolve_below_bottom_fails():
    with pytest.raises(NoSuchPath):
        resolve(T("<A:{_}>"), parse_path("A/*"))


def test_match_nodes_fans_out():
    years = match_nodes(V(BOOKS_DATA), parse_path("books/*/year"))
    assert sorted(a.literal for a in years) == [1988, 2002]


def test_match_nodes_root():
    v = V(BOOKS_DATA)
    assert match_nodes(v, ()) == [v]


def test_match_nodes_author_names():
    # hand-walk: three author tuples, one name leaf each
    assert len(match_nodes(V(BOOKS_DATA), parse_path("authors/*/name"))) == 3


def test_matched_nodes_conform_to_resolved_type():
    from vcp.paths import iter_nodes

    rng = random.Random(11)
    for _ in range(100):
        t = gen.gen_type(rng, 3)
        v = gen.gen_value(rng, t, 3)
        for p, sub in iter_nodes(t):
            for node in match_nodes(v, p):
                assert conforms(node, sub)


def test_path_round_trip():
    for text in [".", "books/*/isbn", "*", "a/b/c"]:
        assert print_path(parse_path(text)) == text


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------


def test_parse_books_schema():
    t = T(BOOKS_SCHEMA)
    assert isinstance(t, TupleType) and t.names == ("authors", "books")
    assert print_type(t) == "<authors:{<isbn:dom,name:dom>},books:{<isbn:dom,title:dom,year:dom>}>"


def test_nullary_tuple_type():
    assert T("<>") == TupleType()


def test_bottom_type_text():
    assert print_type(T("{_}")) == "{_}"


def test_duplicate_members_canonicalize():
    assert print_value(V("{<A:1>,<A:1>}")) == "{<A:1>}"


def test_string_escapes_round_trip():
    v = Atom('say "hi"\n\t\\done')
    assert parse_value(print_value(v)) == v


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as err:
        parse_type("<a:dom,\n  b:>")
    assert err.value.line == 2


@pytest.mark.parametrize("bad", ["", "<a:dom", "{dom", "<a:dom,a:dom>", "dom dom"])
def test_rejects_malformed_types(bad):
    with pytest.raises(ParseError):
        parse_type(bad)


@pytest.mark.parametrize("bad", ["", "{1,}", "1 2", "<a:1,a:2>", '"unterminated'])
def test_rejects_malformed_values(bad):
    with pytest.raises(ParseError):
        parse_value(bad)


# ---------------------------------------------------------------------------
# order and canonical form
# ---------------------------------------------------------------------------

values_strategy = st.deferred(
    lambda: st.one_of(
        st.integers(-5, 5).map(Atom),
        st.text(alphabet="abc\"\\", max_size=3).map(Atom),
        st.lists(values_strategy, max_size=3).map(lambda ms: SetV(tuple(ms))),
        st.dictionaries(st.sampled_from("pqr"), values_strategy, max_size=3).map(
            lambda d: TupleV(tuple(d.items()))
        ),
    )
)


@settings(max_examples=300, deadline=None)
@given(values_strategy)
def test_value_text_round_trip(v):
    assert parse_value(print_value(v)) == v


@settings(max_examples=200, deadline=None)
@given(values_strategy, values_strategy)
def test_order_consistent_with_equality(a, b):
    assert (value_key(a) == value_key(b)) == deep_equal(a, b)


@settings(max_examples=200, deadline=None)
@given(values_strategy)
def test_canonicalization_idempotent(v):
    rebuilt = parse_value(print_value(v))
    assert print_value(rebuilt) == print_value(v)


def test_int_before_str_order():
    assert print_value(SetV((Atom("a"), Atom(3)))) == '{3,"a"}'


def test_type_text_round_trip_random():
    rng = random.Random(3)
    for _ in range(200):
        t = gen.gen_type(rng)
        assert parse_type(print_type(t)) == t

import itertools

import pytest
import hypothesis.strategies as st
from hypothesis import given

from soficert.permutations import compose, inverse
from soficert.stallings import (
    CoreTooLargeError,
    CosetTable,
    InseparableError,
    action_permutation,
    contains,
    core_graph,
    coset_of,
    hall_completion,
    image_group,
    left_coset_of,
    normal_core,
    schreier_representative,
)
from soficert.words import Word, identity, invert, multiply, parse_word


def w2(t):
    return parse_word(t, 2)


# ---------------------------------------------------------------------------
# independent membership oracle: breadth-first products of the generators,
# no graphs involved.  Sound and, up to the depth bound, complete for the
# short words we freeze below.


def naive_members(gen_texts, rank, depth):
    gens = [parse_word(t, rank) for t in gen_texts]
    factors = gens + [invert(g) for g in gens]
    seen = {identity(rank).letters}
    frontier = [identity(rank)]
    for _ in range(depth):
        new = []
        for u in frontier:
            for f in factors:
                v = multiply(u, f)
                if v.letters not in seen:
                    seen.add(v.letters)
                    new.append(v)
        frontier = new
    return seen


def test_membership_against_product_oracle():
    members = naive_members(["aa", "b"], 2, 6)
    graph = core_graph([w2("aa"), w2("b")], 2)
    for text in ("1", "aa", "b", "aabb", "aaB", "baa", "aabaa"):
        assert (parse_word(text, 2).letters in members) == contains(graph, w2(text))
    # short non-members: oracle at depth 6 can't produce them and the graph agrees
    for text in ("a", "ab", "ba", "abba"):
        assert parse_word(text, 2).letters not in members
        assert not contains(graph, w2(text))


def test_contains_frozen():
    graph = core_graph([w2("aa"), w2("b")], 2)
    assert contains(graph, w2("aabaa"))
    assert contains(graph, w2("bbbb"))
    assert not contains(graph, w2("abba"))  # b reads a loop only at the basepoint
    assert not contains(graph, w2("a"))


def shape(graph):
    return graph.vertex_count, tuple(sorted(graph.edges))


def test_core_graph_frozen_shapes():
    assert shape(core_graph([w2("aa"), w2("b")], 2)) == (2, ((0, 1, 1), (0, 2, 0), (1, 1, 0)))
    assert shape(core_graph([w2("a")], 2)) == (1, ((0, 1, 0),))
    assert shape(core_graph([], 2)) == (1, ())
    assert shape(core_graph([w2("abA")], 2)) == (2, ((0, 1, 1), (1, 2, 1)))
    assert shape(core_graph([w2("ab"), w2("ba")], 2)) == (
        3,
        ((0, 1, 1), (0, 2, 2), (1, 2, 0), (2, 1, 0)),
    )


@st.composite
def generator_sets(draw, rank=2):
    n = draw(st.integers(min_value=0, max_value=3))
    texts = st.text(alphabet="abAB"[: 2 * rank], min_size=1, max_size=5)
    gens = []
    for _ in range(n):
        word = parse_word(draw(texts), rank)
        if not word.is_identity:
            gens.append(word)
    return gens


@given(generator_sets())
def test_core_graph_order_independent(gens):
    forward = core_graph(gens, 2)
    assert core_graph(list(reversed(gens)), 2).dump() == forward.dump()


@given(generator_sets())
def test_core_graph_absorbs_redundant_generator(gens):
    if len(gens) < 2:
        return
    redundant = multiply(gens[0], invert(gens[1]))
    assert core_graph(gens + [redundant], 2).dump() == core_graph(gens, 2).dump()


@given(generator_sets(), st.integers(min_value=0, max_value=20))
def test_generated_elements_are_members(gens, pick):
    if not gens:
        return
    graph = core_graph(gens, 2)
    factors = gens + [invert(g) for g in gens]
    word = identity(2)
    for i in range(3):
        word = multiply(word, factors[(pick + i) % len(factors)])
    assert contains(graph, word)


# ---------------------------------------------------------------------------
# Hall completions


def test_hall_frozen_tables():
    t = hall_completion(core_graph([w2("a")], 2), [w2("b")])
    assert (t.size, t.images) == (2, ((0, 1), (1, 0)))
    t = hall_completion(core_graph([], 2), [w2("a")])
    assert (t.size, t.images) == (2, ((1, 0), (0, 1)))
    t = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    assert (t.size, t.images) == (3, ((0, 1, 2), (1, 2, 0)))


def test_hall_inseparable():
    with pytest.raises(InseparableError):
        hall_completion(core_graph([w2("a")], 2), [w2("a")])
    with pytest.raises(InseparableError):
        hall_completion(core_graph([w2("aa"), w2("b")], 2), [w2("baab")])
    with pytest.raises(InseparableError):
        hall_completion(core_graph([], 2), [w2("aA")])  # identity is in every subgroup


@given(generator_sets(), st.lists(st.text(alphabet="abAB", min_size=1, max_size=4), max_size=3))
def test_hall_postconditions(gens, avoid_texts):
    graph = core_graph(gens, 2)
    avoid = []
    for t in avoid_texts:
        word = parse_word(t, 2)
        if not word.is_identity and not contains(graph, word):
            avoid.append(word)
    table = hall_completion(graph, avoid)
    # H <= K: subgroup generators close up at the base coset
    for g in gens:
        assert coset_of(table, g) == 0
    # K avoids the prescribed words: each one leaves the base coset
    for word in avoid:
        assert coset_of(table, word) != 0


def test_left_coset_label_is_inverse_walk():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    for t in ("", "a", "b", "ab", "Ba", "bab"):
        assert left_coset_of(table, w2(t)) == coset_of(table, invert(w2(t)))


def test_left_labels_separate_left_cosets():
    # u, v name the same left coset of K iff u^-1 v is in K
    table = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    words = [w2(t) for t in ("", "a", "b", "ab", "ba", "bb", "aB")]
    for u in words:
        for v in words:
            same = coset_of(table, multiply(invert(u), v)) == 0
            assert (left_coset_of(table, u) == left_coset_of(table, v)) == same


# ---------------------------------------------------------------------------
# coset tables, Schreier representatives, normal core


def test_schreier_representatives_shortlex_minimal():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    # oracle: enumerate every word of length <= 4 and keep the shortlex-least
    # one landing on each coset
    letters = [1, 2, -1, -2]
    best = {}
    frontier = [identity(2)]
    for _ in range(4):
        nxt = []
        for u in frontier:
            for l in letters:
                v = multiply(u, Word((l,), 2))
                if len(v) == len(u) + 1:
                    nxt.append(v)
        frontier = nxt
        for v in nxt:
            c = coset_of(table, v)
            if c not in best or v.shortlex_key() < best[c].shortlex_key():
                best[c] = v
    best[0] = identity(2)
    for c in range(table.size):
        rep = schreier_representative(table, c)
        assert coset_of(table, rep) == c
        assert rep.shortlex_key() == best[c].shortlex_key()


def test_schreier_frozen():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b")])
    assert schreier_representative(table, 1).text() == "b"


def test_walk_permutation_antihomomorphism():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    u, v = w2("ab"), w2("ba")
    walk = table.walk_permutation
    assert walk(multiply(u, v)) == compose(walk(v), walk(u))
    # so the inverse-walk is a genuine homomorphism
    phi = lambda g: action_permutation(table, g)
    assert phi(multiply(u, v)) == compose(phi(u), phi(v))


def test_image_group_and_cap():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b"), w2("B")])
    assert len(image_group(table, 10**6)) == 3
    with pytest.raises(CoreTooLargeError):
        image_group(table, 2)


def test_normal_core_frozen():
    table = hall_completion(core_graph([w2("a")], 2), [w2("b")])
    core = normal_core(table, 10**6)
    assert (core.size, core.images) == (2, ((0, 1), (1, 0)))


def test_normal_core_is_normal_and_contained():
    # the core's point group is the image group acting on itself: every
    # generator permutation is fixed-point-free or the identity (regular)
    table = CosetTable(2, 3, ((1, 2, 0), (0, 2, 1)))
    core = normal_core(table, 10**6)
    assert core.size == len(image_group(table, 10**6))
    for img in core.images:
        moved = [x for x in range(core.size) if img[x] != x]
        assert moved == [] or len(moved) == core.size
    # membership in the core implies membership in the subgroup
    for t in ("ab", "ba", "aab", "bb", "abab", "aaa"):
        word = w2(t)
        if coset_of(core, word) == 0:
            assert coset_of(table, word) == 0


def test_coset_table_validates():
    with pytest.raises(ValueError):
        CosetTable(2, 3, ((0, 0, 1), (0, 1, 2)))
    with pytest.raises(ValueError):
        CosetTable(2, 3, ((0, 1, 2),))

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_reduced_words, cayley_bfs
from qgkdim.weyl import (
    MIN_RANK,
    DecompositionError,
    RankError,
    SignedPerm,
    WeylFamily,
    coset_reps,
    is_reduced,
    longest_coset_rep,
    longest_element,
    longest_parts,
    parts_decompose,
    weyl_group,
    word_normalize,
)

SMALL = [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3), ("D", 2), ("D", 3), ("D", 4)]


@st.composite
def group_and_word(draw, max_rank=3, max_len=8):
    family = draw(st.sampled_from("ACD"))
    n = draw(st.integers(MIN_RANK[family], max_rank))
    word = draw(st.lists(st.integers(1, n), max_size=max_len))
    return weyl_group(family, n), tuple(word)


@pytest.mark.parametrize("family,n", SMALL)
def test_lengths_match_cayley_graph_distance(family, n):
    # [DERIVED] BFS on explicit reflection matrices
    g = weyl_group(family, n)
    bfs = cayley_bfs(family, n)
    assert len(bfs) == g.order()
    for word in bfs.values():
        assert g.length(g.element(word)) == len(word)
    assert max(len(w) for w in bfs.values()) == len(longest_element(g))


@pytest.mark.parametrize("family,n", [("A", 2), ("C", 2), ("D", 3)])
def test_reduced_words_match_brute_force(family, n):
    g = weyl_group(family, n)
    ours = [
        w
        for length in range(1, 5)
        for w in itertools.product(range(1, n + 1), repeat=length)
        if is_reduced(g, w)
    ]
    assert ours == brute_reduced_words(family, n, 4)


@pytest.mark.parametrize("family,n,order", [("A", 3, 24), ("C", 3, 48), ("D", 4, 192), ("A", 4, 120)])
def test_orders(family, n, order):
    assert weyl_group(family, n).order() == order == WeylFamily(family, n).order_formula


@pytest.mark.parametrize(
    "family,n,length", [("A", 1, 1), ("A", 4, 10), ("C", 2, 4), ("C", 3, 9), ("D", 2, 2), ("D", 4, 12)]
)
def test_longest_length(family, n, length):
    # [verified closed forms] n(n+1)/2, n^2, n^2 - n
    assert len(longest_element(weyl_group(family, n))) == length == WeylFamily(family, n).longest_length_formula


def test_manifold_dims():
    assert WeylFamily("A", 2).manifold_dim == 8
    assert WeylFamily("C", 2).manifold_dim == 10
    assert WeylFamily("D", 3).manifold_dim == 15


@pytest.mark.parametrize("family,n", [("E", 2), ("A", 0), ("C", 1), ("D", 1)])
def test_rank_errors(family, n):
    with pytest.raises(RankError):
        WeylFamily(family, n)


def test_letter_out_of_range():
    with pytest.raises(ValueError):
        weyl_group("A", 2).element([3])


def test_signed_perm_validation():
    with pytest.raises(ValueError):
        SignedPerm((1, 1))


@pytest.mark.parametrize(
    "family,n,parts",
    [
        ("A", 1, [(1,)]),
        ("A", 3, [(1,), (2, 1), (3, 2, 1)]),
        ("C", 2, [(2,), (1, 2, 1)]),
        ("D", 3, [(3,), (2,), (1, 2, 3, 1)]),
        ("D", 4, [(4,), (3,), (2, 3, 4, 2), (1, 2, 3, 4, 2, 1)]),
    ],
)
def test_longest_parts(family, n, parts):
    P = longest_parts(weyl_group(family, n))
    assert [P.part(r) for r in range(1, n + 1)] == parts


@pytest.mark.parametrize("family,n", SMALL)
def test_parts_multiply_to_longest(family, n):
    g = weyl_group(family, n)
    P = longest_parts(g)
    assert g.element(P.letters) == g.element(longest_element(g).letters)
    assert is_reduced(g, P.letters)


def test_parts_of_a_single_letter():
    P = parts_decompose(weyl_group("A", 2), (2,))
    assert P.part(1) == () and P.part(2) == (2,)


@pytest.mark.parametrize("family,n", [("A", 2), ("A", 3), ("A", 4), ("C", 2), ("C", 3), ("D", 2)])
def test_every_element_has_parts(family, n):
    g = weyl_group(family, n)
    for w in g.elements():
        P = parts_decompose(g, g.reduced_word(w))
        assert g.element(P.letters) == w
        assert P.length == g.length(w)


@pytest.mark.parametrize("family,n,missing", [("D", 3, 4), ("D", 4, 52)])
def test_type_d_templates_miss_some_elements(family, n, missing):
    # the printed D templates never skip s_(n-1); s_1 s_3 in D_3 is the smallest miss
    g = weyl_group(family, n)
    bad = 0
    for w in g.elements():
        try:
            parts_decompose(g, g.reduced_word(w))
        except DecompositionError:
            bad += 1
    assert bad == missing
    if n == 3:
        with pytest.raises(DecompositionError):
            parts_decompose(g, (1, 3))


@given(group_and_word())
def test_length_changes_by_one(gw):
    g, word = gw
    w = g.element(word)
    for i in range(1, g.n + 1):
        assert abs(g.length(w * g.generators[i - 1]) - g.length(w)) == 1
        assert abs(g.length(g.generators[i - 1] * w) - g.length(w)) == 1


@given(group_and_word())
def test_length_of_inverse(gw):
    g, word = gw
    w = g.element(word)
    assert g.length(w) == g.length(w.inverse())
    assert g.length(w) <= len(word)


@given(group_and_word())
def test_normal_form_roundtrip(gw):
    g, word = gw
    w = g.element(word)
    red = word_normalize(g, word)
    assert g.element(red.letters) == w
    assert len(red) == g.length(w)
    assert is_reduced(g, red.letters)


@given(group_and_word())
def test_descent_definition(gw):
    g, word = gw
    w = g.element(word)
    for i in range(1, g.n + 1):
        assert g.is_left_descent(w, i) == (g.length(g.generators[i - 1] * w) < g.length(w))
        assert g.is_right_descent(w, i) == (g.length(w * g.generators[i - 1]) < g.length(w))


@given(group_and_word())
def test_membership(gw):
    g, word = gw
    assert g.contains(g.element(word))


@pytest.mark.parametrize("family,n", [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3), ("D", 2), ("D", 3)])
def test_longest_coset_rep_length(family, n):
    # l(w^S) = l(w_0) - l(w_S) for every subset S
    g = weyl_group(family, n)
    total = len(longest_element(g))
    for size in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), size):
            wS = max(g.length(w) for w in g.parabolic(S))
            rep = longest_coset_rep(g, S)
            assert len(rep) == total - wS
            w = g.element(rep.letters)
            assert not any(g.is_left_descent(w, i) for i in S)
            assert max(g.length(x) for x in coset_reps(g, S)) == len(rep)


def test_coset_rep_subset_checked():
    with pytest.raises(ValueError):
        longest_coset_rep(weyl_group("A", 2), {3})


@pytest.mark.parametrize("family,n", SMALL + [("A", 4), ("C", 4)])
def test_longest_element_is_an_involution(family, n):
    g = weyl_group(family, n)
    w0 = g.element(longest_element(g).letters)
    assert (w0 * w0).is_identity()
    assert all(g.is_left_descent(w0, i) for i in range(1, n + 1))


@pytest.mark.parametrize("family,n", [("A", 2), ("A", 3), ("C", 2), ("C", 3), ("D", 3)])
def test_coset_counting(family, n):
    g = weyl_group(family, n)
    for size in range(n + 1):
        for S in itertools.combinations(range(1, n + 1), size):
            assert len(coset_reps(g, S)) * len(g.parabolic(S)) == g.order()


@given(group_and_word(max_rank=4, max_len=6), st.lists(st.integers(1, 2), max_size=6))
def test_multiplication_is_concatenation(gw, extra):
    g, u = gw
    v = tuple((x - 1) % g.n + 1 for x in extra)
    assert g.element(u + v) == g.element(u) * g.element(v)


def test_normalize_examples():
    assert word_normalize(weyl_group("A", 2), [1, 1]).letters == ()
    assert len(word_normalize(weyl_group("A", 2), [1, 2, 1])) == 3
    assert len(word_normalize(weyl_group("C", 2), [2, 1, 2, 1])) == 4
    assert len(longest_coset_rep(weyl_group("A", 2), {1})) == 2
    assert len(longest_coset_rep(weyl_group("C", 2), {2})) == 3

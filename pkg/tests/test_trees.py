from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from ainfty.trees import (ROOT_EDGE, X, TreeError, TreeLabelling, at, bubble, contract, edges,
                          count_stable_trees, enumerate_stable_trees, evaluate_tree, expansions,
                          format_tree, interior_edges, is_stable, leaf_slots, max_arity, n_external,
                          n_internal, n_vertices, parse_tree, stable_expansions, subdivide, vertices)


# ---------- brute-force oracle ----------

def _bracketings(word):
    """All plane trees with leaves ``word`` (left to right), every vertex of arity >= 2."""
    if len(word) == 1:
        return [word[0]]
    out = []
    n = len(word)
    # split the word into r >= 2 consecutive nonempty blocks
    for r in range(2, n + 1):
        for cuts in combinations(range(1, n), r - 1):
            bounds = (0,) + cuts + (n,)
            blocks = [word[bounds[i]:bounds[i + 1]] for i in range(r)]
            subs = [_bracketings(b) for b in blocks]
            out.extend(_products(subs))
    return out


def _products(lists):
    if not lists:
        return [()]
    return [(a,) + rest for a in lists[0] for rest in _products(lists[1:])]


def brute_force_trees(ext, internal):
    """Stable trees with exactly ext external and ``internal`` internal leaves."""
    n = ext + internal
    if n == 0:
        return set()
    out = set()
    for pos in combinations(range(n), internal):
        word = tuple(() if i in pos else X for i in range(n))
        for t in _bracketings(word):
            if t == X:
                continue            # the bare edge is not stable
            out.add(t)
    return out


SCHROEDER = [0, 1, 1, 3, 11, 45, 197, 903]      # plane trees with n leaves, vertices of arity >= 2


def test_brute_force_oracle_counts():
    for n in range(1, 8):
        assert len(_bracketings(tuple([X] * n))) == SCHROEDER[n]


@pytest.mark.parametrize("ext", range(6))
@pytest.mark.parametrize("internal", range(3))
def test_enumeration_matches_brute_force(ext, internal):
    got = enumerate_stable_trees(ext, internal)
    exact = [t for t in got if n_internal(t) == internal]
    assert set(exact) == brute_force_trees(ext, internal)
    assert len(exact) == len(set(exact))
    n = ext + internal
    formula = comb(n, internal) * SCHROEDER[n] if n >= 2 else (1 if (ext, internal) == (0, 1) else 0)
    assert len(exact) == formula


def test_cumulative_totals():
    assert [count_stable_trees(k, 2) for k in range(6)] == [2, 11, 76, 497, 3191, 20190]
    assert count_stable_trees(3, 0) == 3
    assert count_stable_trees(4, 0) == 11


@pytest.mark.parametrize("amax", [2, 3])
def test_max_arity_filter(amax):
    full = enumerate_stable_trees(4, 1)
    assert enumerate_stable_trees(4, 1, amax) == [t for t in full if max_arity(t) <= amax]


def test_binary_trees_are_catalan():
    assert [count_stable_trees(n, 0, 2) for n in range(2, 7)] == [1, 2, 5, 14, 42]


# ---------- literals ----------

def test_literal_round_trip():
    for s in ["(x x)", "(x x (o x))", "((x x) o)", "x", "()"]:
        assert format_tree(parse_tree(s)) == s
    assert parse_tree("(x (o x))") == (X, ((), X))


@pytest.mark.parametrize("bad", ["", "(x x", "(x x))", "(x y)", "x x"])
def test_bad_literals(bad):
    with pytest.raises(TreeError):
        parse_tree(bad)


@given(st.integers(0, 4), st.integers(0, 2), st.data())
def test_format_parse_inverse(ext, internal, data):
    trees = enumerate_stable_trees(ext, internal)
    if not trees:
        return
    t = data.draw(st.sampled_from(trees))
    assert parse_tree(format_tree(t)) == t
    assert n_external(t) == ext
    assert is_stable(t)


# ---------- paths and moves ----------

def test_statistics():
    t = parse_tree("(x (o x) (x x))")
    assert (n_external(t), n_internal(t), n_vertices(t)) == (4, 1, 4)
    assert vertices(t) == [(), (1,), (1, 0), (2,)]
    assert edges(t) == [(0,), (1,), (1, 0), (1, 1), (2,), (2, 0), (2, 1)]
    assert interior_edges(t) == [(1,), (1, 0), (2,)]
    assert leaf_slots(t) == [(0,), (1, 1), (2, 0), (2, 1)]
    assert at(t, (1, 0)) == ()


def test_subdivide_and_bubble():
    t = parse_tree("(x x)")
    t1, w = subdivide(t, (1,))
    assert format_tree(t1) == "(x (x))" and w == (1,)
    assert subdivide(t, ROOT_EDGE) == ((t,), ())
    tb, w, leaf = bubble(t, (0,), "left")
    assert format_tree(tb) == "((o x) x)" and leaf == (0, 0)
    tb, w, leaf = bubble(t, ROOT_EDGE, "right")
    assert format_tree(tb) == "((x x) o)" and leaf == (1,)


def test_contract():
    t = parse_tree("(x (x x) x)")
    assert format_tree(contract(t, (1,))) == "(x x x x)"
    with pytest.raises(TreeError):
        contract(t, (0,))
    with pytest.raises(TreeError):
        contract(t, ROOT_EDGE)


@given(st.integers(1, 4), st.integers(0, 1), st.data())
def test_expansions_contract_back(ext, internal, data):
    trees = enumerate_stable_trees(ext, internal)
    if not trees:
        return
    t = data.draw(st.sampled_from(trees))
    for v in vertices(t):
        if at(t, v) == ():
            continue
        for tt, vd, vu in expansions(t, v):
            assert contract(tt, vu) == t
        for tt, vd, vu in stable_expansions(t, v):
            assert is_stable(tt)


@given(st.integers(2, 5), st.data())
def test_stable_expansion_count(ext, data):
    # at a vertex of arity n the stable expansions move a run of 2 .. n-1 consecutive children
    # up, or a run of length 0 (a new internal leaf, n + 1 positions)
    t = data.draw(st.sampled_from(enumerate_stable_trees(ext, 0)))
    for v in vertices(t):
        n = len(at(t, v))
        runs = stable_expansions(t, v)
        assert len(runs) == (n * (n + 1) // 2 - n - 1) + (n + 1)
        assert sum(1 for tt, _, _ in runs if n_internal(tt) == 1) == n + 1


# ---------- labelled evaluation ----------

def test_evaluate_tree_composes():
    ops = {"m": lambda args: ("m", tuple(args)), "h": lambda v: ("h", v),
           "ab": lambda v: ("ab", v), "alpha": lambda v: ("al", v)}
    t = parse_tree("(x (x x))")
    got = evaluate_tree(t, TreeLabelling.hm(), ["a", "b", "c"], ops)
    assert got == ("m", (("al", "a"), ("h", ("m", (("al", "b"), ("al", "c"))))))
    got = evaluate_tree(t, TreeLabelling.hm().broken((1,), "abm"), ["a", "b", "c"], ops)
    assert got[1][1][0] == "ab"
    with pytest.raises(TreeError):
        evaluate_tree(t, TreeLabelling.plain(), ["a"], ops)

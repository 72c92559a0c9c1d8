import random
from collections import Counter
from fractions import Fraction

import pytest

from ainfty.tree_relations import (associativity_residual, associativity_terms,
                                   boundary_of_cell_residual, cell_incidence_residual,
                                   cell_incidence_term_sets, contraction_matching,
                                   fundamental_residual, homotopy_relation_residual,
                                   homotopy_relation_terms, tree_ops, _eval)
from ainfty.linear import viadd
from ainfty.trees import (ROOT_EDGE, enumerate_stable_trees, interior_edges, parse_tree,
                          vertices)

from fixtures import basis_inputs, sdr_instances

DATA = sdr_instances(3, seed=11)


def _cases(max_k=3, max_int=2):
    rng = random.Random(5)
    for data in DATA:
        for k in range(1, max_k + 1):
            yield data, k, basis_inputs(rng, data.A_module, k)


# ---------- term bookkeeping ----------

def test_homotopy_relation_has_six_terms():
    t = parse_tree("(x (x x))")
    terms = homotopy_relation_terms(t, (1,))
    assert len(terms) == 6
    with pytest.raises(ValueError):
        homotopy_relation_terms(t, (0,))
    with pytest.raises(ValueError):
        homotopy_relation_terms(t, ROOT_EDGE)


def test_associativity_terms_are_all_expansions():
    t = parse_tree("(x x x)")
    # runs of length 0..3 at a ternary vertex: 4 + 3 + 2 + 1
    assert len(associativity_terms(t, ())) == 10


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_cell_incidence_multisets_agree(k, n):
    red, rhs = cell_incidence_term_sets(k, n)
    assert red == rhs


@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_contraction_bijections(k, n):
    st, exp, unst, bub = contraction_matching(k, n)
    assert st == exp
    assert unst == bub


# ---------- values on random SDR data ----------

def test_homotopy_relation_vanishes():
    for data, k, xs in _cases():
        for t in enumerate_stable_trees(k, 2, 4):
            for e in interior_edges(t):
                assert not homotopy_relation_residual(data, t, e, xs)


def test_associativity_vanishes():
    for data, k, xs in _cases():
        for t in enumerate_stable_trees(k, 2, 4):
            for v in vertices(t):
                assert not associativity_residual(data, t, v, xs)


def test_boundary_of_cell_vanishes():
    for data, k, xs in _cases():
        for t in enumerate_stable_trees(k, 2, 4):
            assert not boundary_of_cell_residual(data, t, xs)


def test_cell_incidence_vanishes():
    for data, k, xs in _cases():
        assert not cell_incidence_residual(data, k, 2, xs)


def test_fundamental_relation_vanishes():
    for data in sdr_instances(3, seed=3, min_val=Fraction(1)):
        rng = random.Random(2)
        for k in (1, 2, 3):
            xs = basis_inputs(rng, data.A_module, k)
            assert not fundamental_residual(data, k, 2, xs)


def test_homotopy_relation_terms_are_not_individually_zero():
    # negative control: dropping the alpha beta term leaves a nonzero residual somewhere
    hits = 0
    for data, k, xs in _cases(max_k=2):
        ops = tree_ops(data)
        for t in enumerate_stable_trees(k, 1, 4):
            for e in interior_edges(t):
                out = {}
                for i, (tt, tags) in enumerate(homotopy_relation_terms(t, e)):
                    if i != 2:
                        viadd(out, _eval(tt, tags, xs, ops))
                hits += bool(out)
    assert hits > 0

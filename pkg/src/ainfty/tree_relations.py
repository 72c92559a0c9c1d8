"""Tree-level identities behind the transfer construction (characteristic 2).

Every function evaluates labelled trees on SDR data and returns the residual
vector of an identity that should vanish.  Labellings start from the h.m
labelling (root m, other vertices h o m, inputs through alpha) and change a
few vertices:

    "id"   the vertex applies m only (an internal leaf labelled id is m^0)
    "abm"  alpha beta o m
    "hm"   h o m

Names follow the colour coding used for the boundary of a cell: purple is
m^1 on the whole tree, yellow the stable expansions, orange the bubblings,
red and green the relabelled vertices, blue the leaves fed through d_A.
"""

from collections import Counter

from .linear import viadd
from .trees import (ROOT_EDGE, X, TreeLabelling, bubble, edges, enumerate_stable_trees,
                    evaluate_tree, expansions, format_tree, interior_edges, is_stable, n_internal,
                    stable_expansions, subdivide, vertices, contract, at)


def tree_ops(data):
    B = data.B
    ab = data.alpha @ data.beta

    def m(args):
        k = len(args)
        if not B.has(k):
            return {}
        return B.m(k).apply(args)
    return {"m": m, "h": data.h, "ab": ab, "alpha": data.alpha}


def hm_labels(tags=None):
    return TreeLabelling(tags or {}, leaf="alpha")


def _eval(t, tags, inputs, ops):
    return evaluate_tree(t, hm_labels(tags), inputs, ops)


def _sum(vecs):
    out = {}
    for v in vecs:
        viadd(out, v)
    return out


def phi(t, inputs, ops):
    return _eval(t, {}, inputs, ops)


# ---------- homotopy relation on an edge ----------

def homotopy_relation_terms(t, e):
    """The six labelled trees of the homotopy relation on the interior edge e."""
    if e == ROOT_EDGE or at(t, e) == X:
        raise ValueError("the homotopy relation lives on interior edges")
    t1, w = subdivide(t, e)
    below = w + (0,)
    terms = [(t1, {w: "id", below: "hm"}),        # m^1 h y
             (t1, {w: "hm", below: "id"}),        # h m^1 y
             (t, {e: "abm"}),                     # alpha beta y
             (t, {e: "id"})]                      # y
    for side in ("left", "right"):
        tb, _, leaf = bubble(t, e, side)
        terms.append((tb, {leaf: "id"}))          # h m^2(m^0, h y), h m^2(h y, m^0)
    return terms


def homotopy_relation_residual(data, t, e, inputs):
    ops = tree_ops(data)
    return _sum(_eval(tt, tags, inputs, ops) for tt, tags in homotopy_relation_terms(t, e))


# ---------- associativity at a vertex ----------

def associativity_terms(t, v):
    return [(tt, {vu: "id"}) for tt, vd, vu in expansions(t, v)]


def associativity_residual(data, t, v, inputs):
    ops = tree_ops(data)
    return _sum(_eval(tt, tags, inputs, ops) for tt, tags in associativity_terms(t, v))


# ---------- boundary of a cell ----------

def yellow_terms(t):
    out = []
    for v in vertices(t):
        for tt, vd, vu in stable_expansions(t, v):
            out.append((tt, {vu: "id"}))
    return out


def orange_terms(t, include_root=False):
    out = []
    es = list(edges(t)) if t != X else []
    if include_root:
        es = es + [ROOT_EDGE]
    for e in es:
        for side in ("left", "right"):
            tb, w, leaf = bubble(t, e, side)
            out.append((tb, {leaf: "id"}))
    return out


def red_terms(t):
    return [(t, {v: "id"}) for v in vertices(t) if v != ()]


def green_terms(t):
    return [(t, {v: "abm"}) for v in vertices(t) if v != ()]


def blue_value(data, t, inputs, ops):
    out = {}
    for i in range(len(inputs)):
        xs = list(inputs)
        xs[i] = data.d_A(xs[i])
        viadd(out, phi(t, xs, ops))
    return out


def boundary_of_cell_residual(data, t, inputs):
    """m^1 phi(T) minus (yellow + orange + red + green + blue)."""
    ops = tree_ops(data)
    out = data.B.m(1).apply([phi(t, inputs, ops)])
    for tt, tags in yellow_terms(t) + orange_terms(t) + red_terms(t) + green_terms(t):
        viadd(out, _eval(tt, tags, inputs, ops))
    viadd(out, blue_value(data, t, inputs, ops))
    return out


# ---------- cell incidence ----------

def _canon(t, tags):
    return (format_tree(t), tuple(sorted((p, str(g)) for p, g in tags.items())))


def _incidence_terms(k, n, max_arity=None):
    """Red terms and yellow + orange terms whose trees have <= n internal leaves.

    Red runs over stable trees with k inputs, yellow over their stable
    expansions and orange (all edges, root edge included) over stable trees
    and the edge tree with one internal leaf fewer.
    """
    big = enumerate_stable_trees(k, n, max_arity)
    small = enumerate_stable_trees(k, n - 1, max_arity) if n >= 1 else []
    if k == 1 and n >= 1:
        small = small + [X]
    red = [tt for t in big for tt in red_terms(t)]
    rhs = [tt for t in big for tt in yellow_terms(t) if n_internal(tt[0]) <= n]
    rhs += [tt for t in small for tt in orange_terms(t, include_root=True)]
    return red, rhs


def cell_incidence_term_sets(k, n, max_arity=None):
    """(red terms, yellow + orange terms) as multisets of labelled trees."""
    red, rhs = _incidence_terms(k, n, max_arity)
    return Counter(_canon(*tt) for tt in red), Counter(_canon(*tt) for tt in rhs)


def cell_incidence_residual(data, k, n, inputs):
    """Value of sum red - (sum yellow + sum orange) over the same range of trees."""
    ops = tree_ops(data)
    red, rhs = _incidence_terms(k, n)
    return _sum(_eval(tt, tags, inputs, ops) for tt, tags in red + rhs)


def contraction_matching(k, n, max_arity=None):
    """Pairs (T', e) with T' stable, e an interior edge, sorted by whether T'/e is stable.

    Returns (stable contractions, stable expansions, unstable contractions,
    bubblings) as Counters of (tree literal, edge path); the first two and
    the last two should agree.  All trees have <= n internal leaves.
    """
    trees = enumerate_stable_trees(k, n, max_arity)
    st, unst = Counter(), Counter()
    for t in trees:
        for e in interior_edges(t):
            c = contract(t, e)
            (st if is_stable(c) else unst)[(format_tree(t), e)] += 1
    exp = Counter()
    for t in trees:
        for v in vertices(t):
            for tt, vd, vu in stable_expansions(t, v):
                if n_internal(tt) <= n:
                    exp[(format_tree(tt), vu)] += 1
    bub = Counter()
    small = enumerate_stable_trees(k, n - 1, max_arity) if n >= 1 else []
    if k == 1 and n >= 1:
        small = small + [X]
    for t in small:
        es = (list(edges(t)) if t != X else []) + [ROOT_EDGE]
        for e in es:
            for side in ("left", "right"):
                tb, w, leaf = bubble(t, e, side)
                bub[(format_tree(tb), leaf)] += 1
    return st, exp, unst, bub


# ---------- fundamental relation ----------

def fundamental_residual(data, k, n, inputs):
    """sum_T (purple + green + blue) + sum_T m^2(m^0, h phi(T)) + m^2(h phi(T), m^0).

    T runs over stable trees with k inputs and <= n internal leaves; the
    bubbling sum also includes the edge tree (h phi := alpha there).  The
    residual vanishes modulo valuation (n + 1) val(m^0).
    """
    ops = tree_ops(data)
    trees = enumerate_stable_trees(k, n, None)
    out = {}
    for t in trees:
        viadd(out, data.B.m(1).apply([phi(t, inputs, ops)]))
        for tt, tags in green_terms(t):
            viadd(out, _eval(tt, tags, inputs, ops))
        viadd(out, blue_value(data, t, inputs, ops))
    side = list(trees) + ([X] if k == 1 else [])
    for t in side:
        for s in ("left", "right"):
            tb, w, leaf = bubble(t, ROOT_EDGE, s)
            viadd(out, _eval(tb, {leaf: "id"}, inputs, ops))
    return out

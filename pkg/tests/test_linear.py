from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import assume, given, settings, strategies as st

from ainfty.linear import (FilteredModule, LinearAlgebraError, LinearMap, direct_sum,
                           invariant_factors, invert_map, leading_decomposition, map_ord, map_val,
                           rank_over_field, residue_rank, vadd, viadd, vneg, vval)
from ainfty.scalars import INF, NovikovRing

from strategies import novikov

R = NovikovRing(4)


def mod(n, ring=R, prefix="x"):
    return FilteredModule([("%s%d" % (prefix, i), 0) for i in range(n)], ring)


def square(entries):
    n = len(entries)
    M = mod(n)
    return LinearMap.from_matrix(M, M, entries)


def det(rows):
    n = len(rows)
    total = rows[0][0].ring.zero()
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = rows[0][0].ring.one()
        for i in range(n):
            term = term * rows[i][p[i]]
        total = total + (term if sign == 1 else -term)
    return total


# ---------- vectors and modules ----------

def test_vector_ops_drop_zeros():
    a = {"x": R.T(0, 1)}
    b = {"x": R.T(0, -1), "y": R.T(1)}
    assert vadd(a, b) == {"y": R.T(1)}
    acc = dict(a)
    viadd(acc, a, R.T(0, -1))
    assert acc == {}
    assert vval(b) == 0
    assert vval({}) == INF
    assert vneg(vneg(b)) == b


def test_module_basics():
    M = FilteredModule([("e", 0), ("a", 1), ("b", 3)], R, "Z2")
    assert M.degree("b") == 1
    assert "a" in M and M.rank() == 3
    with pytest.raises(ValueError):
        FilteredModule([("e", 0), ("e", 1)], R)
    assert M.vector_degree({"a": R.one(), "b": R.one()}) == 1
    with pytest.raises(LinearAlgebraError):
        M.vector_degree({"e": R.one(), "a": R.one()})


def test_direct_sum_blocks_and_shift():
    A = FilteredModule([("e", 0), ("a", 1)], R)
    S = direct_sum([("-", A, "-:", 0), ("0", A, "0:", 1)], R)
    assert S.names == ("-:e", "-:a", "0:e", "0:a")
    assert S.degree("0:a") == 2
    assert S.blocks["0"] == ("0:e", "0:a")


def test_from_matrix_convention():
    A, B = mod(2), mod(3, prefix="y")
    rows = [[1, 0], [2, 0], [0, 3]]
    f = LinearMap.from_matrix(A, B, rows)
    assert f({"x0": R.one()}) == {"y0": R.one(), "y1": R.T(0, 2)}
    assert f.entry("y2", "x1") == R.T(0, 3)
    assert [[c for c in r] for r in f.matrix()] == [[R.T(0, c) for c in r] for r in rows]


def test_compose_is_matrix_product():
    f = square([[1, R.T(1)], [0, 1]])
    g = square([[2, 0], [R.T(Fraction(1, 2)), 1]])
    fg = f @ g
    # (f g)_{ij} = sum_k f_ik g_kj
    want = [[R.T(0, 2) + R.T(Fraction(3, 2)), R.T(1)], [R.T(Fraction(1, 2)), R.one()]]
    assert fg.matrix() == want


# ---------- orders, invariant factors, inverses ----------

def test_ord_and_val_of_diagonal():
    f = square([[R.T(1), 0], [0, R.T(Fraction(5, 2))]])
    assert map_ord(f) == 1
    assert invariant_factors(f) == [1, Fraction(5, 2)]
    assert map_val(f) == Fraction(5, 2)


def test_singular_map():
    f = square([[1, 1], [1, 1]])
    assert invariant_factors(f)[-1] == INF
    with pytest.raises(LinearAlgebraError):
        invert_map(f)


def test_inverse_with_negative_order():
    f = square([[R.T(1), 0], [R.T(1), 1]])
    g = invert_map(f)
    assert map_ord(g) == -1
    idm = LinearMap.identity(f.source)
    assert f @ g == idm and g @ f == idm


entries = novikov(R, max_terms=2)


@given(st.lists(entries, min_size=4, max_size=4))
def test_invariant_factors_match_determinant(xs):
    f = square([xs[:2], xs[2:]])
    d = det(f.matrix())
    assume(not d.is_zero() and d.val() < R.cutoff)
    fac = invariant_factors(f)
    assert fac[0] == map_ord(f)
    assert sum(fac) == d.val()


@st.composite
def invertible_3x3(draw):
    """L D U + N with L, U unipotent integer matrices, D = diag(T^a_i), ord N > max a_i."""
    ints = st.integers(-2, 2)
    L = [[1 if i == j else (draw(ints) if i > j else 0) for j in range(3)] for i in range(3)]
    U = [[1 if i == j else (draw(ints) if i < j else 0) for j in range(3)] for i in range(3)]
    a = [draw(st.sampled_from([0, 0, Fraction(1, 2), 1])) for _ in range(3)]
    rows = [[R.zero()] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows[i][j] = sum((R.T(a[k], L[i][k] * U[k][j]) for k in range(3)), R.zero())
            rows[i][j] = rows[i][j] + draw(novikov(R, min_val=max(a) + Fraction(1, 2), max_terms=1))
    return square(rows), sum(a)


@settings(max_examples=25)
@given(invertible_3x3())
def test_invert_map_two_sided(fa):
    f, total = fa
    assert sum(invariant_factors(f)) == total
    g = invert_map(f)
    idm = LinearMap.identity(f.source)
    assert f @ g == idm
    assert g @ f == idm


def test_leading_decomposition():
    f = square([[R.T(0) + R.T(2), R.T(1)], [0, R.T(3)]])
    lead, rest = leading_decomposition(f, 1)
    assert lead + rest == f
    assert map_ord(rest) > 1


def _rank_by_minors(rows):
    """Largest k with a nonzero k x k minor (independent of elimination)."""
    from itertools import combinations
    m, n = len(rows), len(rows[0])
    best = 0
    for k in range(1, min(m, n) + 1):
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                sub = [[Fraction(rows[i][j]) for j in cs] for i in rs]
                if _det_q(sub) != 0:
                    best = k
                    break
            if best == k:
                break
    return best


def _det_q(a):
    if len(a) == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * _det_q([r[:j] + r[j + 1:] for r in a[1:]])
               for j in range(len(a)))


@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_over_q_matches_minors(rows):
    assert rank_over_field(rows) == _rank_by_minors(rows)


def test_rank_over_f2_differs_from_q():
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert rank_over_field(rows) == 3
    assert rank_over_field(rows, char=2) == 2


def test_residue_rank_ignores_positive_valuation():
    f = square([[1, 0], [0, R.T(1)]])
    assert residue_rank(f) == 1

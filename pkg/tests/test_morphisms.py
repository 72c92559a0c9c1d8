import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ainfty.core import AlgebraError, check_quadratic_relations, curved_dga
from ainfty.generators import NONCOMMUTATIVE, random_curved_dga, random_morphism, random_positive
from ainfty.linear import FilteredModule, vadd
from ainfty.morphisms import (MorphismError, check_morphism, compose, curvature_of_deformation,
                              deform, deform_source, deform_via_trees, flatten,
                              identity_morphism, mc_residual, pushforward, pushforward_mc,
                              zero_morphism)
from ainfty.scalars import NovikovRing
from ainfty.transfer import transfer

from fixtures import sdr_instances


def element(rng, A, min_val=Fraction(1, 2), p=0.5, skip=()):
    a = {}
    for n in A.module.names:
        if n not in skip and rng.random() < p:
            c = random_positive(A.ring, rng, min_val=min_val)
            if not c.is_zero():
                a[n] = c
    return a


def same_products(A, B):
    return A.kmax == B.kmax and all(A.m(k).table == B.m(k).table for k in range(A.kmax + 1))


# ---------- deformations ----------

@given(st.integers(0, 10 ** 6))
def test_double_deformation(seed):
    rng = random.Random(seed)
    A = random_curved_dga(rng)
    a1, a2 = element(rng, A), element(rng, A)
    assert same_products(deform(deform(A, a1), a2), deform(A, vadd(a1, a2)))


def test_double_deformation_graded_over_q():
    R = NovikovRing(4)
    o = R.one()
    M = FilteredModule([("e", 0), ("a", 1), ("b", 1), ("ab", 2)], R)
    mult = {("e", "e"): {"e": o}, ("e", "a"): {"a": o}, ("a", "e"): {"a": o},
            ("e", "b"): {"b": o}, ("b", "e"): {"b": o}, ("e", "ab"): {"ab": o},
            ("ab", "e"): {"ab": o}, ("a", "b"): {"ab": o}, ("b", "a"): {"ab": -o}}
    A = curved_dga(M, mult, {"a": {"ab": R.T(1)}}, {"ab": R.T(2)}, unit="e")
    a1 = {"a": R.T(Fraction(1, 2), 3)}
    a2 = {"a": R.T(1, -1), "b": R.T(Fraction(3, 2), 2)}
    both = deform(A, vadd(a1, a2))
    assert same_products(deform(deform(A, a1), a2), both)
    assert check_quadratic_relations(both).passed
    with pytest.raises(AlgebraError):
        deform(A, {"ab": R.T(1)})          # wrong degree
    with pytest.raises(AlgebraError):
        deform(A, {"a": R.one()})          # valuation zero


def test_deform_agrees_with_tree_sum():
    rng = random.Random(3)
    for data in sdr_instances(6, seed=3):
        A = transfer(data, kmax=3, check=False).algebra
        a = element(rng, A, min_val=Fraction(1), p=0.6)
        d1, d2 = deform(A, a), deform_via_trees(A, a)
        assert same_products(d1, d2)
        assert check_quadratic_relations(d1).passed


def test_deformation_of_incomplete_algebra_lowers_the_arity_cutoff():
    rng = random.Random(8)
    A, f = random_morphism(rng)
    a = {A.module.names[0]: A.ring.T(Fraction(1, 2))}
    # m_a^k needs m^{k+n} for n up to 5 insertions; only m^0 .. m^3 are known
    with pytest.raises(AlgebraError):
        deform(A, a)
    Ad = deform(A, {A.module.names[0]: A.ring.T(1)})
    assert Ad.kmax == 1 and Ad.truncation_notes == [2, 3]


# ---------- Maurer-Cartan and pushforward ----------

def test_mc_classification():
    A = random_curved_dga(random.Random(0), curved=False)
    assert mc_residual(A, {})[1].tag == "bounding"
    R = A.ring
    B = random_curved_dga(random.Random(5), c_plus=False)
    res, tag = mc_residual(B, {})
    assert tag.tag in ("weak", "obstructed")
    if set(res) == {B.unit}:
        assert tag.W == res[B.unit]


@given(st.integers(0, 10 ** 6))
def test_pushforward_preserves_mc_class(seed):
    # g: B_a -> B with g^0 = a, g^1 = id carries b to a + b
    rng = random.Random(seed)
    B = random_curved_dga(rng, c_plus=rng.random() < 0.5)
    a = element(rng, B, p=0.3, skip=(B.unit,))
    b = element(rng, B, p=0.3, skip=(B.unit,))
    g = deform_source(identity_morphism(B), a)
    assert pushforward(g, b) == vadd(a, b)
    before = mc_residual(g.source, b)[1]
    after = pushforward_mc(g, b)
    assert (before.tag, before.W) == (after.tag, after.W)


def test_pushforward_intertwines_curvature():
    # m^0_B(f_* b) = f_b^1(m^0_{A,b}): the arity-0 relation of f_b
    rng = random.Random(1)
    for _ in range(20):
        A, f = random_morphism(rng)
        b = element(rng, A, min_val=Fraction(1))
        fb = deform_source(f, b)
        lhs = curvature_of_deformation(f.target, pushforward(f, b))
        assert lhs == fb.f(1).apply([curvature_of_deformation(A, b)])
        assert check_morphism(fb).passed


def test_pushforward_of_b_is_pushforward_of_zero_after_deforming():
    rng = random.Random(2)
    for _ in range(20):
        A, f = random_morphism(rng)
        b = element(rng, A, min_val=Fraction(1))
        fb = deform_source(f, b)
        assert pushforward(f, b) == pushforward(fb, {}) == fb.f0()


def test_pushforward_needs_valuation_above_energy_loss():
    A, f = random_morphism(random.Random(0))
    f.energy_loss = 1
    with pytest.raises(MorphismError):
        pushforward(f, {A.module.names[0]: A.ring.T(Fraction(1, 2))})


# ---------- morphisms ----------

def test_random_morphisms_pass():
    rng = random.Random(4)
    for _ in range(10):
        A, f = random_morphism(rng)
        assert check_morphism(f).passed


def test_corrupted_morphism_fails():
    rng = random.Random(6)
    fails = 0
    for _ in range(10):
        A, f = random_morphism(rng, f0=False, higher=False)
        x, y = rng.choice(A.module.names), rng.choice(f.target.module.names)
        t = dict(f.f(1).table)
        t[(x,)] = vadd(t[(x,)], {y: A.ring.one()})
        f.comps[1] = type(f.comps[1])(1, A.module, f.target.module, {k: v for k, v in t.items() if v})
        fails += bool(check_morphism(f).failures())
    assert fails >= 8


def test_zero_morphism_criterion():
    rng = random.Random(4)
    B = random_curved_dga(rng, c_plus=False)
    A = random_curved_dga(rng, curved=False)
    for _ in range(40):
        b = element(rng, B, p=0.3, skip=(B.unit,))
        bounding = not curvature_of_deformation(B, b)
        assert check_morphism(zero_morphism(A, B, b)).passed == bounding


def test_composition():
    rng = random.Random(9)
    for _ in range(5):
        B = random_curved_dga(rng, kinds=["F2", "dual", "trunc3"])
        A1, g = random_morphism(rng, B=B)
        A0, f = random_morphism(rng, B=A1, f0=False)
        gf = compose(g, f)
        assert check_morphism(gf).passed
        assert compose(identity_morphism(B), g) == g
        assert compose(g, identity_morphism(A1)) == g
    with pytest.raises(MorphismError):
        compose(f, g)


def test_flatten_drops_f0():
    rng = random.Random(10)
    for _ in range(10):
        A, f = random_morphism(rng)
        ff = flatten(f)
        assert not ff.f0()
        assert check_morphism(ff).passed


def test_strict_pushforward_is_f1():
    rng = random.Random(12)
    B = random_curved_dga(rng)
    from ainfty.morphisms import strict_morphism
    from ainfty.linear import LinearMap
    f = strict_morphism(B, B, LinearMap.identity(B.module))
    b = element(rng, B)
    assert pushforward(f, b) == f.f(1).apply([b]) == b

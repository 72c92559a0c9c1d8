"""Random instances shared by the test modules (fixed seeds, so runs are reproducible)."""

import random
from fractions import Fraction

from ainfty.generators import NONCOMMUTATIVE, random_morphism, random_sdr
from ainfty.scalars import NovikovRing


def sdr_instances(count, seed=1, min_val=Fraction(1, 2), kinds=None, nonempty=True):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        data = random_sdr(rng, ring=NovikovRing(3, char=2), kinds=kinds or NONCOMMUTATIVE,
                          min_val=min_val)
        if nonempty and not data.A_module.rank():
            continue
        out.append(data)
    return out


def basis_inputs(rng, module, k):
    """k random basis vectors of a module."""
    one = module.ring.one()
    return [{rng.choice(module.names): one} for _ in range(k)]


def morphism_instances(count, seed=7, kmax=3):
    rng = random.Random(seed)
    return [random_morphism(rng, kmax=kmax) for _ in range(count)]


def random_iso(rng, B):
    """Invertible P: A -> B, an F_2 matrix plus terms of positive valuation."""
    from ainfty.generators import random_invertible_f2, random_positive
    from ainfty.linear import FilteredModule, LinearMap
    ring = B.ring
    n = B.module.rank()
    src = FilteredModule([("p%d" % i, 0) for i in range(n)], ring)
    P0 = random_invertible_f2(rng, n)
    cols = {}
    for j, s in enumerate(src.names):
        v = {}
        for i, t in enumerate(B.module.names):
            c = ring.coerce(P0[i][j])
            if rng.random() < 0.3:
                c = c + random_positive(ring, rng)
            if not c.is_zero():
                v[t] = c
        cols[s] = v
    return LinearMap(src, B.module, cols)

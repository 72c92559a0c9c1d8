"""Random test instances over the two-element field.

Curved DGAs are built from small associative algebras: m^1 = [c, .] and
m^0 = c^2 + z with c = c0 + c+ (c0^2 = 0, c+ of positive valuation) and z
central of positive valuation.  SDR data comes from a valuation-zero
retraction of [c0, .] corrected by the perturbation lemma until the curved
homotopy identity holds.
"""

import random
from fractions import Fraction

from .core import AInftyAlgebra, MultiOperator, add_tables, curved_dga, insert_compose
from .linear import FilteredModule, LinearMap, invert_map, vval, viadd
from .morphisms import AInftyMorphism, outer_of_components, _algebra_outer
from .scalars import NovikovRing
from .transfer import SDRData, curvature_operator


# ---------- small associative algebras ----------

def _matrix_units(names, n):
    """Products of the matrix units e_ij listed in ``names``."""
    mult = {}
    for a in names:
        for b in names:
            i, j = int(a[1]), int(a[2])
            k, l = int(b[1]), int(b[2])
            if j == k and "e%d%d" % (i, l) in names:
                mult[(a, b)] = "e%d%d" % (i, l)
    return mult


def _catalogue():
    cat = {}
    cat["F2"] = (["1"], {("1", "1"): "1"}, "1", [], [])
    cat["dual"] = (["1", "y"], {("1", "1"): "1", ("1", "y"): "y", ("y", "1"): "y"}, "1",
                   ["y"], ["y"])
    m = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "x", ("1", "x2"): "x2",
         ("x2", "1"): "x2", ("x", "x"): "x2"}
    cat["trunc3"] = (["1", "x", "x2"], m, "1", ["x2"], ["x", "x2"])
    t2 = ["e11", "e12", "e22"]
    mt = _matrix_units(t2, 2)
    cat["T2"] = (t2, mt, None, ["e12"], [])
    mat = ["e11", "e12", "e21", "e22"]
    cat["Mat2"] = (mat, _matrix_units(mat, 2), None, ["e12", "e21"], [])
    ext = ["1", "a", "b", "ab"]
    me = {("1", x): x for x in ext}
    me.update({(x, "1"): x for x in ext})
    me[("a", "b")] = "ab"
    me[("b", "a")] = "ab"      # char 2: ba = -ab = ab
    cat["ext2"] = (ext, me, "1", ["a", "b", "ab"], ["ab"])
    t3 = ["e11", "e12", "e13", "e22", "e23", "e33"]
    cat["T3"] = (t3, _matrix_units(t3, 3), None, ["e12", "e13", "e23"], [])
    cat["T2xdual"] = _tensor(cat["T2"], cat["dual"])
    cat["T2xtrunc3"] = _tensor(cat["T2"], cat["trunc3"])
    return cat


def _tensor(P, Q):
    """Tensor product of two catalogue algebras (Q commutative and unital)."""
    pn, pm, pu, pnil, _ = P
    qn, qm, qu, qnil, qcen = Q
    names = [a + "." + b for a in pn for b in qn]
    mult = {}
    for (a1, a2), a in pm.items():
        for (b1, b2), b in qm.items():
            mult[(a1 + "." + b1, a2 + "." + b2)] = a + "." + b
    unit = None if pu is None else pu + "." + qu
    nil = [a + "." + qu for a in pnil] + [a + "." + b for a in pnil for b in qnil]
    central = [a + "." + b for a in pn if a[1] == a[2] for b in qcen] if pu is None else []
    return (names, mult, unit, nil, [])


CATALOGUE = _catalogue()
# kinds whose inner derivations [c0, .] can be nonzero
NONCOMMUTATIVE = ["T2", "T3", "Mat2", "T2xdual", "T2xtrunc3"]


def _unit_vector(names, unit_name, ring):
    one = ring.one()
    if unit_name is not None:
        return {unit_name: one}
    # matrix algebras: the identity is the sum of diagonal units
    return {n: one for n in names if n[1] == n[2] and ("." not in n or n.endswith(".1"))}


def random_positive(ring, rng, max_terms=2, min_val=Fraction(1, 2)):
    """Random scalar of positive valuation below the cutoff."""
    steps = [min_val * k for k in range(1, 7) if min_val * k < ring.cutoff]
    if not steps:
        return ring.zero()
    chosen = rng.sample(steps, min(len(steps), rng.randint(1, max_terms)))
    return ring.from_terms([(lam, 1) for lam in chosen])


def random_coefficient(ring, rng, p_zero=0.5):
    """Random scalar of valuation >= 0 (often zero)."""
    if rng.random() < p_zero:
        return ring.zero()
    c = random_positive(ring, rng)
    if rng.random() < 0.6:
        c = c + ring.one()
    return c


def random_curved_dga(rng, ring=None, kinds=None, curved=True, central_curvature=True,
                      c_plus=True, name="B", min_val=Fraction(1, 2)):
    """A complete curved DGA over the Novikov field of characteristic 2.

    ``min_val`` bounds the valuation of the perturbation c_+ and of the
    central curvature from below.
    """
    ring = ring or NovikovRing(3, char=2)
    kinds = kinds or list(CATALOGUE)
    kind = rng.choice(kinds)
    names, mult, unit_name, nil, central = CATALOGUE[kind]
    mod = FilteredModule([(n, 0) for n in names], ring, None)
    one = ring.one()
    mult_v = {k: {v: one} for k, v in mult.items()}
    unit = _unit_vector(names, unit_name, ring)

    def mul(x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                r = mult.get((a, b))
                if r is not None:
                    viadd(out, {r: ca * cb})
        return out

    # c0 with c0^2 = 0, valuation zero
    c0 = {}
    if nil and rng.random() < 0.8:
        cand = rng.choice(nil)
        if not mul({cand: one}, {cand: one}):
            c0 = {cand: one}
    cp = {}
    if c_plus:
        for n in names:
            if rng.random() < 0.5:
                x = random_positive(ring, rng, min_val=min_val)
                if not x.is_zero():
                    cp[n] = x
    c = dict(c0)
    viadd(c, cp)
    z = {}
    if curved and central_curvature:
        zc = random_positive(ring, rng, min_val=min_val)
        zvec = dict(unit)
        if central and rng.random() < 0.5:
            zvec = {rng.choice(central): one}
            # central nilpotents commute with everything in these algebras
        for k in list(zvec):
            zvec[k] = zvec[k] * zc
        z = zvec
    d = {}
    for n in names:
        x = {n: one}
        v = mul(c, x)
        viadd(v, mul(x, c))
        if v:
            d[n] = v
    m0 = mul(c, c)
    viadd(m0, z)
    if not curved:
        m0 = {}
    A = curved_dga(mod, mult_v, d, m0 or None, unit=unit_name, name=name)
    A.kind = kind
    A.c0, A.c_plus, A.z = c0, cp, z
    return A


# ---------- SDR data ----------

def _f2_rank_basis(cols, n):
    """Pivot columns and an echelon basis of the span of 0/1 column vectors."""
    basis = []          # (pivot row, vector)
    pivots = []
    for j, v in enumerate(cols):
        w = list(v)
        for p, b in basis:
            if w[p]:
                w = [(x + y) % 2 for x, y in zip(w, b)]
        if any(w):
            p = next(i for i, x in enumerate(w) if x)
            basis.append((p, w))
            pivots.append(j)
    return pivots


def _f2_solve_basis(columns, n):
    """Inverse of the n x n 0/1 matrix whose columns are given."""
    a = [[columns[j][i] % 2 for j in range(n)] + [1 if i == k else 0 for k in range(n)]
         for i in range(n)]
    r = 0
    for j in range(n):
        p = next((i for i in range(r, n) if a[i][j]), None)
        if p is None:
            raise ValueError("singular")
        a[r], a[p] = a[p], a[r]
        for i in range(n):
            if i != r and a[i][j]:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def _f2_nullspace(rows, n):
    m = [list(r) for r in rows]
    piv = []
    r = 0
    for j in range(n):
        p = next((i for i in range(r, len(m)) if m[i][j]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][j]:
                m[i] = [(x + y) % 2 for x, y in zip(m[i], m[r])]
        piv.append(j)
        r += 1
    free = [j for j in range(n) if j not in piv]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pj in enumerate(piv):
            if m[i][f]:
                v[pj] = 1
        out.append(v)
    return out


def valuation_zero_sdr(B, D0_cols, rng=None):
    """Retraction data (alpha0, beta0, h0, A module) for a valuation-0 differential D0 over F2."""
    names = list(B.module.names)
    n = len(names)
    ring = B.ring
    one = ring.one()
    # D0 as a 0/1 matrix, columns = images of basis vectors
    cols = [[1 if names[i] in D0_cols.get(s, {}) else 0 for i in range(n)] for s in names]
    piv = _f2_rank_basis(cols, n)
    im = [cols[j] for j in piv]
    rows = [[cols[j][i] for j in range(n)] for i in range(n)]
    ker = _f2_nullspace(rows, n)
    # extend the image to a basis of the kernel
    H = []
    cur = list(im)
    for v in ker:
        if len(_f2_rank_basis(cur + [v], n)) > len(cur):
            cur.append(v)
            H.append(v)
    C = [[1 if i == j else 0 for i in range(n)] for j in piv]
    frame = im + H + C
    inv = _f2_solve_basis(frame, n)
    r, k = len(im), len(H)
    A_mod = FilteredModule([("a%d" % i, 0) for i in range(k)], ring, None)

    def vec(bits):
        return {names[i]: one for i in range(n) if bits[i]}

    alpha = LinearMap(A_mod, B.module, {"a%d" % i: vec(H[i]) for i in range(k)})
    beta_cols, h_cols = {}, {}
    for s_idx, s in enumerate(names):
        coords = [inv[row][s_idx] for row in range(n)]
        beta_cols[s] = {"a%d" % i: one for i in range(k) if coords[r + i]}
        hv = {}
        for i in range(r):
            if coords[i]:
                viadd(hv, vec(C[i]))
        h_cols[s] = hv
    beta = LinearMap(B.module, A_mod, beta_cols)
    h = LinearMap(B.module, B.module, h_cols, -1)
    return A_mod, alpha, beta, h


def perturbed_sdr(B, D0_cols, max_rounds=64):
    """Perturbation-lemma fixed point: h m1 + m1 h + h L h = 1 + alpha beta (char 2)."""
    A_mod, a0, b0, h0 = valuation_zero_sdr(B, D0_cols)
    m1 = B.m(1).to_linear()
    D0 = LinearMap(B.module, B.module, D0_cols)
    L = curvature_operator(B)
    h, a, b = h0, a0, b0
    for _ in range(max_rounds):
        delta = m1 - D0 + h @ L
        # X = delta sum (h0 delta)^n
        term = delta
        X = delta
        for _ in range(200):
            term = delta @ h0 @ term
            if term.is_zero():
                break
            X = X + term
        h_new = h0 + h0 @ X @ h0
        a_new = a0 + h0 @ X @ a0
        b_new = b0 + b0 @ X @ h0
        if h_new == h and a_new == a and b_new == b:
            break
        h, a, b = h_new, a_new, b_new
    d = b @ m1 @ a
    return SDRData(B, A_mod, d, a, b, h)


def random_sdr(rng, ring=None, **kw):
    """A random curved DGA with valid SDR data."""
    B = random_curved_dga(rng, ring, **kw)
    one = B.ring.one()
    D0 = {}
    c0 = B.c0
    # D0 = [c0, .] read off the valuation-zero products
    for n in B.module.names:
        x = {n: one}
        v = {}
        if c0:
            viadd(v, B.m(2).apply([c0, x]))
            viadd(v, B.m(2).apply([x, c0]))
        if v:
            D0[n] = v
    return perturbed_sdr(B, D0)


# ---------- random morphisms by transport ----------

def random_invertible_f2(rng, n):
    while True:
        m = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        try:
            _f2_solve_basis([[m[i][j] for i in range(n)] for j in range(n)], n)
            return m
        except ValueError:
            continue


def random_table(rng, src, tgt, arity, density=0.3, ring=None):
    from itertools import product
    ring = ring or tgt.ring
    t = {}
    for key in product(src.names, repeat=arity):
        if rng.random() < density:
            v = {}
            for n in tgt.names:
                c = random_coefficient(ring, rng, 0.6)
                if not c.is_zero():
                    v[n] = c
            if v:
                t[key] = v
    return t


def transport_source(B, comps, kmax, name="A"):
    """Pull the structure of B back along f (f^1 invertible) so that f is a morphism.

    m_A^k = (f^1)^-1 [sum m_B(f ... f) - sum_{i<k} f(.. m_A^i ..)].
    """
    mod = comps[1].source
    f1 = comps[1].to_linear()
    f1inv = invert_map(f1)
    stub = AInftyAlgebra(mod, {}, 0, None, B.signs, complete=False, name=name, check_filtered=False)
    f = AInftyMorphism(stub, B, comps, kmax=kmax, complete=True, name="f")
    prods = {}
    sign = None
    for k in range(0, kmax + 1):
        rhs, missing = outer_of_components(_algebra_outer(B), f, k, B.ring.cutoff)
        acc = dict(rhs)
        for i in range(0, k):
            inner = MultiOperator(i, mod, mod, prods[i])
            if inner.is_zero():
                continue
            outer = f.f(k - i + 1)
            for slot in range(k - i + 1):
                t = insert_compose(outer, slot, inner, sign).table
                add_tables(acc, {key: {n: -c for n, c in v.items()} for key, v in t.items()})
        prods[k] = {key: f1inv(v) for key, v in acc.items() if f1inv(v)}
    A = AInftyAlgebra(mod, prods, kmax, None, B.signs, complete=False, name=name)
    f = AInftyMorphism(A, B, comps, kmax=kmax, complete=True, name="f")
    return A, f


def random_morphism(rng, B=None, kmax=3, f0=True, higher=True, unital=False, name="f"):
    """Random f: A -> B with A the transported structure; returns (A, f)."""
    if B is None:
        B = random_curved_dga(rng, NovikovRing(3, char=2),
                              kinds=["F2", "dual", "trunc3", "T2"])
    ring = B.ring
    n = B.module.rank()
    src = FilteredModule([("a%d" % i, 0) for i in range(n)], ring, B.module.grading)
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
    comps = {1: MultiOperator(1, src, B.module, {(s,): v for s, v in cols.items()})}
    if f0:
        v = {}
        for t in B.module.names:
            if rng.random() < 0.6:
                c = random_positive(ring, rng, min_val=Fraction(1))
                if not c.is_zero():
                    v[t] = c
        comps[0] = MultiOperator.constant(src, B.module, v)
    else:
        comps[0] = MultiOperator(0, src, B.module)
    for k in range(2, kmax + 1):
        comps[k] = MultiOperator(k, src, B.module,
                                 random_table(rng, src, B.module, k, 0.25) if higher else {})
    A, f = transport_source(B, comps, kmax, name="A")
    f.name = name
    return A, f

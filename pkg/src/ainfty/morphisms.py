"""A-infinity morphisms, deformations and Maurer-Cartan elements.

A morphism carries components f^0 ... f^kmax; f^0 is an element of the
target of positive valuation.  Sums with f^0 insertions are finite because
every copy of f^0 costs energy.
"""

from itertools import combinations, product

from .core import (AInftyAlgebra, AlgebraError, CheckReport, MultiOperator,
                   add_tables, insert_compose, koszul_sign, tensor_compose)
from .linear import LinearMap, vadd, vneg, vsub, vval, viadd
from .scalars import INF
from .trees import enumerate_stable_trees, evaluate_tree, TreeLabelling, n_vertices


class MorphismError(ValueError):
    pass


class AInftyMorphism:
    def __init__(self, source, target, comps, kmax=None, energy_loss=0,
                 complete=False, name="f"):
        self.source = source
        self.target = target
        ops = {}
        for k, c in comps.items():
            if not isinstance(c, MultiOperator):
                c = MultiOperator(k, source.module, target.module, c)
            ops[k] = c
        if kmax is None:
            kmax = max(ops, default=1)
        self.kmax = kmax
        for k in range(kmax + 1):
            ops.setdefault(k, MultiOperator(k, source.module, target.module))
        self.comps = {k: ops[k] for k in range(kmax + 1)}
        self.energy_loss = energy_loss
        self.complete = complete
        self.name = name
        f0 = self.f0()
        if f0 and vval(f0) <= 0:
            raise MorphismError("f^0 must have positive valuation")

    def f(self, k):
        if k in self.comps:
            return self.comps[k]
        if self.complete:
            return MultiOperator(k, self.source.module, self.target.module)
        raise MorphismError("f^%d is beyond the arity cutoff %d" % (k, self.kmax))

    def has(self, k):
        return k <= self.kmax or self.complete

    def f0(self):
        return self.comps[0].value()

    @property
    def strict(self):
        return all(op.is_zero() for k, op in self.comps.items() if k != 1)

    def __eq__(self, other):
        if not isinstance(other, AInftyMorphism):
            return NotImplemented
        ks = set(self.comps) | set(other.comps)
        return all(self.f(k).table == other.f(k).table for k in ks
                   if self.has(k) and other.has(k))

    def __repr__(self):
        return "AInftyMorphism(%s: %s -> %s, kmax=%d)" % (self.name, self.source.name,
                                                        self.target.name, self.kmax)


def strict_morphism(source, target, linear, name="f"):
    if isinstance(linear, LinearMap):
        op = MultiOperator.from_linear(linear)
    else:
        op = MultiOperator(1, source.module, target.module, {(k,): v for k, v in linear.items()})
    return AInftyMorphism(source, target, {1: op}, kmax=1, complete=True, name=name)


def identity_morphism(A):
    return strict_morphism(A, A, LinearMap.identity(A.module), name="id")


def zero_morphism(source, target, b):
    """f^0 = b and nothing else; a morphism exactly when b is a bounding cochain."""
    return AInftyMorphism(source, target, {0: MultiOperator.constant(source.module, target.module, b)},
                          kmax=1, complete=True, name="0_b")


# ---------- weak compositions with f^0 insertions ----------

def _max_zero_insertions(v0, cutoff):
    """How many copies of an element of valuation v0 can appear below the cutoff."""
    if v0 == INF:
        return 0
    if v0 <= 0:
        raise MorphismError("insertions need positive valuation")
    q = 0
    while (q + 1) * v0 < cutoff:
        q += 1
    return q


def _weak_compositions(k, parts, allow_zero):
    """Tuples of ``parts`` nonnegative (positive unless allow_zero) ints summing to k."""
    if parts == 0:
        if k == 0:
            yield ()
        return
    lo = 0 if allow_zero else 1
    for first in range(lo, k + 1):
        for rest in _weak_compositions(k - first, parts - 1, allow_zero):
            yield (first,) + rest


def outer_of_components(outer, f, k, cutoff):
    """sum_l sum_{i1+..+il=k} outer^l(f^{i1} (x) ... (x) f^{il}).

    ``outer(l)`` returns the l-ary operator (or None when unavailable);
    returns (table, missing) where ``missing`` lists unavailable arities
    that would have contributed.
    """
    f0 = f.f0()
    q = _max_zero_insertions(vval(f0), cutoff) if f0 else 0
    out = {}
    missing = []
    for l in range(0, k + q + 1):
        op = outer(l)
        if op is None:
            missing.append(l)
            continue
        if op.is_zero():
            continue
        for comp in _weak_compositions(k, l, bool(f0)):
            if comp.count(0) > q:
                continue
            if any(not f.has(i) for i in comp):
                missing.append(("f", max(comp)))
                continue
            inners = [f.f(i) for i in comp]
            add_tables(out, tensor_compose(op, inners).table)
    return out, missing


def _algebra_outer(B):
    def get(l):
        if B.has(l):
            return B.m(l)
        return None
    return get


def _morphism_outer(g):
    def get(l):
        if g.has(l):
            return g.f(l)
        return None
    return get


# ---------- relation check ----------

def morphism_relation(f, k):
    """(lhs - rhs) of the arity-k homomorphism relation, with a list of missing pieces."""
    A, B = f.source, f.target
    sign = koszul_sign(A.module) if A.signs == "koszul" else None
    lhs = {}
    missing = []
    for i in range(0, k + 1):
        if not A.has(i):
            missing.append(("mA", i))
            continue
        inner = A.m(i)
        if inner.is_zero():
            continue
        outer_ar = k - i + 1
        if not f.has(outer_ar):
            missing.append(("f", outer_ar))
            continue
        outer = f.f(outer_ar)
        for slot in range(outer_ar):
            add_tables(lhs, insert_compose(outer, slot, inner, sign).table)
    rhs, miss2 = outer_of_components(_algebra_outer(B), f, k, B.ring.cutoff)
    missing.extend(miss2)
    res = dict(lhs)
    add_tables(res, {key: vneg(v) for key, v in rhs.items()})
    return res, missing


def check_morphism(f, max_arity=None):
    res = {}
    certified = []
    notes = []
    top = f.kmax if max_arity is None else max_arity
    for k in range(0, top + 1):
        table, missing = morphism_relation(f, k)
        if missing:
            notes.append("arity %d not certified: needs %s" % (k, sorted(set(map(str, missing)))))
            if max_arity is None:
                break
        certified.append(k)
        res["arity %d" % k] = table
    return CheckReport("A-infinity homomorphism relations for %s" % f.name, f.target.ring.cutoff,
                       res, certified, notes)


# ---------- composition ----------

def compose(g, f):
    """(g o f)^k = sum g^l(f^{j1} (x) ... (x) f^{jl})."""
    if f.target.module != g.source.module:
        raise MorphismError("target of f is not the source of g")
    kmax = min(f.kmax, g.kmax) if not (f.complete and g.complete) else max(f.kmax, g.kmax)
    comps = {}
    for k in range(0, kmax + 1):
        table, missing = outer_of_components(_morphism_outer(g), f, k, g.target.ring.cutoff)
        if missing:
            kmax = k - 1
            break
        comps[k] = MultiOperator(k, f.source.module, g.target.module, table)
    complete = f.strict and g.strict
    return AInftyMorphism(f.source, g.target, comps, kmax=kmax,
                          energy_loss=f.energy_loss + g.energy_loss, complete=complete,
                          name="%s.%s" % (g.name, f.name))


# ---------- deformations ----------

def _insert_elements(op, slots, a_op):
    """Insert the constant a_op into the given slots (original numbering)."""
    for s in sorted(slots, reverse=True):
        op = insert_compose(op, s, a_op)
    return op


def _deformed_component(get, k, a, module_src, module_tgt, cutoff, complete_top=None):
    """sum_n sum_{patterns} g^{k+n}(a-insertions) for g = get(arity)."""
    a_op = MultiOperator.constant(module_src, module_src, a)
    q = _max_zero_insertions(vval(a), cutoff) if a else 0
    out = {}
    missing = []
    for n in range(0, q + 1):
        op = get(k + n)
        if op is None:
            missing.append(k + n)
            continue
        if op.is_zero():
            continue
        for slots in combinations(range(k + n), n):
            add_tables(out, _insert_elements(op, slots, a_op).table)
    return out, missing


def _check_deforming(A, a):
    if a and vval(a) <= 0:
        raise AlgebraError("deforming element needs positive valuation (got %s)" % vval(a))
    if a and A.module.grading == "Z" and A.signs == "koszul":
        for n in a:
            if A.module.degree(n) != 1:
                raise AlgebraError("deforming element must have degree 1")


def deform(A, a):
    """The a-deformed algebra: m^k_a = sum_n m^{k+n}(all insertions of n copies of a)."""
    _check_deforming(A, a)
    prods = {}
    kmax = A.kmax
    for k in range(0, A.kmax + 1):
        table, missing = _deformed_component(_algebra_outer(A), k, a, A.module, A.module,
                                             A.ring.cutoff)
        if missing and not A.complete:
            # m_a^k needs products beyond the arity cutoff: stop certifying here
            kmax = k - 1
            break
        prods[k] = table
    if kmax < 0:
        raise AlgebraError("m^0_a needs products beyond the arity cutoff")
    out = A.replace(products=prods, kmax=kmax, name=A.name + "_a")
    out.truncation_notes = list(range(kmax + 1, A.kmax + 1))
    return out


def deform_via_trees(A, a):
    """Same as ``deform`` but summed over one-vertex trees with internal leaves labelled a."""
    _check_deforming(A, a)
    mod = A.module
    q = _max_zero_insertions(vval(a), A.ring.cutoff) if a else 0
    ops = {"m": lambda args: A.m(len(args)).apply(args) if A.has(len(args)) else {}}
    prods = {}
    kmax = A.kmax if A.complete else A.kmax - q
    if kmax < 0:
        raise AlgebraError("m^0_a needs products beyond the arity cutoff")
    for k in range(0, kmax + 1):
        trees = list(_corollas(k, q))
        table = {}
        for key in product(mod.names, repeat=k):
            inputs = [mod.basis_vector(n) for n in key]
            acc = {}
            for t in trees:
                if t == ():
                    viadd(acc, A.m0())
                    continue
                labels = TreeLabelling(tags={(i,): ("elem", a) for i, c in enumerate(t) if c == ()},
                                       default=lambda path: "m", leaf="id")
                viadd(acc, evaluate_tree(t, labels, inputs, ops))
            if acc:
                table[key] = acc
        prods[k] = table
    return A.replace(products=prods, kmax=kmax, name=A.name + "_a")


def _corollas(k, q):
    """One-vertex trees with k inputs and up to q internal leaves (unstable ones too)."""
    for extra in range(q + 1):
        for pos in combinations(range(k + extra), extra):
            yield tuple(() if i in pos else "x" for i in range(k + extra))


# ---------- Maurer-Cartan ----------

class MaurerCartanElement:
    def __init__(self, element, tag, W=None, residual=None):
        self.element = element
        self.tag = tag                      # "bounding", "weak" or "obstructed"
        self.W = W
        self.residual = residual

    def __repr__(self):
        return "MaurerCartanElement(%s, %s%s)" % (self.element, self.tag,
                                                  "" if self.W is None else ", W=%s" % self.W)


def curvature_of_deformation(A, a):
    """m^0_a = sum_k m^k(a^{(x)k})."""
    _check_deforming(A, a)
    q = _max_zero_insertions(vval(a), A.ring.cutoff) if a else 0
    out = dict(A.m0())
    for k in range(1, q + 1):
        if not A.has(k):
            raise AlgebraError("m^%d needed but beyond the arity cutoff" % k)
        viadd(out, A.m(k).apply([a] * k))
    return out


def mc_residual(A, a):
    """Return (m^0_a, classification) with classification a MaurerCartanElement."""
    res = curvature_of_deformation(A, a)
    if not res:
        return res, MaurerCartanElement(a, "bounding", None, res)
    if A.unit is not None and set(res) == {A.unit}:
        W = res[A.unit]
        return res, MaurerCartanElement(a, "weak", W, res)
    return res, MaurerCartanElement(a, "obstructed", None, res)


def pushforward(f, b):
    """f_*(b) = sum_k f^k(b^{(x)k})."""
    if b and vval(b) <= f.energy_loss:
        raise MorphismError("valuation of b must exceed the energy loss of f")
    q = _max_zero_insertions(vval(b), f.target.ring.cutoff) if b else 0
    out = dict(f.f0())
    for k in range(1, q + 1):
        if not f.has(k):
            raise MorphismError("f^%d needed but beyond the arity cutoff" % k)
        viadd(out, f.f(k).apply([b] * k))
    return out


def pushforward_mc(f, b):
    x = pushforward(f, b)
    _, tag = mc_residual(f.target, x)
    return tag


def flatten(f):
    """f_flat: A -> (B deformed by f_*(0)), same components with f^0 dropped."""
    target = deform(f.target, f.f0()) if f.f0() else f.target
    comps = {k: op for k, op in f.comps.items() if k != 0}
    comps = {k: MultiOperator(k, f.source.module, target.module, op.table) for k, op in comps.items()}
    return AInftyMorphism(f.source, target, comps, kmax=f.kmax, energy_loss=f.energy_loss,
                          complete=f.complete, name=f.name + "_flat")


def deform_source(f, a):
    """f_a: (A, m_a) -> B with f_a^k = sum_n f^{k+n}(insertions of a)."""
    source = deform(f.source, a)
    comps = {}
    kmax = f.kmax
    for k in range(0, f.kmax + 1):
        table, missing = _deformed_component(_morphism_outer(f), k, a, f.source.module,
                                             f.target.module, f.target.ring.cutoff)
        if missing and not f.complete:
            kmax = k - 1
            break
        comps[k] = MultiOperator(k, f.source.module, f.target.module, table)
    return AInftyMorphism(source, f.target, comps, kmax=kmax, energy_loss=f.energy_loss,
                          complete=f.complete, name=f.name + "_a")

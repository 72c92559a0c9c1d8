"""Curved homotopy transfer, change-of-base bimodules, fiber products and
mapping cocylinders.

The transfer sums over stable trees with the h.m labelling: the root carries
m^k, every other vertex h o m^k, every input is fed through alpha, and every
internal leaf is an m^0.  Subtree composites are memoized as operator tables.

Tree sums are certified in characteristic 2.  Over Q the same sums are
computed with plain (unsigned) composition.
"""

from itertools import product
from math import ceil

from .core import (AInftyAlgebra, AlgebraError, CheckReport, MultiOperator, add_tables,
                   check_ideal, insert_compose, koszul_sign, quotient_by_ideal, tensor_compose)
from .linear import (FilteredModule, LinearAlgebraError, LinearMap, direct_sum, invert_map,
                     map_ord, vneg, vval, viadd)
from .morphisms import (AInftyMorphism, MorphismError, _max_zero_insertions, _weak_compositions,
                        identity_morphism, strict_morphism)
from .scalars import INF
from .trees import X, enumerate_stable_trees


class TransferError(ValueError):
    pass


def _table_of(f):
    """LinearMap -> unary operator table."""
    return {(s,): v for s, v in f.cols.items() if v}


def curvature_operator(B, h=None):
    """x -> m^2(x, m^0) + m^2(m^0, x), optionally precomposed with h."""
    m0 = B.m0()
    m2 = B.m(2) if B.has(2) else MultiOperator(2, B.module, B.module)
    cols = {}
    for n in B.module.names:
        x = {n: B.ring.one()} if h is None else h.col(n)
        if not x or not m0:
            continue
        v = m2.apply([x, m0])
        viadd(v, m2.apply([m0, x]))
        if v:
            cols[n] = v
    return LinearMap(B.module, B.module, cols)


# ---------- strong deformation retracts ----------

class SDRData:
    """alpha: A -> B, beta: B -> A, h: B -> B and a differential d_A on A."""

    def __init__(self, B, A_module, d_A, alpha, beta, h):
        self.B = B
        self.A_module = A_module
        self.d_A = d_A
        self.alpha = alpha
        self.beta = beta
        self.h = h

    def L(self):
        return curvature_operator(self.B)

    def hm0(self):
        return self.h(self.B.m0())


def check_sdr(data):
    """Residuals of the seven conditions of the curved transfer theorem."""
    B, a, b, h, d = data.B, data.alpha, data.beta, data.h, data.d_A
    m1 = B.m(1).to_linear()
    L = data.L()
    idB = LinearMap.identity(B.module)
    idA = LinearMap.identity(data.A_module)
    res = {}
    res["beta chain map"] = _table_of(b @ m1 - d @ b - b @ L @ h)
    res["alpha chain map"] = _table_of(a @ d - m1 @ a - h @ L @ a)
    res["homotopy"] = _table_of(h @ m1 + m1 @ h - idB + a @ b - h @ L @ h)
    res["beta h"] = _table_of(b @ h)
    res["h alpha"] = _table_of(h @ a)
    res["beta alpha"] = _table_of(b @ a - idA)
    hm0 = data.hm0()
    res["val h m0 > 0"] = {(): hm0} if hm0 and vval(hm0) <= 0 else {}
    notes = []
    if map_ord(h) < 0 or map_ord(a) < 0 or map_ord(b) < 0:
        res["filtered maps"] = {("ord",): {B.module.names[0]: B.ring.one()}}
        notes.append("alpha, beta and h must have order >= 0")
    return CheckReport("SDR conditions", B.ring.cutoff, res, list(res), notes)


# ---------- transfer ----------

def leaf_budget(B, hm0):
    """Largest number of internal leaves whose trees can survive the cutoff."""
    v = vval(hm0) if hm0 else INF
    if v == INF:
        return 1
    if v <= 0:
        raise TransferError("val(h o m^0) must be positive")
    return max(1, ceil(B.ring.cutoff / v))


class TreeSums:
    """Memoized composites phi(T) for the h.m labelling."""

    def __init__(self, data, max_arity):
        self.data = data
        self.B = data.B
        self.max_arity = max_arity
        self.alpha_op = MultiOperator(1, data.A_module, self.B.module, _table_of(data.alpha))
        self._phi = {}
        self._hphi = {}
        self._live = {}
        self._seq_memo = {}
        self.evaluated = 0

    def phi(self, t):
        """Composite with the root labelled m, as an operator table on A."""
        got = self._phi.get(t)
        if got is not None:
            return got
        inners = []
        zero = False
        for c in t:
            if c == X:
                inners.append(self.alpha_op)
            else:
                sub = self.hphi(c)
                if sub.is_zero():
                    zero = True
                    break
                inners.append(sub)
        arity = sum(op.arity for op in inners) if not zero else None
        if zero:
            out = MultiOperator(_n_ext(t), self.data.A_module, self.B.module)
        else:
            out = tensor_compose(self.B.m(len(t)), inners)
            out = MultiOperator(arity, self.data.A_module, self.B.module, out.table)
            self.evaluated += 1
        self._phi[t] = out
        return out

    def hphi(self, t):
        got = self._hphi.get(t)
        if got is None:
            got = self.phi(t).post(self.data.h)
            self._hphi[t] = got
        return got

    # pruned generation: a subtree whose h.phi vanishes kills every tree containing it

    def live(self, ext, internal):
        """Stable subtrees with exactly these leaf counts and nonzero h.phi."""
        key = (ext, internal)
        got = self._live.get(key)
        if got is not None:
            return got
        out = [t for t in self._shapes(ext, internal) if not self.hphi(t).is_zero()]
        self._live[key] = out
        return out

    def _shapes(self, ext, internal):
        res = []
        if ext == 0 and internal == 1:
            res.append(())
        for arity in range(2, self.max_arity + 1):
            res.extend(self._seqs(arity, ext, internal))
        return res

    def _seqs(self, n, ext, internal):
        key = (n, ext, internal)
        got = self._seq_memo.get(key)
        if got is not None:
            return got
        out = []
        if n == 0:
            out = [()] if ext == 0 and internal == 0 else []
        else:
            if ext >= 1:
                out.extend((X,) + rest for rest in self._seqs(n - 1, ext - 1, internal))
            for e in range(0, ext + 1):
                for i in range(0, internal + 1):
                    if (e == 0 and i == 0) or ext + internal - e - i < n - 1:
                        continue
                    subs = self.live(e, i)
                    if not subs:
                        continue
                    rests = self._seqs(n - 1, ext - e, internal - i)
                    out.extend((s,) + rest for s in subs for rest in rests)
        self._seq_memo[key] = out
        return out

    def root_trees(self, ext, budget):
        """Trees whose proper subtrees all survive; the root itself may still vanish."""
        out = []
        for i in range(0, budget + 1):
            out.extend(self._shapes(ext, i))
        return out


def _n_ext(t):
    if t == X:
        return 1
    return sum(_n_ext(c) for c in t)


class TransferResult:
    def __init__(self, algebra, alpha, trees_used, notes):
        self.algebra = algebra
        self.alpha = alpha
        self.trees_used = trees_used
        self.notes = notes

    def __iter__(self):
        return iter((self.algebra, self.alpha))


def transfer(data, kmax=4, check=True, name="A", prune=True):
    """Transferred products on A and the morphism alpha^k: A -> B.

    With ``prune`` only trees built from nonvanishing subtrees are visited;
    otherwise every stable tree within the leaf budget is evaluated.
    """
    if check:
        rep = check_sdr(data)
        if not rep.passed:
            raise TransferError("SDR check failed: %s" % ", ".join(rep.failures()))
    B = data.B
    hm0 = data.hm0()
    budget = leaf_budget(B, hm0)
    max_ar = B.kmax
    notes = []
    if not B.complete:
        notes.append("B is not complete: vertices of arity > %d are dropped" % B.kmax)
    sums = TreeSums(data, max_ar)
    A_mod = data.A_module
    prods, comps = {}, {}
    used = {}
    for k in range(0, kmax + 1):
        S = {}
        if prune:
            trees = sums.root_trees(k, budget)
        else:
            trees = enumerate_stable_trees(k, budget, max_ar)
        used[k] = len(trees)
        for t in trees:
            add_tables(S, sums.phi(t).table)
        Sop = MultiOperator(k, A_mod, B.module, S)
        mk = Sop.post(data.beta)
        ak = Sop.post(data.h)
        if k == 1:
            mk = MultiOperator(1, A_mod, A_mod, add_tables(dict(mk.table), _table_of(data.d_A)))
            ak = MultiOperator(1, A_mod, B.module, add_tables(dict(ak.table), _table_of(data.alpha)))
        prods[k] = MultiOperator(k, A_mod, A_mod, mk.table)
        comps[k] = ak
    A = AInftyAlgebra(A_mod, prods, kmax, None, B.signs, complete=False, name=name)
    alpha = AInftyMorphism(A, B, comps, kmax=kmax, name="alpha")
    return TransferResult(A, alpha, used, notes)


def iso_sdr(B, P, A_module=None):
    """SDR with h = 0 from an invertible map P: A -> B (alpha = P, beta = P^-1)."""
    A_module = A_module or P.source
    Pinv = invert_map(P)
    m1 = B.m(1).to_linear()
    d = Pinv @ m1 @ P
    h = LinearMap.zero(B.module, B.module, -1)
    return SDRData(B, A_module, d, P, Pinv, h)


# ---------- bimodules ----------

class AInftyBimodule:
    """Products m^{k1|1|k2}: A^k1 (x) M (x) B^k2 -> M, keyed (k1, k2).

    Table keys are tuples of basis names (A names, one M name, B names).
    """

    def __init__(self, A, B, module, products, kmax):
        self.A = A
        self.B = B
        self.module = module
        self.products = products
        self.kmax = kmax

    def op(self, k1, k2):
        return self.products.get((k1, k2), {})

    def apply(self, k1, k2, vecs):
        tab = self.op(k1, k2)
        tmp = MultiOperator(k1 + 1 + k2, self.module, self.module, tab)
        return tmp.apply(vecs)


def _identity_op(module):
    one = module.ring.one()
    return MultiOperator(1, module, module, {(n,): {n: one} for n in module.names})


def change_of_base_bimodule(f, g, kmax=None):
    """C as an (A, B)-bimodule through f: A -> C and g: B -> C."""
    if f.target.module != g.target.module:
        raise TransferError("f and g must share a target")
    C = f.target
    if kmax is None:
        kmax = effective_kmax(f, g, f.source, g.source, C)
    cutoff = C.ring.cutoff
    qf = _max_zero_insertions(vval(f.f0()), cutoff) if f.f0() else 0
    qg = _max_zero_insertions(vval(g.f0()), cutoff) if g.f0() else 0
    idC = _identity_op(C.module)
    prods = {}
    for k1 in range(0, kmax + 1):
        for k2 in range(0, kmax + 1 - k1):
            out = {}
            for l1 in range(0, k1 + qf + 1):
                for l2 in range(0, k2 + qg + 1):
                    if not C.has(l1 + 1 + l2):
                        continue
                    mC = C.m(l1 + 1 + l2)
                    if mC.is_zero():
                        continue
                    for c1 in _weak_compositions(k1, l1, bool(f.f0())):
                        if c1.count(0) > qf or any(not f.has(i) for i in c1):
                            continue
                        for c2 in _weak_compositions(k2, l2, bool(g.f0())):
                            if c2.count(0) > qg or any(not g.has(i) for i in c2):
                                continue
                            inners = [f.f(i) for i in c1] + [idC] + [g.f(i) for i in c2]
                            add_tables(out, tensor_compose(mC, inners).table)
            prods[(k1, k2)] = out
    return AInftyBimodule(f.source, g.source, C.module, prods, kmax)


def check_bimodule(M, max_total=None):
    """Residuals of the three-sum bimodule relations for each (k1|1|k2)."""
    A, B = M.A, M.B
    top = M.kmax if max_total is None else max_total
    res = {}
    curved = A.curved or B.curved
    limit = top - 1 if curved else top
    for k1 in range(0, limit + 1):
        for k2 in range(0, limit + 1 - k1):
            res["%d|1|%d" % (k1, k2)] = _bimodule_relation(M, k1, k2)
    return CheckReport("bimodule relations", M.module.ring.cutoff, res, list(res),
                       ["checked for k1+k2 <= %d" % limit])


def _bimodule_relation(M, k1, k2):
    A, B = M.A, M.B
    out = {}
    # inner A product inside the first k1 inputs
    for i in range(0, k1 + 1):
        if not A.has(i):
            continue
        inner = A.m(i)
        if inner.is_zero():
            continue
        outer_k1 = k1 - i + 1
        outer = MultiOperator(outer_k1 + 1 + k2, M.module, M.module, M.op(outer_k1, k2))
        if outer.is_zero():
            continue
        for slot in range(outer_k1):
            add_tables(out, insert_compose(outer, slot, inner).table)
    # inner bimodule product containing the module input
    for j1 in range(0, k1 + 1):
        for j2 in range(0, k2 + 1):
            inner = MultiOperator((k1 - j1) + 1 + (k2 - j2), M.module, M.module,
                                  M.op(k1 - j1, k2 - j2))
            if inner.is_zero():
                continue
            outer = MultiOperator(j1 + 1 + j2, M.module, M.module, M.op(j1, j2))
            if outer.is_zero():
                continue
            add_tables(out, insert_compose(outer, j1, inner).table)
    # inner B product inside the last k2 inputs
    for i in range(0, k2 + 1):
        if not B.has(i):
            continue
        inner = B.m(i)
        if inner.is_zero():
            continue
        outer_k2 = k2 - i + 1
        outer = MultiOperator(k1 + 1 + outer_k2, M.module, M.module, M.op(k1, outer_k2))
        if outer.is_zero():
            continue
        for slot in range(outer_k2):
            add_tables(out, insert_compose(outer, k1 + 1 + slot, inner).table)
    return out


# ---------- fiber products ----------

MINUS, ZERO, PLUS = "-:", "0:", "+:"


def effective_kmax(*objs):
    """Smallest arity cutoff among incomplete inputs (largest if all are complete)."""
    inc = [o.kmax for o in objs if not o.complete]
    return min(inc) if inc else max(o.kmax for o in objs)


def fiber_product(f, g, name=None, kmax=None):
    """A x_C B on A (+) C[1] (+) B with strict projections to A and B."""
    if f.target.module != g.target.module:
        raise TransferError("f and g must share a target")
    A, B, C = f.source, g.source, f.target
    ring = C.ring
    mod = direct_sum([("-", A.module, MINUS, 0), ("0", C.module, ZERO, 1),
                      ("+", B.module, PLUS, 0)], ring, C.module.grading)
    M = change_of_base_bimodule(f, g, kmax)
    kmax = M.kmax
    prods = {}
    for k in range(0, kmax + 1):
        t = {}
        _add_prefixed(t, A.m(k).table, MINUS, MINUS)
        _add_prefixed(t, f.f(k).table, MINUS, ZERO)
        _add_prefixed(t, B.m(k).table, PLUS, PLUS)
        _add_prefixed(t, g.f(k).table, PLUS, ZERO)
        for k1 in range(0, k):
            k2 = k - 1 - k1
            for key, v in M.op(k1, k2).items():
                nkey = (tuple(MINUS + n for n in key[:k1]) + (ZERO + key[k1],)
                        + tuple(PLUS + n for n in key[k1 + 1:]))
                _acc(t, nkey, {ZERO + n: c for n, c in v.items()})
        prods[k] = t
    P = AInftyAlgebra(mod, prods, kmax, None, C.signs, complete=False,
                      name=name or "%s x_%s %s" % (A.name, C.name, B.name))
    pi_A = strict_morphism(P, A, _projection(mod, A.module, MINUS), name="pi_A")
    pi_B = strict_morphism(P, B, _projection(mod, B.module, PLUS), name="pi_B")
    return P, pi_A, pi_B


def _acc(t, key, v):
    acc = t.setdefault(key, {})
    viadd(acc, v)
    if not acc:
        del t[key]


def _add_prefixed(t, table, pin, pout):
    for key, v in table.items():
        _acc(t, tuple(pin + n for n in key), {pout + n: c for n, c in v.items()})


def _projection(big, small, prefix):
    one = big.ring.one()
    cols = {prefix + n: {n: one} for n in small.names}
    return LinearMap(big, small, cols)


# ---------- mapping cocylinders ----------

class CocylinderDecomposition:
    """B split as A^- (+) A^0 (+) A^+ with the blocks of m^1 and (m^+_0)^-1."""

    def __init__(self, B, minus, zero, plus, A_minus, A_plus, beta_minus, beta_plus,
                 blocks, h0, notes):
        self.B = B
        self.minus, self.zero, self.plus = minus, zero, plus
        self.A_minus, self.A_plus = A_minus, A_plus
        self.beta_minus, self.beta_plus = beta_minus, beta_plus
        self.blocks = blocks        # "m-_-", "m-_0", "m0_0", "m+_0", "m+_+"
        self.h0 = h0                # (m^+_0)^-1 : A^0 -> A^+
        self.notes = notes


class RecognitionError(ValueError):
    pass


def _strip(names, prefix):
    if all(n.startswith(prefix) for n in names):
        return lambda n: n[len(prefix):]
    return lambda n: n


def _renamed_quotient(B, drop, keep, prefix, name):
    Q = quotient_by_ideal(B, drop)
    rn = _strip(keep, prefix)
    mod = FilteredModule([(rn(n), d) for n, d in Q.module.basis], B.ring, B.module.grading)
    prods = {k: {tuple(rn(n) for n in key): {rn(n): c for n, c in v.items()}
                 for key, v in op.table.items()} for k, op in Q.products.items()}
    unit = rn(Q.unit) if Q.unit is not None else None
    A = AInftyAlgebra(mod, prods, Q.kmax, unit, Q.signs, Q.complete, name)
    one = B.ring.one()
    beta = LinearMap(B.module, mod, {n: {rn(n): one} for n in keep})
    return A, strict_morphism(B, A, beta, name="beta" + name[-1])


def recognize(B, minus=None, zero=None, plus=None):
    """Check the cocylinder conditions and extract the blocks; raises RecognitionError."""
    blocks = B.module.blocks
    minus = tuple(minus if minus is not None else blocks.get("-", ()))
    zero = tuple(zero if zero is not None else blocks.get("0", ()))
    plus = tuple(plus if plus is not None else blocks.get("+", ()))
    if set(minus) | set(zero) | set(plus) != set(B.module.names):
        raise RecognitionError("blocks must cover the basis")
    if len(zero) != len(plus):
        raise RecognitionError("m^+_0 must be square (rank A^0 = rank A^+)")
    notes = []
    if not check_ideal(B, zero + plus):
        raise RecognitionError("kernel of beta^- is not an ideal")
    if not check_ideal(B, minus + zero):
        raise RecognitionError("kernel of beta^+ is not an ideal")
    m1 = B.m(1).to_linear()
    mods = {"-": _submodule(B, minus), "0": _submodule(B, zero), "+": _submodule(B, plus)}
    blk = {}
    for src, tgt in (("-", "-"), ("-", "0"), ("0", "0"), ("+", "0"), ("+", "+"),
                     ("0", "-"), ("0", "+"), ("+", "-"), ("-", "+")):
        blk[src + "_" + tgt] = m1.restrict(mods[src].names, mods[tgt].names,
                                          source=mods[src], target=mods[tgt])
    for bad in ("0_-", "0_+", "+_-", "-_+"):
        if not blk[bad].is_zero():
            raise RecognitionError("differential block %s must vanish" % bad)
    m_plus_0 = blk["+_0"]
    try:
        h0 = invert_map(m_plus_0)
    except LinearAlgebraError as e:
        raise RecognitionError("m^+_0 is not invertible: %s" % e)
    m0 = B.m0()
    m0_zero = {n: c for n, c in m0.items() if n in set(zero)}
    hm0 = h0(m0_zero)
    if hm0 and vval(hm0) <= 0:
        raise RecognitionError("val((m^+_0)^-1 m^0) must be positive")
    if map_ord(h0) < 0:
        notes.append("(m^+_0)^-1 has negative order %s" % map_ord(h0))
    A_minus, beta_minus = _renamed_quotient(B, zero + plus, minus, MINUS, "A-")
    A_plus, beta_plus = _renamed_quotient(B, minus + zero, plus, PLUS, "A+")
    names = {"-_-": "m-_-", "-_0": "m-_0", "0_0": "m0_0", "+_0": "m+_0", "+_+": "m+_+"}
    blocks_out = {v: blk[k] for k, v in names.items()}
    return CocylinderDecomposition(B, minus, zero, plus, A_minus, A_plus, beta_minus,
                                   beta_plus, blocks_out, h0, notes)


def _submodule(B, names):
    deg = dict(B.module.basis)
    return FilteredModule([(n, deg[n]) for n in names], B.ring, B.module.grading)


def mapping_cocylinder(f):
    """B_f = A^- x_{A^+} A^+ (fiber product with the identity), recognized."""
    idp = identity_morphism(f.target)
    B, _, _ = fiber_product(f, idp, name="B_" + f.name)
    return recognize(B)


def cocylinder_sdr(dec):
    """alpha(x) = x - h m^-_0 x, beta = beta^-, h = (m^+_0)^-1 on A^0."""
    B = dec.B
    Am = dec.A_minus
    one = B.ring.one()
    rn = _strip(dec.minus, MINUS)
    back = {rn(n): n for n in dec.minus}
    m_minus_0 = dec.blocks["m-_0"]
    h0 = dec.h0
    cols = {}
    for a in Am.module.names:
        n = back[a]
        v = {n: one}
        viadd(v, vneg(h0(m_minus_0.col(n))))
        cols[a] = v
    alpha = LinearMap(Am.module, B.module, cols)
    beta = dec.beta_minus.f(1).to_linear()
    h = LinearMap(B.module, B.module, {n: h0.col(n) for n in dec.zero}, -1, relaxed=True)
    d = beta @ B.m(1).to_linear() @ alpha
    return SDRData(B, Am.module, d, alpha, beta, h)


def cocylinder_to_morphism(dec, kmax=None, name="Theta"):
    """Theta_B = beta^+ o alpha^k, with alpha^k the transferred morphism.

    Returns (Theta, transfer result).  Theta has the recovered A^- structure
    as its source.
    """
    data = cocylinder_sdr(dec)
    kmax = dec.B.kmax if kmax is None else kmax
    res = transfer(data, kmax=kmax, name="A-")
    beta_plus = dec.beta_plus.f(1).to_linear()
    comps = {k: op.post(beta_plus) for k, op in res.alpha.comps.items()}
    src = res.algebra.replace(unit=dec.A_minus.unit)
    comps = {k: MultiOperator(k, src.module, dec.A_plus.module, op.table) for k, op in comps.items()}
    theta = AInftyMorphism(src, dec.A_plus, comps, kmax=kmax, name=name)
    return theta, res

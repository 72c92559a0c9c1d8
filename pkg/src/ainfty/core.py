"""Filtered A-infinity algebras on finite bases.

Products are sparse tables: ``table[(b1, ..., bk)]`` is the vector
m^k(b1, ..., bk).  Everything is truncated at the ring's energy cutoff and at
an arity cutoff ``kmax``.  An algebra flagged ``complete`` promises that all
products above ``kmax`` vanish (a curved DGA, say), which lets relation checks
reach arity ``kmax`` even when m^0 is nonzero.

Sign modes
    "char2"   coefficients in the two-element field, no signs at all.
    "koszul"  char 0, reduced-degree signs: the term with an inner product
              followed by inputs a_{l} ... a_{k} carries (-1)^{sum(|a_l| - 1)}.
    "none"    char 0 but signs ignored (uncertified; used for tree sums whose
              signs are not fixed).
"""

from itertools import product

from .linear import FilteredModule, LinearMap, viadd, vval, vformat
from .scalars import INF


class AlgebraError(ValueError):
    pass


# ---------- multilinear operators ----------

class MultiOperator:
    """Sparse k-ary map source^{(x)k} -> target."""

    __slots__ = ("arity", "source", "target", "table", "_slot_index")

    def __init__(self, arity, source, target, table=None):
        self.arity = arity
        self.source = source
        self.target = target
        self.table = {}
        for key, v in (table or {}).items():
            if len(key) != arity:
                raise AlgebraError("key %r does not have length %d" % (key, arity))
            if v:
                self.table[tuple(key)] = v
        self._slot_index = None

    @classmethod
    def constant(cls, source, target, v):
        return cls(0, source, target, {(): v} if v else {})

    @classmethod
    def from_linear(cls, f):
        return cls(1, f.source, f.target, {(k,): v for k, v in f.cols.items()})

    def to_linear(self):
        if self.arity != 1:
            raise AlgebraError("only unary operators are linear maps")
        return LinearMap(self.source, self.target, {k[0]: v for k, v in self.table.items()})

    def value(self):
        """The element of an arity-0 operator."""
        return self.table.get((), {})

    def is_zero(self):
        return not self.table

    def ord(self):
        return min((vval(v) for v in self.table.values()), default=INF)

    def slot_index(self, slot):
        if self._slot_index is None:
            self._slot_index = {}
        idx = self._slot_index.get(slot)
        if idx is None:
            idx = {}
            for key in self.table:
                idx.setdefault(key[slot], []).append(key)
            self._slot_index[slot] = idx
        return idx

    def apply(self, vecs):
        """Multilinear evaluation on a list of vectors."""
        if len(vecs) != self.arity:
            raise AlgebraError("arity mismatch: %d inputs for arity %d" % (len(vecs), self.arity))
        out = {}
        if self.arity == 0:
            return dict(self.table.get((), {}))
        if any(not v for v in vecs):
            return out
        n_combo = 1
        for v in vecs:
            n_combo *= len(v)
        if n_combo <= len(self.table):
            for combo in product(*(list(v.items()) for v in vecs)):
                col = self.table.get(tuple(k for k, _ in combo))
                if col:
                    c = combo[0][1]
                    for _, x in combo[1:]:
                        c = c * x
                    if not c.is_zero():
                        viadd(out, col, c)
        else:
            for key, col in self.table.items():
                c = None
                for k, v in zip(key, vecs):
                    x = v.get(k)
                    if x is None:
                        c = None
                        break
                    c = x if c is None else c * x
                if c is not None and not c.is_zero():
                    viadd(out, col, c)
        return out

    def __call__(self, *vecs):
        return self.apply(list(vecs))

    def __add__(self, other):
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = viadd(dict(t.get(k, {})), v)
        return MultiOperator(self.arity, self.source, self.target, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        ring = self.target.ring
        c = ring.coerce(c)
        return MultiOperator(self.arity, self.source, self.target,
                             {k: viadd({}, v, c) for k, v in self.table.items()})

    def __eq__(self, other):
        if not isinstance(other, MultiOperator):
            return NotImplemented
        return self.arity == other.arity and self.table == other.table

    def post(self, f):
        """f o self for a LinearMap (or MultiOperator of arity 1) f."""
        if isinstance(f, MultiOperator):
            f = f.to_linear()
        return MultiOperator(self.arity, self.source, f.target,
                             {k: f(v) for k, v in self.table.items()})

    def __repr__(self):
        lines = ["MultiOperator(arity=%d)" % self.arity]
        for k in sorted(self.table):
            lines.append("  %s -> %s" % (k, vformat(self.table[k])))
        return "\n".join(lines)


def tensor_compose(outer, inners, target=None):
    """outer o (inner_1 (x) ... (x) inner_r), keys concatenated; no signs."""
    if len(inners) != outer.arity:
        raise AlgebraError("need %d inner operators" % outer.arity)
    arity = sum(op.arity for op in inners)
    source = inners[0].source if inners else outer.source
    if any(op.is_zero() for op in inners):
        return MultiOperator(arity, source, target or outer.target)
    table = {}
    for combo in product(*(list(op.table.items()) for op in inners)):
        key = ()
        for k, _ in combo:
            key += k
        v = outer.apply([vec for _, vec in combo])
        if v:
            if key in table:
                viadd(table[key], v)
                if not table[key]:
                    del table[key]
            else:
                table[key] = v
    return MultiOperator(arity, source, target or outer.target, table)


def insert_compose(outer, slot, inner, sign=None):
    """outer o (id^slot (x) inner (x) id^rest) as a table.

    ``sign(key, slot, inner_arity)`` returns +1/-1 (or None for no signs).
    """
    arity = outer.arity - 1 + inner.arity
    table = {}
    idx = outer.slot_index(slot)
    for ikey, ivec in inner.table.items():
        for name, c in ivec.items():
            for okey in idx.get(name, ()):
                key = okey[:slot] + ikey + okey[slot + 1:]
                cc = c
                if sign is not None and sign(key, slot, inner.arity) < 0:
                    cc = -c
                acc = table.setdefault(key, {})
                viadd(acc, outer.table[okey], cc)
                if not acc:
                    del table[key]
    return MultiOperator(arity, inner.source, outer.target, table)


def add_tables(dst, table):
    for k, v in table.items():
        acc = dst.setdefault(k, {})
        viadd(acc, v)
        if not acc:
            del dst[k]
    return dst


def koszul_sign(module):
    """Reduced-degree sign: parity of sum(|a| - 1) over inputs right of the inner block."""
    deg = module.degree

    def sign(key, slot, inner_arity):
        s = 0
        for name in key[slot + inner_arity:]:
            s += deg(name) - 1
        return -1 if s % 2 else 1
    return sign


# ---------- reports ----------

class CheckReport:
    """Residuals of a family of identities, one entry per label (usually arity)."""

    def __init__(self, name, cutoff, residuals, certified=None, notes=()):
        self.name = name
        self.cutoff = cutoff
        self.residuals = residuals          # label -> {key: vector}
        self.certified = certified          # labels the truncation can certify
        self.notes = list(notes)

    def residual_val(self, label):
        t = self.residuals.get(label, {})
        return min((vval(v) for v in t.values()), default=INF)

    @property
    def max_residual_val(self):
        """Smallest valuation of anything left over (INF when it all vanished)."""
        return min((self.residual_val(k) for k in self.residuals), default=INF)

    @property
    def passed(self):
        return all(not t for t in self.residuals.values())

    def __bool__(self):
        return self.passed

    def failures(self):
        return [k for k, t in self.residuals.items() if t]

    def summary_lines(self):
        lines = ["%s (certified up to energy %s)" % (self.name, self.cutoff)]
        for k in self.residuals:
            v = self.residual_val(k)
            lines.append("  %-14s %s  residual valuation %s" % (
                k, "ok  " if v == INF else "FAIL", "inf" if v == INF else v))
        for n in self.notes:
            lines.append("  note: " + n)
        return lines

    def __repr__(self):
        return "\n".join(self.summary_lines())


# ---------- algebras ----------

class AInftyAlgebra:
    """A filtered A-infinity algebra with products m^0 ... m^kmax."""

    def __init__(self, module, products, kmax=None, unit=None, signs=None,
                 complete=False, name="A", check_filtered=True):
        self.module = module
        self.ring = module.ring
        ops = {}
        for k, p in products.items():
            if not isinstance(p, MultiOperator):
                p = MultiOperator(k, module, module, p)
            ops[k] = p
        if kmax is None:
            kmax = max(ops, default=0)
        self.kmax = kmax
        for k in range(kmax + 1):
            ops.setdefault(k, MultiOperator(k, module, module))
        self.products = {k: ops[k] for k in range(kmax + 1)}
        self.unit = unit
        if signs is None:
            signs = "char2" if self.ring.char == 2 else "koszul"
        if signs == "char2" and self.ring.char != 2:
            raise AlgebraError("char2 sign mode needs a characteristic-2 ring")
        self.signs = signs
        self.complete = complete
        self.name = name
        if check_filtered:
            self._validate()

    def _validate(self):
        m0 = self.m0()
        if m0 and vval(m0) <= 0:
            raise AlgebraError("curvature must have positive valuation (got %s)" % vval(m0))
        for k, op in self.products.items():
            if op.ord() < 0:
                raise AlgebraError("m^%d is not filtered (order %s)" % (k, op.ord()))

    def m(self, k):
        if k in self.products:
            return self.products[k]
        if self.complete:
            return MultiOperator(k, self.module, self.module)
        raise AlgebraError("m^%d is beyond the arity cutoff %d" % (k, self.kmax))

    def has(self, k):
        return k <= self.kmax or self.complete

    def m0(self):
        return self.products[0].value()

    @property
    def curved(self):
        return bool(self.m0())

    def sign_fn(self):
        if self.signs == "koszul":
            return koszul_sign(self.module)
        return None

    def replace(self, **kw):
        args = dict(module=self.module, products=dict(self.products), kmax=self.kmax,
                    unit=self.unit, signs=self.signs, complete=self.complete, name=self.name)
        args.update(kw)
        return AInftyAlgebra(**args)

    def certified_arity(self):
        """Largest arity whose relation only involves products we hold.

        A complete algebra has m^k = 0 above kmax, so every relation is known;
        the last one with a nonzero term has arity 2 kmax - 1.
        """
        if self.complete:
            return max(self.kmax, 2 * self.kmax - 1)
        if not self.curved:
            return self.kmax
        return self.kmax - 1

    def __repr__(self):
        return "AInftyAlgebra(%s, rank=%d, kmax=%d%s)" % (
            self.name, self.module.rank(), self.kmax, ", complete" if self.complete else "")


def relation_table(A, k):
    """sum_{j1+i+j2=k} +- m^{j1+1+j2}(id^j1 (x) m^i (x) id^j2) as a table."""
    sign = A.sign_fn()
    out = {}
    for i in range(0, k + 1):
        inner = A.m(i)
        if inner.is_zero():
            continue
        outer_ar = k - i + 1
        if not A.has(outer_ar):
            continue
        outer = A.m(outer_ar)
        if outer.is_zero():
            continue
        for slot in range(outer_ar):
            add_tables(out, insert_compose(outer, slot, inner, sign).table)
    return out


def check_quadratic_relations(A, max_arity=None):
    """Residuals of the quadratic A-infinity relations, arity by arity."""
    top = A.certified_arity() if max_arity is None else max_arity
    res = {}
    for k in range(0, top + 1):
        res["arity %d" % k] = relation_table(A, k)
    notes = ["relations certified for arities 0..%d at energy < %s" % (top, A.ring.cutoff)]
    if A.certified_arity() < A.kmax:
        notes.append("arity %d would need m^%d (curved, not complete)" % (A.kmax, A.kmax + 1))
    return CheckReport("quadratic A-infinity relations for %s" % A.name, A.ring.cutoff,
                       res, list(range(top + 1)), notes)


def check_unit(A, e):
    """Strict unit test: m^2(e,x) = +-x = m^2(x,e) and every other insertion of e vanishes."""
    if isinstance(e, str):
        e = A.module.basis_vector(e)
    mod = A.module
    if not e:
        return False
    try:
        d = mod.vector_degree(e)
    except Exception:
        return False
    if mod.grading is not None and d != 0:
        return False
    if vval(e) != 0:
        return False
    one = A.ring.one()
    sign = A.signs == "koszul"
    for k in range(1, A.kmax + 1):
        m = A.m(k)
        for slot in range(k):
            for key in product(mod.names, repeat=k - 1):
                vecs = [mod.basis_vector(n) for n in key]
                vecs.insert(slot, e)
                out = m.apply(vecs)
                if k == 2:
                    x = key[0]
                    want = {x: one}
                    if sign and slot == 0 and mod.degree(x) % 2:
                        want = {x: -one}
                    if out != want:
                        return False
                elif out:
                    return False
    return True


def zero_valuation_reduction(A):
    """Keep only the valuation-zero part of every structure constant; drop m^0."""
    ring = A.ring

    def red(c):
        if hasattr(ring, "weights"):
            return ring.from_terms([(e, x) for e, x in c.terms if ring.degree(e) == 0])
        return ring.T(0, c.coeff(0))

    prods = {}
    for k, op in A.products.items():
        if k == 0:
            prods[0] = {}
            continue
        t = {}
        for key, v in op.table.items():
            w = {n: red(c) for n, c in v.items()}
            w = {n: c for n, c in w.items() if not c.is_zero()}
            if w:
                t[key] = w
        prods[k] = t
    return A.replace(products=prods, name=A.name + "_0")


def check_ideal(A, names):
    """True iff every product with at least one input in span(names) lands in span(names)."""
    return not ideal_violations(A, names)


def ideal_violations(A, names):
    I = set(names)
    bad = []
    for k, op in A.products.items():
        for key, v in op.table.items():
            if any(n in I for n in key) and any(n not in I for n in v):
                bad.append((k, key))
    return bad


def quotient_by_ideal(A, names):
    bad = ideal_violations(A, names)
    if bad:
        raise AlgebraError("not an ideal: m^%d%s leaves it" % (bad[0][0], bad[0][1]))
    I = set(names)
    keep = [(n, d) for n, d in A.module.basis if n not in I]
    mod = FilteredModule(keep, A.ring, A.module.grading)
    prods = {}
    for k, op in A.products.items():
        t = {}
        for key, v in op.table.items():
            if any(n in I for n in key):
                continue
            w = {n: c for n, c in v.items() if n not in I}
            if w:
                t[key] = w
        prods[k] = t
    unit = A.unit if A.unit is not None and A.unit not in I else None
    return AInftyAlgebra(mod, prods, A.kmax, unit, A.signs, A.complete, A.name + "/I")


def positive_filtration_quotient(A):
    """Quotient by the positive-valuation part: the same data as zero_valuation_reduction."""
    return zero_valuation_reduction(A)


def check_degrees(A):
    """m^k raises degree by 2-k (mod 2 in Z2 mode); returns offending entries."""
    mod = A.module
    if mod.grading is None:
        return []
    bad = []
    for k, op in A.products.items():
        for key, v in op.table.items():
            want = sum(mod.degree(n) for n in key) + 2 - k
            for n in v:
                got = mod.degree(n)
                if (mod.grading == "Z2" and (got - want) % 2) or (mod.grading == "Z" and got != want):
                    bad.append((k, key, n))
    return bad


# ---------- small constructors ----------

def curved_dga(module, mult, d=None, curvature=None, unit=None, name="A", signs=None):
    """Turn (product, differential, curvature) into m^0, m^1, m^2 of a complete algebra.

    ``mult[(x, y)]`` and ``d[x]`` are vectors.  In koszul mode the usual
    conversion m^1(a) = (-1)^|a| da, m^2(a, b) = (-1)^|b| ab is applied.
    """
    ring = module.ring
    koszul = (signs or ("char2" if ring.char == 2 else "koszul")) == "koszul"
    m2 = {}
    for (x, y), v in mult.items():
        if koszul and module.degree(y) % 2:
            v = {n: -c for n, c in v.items()}
        m2[(x, y)] = v
    m1 = {}
    for x, v in (d or {}).items():
        if koszul and module.degree(x) % 2:
            v = {n: -c for n, c in v.items()}
        m1[(x,)] = v
    m0 = {(): curvature} if curvature else {}
    return AInftyAlgebra(module, {0: m0, 1: m1, 2: m2}, 2, unit, signs, complete=True, name=name)

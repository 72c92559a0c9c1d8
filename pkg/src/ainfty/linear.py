"""Filtered modules, sparse vectors and the order/valuation calculus of maps.

A vector is a plain ``dict`` from basis name to a nonzero scalar.  A
``LinearMap`` stores one such vector per source basis element.  ``ord`` is
the smallest valuation jump of a map, ``val`` (square maps only) the largest,
read off from invariant factors.
"""

from fractions import Fraction

from .scalars import INF, ScalarError


class LinearAlgebraError(ArithmeticError):
    pass


# ---------- vectors ----------

def vadd(u, v):
    if not v:
        return u
    if not u:
        return v
    out = dict(u)
    for k, c in v.items():
        s = out.get(k)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def viadd(acc, v, c=None):
    """acc += c*v in place (c=None means 1)."""
    for k, x in v.items():
        if c is not None:
            x = x * c
            if x.is_zero():
                continue
        s = acc.get(k)
        s = x if s is None else s + x
        if s.is_zero():
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


def vscale(c, v):
    out = {}
    for k, x in v.items():
        y = c * x
        if not y.is_zero():
            out[k] = y
    return out


def vneg(v):
    return {k: -x for k, x in v.items()}


def vsub(u, v):
    return vadd(u, vneg(v))


def vval(v):
    return min((x.val() for x in v.values()), default=INF)


def vclean(v):
    return {k: x for k, x in v.items() if not x.is_zero()}


def vrecast(v, ring):
    """Move a vector into a ring with another cutoff (same kind)."""
    out = {}
    for k, x in v.items():
        y = x.truncate(ring.cutoff)
        if not y.is_zero():
            out[k] = y
    return out


def vformat(v, order=None):
    if not v:
        return "0"
    keys = order if order is not None else sorted(v)
    parts = []
    for k in keys:
        if k in v:
            parts.append("(%s)*%s" % (v[k], k))
    return " + ".join(parts)


# ---------- modules ----------

class FilteredModule:
    """Finite free module with a named, graded, valuation-zero basis.

    ``grading`` is "Z" (integer degrees), "Z2" (degrees mod 2) or None
    (ungraded; degrees are carried but never enforced).
    """

    def __init__(self, basis, ring, grading="Z", blocks=None):
        names = [b[0] for b in basis]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        self.ring = ring
        self.grading = grading
        self.basis = tuple((n, int(d)) for n, d in basis)
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(names)}
        self._deg = {n: self._norm(d) for n, d in self.basis}
        # optional named blocks (e.g. the three summands of a fiber product)
        self.blocks = dict(blocks or {})

    def _norm(self, d):
        return d % 2 if self.grading == "Z2" else d

    def degree(self, name):
        return self._deg[name]

    def rank(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.index

    def __eq__(self, other):
        return (isinstance(other, FilteredModule) and self.basis == other.basis
                and self.ring == other.ring and self.grading == other.grading)

    def __hash__(self):
        return hash((self.basis, self.ring, self.grading))

    def __repr__(self):
        return "FilteredModule(%s)" % ", ".join("%s:%d" % b for b in self.basis)

    def element(self, **coeffs):
        return {k: self.ring.coerce(v) for k, v in coeffs.items() if not self.ring.coerce(v).is_zero()}

    def basis_vector(self, name):
        return {name: self.ring.one()}

    def with_ring(self, ring):
        return FilteredModule(self.basis, ring, self.grading, self.blocks)

    def shifted(self, offset, rename=None):
        rename = rename or (lambda n: n)
        return FilteredModule([(rename(n), d + offset) for n, d in self.basis], self.ring, self.grading)

    def vector_degree(self, v):
        """Common degree of a homogeneous vector (None for 0; raises if mixed)."""
        ds = {self.degree(k) for k in v}
        if len(ds) > 1:
            raise LinearAlgebraError("vector is not homogeneous: %s" % v)
        return ds.pop() if ds else None


def direct_sum(parts, ring, grading="Z"):
    """parts: list of (block name, module, prefix, degree offset)."""
    basis = []
    blocks = {}
    for block, mod, prefix, off in parts:
        names = []
        for n, d in mod.basis:
            basis.append((prefix + n, d + off))
            names.append(prefix + n)
        blocks[block] = tuple(names)
    return FilteredModule(basis, ring, grading, blocks)


# ---------- linear maps ----------

class LinearMap:
    """Sparse linear map: ``cols[name]`` is the image of a source basis element."""

    def __init__(self, source, target, cols=None, degree=0, relaxed=False):
        self.source = source
        self.target = target
        self.cols = {k: v for k, v in (cols or {}).items() if v}
        self.degree = degree
        self.relaxed = relaxed

    @classmethod
    def identity(cls, module):
        one = module.ring.one()
        return cls(module, module, {n: {n: one} for n in module.names})

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, {}, degree)

    @classmethod
    def from_matrix(cls, source, target, rows, relaxed=False):
        """rows[i][j] is the coefficient of target[i] in the image of source[j]."""
        ring = target.ring
        cols = {}
        for j, s in enumerate(source.names):
            col = {}
            for i, t in enumerate(target.names):
                c = ring.coerce(rows[i][j])
                if not c.is_zero():
                    col[t] = c
            cols[s] = col
        return cls(source, target, cols, relaxed=relaxed)

    def __call__(self, v):
        out = {}
        for k, c in v.items():
            col = self.cols.get(k)
            if col:
                viadd(out, col, c)
        return out

    def col(self, name):
        return self.cols.get(name, {})

    def entry(self, t, s):
        return self.cols.get(s, {}).get(t, self.target.ring.zero())

    def matrix(self):
        return [[self.entry(t, s) for s in self.source.names] for t in self.target.names]

    def compose(self, other):
        """self o other."""
        return LinearMap(other.source, self.target,
                         {s: self(v) for s, v in other.cols.items()},
                         self.degree + other.degree, self.relaxed or other.relaxed)

    __matmul__ = compose

    def __add__(self, other):
        cols = dict(self.cols)
        for s, v in other.cols.items():
            cols[s] = vadd(cols.get(s, {}), v)
        return LinearMap(self.source, self.target, cols, self.degree, self.relaxed or other.relaxed)

    def __neg__(self):
        return LinearMap(self.source, self.target, {s: vneg(v) for s, v in self.cols.items()},
                         self.degree, self.relaxed)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LinearMap(self.source, self.target, {s: vscale(c, v) for s, v in self.cols.items()},
                         self.degree, self.relaxed)

    def restrict(self, src_names, tgt_names, source=None, target=None):
        tgt = set(tgt_names)
        cols = {}
        for s in src_names:
            cols[s] = {t: c for t, c in self.cols.get(s, {}).items() if t in tgt}
        return LinearMap(source or self.source, target or self.target, cols, self.degree, self.relaxed)

    def is_zero(self):
        return not any(self.cols.values())

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        keys = set(self.cols) | set(other.cols)
        return all(self.cols.get(k, {}) == other.cols.get(k, {}) for k in keys)

    def __repr__(self):
        lines = []
        for s in self.source.names:
            lines.append("  %s -> %s" % (s, vformat(self.cols.get(s, {}), self.target.names)))
        return "LinearMap(\n%s\n)" % "\n".join(lines)


# ---------- order and valuation ----------

def map_ord(f):
    """Smallest valuation of an entry (INF for the zero map)."""
    return min((vval(v) for v in f.cols.values()), default=INF)


def _dense(f, ring=None):
    rows = f.matrix()
    if ring is not None:
        rows = [[x.truncate(ring.cutoff) for x in r] for r in rows]
    return rows


def invariant_factors(f, margin=None):
    """Valuations of the invariant factors of a square map (INF if singular).

    Full pivoting on the entry of least valuation; every other entry in the
    pivot row/column is then an exact valuation-ring multiple of the pivot.
    The work is done at an enlarged cutoff so the pivots we read are exact.
    """
    n = f.source.rank()
    if f.target.rank() != n:
        raise LinearAlgebraError("map_val needs a square map")
    ring = f.target.ring
    if margin is None:
        o = map_ord(f)
        margin = ring.cutoff * (n + 1) + (abs(o) if o != INF else 0) * n
    work = ring.extended(ring.cutoff + margin)
    a = _dense(f, work)
    rows = list(range(n))
    cols = list(range(n))
    out = []
    while rows:
        best = None
        for i in rows:
            for j in cols:
                x = a[i][j]
                if not x.is_zero() and (best is None or x.val() < best[0]):
                    best = (x.val(), i, j)
        if best is None:
            out.extend([INF] * len(rows))
            break
        v, pi, pj = best
        if v >= ring.cutoff:
            # below the precision we can certify
            out.extend([INF] * len(rows))
            break
        out.append(v)
        piv_inv = a[pi][pj].inverse()
        for i in rows:
            if i == pi or a[i][pj].is_zero():
                continue
            q = a[i][pj] * piv_inv
            for j in cols:
                if not a[pi][j].is_zero():
                    a[i][j] = a[i][j] - q * a[pi][j]
        rows.remove(pi)
        cols.remove(pj)
    return sorted(out)


def map_val(f):
    """Largest valuation jump of a square map; INF when it is not invertible."""
    fac = invariant_factors(f)
    return max(fac, default=Fraction(0)) if fac else Fraction(0)


def leading_decomposition(f, lam):
    """Split f = lead + rest with lead entries of valuation <= lam, ord(rest) > lam."""
    lead, rest = {}, {}
    for s, v in f.cols.items():
        for t, c in v.items():
            lo = [(e, a) for e, a in _split_terms(c) if e <= lam]
            hi = [(e, a) for e, a in _split_terms(c) if e > lam]
            if lo:
                lead.setdefault(s, {})[t] = _rebuild(c, lo)
            if hi:
                rest.setdefault(s, {})[t] = _rebuild(c, hi)
    mk = lambda cols: LinearMap(f.source, f.target, cols, f.degree, f.relaxed)
    return mk(lead), mk(rest)


def _split_terms(c):
    ring = c.ring
    if hasattr(ring, "weights"):
        return [(Fraction(ring.degree(e)), (e, x)) for e, x in c.terms]
    return [(e, (e, x)) for e, x in c.terms]


def _rebuild(c, pieces):
    return c.ring.from_terms([p for _, p in pieces])


def _identity_residual_val(f, g):
    """Valuation of g o f - id (INF if exact)."""
    r = g.compose(f) - LinearMap.identity(f.source)
    return map_ord(r)


def invert_map(f, cutoff=None):
    """Two-sided inverse of a square map whose leading part is invertible.

    Gauss-Jordan with pivots of least valuation, done at an enlarged internal
    cutoff; the margin is raised until both residuals vanish at ``cutoff``.
    The result is flagged ``relaxed`` since it may have negative order.
    """
    n = f.source.rank()
    if f.target.rank() != n:
        raise LinearAlgebraError("invert_map needs a square map")
    ring = f.target.ring
    if cutoff is not None and cutoff != ring.cutoff:
        raise LinearAlgebraError("cutoff mismatch")
    fac = invariant_factors(f)
    if any(x == INF for x in fac):
        raise LinearAlgebraError("singular leading part: map is not invertible at this cutoff")
    spread = max(fac, default=0) - min(fac, default=0)
    o = map_ord(f)
    margin = (spread + abs(o) + 1) * (n + 1)
    for _ in range(8):
        g = _gauss_jordan(f, ring.extended(ring.cutoff + margin))
        if _identity_residual_val(f, g) >= ring.cutoff and _identity_residual_val(g, f) >= ring.cutoff:
            return g
        margin *= 2
    raise LinearAlgebraError("inverse did not stabilise")


def _gauss_jordan(f, work):
    n = f.source.rank()
    ring = f.target.ring
    a = _dense(f, work)
    inv = [[work.one() if i == j else work.zero() for j in range(n)] for i in range(n)]
    used_rows = set()
    piv_of_col = {}
    for _ in range(n):
        best = None
        for i in range(n):
            if i in used_rows:
                continue
            for j in range(n):
                if j in piv_of_col:
                    continue
                x = a[i][j]
                if not x.is_zero() and (best is None or x.val() < best[0]):
                    best = (x.val(), i, j)
        if best is None:
            raise LinearAlgebraError("singular map")
        _, pi, pj = best
        p_inv = a[pi][pj].inverse()
        a[pi] = [x * p_inv for x in a[pi]]
        inv[pi] = [x * p_inv for x in inv[pi]]
        for i in range(n):
            if i == pi or a[i][pj].is_zero():
                continue
            q = a[i][pj]
            a[i] = [x - q * y for x, y in zip(a[i], a[pi])]
            inv[i] = [x - q * y for x, y in zip(inv[i], inv[pi])]
        used_rows.add(pi)
        piv_of_col[pj] = pi
    # row piv_of_col[j] of a is now e_j; the inverse maps target i -> source j
    rows = [[None] * n for _ in range(n)]
    for j in range(n):
        rows[j] = inv[piv_of_col[j]]
    g = {}
    for i, t in enumerate(f.target.names):
        col = {}
        for j, s in enumerate(f.source.names):
            c = rows[j][i].truncate(ring.cutoff)
            if not c.is_zero():
                col[s] = c
        g[t] = col
    return LinearMap(f.target, f.source, g, -f.degree, relaxed=True)


def residue_matrix(f):
    """Valuation-zero part of f as a dense matrix over the residue field."""
    out = []
    for t in f.target.names:
        row = []
        for s in f.source.names:
            c = f.entry(t, s)
            row.append(_residue(c))
        out.append(row)
    return out


def _residue(c):
    ring = c.ring
    if hasattr(ring, "weights"):
        return sum((x for e, x in c.terms if ring.degree(e) == 0), Fraction(0))
    for e, x in c.terms:
        if e == 0:
            return x
    return 0


def rank_over_field(rows, char=0):
    """Rank of a dense matrix over Q or F2 (plain Gaussian elimination)."""
    m = [list(r) for r in rows]
    if char == 2:
        m = [[int(x) % 2 for x in r] for r in m]
    else:
        m = [[Fraction(x) for x in r] for r in m]
    rank = 0
    ncols = len(m[0]) if m else 0
    for j in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][j] != 0:
                if char == 2:
                    m[i] = [(x + y) % 2 for x, y in zip(m[i], m[rank])]
                else:
                    q = m[i][j] / m[rank][j]
                    m[i] = [x - q * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def residue_rank(f):
    """Rank of the valuation-zero reduction of f."""
    return rank_over_field(residue_matrix(f), f.target.ring.char)

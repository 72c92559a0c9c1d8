"""Truncated coefficient rings.

Two kinds of scalar live here:

* ``Novikov`` - finite sums  sum c_i T^{lam_i}  with rational exponents,
  truncated at an energy cutoff.  Coefficients are rationals (char 0) or
  elements of the two-element field (char 2).
* ``ChartSeries`` - multivariate Laurent series in named symbols, with a
  weight per symbol.  The valuation of a monomial is its weighted degree and
  everything of valuation >= N is dropped.  Symbols of weight 0 are units.

Both expose the same small surface (``+ - *``, ``inverse``, ``val``, ``exp``,
``log1p``, ``is_zero``) so the linear algebra and the A-infinity code never
need to know which one they hold.
"""

from fractions import Fraction
from math import factorial

INF = float("inf")


class ScalarError(ArithmeticError):
    pass


def _q(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


# ---------- Novikov ----------

class NovikovRing:
    """Context for truncated Novikov scalars: cutoff and characteristic."""

    def __init__(self, cutoff, char=0):
        if char not in (0, 2):
            raise ValueError("characteristic must be 0 or 2")
        self.cutoff = _q(cutoff)
        self.char = char
        self._zero = Novikov(self, ())
        self._one = Novikov(self, ((Fraction(0), self._c(1)),)) if self.cutoff > 0 else self._zero

    def _c(self, c):
        if self.char == 2:
            c = _q(c)
            if c.denominator % 2 == 0:
                raise ScalarError("coefficient %s is not defined mod 2" % c)
            return c.numerator % 2
        return _q(c)

    def __eq__(self, other):
        return isinstance(other, NovikovRing) and (self.cutoff, self.char) == (other.cutoff, other.char)

    def __hash__(self):
        return hash(("nov", self.cutoff, self.char))

    def __repr__(self):
        return "NovikovRing(cutoff=%s, char=%d)" % (self.cutoff, self.char)

    @property
    def tag(self):
        return "f2" if self.char == 2 else "q"

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def T(self, lam=0, c=1):
        """The monomial c T^lam (zero if lam >= cutoff)."""
        lam = _q(lam)
        c = self._c(c)
        if c == 0 or lam >= self.cutoff:
            return self._zero
        return Novikov(self, ((lam, c),))

    def from_terms(self, pairs):
        acc = {}
        for lam, c in pairs:
            lam = _q(lam)
            if lam >= self.cutoff:
                continue
            acc[lam] = acc.get(lam, 0) + self._c(c)
        return self._build(acc)

    def _build(self, acc):
        if self.char == 2:
            items = sorted((k, 1) for k, v in acc.items() if v % 2)
        else:
            items = sorted((k, v) for k, v in acc.items() if v != 0)
        return Novikov(self, tuple(items))

    def coerce(self, x):
        if isinstance(x, Novikov):
            if x.ring != self:
                raise ScalarError("cutoff mismatch: %r vs %r" % (x.ring, self))
            return x
        if isinstance(x, (int, Fraction)):
            return self.T(0, x)
        raise TypeError("cannot coerce %r to a Novikov scalar" % (x,))

    def extended(self, cutoff):
        return NovikovRing(cutoff, self.char)


class Novikov:
    """Immutable truncated Novikov scalar.  ``terms`` is sorted by exponent."""

    __slots__ = ("ring", "terms", "_h")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._h = None

    # comparisons and hashing
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.coerce(other)
        return isinstance(other, Novikov) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.ring, self.terms))
        return self._h

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def val(self):
        return self.terms[0][0] if self.terms else INF

    def leading(self):
        return self.terms[0] if self.terms else None

    def _other(self, other):
        if isinstance(other, Novikov):
            if other.ring != self.ring:
                raise ScalarError("cutoff mismatch: %r vs %r" % (self.ring, other.ring))
            return other
        return self.ring.coerce(other)

    def __add__(self, other):
        other = self._other(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for k, v in other.terms:
            acc[k] = acc.get(k, 0) + v
        return self.ring._build(acc)

    __radd__ = __add__

    def __neg__(self):
        if self.ring.char == 2:
            return self
        return Novikov(self.ring, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        if not self.terms or not other.terms:
            return self.ring._zero
        return self.ring._build(_mul_terms(self.terms, other.terms, self.ring.cutoff))

    __rmul__ = __mul__

    def truncate(self, cutoff):
        """Recast into the ring with a different cutoff."""
        ring = self.ring.extended(cutoff)
        return Novikov(ring, tuple(t for t in self.terms if t[0] < ring.cutoff))

    def inverse(self):
        if not self.terms:
            raise ScalarError("inverse of zero")
        lam, c = self.terms[0]
        ring = self.ring
        work = ring.extended(ring.cutoff + lam)
        cinv = work._c(Fraction(1) / c) if ring.char == 0 else 1
        # self = c T^lam (1 + r), val(r) > 0
        r = work._build({k - lam: v * cinv for k, v in self.terms[1:]})
        s = _geometric(r, work)
        out = {}
        for k, v in s.terms:
            e = k - lam
            if e < ring.cutoff:
                out[e] = v * cinv
        return ring._build(out)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exp(self):
        return _exp(self)

    def log1p(self):
        return _log1p(self)

    def coeff(self, lam):
        for k, v in self.terms:
            if k == lam:
                return v
        return 0

    def __repr__(self):
        return "Novikov(%s)" % format_novikov(self)

    __str__ = lambda self: format_novikov(self)


def _mul_terms(t1, t2, cutoff):
    acc = {}
    for k1, v1 in t1:
        for k2, v2 in t2:
            k = k1 + k2
            if k >= cutoff:
                break
            acc[k] = acc.get(k, 0) + v1 * v2
    return acc


def _geometric(r, ring):
    """1/(1+r) for val(r) > 0, by repeated multiplication."""
    if r.is_zero():
        return ring.one()
    if r.val() <= 0:
        raise ScalarError("geometric series needs positive valuation")
    out = ring.one()
    p = ring.one()
    mr = -r
    while True:
        p = p * mr
        if p.is_zero():
            return out
        out = out + p


def format_novikov(x):
    if not x.terms:
        return "0"
    parts = []
    for k, v in x.terms:
        coeff = "" if v == 1 and k != 0 else ("-" if v == -1 and k != 0 else str(v))
        if k == 0:
            parts.append(str(v))
        else:
            parts.append("%sT^%s" % (coeff, k))
    return " + ".join(parts).replace("+ -", "- ")


# ---------- chart series ----------

class ChartRing:
    """Laurent series in named symbols with per-symbol valuation weights.

    ``weights`` maps each symbol to an integer; weight 1 marks a small symbol
    (a power of T in disguise), weight 0 a unit symbol, weight -1 a symbol
    whose inverse is small.  Monomials of weighted degree >= cutoff are dropped.
    """

    char = 0

    def __init__(self, symbols, weights=None, cutoff=6):
        self.symbols = tuple(symbols)
        if weights is None:
            weights = {s: 1 for s in self.symbols}
        self.weights = tuple(int(weights.get(s, 0)) for s in self.symbols)
        self.cutoff = _q(cutoff)
        self._zero = ChartSeries(self, ())
        self._one = self._build({(0,) * len(self.symbols): Fraction(1)})

    def __eq__(self, other):
        return (isinstance(other, ChartRing) and self.symbols == other.symbols
                and self.weights == other.weights and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash(("chart", self.symbols, self.weights, self.cutoff))

    def __repr__(self):
        w = ", ".join("%s:%d" % sw for sw in zip(self.symbols, self.weights))
        return "ChartRing([%s], cutoff=%s)" % (w, self.cutoff)

    tag = "chart"

    def degree(self, e):
        return sum(a * w for a, w in zip(e, self.weights))

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def _c(self, c):
        return _q(c)

    def _build(self, acc):
        items = sorted((e, v) for e, v in acc.items() if v != 0 and self.degree(e) < self.cutoff)
        return ChartSeries(self, tuple(items))

    def monomial(self, c=1, **exps):
        e = tuple(int(exps.pop(s, 0)) for s in self.symbols)
        if exps:
            raise ScalarError("unknown symbols %s" % sorted(exps))
        return self._build({e: _q(c)})

    def sym(self, name, power=1):
        return self.monomial(1, **{name: power})

    def from_terms(self, pairs):
        acc = {}
        for e, c in pairs:
            e = tuple(int(a) for a in e)
            if len(e) != len(self.symbols):
                raise ScalarError("exponent vector %r has wrong length" % (e,))
            acc[e] = acc.get(e, 0) + _q(c)
        return self._build(acc)

    def coerce(self, x):
        if isinstance(x, ChartSeries):
            if x.ring != self:
                raise ScalarError("ring mismatch: %r vs %r" % (x.ring, self))
            return x
        if isinstance(x, (int, Fraction)):
            return self._build({(0,) * len(self.symbols): _q(x)})
        raise TypeError("cannot coerce %r to a chart series" % (x,))

    def extended(self, cutoff):
        return ChartRing(self.symbols, dict(zip(self.symbols, self.weights)), cutoff)


class ChartSeries:
    __slots__ = ("ring", "terms", "_h")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._h = None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.coerce(other)
        return isinstance(other, ChartSeries) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.ring, self.terms))
        return self._h

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def val(self):
        if not self.terms:
            return INF
        return Fraction(min(self.ring.degree(e) for e, _ in self.terms))

    def as_dict(self):
        return dict(self.terms)

    def _other(self, other):
        if isinstance(other, ChartSeries):
            if other.ring != self.ring:
                raise ScalarError("ring mismatch: %r vs %r" % (self.ring, other.ring))
            return other
        return self.ring.coerce(other)

    def __add__(self, other):
        other = self._other(other)
        acc = dict(self.terms)
        for e, v in other.terms:
            acc[e] = acc.get(e, 0) + v
        return self.ring._build(acc)

    __radd__ = __add__

    def __neg__(self):
        return ChartSeries(self.ring, tuple((e, -v) for e, v in self.terms))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        acc = {}
        ring = self.ring
        for e1, v1 in self.terms:
            d1 = ring.degree(e1)
            for e2, v2 in other.terms:
                if d1 + ring.degree(e2) >= ring.cutoff:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + v1 * v2
        return ring._build(acc)

    __rmul__ = __mul__

    def truncate(self, cutoff):
        ring = self.ring.extended(cutoff)
        return ring._build(dict(self.terms))

    def inverse(self):
        """Inverse when the lowest-valuation part is a single monomial."""
        if not self.terms:
            raise ScalarError("inverse of zero")
        ring = self.ring
        v = self.val()
        lead = [(e, c) for e, c in self.terms if ring.degree(e) == v]
        if len(lead) != 1:
            raise ScalarError("leading part %s is not a monomial" % lead)
        e0, c0 = lead[0]
        work = ring.extended(ring.cutoff + v)
        r = work._build({tuple(a - b for a, b in zip(e, e0)): c / c0
                         for e, c in self.terms if e != e0})
        s = _geometric(r, work)
        out = {}
        for e, c in s.terms:
            out[tuple(a - b for a, b in zip(e, e0))] = c / c0
        return ring._build(out)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def exp(self):
        return _exp(self)

    def log1p(self):
        return _log1p(self)

    def coeff(self, **exps):
        e = tuple(int(exps.get(s, 0)) for s in self.ring.symbols)
        return dict(self.terms).get(e, Fraction(0))

    def __repr__(self):
        return "ChartSeries(%s)" % format_chart(self)

    __str__ = lambda self: format_chart(self)


def format_chart(x):
    if not x.terms:
        return "0"
    parts = []
    for e, c in x.terms:
        mono = "*".join(s if a == 1 else "%s^%d" % (s, a)
                        for s, a in zip(x.ring.symbols, e) if a)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append("%s*%s" % (c, mono))
    return " + ".join(parts).replace("+ -", "- ")


# ---------- shared series ----------

def _exp(x):
    if x.ring.char == 2:
        raise ScalarError("exp is unsupported over the two-element field")
    if x.is_zero():
        return x.ring.one()
    if x.val() <= 0:
        raise ScalarError("exp needs positive valuation, got %s" % x.val())
    out = x.ring.one()
    p = x.ring.one()
    k = 0
    while True:
        k += 1
        p = p * x
        if p.is_zero():
            return out
        out = out + p * Fraction(1, factorial(k))


def _log1p(x):
    if x.ring.char == 2:
        raise ScalarError("log1p is unsupported over the two-element field")
    if x.is_zero():
        return x
    if x.val() <= 0:
        raise ScalarError("log1p needs positive valuation, got %s" % x.val())
    out = x.ring.zero()
    p = x.ring.one()
    k = 0
    while True:
        k += 1
        p = p * x
        if p.is_zero():
            return out
        out = out + p * Fraction((-1) ** (k + 1), k)


def val(x):
    return x.val()


def nv_add(a, b):
    return a + b


def nv_mul(a, b):
    return a * b


def nv_invert(a):
    return a.inverse()


def nv_exp(x):
    return x.exp()


def nv_log1p(x):
    return x.log1p()

"""Worked wall-crossing examples as executable scenarios.

Coefficients are chart series: ``w`` (or ``z``) stands for T to the power of
a disk area and ``u`` is a unit.  Disk counts are fixed inputs.  Products of
arity >= 2 on the cobordism complexes are structural zeros, so each complex
is a curved chain complex (kmax 1) and its relations are m^1 m^1 = 0 and
m^1 m^0 = 0.
"""

import json
from fractions import Fraction

from .core import (AInftyAlgebra, CheckReport, MultiOperator, check_quadratic_relations,
                   curved_dga)
from .linear import (FilteredModule, LinearMap, LinearAlgebraError, invert_map, map_ord,
                     residue_matrix, rank_over_field, vval, vneg, viadd, vsub)
from .morphisms import (AInftyMorphism, check_morphism, deform, mc_residual, strict_morphism,
                        identity_morphism)
from .scalars import ChartRing, NovikovRing, INF, format_chart
from .transfer import (MINUS, ZERO, PLUS, RecognitionError, recognize, fiber_product,
                       cocylinder_to_morphism)


class ScenarioError(ValueError):
    pass


# ---------- reports ----------

class IdentityCheck:
    """One checked identity: residual valuation at the cutoff and the verdict."""

    def __init__(self, name, residual_val, passed, detail=""):
        self.name = name
        self.residual_val = residual_val
        self.passed = passed
        self.detail = detail


def _fmt_val(v):
    return "inf" if v == INF else str(v)


class ScenarioReport:
    def __init__(self, name, cutoff):
        self.name = name
        self.cutoff = cutoff
        self.checks = []
        self.values = {}

    def check(self, name, residual, expect_zero=True, detail=""):
        """Record a residual (a scalar, a vector or None for exact zero)."""
        v = _residual_val(residual)
        passed = (v == INF) if expect_zero else (v != INF)
        self.checks.append(IdentityCheck(name, v, passed, detail))
        return passed

    def flag(self, name, ok, detail=""):
        self.checks.append(IdentityCheck(name, INF if ok else Fraction(0), ok, detail))
        return ok

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def text(self):
        lines = ["scenario %s (certified modulo degree %s)" % (self.name, self.cutoff)]
        for k in sorted(self.values):
            lines.append("  %s = %s" % (k, self.values[k]))
        for c in self.checks:
            lines.append("  [%s] %s: residual valuation %s%s" % (
                "pass" if c.passed else "FAIL", c.name, _fmt_val(c.residual_val),
                (" (%s)" % c.detail) if c.detail else ""))
        lines.append("  result: %s" % ("pass" if self.passed else "FAIL"))
        return "\n".join(lines)

    def machine(self):
        doc = {"scenario": self.name, "cutoff": str(self.cutoff), "passed": self.passed,
               "values": {k: str(v) for k, v in self.values.items()},
               "checks": [{"name": c.name, "residual_valuation": _fmt_val(c.residual_val),
                           "passed": c.passed, "detail": c.detail} for c in self.checks]}
        return json.dumps(doc, sort_keys=True, indent=1)


def _residual_val(r):
    if r is None:
        return INF
    if isinstance(r, CheckReport):
        return r.max_residual_val
    if isinstance(r, dict):
        return vval(r) if r else INF
    if hasattr(r, "val"):
        return r.val()
    return INF if r == 0 else Fraction(0)


def _vec_str(v, order):
    parts = []
    for n in order:
        if n in v:
            parts.append("(%s)*%s" % (format_chart(v[n]), n))
    return " + ".join(parts) or "0"


# ---------- torus complexes ----------

TORUS_DEGREES = (0, 1, 1, 2)


class TorusComplex:
    """Morse model of T^2: generators e, two degree-1 classes and their product."""

    def __init__(self, ring, names=("e", "r", "s", "rs")):
        self.ring = ring
        self.names = tuple(names)
        self.module = FilteredModule(list(zip(names, TORUS_DEGREES)), ring, "Z")

    def algebra(self, name="T"):
        """The exterior algebra on the two degree-1 classes (no disks)."""
        e, a, b, ab = self.names
        one = self.ring.one()
        mult = {(e, e): {e: one}, (e, a): {a: one}, (a, e): {a: one}, (e, b): {b: one},
                (b, e): {b: one}, (e, ab): {ab: one}, (ab, e): {ab: one},
                (a, b): {ab: one}, (b, a): {ab: -one}}
        return curved_dga(self.module, mult, unit=e, name=name)


# ---------- suspension cobordism ----------

def _chart(side, cutoff):
    if side not in ("above", "below"):
        raise ScenarioError("side must be 'above' or 'below'")
    return ChartRing(("u", "w"), {"u": 0, "w": 1 if side == "above" else -1}, cutoff)


def wall_parameter(ring, side):
    """The small quantity carried by the wall disk: w above, w^-1 below."""
    return ring.sym("w", 1 if side == "above" else -1)


class CobordismComplex:
    """A^- (+) A^0[1] (+) A^+ with its curved differential."""

    def __init__(self, algebra, minus, zero, plus, params):
        self.algebra = algebra
        self.minus, self.zero, self.plus = minus, zero, plus
        self.params = params

    @property
    def ring(self):
        return self.algebra.ring


def _cobordism(ring, blocks, m1, m0, params, name):
    basis = []
    tags = {}
    for tag, prefix, names, degs in blocks:
        full = [prefix + n for n in names]
        basis.extend(zip(full, degs))
        tags[tag] = tuple(full)
    mod = FilteredModule(basis, ring, "Z", tags)
    prods = {0: {(): m0} if m0 else {}, 1: {(k,): v for k, v in m1.items() if v}}
    A = AInftyAlgebra(mod, prods, kmax=1, complete=True, name=name)
    return CobordismComplex(A, tags["-"], tags["0"], tags["+"], params)


def build_suspension_complex(side="above", cutoff=6):
    """Floer complex of the suspension of the isotopy crossing the wall once.

    Twelve generators: {e, u, w, uw} on the Chekanov end, {e, r, s, rs} on
    the middle copy (shifted) and on the product end.  The wall disk gives
    m^0 = -log(1 + q)(c^{r0} + c^{s0}) with q = w above and q = w^-1 below.
    """
    if cutoff < 2:
        raise ScenarioError("cutoff must be at least 2")
    ring = _chart(side, cutoff)
    one = ring.one()
    mid = ("e", "r", "s", "rs")
    blocks = [("-", MINUS, ("e", "u", "w", "uw"), TORUS_DEGREES),
              ("0", ZERO, mid, tuple(d - 1 for d in TORUS_DEGREES)),
              ("+", PLUS, mid, TORUS_DEGREES)]
    z = lambda n: ZERO + n
    m1 = {MINUS + "e": {z("e"): one},
          MINUS + "u": {z("r"): one, z("s"): one},        # (m^-_0)_{=0} = [[1, 1], [1, 0]]
          MINUS + "w": {z("r"): one},
          MINUS + "uw": {z("rs"): -one}}                   # (r + s) ^ r = -rs
    for n in mid:
        m1[PLUS + n] = {z(n): one}                          # m^+_0 = id
    q = wall_parameter(ring, side)
    coeff = -q.log1p()
    m0 = {z("r"): coeff, z("s"): coeff}
    K = _cobordism(ring, blocks, m1, m0, {"side": side, "wall": q}, "K_" + side)
    return K


def curvature_coefficient(K):
    return K.algebra.m0()[ZERO + "r"]


def leading_block(K, src, tgt):
    """Valuation-zero matrix of m^1 from the generators src to tgt (rows = tgt)."""
    m1 = K.algebra.m(1).to_linear()
    sub = m1.restrict(src, tgt)
    rows = residue_matrix(sub)
    idx = [K.algebra.module.index[t] for t in tgt]
    return [[rows[i][K.algebra.module.index[s]] for s in src] for i in idx]


def compute_wallcrossing_cochain(K):
    """b^{wc} = Theta_*(0) on the product end, computed twice.

    Route 1 is the closed formula beta^+ (m^+_0)^-1 m^0; route 2 is the
    arity-0 component of the morphism extracted from the cocylinder.
    Returns (b as a vector over {e, r, s, rs}, decomposition, theta).
    """
    try:
        dec = recognize(K.algebra, K.minus, K.zero, K.plus)
    except RecognitionError as e:
        raise ScenarioError("suspension complex is not a cocylinder: %s" % e)
    m0 = K.algebra.m0()
    direct = dec.beta_plus.f(1).to_linear()(dec.h0({n: c for n, c in m0.items() if n in K.zero}))
    theta, _ = cocylinder_to_morphism(dec, kmax=1)
    via = theta.f0()
    if direct != via:
        raise ScenarioError("closed formula and extracted morphism disagree")
    return direct, dec, theta


def wallcrossing_report(cutoff=6, side="above"):
    rep = ScenarioReport("wallcrossing-" + side, cutoff)
    K = build_suspension_complex(side, cutoff)
    A = K.algebra
    rep.check("m^1 m^1 = 0 and m^1 m^0 = 0", _relation_residual(A))
    q = wall_parameter(A.ring, side)
    expected = -q.log1p()
    rep.check("curvature coefficient = -log(1+q)", curvature_coefficient(K) - expected)
    blk = leading_block(K, [MINUS + "u", MINUS + "w"], [ZERO + "r", ZERO + "s"])
    rep.flag("(m^-_0)_{=0} = [[1,1],[1,0]]", blk == [[1, 1], [1, 0]], str(blk))
    b, dec, theta = compute_wallcrossing_cochain(K)
    target = {"r": expected, "s": expected}
    rep.check("b^wc = -log(1+q)(c^{r+} + c^{s+})", vsub(b, target))
    A_plus = TorusComplex(A.ring).algebra("A+")
    res, mc = mc_residual(A_plus, b)
    rep.check("b^wc is a bounding cochain on A^+", res)
    rep.values["b^wc"] = _vec_str(b, ("e", "r", "s", "rs"))
    rep.values["q"] = format_chart(q)
    return rep


def _relation_residual(A):
    return check_quadratic_relations(A)


# ---------- chart gluing ----------

def glue_charts(side="above", cutoff=8):
    """Coordinates (r, s) on the product chart of the point (u, w).

    above: (uw/(1+w), u/(1+w)); below: (u/(1+w^-1), uw^-1/(1+w^-1)).
    """
    ring = _chart(side, cutoff)
    u = ring.sym("u")
    w = ring.sym("w")
    if side == "above":
        d = 1 + w
        return ring, u * w / d, u / d
    wi = ring.sym("w", -1)
    d = 1 + wi
    return ring, u / d, u * wi / d


def chart_residuals(side="above", cutoff=8):
    """Residuals of u v = 1 + s/r (v = 1/r) and of the cleared denominators.

    Denominators are cleared by the factor that is a unit plus a small
    quantity on each side (1 + w above, 1 + w^-1 below), so no truncated
    terms are pulled back below the cutoff.
    """
    ring, r, s = glue_charts(side, cutoff)
    u = ring.sym("u")
    v = r.inverse()
    out = {"u v - (1 + s/r)": u * v - (1 + s * v)}
    if side == "above":
        w = ring.sym("w")
        out["r (1 + w) - u w"] = r * (1 + w) - u * w
        out["s (1 + w) - u"] = s * (1 + w) - u
    else:
        wi = ring.sym("w", -1)
        out["r (1 + w^-1) - u"] = r * (1 + wi) - u
        out["s (1 + w^-1) - u w^-1"] = s * (1 + wi) - u * wi
    return out


def glue_report(cutoff=8):
    rep = ScenarioReport("glue", cutoff)
    for side in ("above", "below"):
        for label, res in chart_residuals(side, cutoff).items():
            rep.check("%s: %s" % (side, label), res)
        ring, r, s = glue_charts(side, cutoff)
        # the chart substitution s/r = w^-1, multiplied by the small one of w, w^-1
        if side == "above":
            rep.check("above: s w - r", s * ring.sym("w") - r)
        else:
            rep.check("below: r w^-1 - s", r * ring.sym("w", -1) - s)
        rep.values["r (%s)" % side] = format_chart(r)
        rep.values["s (%s)" % side] = format_chart(s)
    ring, r, s = glue_charts("above", cutoff)
    u, w = ring.sym("u"), ring.sym("w")
    rep.check("w -> 0: leading terms (uw, u)",
              _leading(r) - u * w + (_leading(s) - u))
    return rep


def _leading(x):
    v = x.val()
    return x.ring.from_terms([(e, c) for e, c in x.terms if x.ring.degree(e) == v])


# ---------- open Gromov-Witten potential ----------

def ogw_residual(cutoff=8, sign=1, wall=True):
    """r exp(b_r) + s exp(b_s) - u with r = uw, s = u and b from the wall-crossing cochain."""
    if cutoff < 2:
        raise ScenarioError("cutoff must be at least 2")
    K = build_suspension_complex("above", cutoff)
    ring = K.ring
    u, w = ring.sym("u"), ring.sym("w")
    if wall:
        b, _, _ = compute_wallcrossing_cochain(K)
        br, bs = b.get("r", ring.zero()) * sign, b.get("s", ring.zero()) * sign
    else:
        br = bs = ring.zero()
    r, s = u * w, u
    return r * br.exp() + s * bs.exp() - u


def ogw_check(cutoff=8):
    rep = ScenarioReport("ogw", cutoff)
    res = ogw_residual(cutoff)
    rep.check("W(L+, b+) - W(L-) = 0", res)
    ring = res.ring
    u, w = ring.sym("u"), ring.sym("w")
    rep.check("closed form uw/(1+w) + u/(1+w) - u", u * w / (1 + w) + u / (1 + w) - u)
    flipped = ogw_residual(cutoff, sign=-1)
    rep.check("sign flip of b+ breaks the equality", flipped, expect_zero=False)
    bare = ogw_residual(cutoff, wall=False)
    rep.check("without the wall term the residual is u w", bare - u * w)
    rep.values["flipped residual"] = format_chart(flipped)
    return rep


# ---------- mutation cobordism ----------

class MutationData:
    """Inputs of the mutation scenario.

    ``spin`` is the per-generator sign on c^{w+-} ("induced" gives -1, the
    orientation the induced spin structure puts on the cobordism).
    ``covers`` toggles the multiple-cover series log(1+z) against the single
    disk z.  ``isolated`` records the isolation hypothesis on the disk.
    """

    def __init__(self, cutoff=4, covers=True, spin="induced", isolated=True, surrogate="torus"):
        self.cutoff = cutoff
        self.covers = covers
        self.spin = spin
        self.isolated = isolated
        self.surrogate = surrogate

    @property
    def sigma(self):
        return -1 if self.spin == "induced" else 1


E_MINUS = (MINUS + "u", MINUS + "w")
E_PLUS = (PLUS + "u", PLUS + "w")
E_ZERO = (ZERO + "x-", ZERO + "x+")


def build_mutation_complex(data):
    """Cobordism complex of the mutation: A^0 = CM(L^0)[1] (+) E^0 with E^0 = <x-, x+>.

    Valuation-zero maps: c^{w-} -> sigma x-, c^{w+} -> sigma x+ and c^{u+-}
    in the kernel (the vanishing classes).  The exceptional disk adds
    c^{u+} -> z x- + z x+ and m^0 = log(1+z)(x+ + x-) (or z(x+ + x-)).
    The sphere surrogate sends both E-classes to x- and has no disk
    correction, so E^- (+) E^+ -> E^0 has rank 1.
    """
    ring = ChartRing(("z", "u"), {"z": 1, "u": 0}, data.cutoff)
    one = ring.one()
    z = ring.sym("z")
    sg = one * data.sigma
    blocks = [("-", MINUS, ("e", "u", "w", "uw"), TORUS_DEGREES),
              ("0", ZERO, ("e", "t", "x-", "x+"), (-1, 1, 0, 0)),
              ("+", PLUS, ("e", "u", "w", "uw"), TORUS_DEGREES)]
    m1 = {MINUS + "e": {ZERO + "e": one}, MINUS + "uw": {ZERO + "t": one},
          PLUS + "e": {ZERO + "e": one}, PLUS + "uw": {ZERO + "t": one}}
    if data.surrogate == "torus":
        m1[MINUS + "w"] = {ZERO + "x-": sg}
        m1[PLUS + "w"] = {ZERO + "x+": sg}
        m1[PLUS + "u"] = {ZERO + "x-": z, ZERO + "x+": z}
    elif data.surrogate == "sphere":
        # the antisurgery disk bounds in L: both handles see the same class
        m1[MINUS + "w"] = {ZERO + "x-": sg}
        m1[PLUS + "w"] = {ZERO + "x-": sg}
    else:
        raise ScenarioError("unknown surrogate %r" % data.surrogate)
    disk = z.log1p() if data.covers else z
    m0 = {ZERO + "x+": disk, ZERO + "x-": disk}
    return _cobordism(ring, blocks, m1, m0, {"eps": z}, "K_mu")


def _e_map(K):
    """pi_{E^0} o m^1 restricted to E^- (+) E^+ (rows x-, x+)."""
    mod = K.algebra.module
    src = FilteredModule([(n, mod.degree(n)) for n in E_MINUS + E_PLUS], K.ring, "Z")
    tgt = FilteredModule([(n, mod.degree(n)) for n in E_ZERO], K.ring, "Z")
    return K.algebra.m(1).to_linear().restrict(src.names, tgt.names, src, tgt)


def surjectivity(K):
    """(rank of the valuation-zero part of E^- (+) E^+ -> E^0, target rank)."""
    f = _e_map(K)
    return rank_over_field(residue_matrix(f)), len(E_ZERO)


def deforming_cochain(K, splitting=(MINUS + "w", PLUS + "w")):
    """Solve pi_{E^0} m^1(d) = -pi_{E^0} m^0 with d in the span of the splitting classes."""
    rank, need = surjectivity(K)
    if rank < need:
        raise ScenarioError("pi_E0 o m^1 on E^- + E^+ is not surjective (rank %d < %d): "
                            "no deforming cochain" % (rank, need))
    f = _e_map(K)
    sub_src = FilteredModule([(n, f.source.degree(n)) for n in splitting], K.ring, "Z")
    g = f.restrict(splitting, f.target.names, sub_src, f.target)
    try:
        ginv = invert_map(g)
    except LinearAlgebraError as e:
        raise ScenarioError("splitting classes do not map onto E^0: %s" % e)
    m0 = K.algebra.m0()
    rhs = vneg({n: c for n, c in m0.items() if n in E_ZERO})
    return ginv(rhs)


def oriented_block(K, data):
    """Leading 2x2 block of (m^+_0)|_{E^+} in the basis {c^{u+}, sigma c^{w+}} (rows x-, x+)."""
    A = K.algebra
    m1 = A.m(1).to_linear()
    rows = []
    for t in E_ZERO:
        row = []
        for s, sg in ((PLUS + "u", 1), (PLUS + "w", data.sigma)):
            row.append(m1.entry(t, s) * sg)
        rows.append(row)
    return rows


def run_mutation_scenario(data=None, cutoff=4):
    """Steps (1)-(5) of the mutation pipeline; returns (report, outputs)."""
    data = data or MutationData(cutoff=cutoff)
    if not data.isolated:
        raise ScenarioError("the mutation must be isolated to build the deforming cochain")
    rep = ScenarioReport("mutation", data.cutoff)
    K = build_mutation_complex(data)
    ring = K.ring
    z, u = ring.sym("z"), ring.sym("u")
    rep.check("m^1 m^1 = 0 and m^1 m^0 = 0", _relation_residual(K.algebra))
    rank, need = surjectivity(K)
    rep.flag("pi_E0 o m^1 on E^- + E^+ surjects", rank == need, "rank %d of %d" % (rank, need))
    # (1) deforming cochain
    d = deforming_cochain(K)
    series = z.log1p() if data.covers else z
    rep.check("(1) d = log(1+z)(c^{w-} + c^{w+})",
              vsub(d, {MINUS + "w": series, PLUS + "w": series}))
    Kd = deform(K.algebra, d)
    # (2) deformed curvature on E^0
    m0d = {n: c for n, c in Kd.m0().items() if n in E_ZERO}
    v = vval(m0d) if m0d else INF
    rep.flag("(2) val(pi_E0 m^0_d) > eps", v > 1, "valuation %s" % _fmt_val(v))
    # (3) leading block and its inverse
    Kdc = CobordismComplex(Kd, K.minus, K.zero, K.plus, K.params)
    blk = oriented_block(Kdc, data)
    lead = [[_lowest(x, 1) for x in row] for row in blk]
    rep.check("(3) leading block = [[z, 0], [z, 1]]",
              sum((lead[i][j] - [[z, 0], [z, 1]][i][j] for i in range(2) for j in range(2)),
                  ring.zero()))
    inv = _inverse_2x2(lead)
    ident = _mul_2x2(lead, inv)
    rep.check("(3) block inverse multiplies back to the identity",
              sum((ident[i][j] - (1 if i == j else 0) for i in range(2) for j in range(2)),
                  ring.zero()))
    o = min(x.val() for row in inv for x in row if not x.is_zero())
    rep.flag("(3) ord(inverse) = -eps", o == -1, "ord %s" % o)
    rep.values["block inverse"] = "[[%s]]" % "], [".join(
        ", ".join(format_chart(x) for x in row) for row in inv)
    # (4) recognition
    try:
        dec = recognize(Kd, K.minus, K.zero, K.plus)
        rep.flag("(4) deformed complex is a cocylinder", True,
                 "ord((m^+_0)^-1) = %s" % map_ord(dec.h0))
    except RecognitionError as e:
        rep.flag("(4) deformed complex is a cocylinder", False, str(e))
    # (5) correspondence of coordinates, computed one degree deeper
    rep.check("(5) correspondence (u/(w-1), uw/(w-1))", correspondence_residual(data.cutoff))
    rep.values["d"] = _vec_str(d, E_MINUS + E_PLUS)
    return rep, {"complex": K, "d": d, "deformed": Kd, "block": lead, "inverse": inv}


def _lowest(x, lam):
    """Terms of weighted degree <= lam."""
    return x.ring.from_terms([(e, c) for e, c in x.terms if x.ring.degree(e) <= lam])


def _inverse_2x2(m):
    (a, b), (c, d) = m
    det = a * d - b * c
    di = det.inverse()
    return [[d * di, -b * di], [-c * di, a * di]]


def _mul_2x2(x, y):
    return [[x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)] for i in range(2)]


def correspondence_residual(cutoff):
    """Chekanov end (u, 1) with b^- = log(1+z) c^w against product end (s, s), s = u/z.

    The wishful map turns (L, a c^1 + b c^2) into L with coordinates scaled by
    exp(a), exp(b); the result is compared with (u/(w-1), uw/(w-1)) at
    w = 1 + z.  Both coordinates of both ends are checked.
    """
    ring = ChartRing(("z", "u"), {"z": 1, "u": 0}, cutoff + 1)
    z, u = ring.sym("z"), ring.sym("u")
    b = z.log1p()
    minus = (u, b.exp())                        # (u, 1 + z)
    s = u * z.inverse()
    plus = (s, s * b.exp())                     # (s, s(1 + z))
    w = 1 + z
    target = (u / (w - 1), u * w / (w - 1))
    return (minus[1] - w) + (plus[0] - target[0]) + (plus[1] - target[1])


def mutation_report(cutoff=4):
    rep, _ = run_mutation_scenario(MutationData(cutoff=cutoff))
    return rep


# ---------- the sphere non-example ----------

def sphere_nonexample(cutoff=4):
    """Plumbing surrogate: the restricted map has rank 1, so no deforming cochain exists.

    The report passes when the expected failure happens and the torus data
    (for contrast) succeeds.
    """
    rep = ScenarioReport("sphere", cutoff)
    K = build_mutation_complex(MutationData(cutoff=cutoff, surrogate="sphere"))
    rank, need = surjectivity(K)
    rep.flag("surjectivity fails (expected)", rank < need, "rank %d < %d" % (rank, need))
    try:
        deforming_cochain(K)
        rep.flag("deforming cochain construction fails (expected)", False)
    except ScenarioError as e:
        rep.flag("deforming cochain construction fails (expected)", True, str(e))
    T = build_mutation_complex(MutationData(cutoff=cutoff))
    trank, tneed = surjectivity(T)
    rep.flag("torus data surjects (contrast)", trank == tneed, "rank %d" % trank)
    rep.values["sphere rank"] = str(rank)
    rep.values["torus rank"] = str(trank)
    return rep


# ---------- cylindrical continuation ----------

def _ext2(ring):
    """Exterior algebra on two generators (char 2) with unit e."""
    mod = FilteredModule([("e", 0), ("a", 1), ("b", 1), ("ab", 2)], ring, None)
    one = ring.one()
    mult = {("e", "e"): {"e": one}, ("e", "a"): {"a": one}, ("a", "e"): {"a": one},
            ("e", "b"): {"b": one}, ("b", "e"): {"b": one}, ("e", "ab"): {"ab": one},
            ("ab", "e"): {"ab": one}, ("a", "b"): {"ab": one}, ("b", "a"): {"ab": one}}
    return curved_dga(mod, mult, unit="e", name="E")


def _automorphism(E, t):
    """Strict algebra map a -> a + t b (fixes e, b, ab)."""
    one = E.ring.one()
    cols = {"e": {"e": one}, "a": {"a": one}, "b": {"b": one}, "ab": {"ab": one}}
    if not t.is_zero():
        cols["a"] = {"a": one, "b": t}
    return LinearMap(E.module, E.module, cols)


def cylindrical_continuation_demo(cutoff=3, perturb=True, curvature=False):
    """Cocylinder of A^- -> C <- A^+ with m^+_0 = id + T N; returns (Theta, report).

    With ``curvature`` the map A^- -> C also carries f^0 = T (a + b), and
    Theta^0 recovers it through (m^+_0)^-1 m^0 as in the wall-crossing case.
    """
    ring = NovikovRing(cutoff, char=2)
    E = _ext2(ring)
    T = ring.from_terms([(1, 1)])
    g = strict_morphism(E, E, _automorphism(E, T if perturb else ring.zero()), name="g")
    comps = {1: identity_morphism(E).f(1)}
    if curvature:
        comps[0] = MultiOperator.constant(E.module, E.module, {"a": T, "b": T})
    f = AInftyMorphism(E, E, comps, kmax=3, complete=True, name="f")
    rep = ScenarioReport("continuation", cutoff)
    rep.check("f is a morphism", check_morphism(f))
    P, _, _ = fiber_product(f, g, name="K")
    dec = recognize(P)
    rep.flag("fiber product is a cocylinder", True)
    blk = dec.blocks["m+_0"]
    ident = all(blk.entry(ZERO + n, PLUS + n) == ring.one() for n in E.module.names)
    rep.flag("m^+_0 = id + T N", ident and (perturb == (map_ord(blk - _diag(blk)) == 1)))
    theta, res = cocylinder_to_morphism(dec, kmax=3)
    rep.check("Theta passes the morphism check", check_morphism(theta))
    expected = g.f(1).to_linear()
    lin = LinearMap(theta.source.module, theta.target.module,
                    {s: v for (s,), v in theta.f(1).table.items()})
    ginv = invert_map(expected)
    rep.check("Theta^1 = g^-1 o f^1", _map_residual(lin, ginv))
    if curvature:
        want = ginv({"a": T, "b": T})
        rep.check("Theta^0 = (m^+_0)^-1 m^0", vsub(theta.f0(), want))
    return theta, rep


def _diag(blk):
    one = blk.target.ring.one()
    cols = {s: {t: one} for s in blk.source.names for t in blk.target.names
            if t[2:] == s[2:]}
    return LinearMap(blk.source, blk.target, cols)


def _map_residual(f, g):
    out = {}
    for s in set(f.cols) | set(g.cols):
        viadd(out, vsub(f.col(s), g.col(s)))
    return out


def continuation_report(cutoff=3):
    _, a = cylindrical_continuation_demo(cutoff, perturb=False)
    _, b = cylindrical_continuation_demo(cutoff, perturb=True)
    _, c = cylindrical_continuation_demo(cutoff, perturb=True, curvature=True)
    rep = ScenarioReport("continuation", cutoff)
    for tag, r in (("unperturbed", a), ("perturbed", b), ("curved", c)):
        for ch in r.checks:
            rep.checks.append(IdentityCheck("%s: %s" % (tag, ch.name), ch.residual_val,
                                            ch.passed, ch.detail))
    return rep


# ---------- registry ----------

SCENARIOS = {
    "wallcrossing": lambda n: wallcrossing_report(n, "above"),
    "wallcrossing-below": lambda n: wallcrossing_report(n, "below"),
    "glue": glue_report,
    "ogw": ogw_check,
    "mutation": mutation_report,
    "sphere": sphere_nonexample,
    "continuation": continuation_report,
}

DEFAULT_CUTOFF = {"wallcrossing": 6, "wallcrossing-below": 6, "glue": 9, "ogw": 9,
                  "mutation": 4, "sphere": 4, "continuation": 3}


def run_scenario(name, cutoff=None):
    if name not in SCENARIOS:
        raise ScenarioError("unknown scenario %r (known: %s)" % (name, ", ".join(sorted(SCENARIOS))))
    return SCENARIOS[name](cutoff if cutoff is not None else DEFAULT_CUTOFF[name])

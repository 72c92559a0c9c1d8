"""Plain-text documents for algebras, morphisms, SDR data and splittings.

Layout (version 1), one statement per line, ``#`` starts a comment::

    ainfty-document 1
    field f2                      # q | f2 | chart
    chart u:0 w:1                 # chart only: symbols with weights
    cutoffs energy=3 arity=3

    algebra B
      grading Z                   # Z | Z2 | none
      basis e:0 a:1 b:1 ab:2
      block - a b                 # optional named blocks
      unit e
      signs char2                 # char2 | koszul
      complete no
      m 0 -> a [[1,1,1,1]]
      m 2 a b -> ab [[0,1,1,1]]
    end

    morphism f A B
      complete no
      f 1 a -> a [[0,1,1,1]]
    end

    sdr B                         # SDR data for the algebra B
      basis x:0 y:1               # the module A
      alpha x -> a [[0,1,1,1]]
      beta a -> x [[0,1,1,1]]
      h b -> a [[0,1,1,1]]
      d x -> y [[1,1,1,1]]
    end

    splitting B
      minus -:e -:a
      zero 0:e
      plus +:e +:a
    end

Scalars are JSON lists of terms: ``[lam_num, lam_den, c_num, c_den]`` for
Novikov coefficients (c T^lam) and ``[[e_1, ..., e_n], c_num, c_den]`` for
chart series (c u_1^e_1 ... u_n^e_n).  The empty list is zero.

The energy cutoff is the Novikov cutoff or the chart degree cutoff; the
arity cutoff is kmax of every algebra and morphism.  Serialization is
canonical (sorted entries), so parse then serialize is stable.
"""

import json
from fractions import Fraction

from .core import AInftyAlgebra, MultiOperator
from .linear import FilteredModule, LinearMap
from .morphisms import AInftyMorphism
from .scalars import ChartRing, NovikovRing, ScalarError

VERSION = 1
HEADER = "ainfty-document"
FIELDS = ("q", "f2", "chart")


class DocumentError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(("line %d: %s" % (line, msg)) if line else msg)


class SDRSpec:
    """Parsed sdr section: maps kept as LinearMaps over the named algebra."""

    def __init__(self, algebra, A_module, alpha, beta, h, d):
        self.algebra = algebra
        self.A_module = A_module
        self.alpha, self.beta, self.h, self.d = alpha, beta, h, d


class Document:
    def __init__(self, field, energy, arity, chart=None):
        self.field = field
        self.energy = Fraction(energy)
        self.arity = int(arity)
        self.chart = chart              # list of (symbol, weight) or None
        self.algebras = {}
        self.morphisms = {}
        self.sdrs = {}
        self.splittings = {}
        self.order = []                 # (kind, name) in document order

    def ring(self):
        return make_ring(self.field, self.energy, self.chart)

    def add(self, kind, name, obj):
        table = getattr(self, kind + "s")
        if name in table:
            raise DocumentError("duplicate %s %s" % (kind, name))
        table[name] = obj
        self.order.append((kind, name))

    def __eq__(self, other):
        return isinstance(other, Document) and serialize(self) == serialize(other)


def make_ring(field, energy, chart=None):
    if field == "q":
        return NovikovRing(energy, 0)
    if field == "f2":
        return NovikovRing(energy, 2)
    if field == "chart":
        if not chart:
            raise DocumentError("field chart needs a chart line")
        return ChartRing([s for s, _ in chart], dict(chart), energy)
    raise DocumentError("unknown field %r" % field)


# ---------- scalars ----------

def _frac(num, den, what):
    if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or den == 0:
        raise ValueError("bad %s %r/%r" % (what, num, den))
    return Fraction(num, den)


def parse_scalar(text, ring):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError("scalar is not a JSON list (%s)" % e.msg)
    if not isinstance(data, list):
        raise ValueError("scalar must be a list of terms")
    pairs = []
    for term in data:
        if not isinstance(term, list):
            raise ValueError("scalar term %r is not a list" % (term,))
        if isinstance(ring, ChartRing):
            if len(term) != 3 or not isinstance(term[0], list):
                raise ValueError("chart term must be [exponents, c_num, c_den]")
            if not all(isinstance(a, int) for a in term[0]) or len(term[0]) != len(ring.symbols):
                raise ValueError("exponent vector %r must have %d integers" % (term[0], len(ring.symbols)))
            pairs.append((tuple(term[0]), _frac(term[1], term[2], "coefficient")))
        else:
            if len(term) != 4:
                raise ValueError("Novikov term must be [lam_num, lam_den, c_num, c_den]")
            lam = _frac(term[0], term[1], "exponent")
            if lam < 0:
                raise ValueError("negative exponent %s" % lam)
            pairs.append((lam, _frac(term[2], term[3], "coefficient")))
    try:
        return ring.from_terms(pairs)
    except ScalarError as e:
        raise ValueError(str(e))


def format_scalar(c):
    out = []
    for e, v in c.terms:
        v = Fraction(v)
        if isinstance(e, tuple):
            out.append([list(e), v.numerator, v.denominator])
        else:
            out.append([e.numerator, e.denominator, v.numerator, v.denominator])
    return json.dumps(out, separators=(",", ":"))


# ---------- parsing ----------

def _lines(text):
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, None, line


def _basis(tokens, lineno):
    out = []
    for tok in tokens:
        name, sep, deg = tok.rpartition(":")
        if not sep or not name:
            raise DocumentError("basis entry %r must be name:degree" % tok, lineno)
        try:
            out.append((name, int(deg)))
        except ValueError:
            raise DocumentError("degree of %r is not an integer" % name, lineno)
    return out


def _yesno(tok, lineno):
    if tok not in ("yes", "no"):
        raise DocumentError("expected yes or no, got %r" % tok, lineno)
    return tok == "yes"


def _entry(line, lineno, ring, src_names, tgt_names, with_arity):
    """Parse ``key [k] in_1 .. in_k -> out scalar``; returns (inputs, out, scalar)."""
    head, sep, tail = line.partition("->")
    if not sep:
        raise DocumentError("entry needs '->'", lineno)
    toks = head.split()[1:]
    if with_arity:
        if not toks:
            raise DocumentError("entry needs an arity", lineno)
        try:
            k = int(toks[0])
        except ValueError:
            raise DocumentError("arity %r is not an integer" % toks[0], lineno)
        toks = toks[1:]
        if len(toks) != k:
            raise DocumentError("arity %d entry has %d inputs" % (k, len(toks)), lineno)
    elif len(toks) != 1:
        raise DocumentError("linear entry needs exactly one input", lineno)
    for n in toks:
        if n not in src_names:
            raise DocumentError("unknown basis element %r" % n, lineno)
    parts = tail.strip().split(None, 1)
    if len(parts) != 2:
        raise DocumentError("entry needs an output and a scalar", lineno)
    out, stext = parts
    if out not in tgt_names:
        raise DocumentError("unknown basis element %r" % out, lineno)
    try:
        c = parse_scalar(stext, ring)
    except ValueError as e:
        raise DocumentError("malformed scalar: %s" % e, lineno)
    return tuple(toks), out, c


def _acc(table, key, out, c):
    v = table.setdefault(key, {})
    v[out] = v[out] + c if out in v else c
    if v[out].is_zero():
        del v[out]


def parse(text, known=None, field=None, energy=None, arity=None, defaults=(None, None)):
    """Parse a document.  ``known`` supplies algebras defined in other documents.

    ``energy`` and ``arity`` override the cutoffs line; ``defaults`` (energy,
    arity) apply only when neither the document nor an override sets them.
    ``field`` fills in a missing field line and must agree with a present one.
    """
    it = list(_lines(text))
    if not it:
        raise DocumentError("empty document")
    lineno, _, first = it[0]
    parts = first.split()
    if len(parts) != 2 or parts[0] != HEADER:
        raise DocumentError("first line must be '%s %d'" % (HEADER, VERSION), lineno)
    if parts[1] != str(VERSION):
        raise DocumentError("unsupported version %s" % parts[1], lineno)
    doc_field, doc_energy, doc_arity, chart = None, None, None, None
    pos = 1
    while pos < len(it):
        lineno, _, line = it[pos]
        toks = line.split()
        if toks[0] == "field":
            if len(toks) != 2 or toks[1] not in FIELDS:
                raise DocumentError("field must be one of %s" % ", ".join(FIELDS), lineno)
            doc_field = toks[1]
        elif toks[0] == "chart":
            try:
                chart = [(s, int(w)) for s, w in (t.rsplit(":", 1) for t in toks[1:])]
            except ValueError:
                raise DocumentError("chart entries must be symbol:weight", lineno)
        elif toks[0] == "cutoffs":
            for t in toks[1:]:
                key, _, val = t.partition("=")
                try:
                    if key == "energy":
                        doc_energy = Fraction(val)
                    elif key == "arity":
                        doc_arity = int(val)
                    else:
                        raise DocumentError("unknown cutoff %r" % key, lineno)
                except (ValueError, ZeroDivisionError):
                    raise DocumentError("bad cutoff value %r" % t, lineno)
        else:
            break
        pos += 1
    if field is not None and doc_field is not None and field != doc_field:
        raise DocumentError("document field %s does not match requested %s" % (doc_field, field))
    fld = doc_field or field
    en = next((v for v in (energy, doc_energy, defaults[0]) if v is not None), None)
    ar = next((v for v in (arity, doc_arity, defaults[1]) if v is not None), None)
    if fld is None:
        raise DocumentError("no field given (document or --field)")
    if en is None or ar is None:
        raise DocumentError("no cutoffs given (document, flags or AINFTY_CUTOFFS)")
    if en <= 0 or ar < 0:
        raise DocumentError("cutoffs must be positive")
    doc = Document(fld, en, ar, chart)
    ring = doc.ring()
    known = dict(known or {})
    while pos < len(it):
        lineno, _, line = it[pos]
        toks = line.split()
        end = pos + 1
        while end < len(it) and it[end][2] != "end":
            end += 1
        if end >= len(it):
            raise DocumentError("section %r is not closed by 'end'" % toks[0], lineno)
        body = it[pos + 1:end]
        if toks[0] == "algebra" and len(toks) == 2:
            A = _parse_algebra(toks[1], body, ring, doc.arity, lineno)
            doc.add("algebra", toks[1], A)
            known[toks[1]] = A
        elif toks[0] == "morphism" and len(toks) == 4:
            for n in toks[2:]:
                if n not in known:
                    raise DocumentError("unknown algebra %r" % n, lineno)
            f = _parse_morphism(toks[1], known[toks[2]], known[toks[3]], body, ring, doc.arity)
            doc.add("morphism", toks[1], f)
        elif toks[0] == "sdr" and len(toks) == 2:
            if toks[1] not in known:
                raise DocumentError("unknown algebra %r" % toks[1], lineno)
            doc.add("sdr", toks[1], _parse_sdr(known[toks[1]], body, ring))
        elif toks[0] == "splitting" and len(toks) == 2:
            if toks[1] not in known:
                raise DocumentError("unknown algebra %r" % toks[1], lineno)
            doc.add("splitting", toks[1], _parse_splitting(known[toks[1]], body))
        else:
            raise DocumentError("unknown section %r" % line, lineno)
        pos = end + 1
    doc.known = known
    return doc


def _parse_algebra(name, body, ring, kmax, start):
    grading, basis, blocks, unit, signs, complete = "Z", None, {}, None, None, False
    entries = []
    for lineno, _, line in body:
        toks = line.split()
        key = toks[0]
        if key == "grading":
            if len(toks) != 2 or toks[1] not in ("Z", "Z2", "none"):
                raise DocumentError("grading must be Z, Z2 or none", lineno)
            grading = None if toks[1] == "none" else toks[1]
        elif key == "basis":
            basis = _basis(toks[1:], lineno)
        elif key == "block":
            if len(toks) < 2:
                raise DocumentError("block needs a name", lineno)
            blocks[toks[1]] = tuple(toks[2:])
        elif key == "unit":
            unit = toks[1] if len(toks) == 2 else None
        elif key == "signs":
            if len(toks) != 2 or toks[1] not in ("char2", "koszul"):
                raise DocumentError("signs must be char2 or koszul", lineno)
            signs = toks[1]
        elif key == "complete":
            complete = _yesno(toks[1] if len(toks) == 2 else "", lineno)
        elif key == "m":
            entries.append((lineno, line))
        else:
            raise DocumentError("unknown field %r in algebra %s" % (key, name), lineno)
    if basis is None:
        raise DocumentError("algebra %s has no basis line" % name, start)
    mod = FilteredModule(basis, ring, grading, blocks)
    if unit is not None and unit not in mod:
        raise DocumentError("unit %r is not a basis element" % unit, start)
    for b, names in blocks.items():
        for n in names:
            if n not in mod:
                raise DocumentError("block %s names unknown element %r" % (b, n), start)
    prods = {k: {} for k in range(kmax + 1)}
    for lineno, line in entries:
        key, out, c = _entry(line, lineno, ring, mod.index, mod.index, True)
        if len(key) > kmax:
            raise DocumentError("arity %d exceeds the arity cutoff %d" % (len(key), kmax), lineno)
        _acc(prods[len(key)], key, out, c)
    try:
        return AInftyAlgebra(mod, prods, kmax, unit, signs, complete, name)
    except ValueError as e:
        raise DocumentError("algebra %s: %s" % (name, e), start)


def _parse_morphism(name, A, B, body, ring, kmax):
    complete = False
    comps = {k: {} for k in range(kmax + 1)}
    for lineno, _, line in body:
        toks = line.split()
        if toks[0] == "complete":
            complete = _yesno(toks[1] if len(toks) == 2 else "", lineno)
        elif toks[0] == "f":
            key, out, c = _entry(line, lineno, ring, A.module.index, B.module.index, True)
            if len(key) > kmax:
                raise DocumentError("arity %d exceeds the arity cutoff %d" % (len(key), kmax), lineno)
            _acc(comps[len(key)], key, out, c)
        else:
            raise DocumentError("unknown field %r in morphism %s" % (toks[0], name), lineno)
    try:
        return AInftyMorphism(A, B, comps, kmax=kmax, complete=complete, name=name)
    except ValueError as e:
        raise DocumentError("morphism %s: %s" % (name, e))


def _parse_sdr(B, body, ring):
    basis = None
    maps = {"alpha": {}, "beta": {}, "h": {}, "d": {}}
    rows = []
    for lineno, _, line in body:
        toks = line.split()
        if toks[0] == "basis":
            basis = _basis(toks[1:], lineno)
        elif toks[0] in maps:
            rows.append((lineno, toks[0], line))
        else:
            raise DocumentError("unknown field %r in sdr section" % toks[0], lineno)
    if basis is None:
        raise DocumentError("sdr section has no basis line")
    Amod = FilteredModule(basis, ring, B.module.grading)
    ends = {"alpha": (Amod, B.module), "beta": (B.module, Amod),
            "h": (B.module, B.module), "d": (Amod, Amod)}
    for lineno, key, line in rows:
        src, tgt = ends[key]
        (x,), out, c = _entry(line, lineno, ring, src.index, tgt.index, False)
        _acc(maps[key], x, out, c)
    lm = {k: LinearMap(ends[k][0], ends[k][1], v, -1 if k == "h" else 0, relaxed=(k == "h"))
          for k, v in maps.items()}
    return SDRSpec(B, Amod, lm["alpha"], lm["beta"], lm["h"], lm["d"])


def _parse_splitting(B, body):
    out = {"minus": (), "zero": (), "plus": ()}
    for lineno, _, line in body:
        toks = line.split()
        if toks[0] not in out:
            raise DocumentError("unknown field %r in splitting section" % toks[0], lineno)
        for n in toks[1:]:
            if n not in B.module:
                raise DocumentError("unknown basis element %r" % n, lineno)
        out[toks[0]] = tuple(toks[1:])
    return out


# ---------- serialization ----------

def _names_key(mod):
    return lambda key: (len(key), [mod.index[n] for n in key])


def _table_lines(tag, table, src, tgt, with_arity):
    out = []
    for key in sorted(table, key=_names_key(src)):
        v = table[key]
        for n in sorted(v, key=tgt.index.get):
            ins = " ".join(key)
            head = ("%s %d %s" % (tag, len(key), ins)) if with_arity else ("%s %s" % (tag, ins))
            out.append("  %s -> %s %s" % (" ".join(head.split()), n, format_scalar(v[n])))
    return out


def _grading(mod):
    return "none" if mod.grading is None else mod.grading


def _basis_line(mod):
    return "basis " + " ".join("%s:%d" % b for b in mod.basis)


def algebra_lines(A, name=None):
    mod = A.module
    lines = ["algebra %s" % (name or A.name), "  grading %s" % _grading(mod), "  " + _basis_line(mod)]
    for b in sorted(mod.blocks):
        lines.append("  block %s %s" % (b, " ".join(mod.blocks[b])))
    if A.unit is not None:
        lines.append("  unit %s" % A.unit)
    lines.append("  signs %s" % A.signs)
    lines.append("  complete %s" % ("yes" if A.complete else "no"))
    for k in range(A.kmax + 1):
        lines += _table_lines("m", A.m(k).table, mod, mod, True)
    lines.append("end")
    return lines


def morphism_lines(f, name=None, names=None):
    """``names`` maps id(algebra) to the name it carries in the document."""
    names = names or {}
    lines = ["morphism %s %s %s" % (name or f.name, names.get(id(f.source), f.source.name),
                                    names.get(id(f.target), f.target.name)),
             "  complete %s" % ("yes" if f.complete else "no")]
    for k in range(f.kmax + 1):
        lines += _table_lines("f", f.f(k).table, f.source.module, f.target.module, True)
    lines.append("end")
    return lines


def sdr_lines(name, s):
    lines = ["sdr %s" % name, "  " + _basis_line(s.A_module)]
    for key in ("alpha", "beta", "h", "d"):
        m = getattr(s, key)
        lines += _table_lines(key, {(n,): v for n, v in m.cols.items()}, m.source, m.target, False)
    lines.append("end")
    return lines


def splitting_lines(name, sp):
    lines = ["splitting %s" % name]
    for key in ("minus", "zero", "plus"):
        lines.append(("  %s %s" % (key, " ".join(sp[key]))).rstrip())
    lines.append("end")
    return lines


def serialize(doc):
    lines = ["%s %d" % (HEADER, VERSION), "field %s" % doc.field]
    if doc.chart:
        lines.append("chart " + " ".join("%s:%d" % sw for sw in doc.chart))
    lines.append("cutoffs energy=%s arity=%d" % (doc.energy, doc.arity))
    names = {id(A): name for name, A in doc.algebras.items()}
    for kind, name in doc.order:
        lines.append("")
        if kind == "algebra":
            lines += algebra_lines(doc.algebras[name], name)
        elif kind == "morphism":
            lines += morphism_lines(doc.morphisms[name], name, names)
        elif kind == "sdr":
            lines += sdr_lines(name, doc.sdrs[name])
        else:
            lines += splitting_lines(name, doc.splittings[name])
    return "\n".join(lines) + "\n"


def document_for(ring, arity, items):
    """Build a Document from (kind, name, object) triples over ``ring``."""
    if isinstance(ring, ChartRing):
        field, chart = "chart", list(zip(ring.symbols, ring.weights))
    else:
        field, chart = ring.tag, None
    doc = Document(field, ring.cutoff, arity, chart)
    for kind, name, obj in items:
        doc.add(kind, name, obj)
    return doc


def sdr_spec(data):
    """SDRSpec from SDRData."""
    return SDRSpec(data.B, data.A_module, data.alpha, data.beta, data.h, data.d_A)

"""Command-line front end.

    ainfty check DOC
    ainfty transfer B_DOC SDR_DOC -o OUT
    ainfty cocylinder B_DOC SPLIT_DOC -o OUT
    ainfty cylinder MORPHISM_DOC -o OUT       (mapping cocylinder B_f with its splitting)
    ainfty scenario NAME [--cutoff N] [--format text|machine]
    ainfty trees --leaves k --internal n [--max-arity a] [--list]
    ainfty example exterior|random-sdr|random-morphism [--seed s]

Exit status: 0 pass (or the expected outcome), 1 a mathematical check
failed, 2 bad input.  Document syntax lives in ``ainfty.document``.
Default cutoffs come from the environment variable AINFTY_CUTOFFS, e.g.
``energy=3,arity=3``, when neither the document nor a flag sets them.
"""

import argparse
import os
import random
import sys
from fractions import Fraction

from .core import check_quadratic_relations, check_unit
from .document import (DocumentError, document_for, parse, sdr_spec, serialize)
from .morphisms import check_morphism
from .scalars import INF, NovikovRing
from .transfer import (RecognitionError, SDRData, TransferError, check_sdr, cocylinder_to_morphism,
                       mapping_cocylinder, recognize, transfer)
from .trees import enumerate_stable_trees, format_tree

ENV = "AINFTY_CUTOFFS"
OK, FAIL, BAD = 0, 1, 2


class InputError(ValueError):
    pass


def _val(v):
    return "inf" if v == INF else str(v)


# ---------- options ----------

def env_cutoffs(environ=None):
    """(energy, arity, degree) defaults from AINFTY_CUTOFFS; missing keys are None."""
    text = (environ if environ is not None else os.environ).get(ENV, "")
    out = {"energy": None, "arity": None, "degree": None}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition("=")
        if key not in out:
            raise InputError("%s: unknown key %r" % (ENV, key))
        try:
            out[key] = Fraction(val) if key == "energy" else int(val)
        except (ValueError, ZeroDivisionError):
            raise InputError("%s: bad value %r" % (ENV, part))
    return out


def _energy(text):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("energy cutoff must be a rational a/b")
    if v <= 0:
        raise argparse.ArgumentTypeError("energy cutoff must be positive")
    return v


def _load(path, args, known=None):
    env = env_cutoffs()
    energy = args.cutoff_energy
    arity = args.cutoff_arity
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e.strerror))
    try:
        return parse(text, known, field=args.field, energy=energy, arity=arity,
                     defaults=(env["energy"], env["arity"]))
    except DocumentError as e:
        raise InputError("%s: %s" % (path, e))


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# ---------- check ----------

def check_document(doc):
    """Run every check a document supports; returns (lines, passed)."""
    lines = ["cutoffs: energy < %s, arity <= %d" % (doc.energy, doc.arity)]
    ok = True
    for kind, name in doc.order:
        if kind == "algebra":
            A = doc.algebras[name]
            rep = check_quadratic_relations(A)
            ok &= _report(lines, "algebra %s" % name, rep)
            if A.unit is not None:
                u = check_unit(A, A.unit)
                ok &= u
                lines.append("  unit %s: %s" % (A.unit, "ok" if u else "FAIL"))
        elif kind == "morphism":
            rep = check_morphism(doc.morphisms[name])
            ok &= _report(lines, "morphism %s" % name, rep)
        elif kind == "sdr":
            s = doc.sdrs[name]
            rep = check_sdr(SDRData(s.algebra, s.A_module, s.d, s.alpha, s.beta, s.h))
            ok &= _report(lines, "sdr %s" % name, rep)
        else:
            sp = doc.splittings[name]
            try:
                recognize(doc.known[name], sp["minus"], sp["zero"], sp["plus"])
                lines.append("splitting %s: ok" % name)
            except RecognitionError as e:
                ok = False
                lines.append("splitting %s: FAIL (%s)" % (name, e))
    lines.append("result: %s" % ("pass" if ok else "FAIL"))
    return lines, ok


def _report(lines, title, rep):
    lines.append("%s: %s (certified at energy < %s)" % (title, "ok" if rep.passed else "FAIL",
                                                        rep.cutoff))
    for label in rep.residuals:
        v = rep.residual_val(label)
        lines.append("  %-18s worst residual valuation %s%s" % (
            label, _val(v), "" if v == INF else "  FAIL"))
    for n in rep.notes:
        lines.append("  note: %s" % n)
    return rep.passed


def cmd_check(args):
    doc = _load(args.document, args)
    lines, ok = check_document(doc)
    print("\n".join(lines))
    return OK if ok else FAIL


# ---------- transfer and cocylinders ----------

def _single(table, what, path):
    if len(table) != 1:
        raise InputError("%s must contain exactly one %s (found %d)" % (path, what, len(table)))
    return next(iter(table.items()))


def cmd_transfer(args):
    bdoc = _load(args.algebra, args)
    sdoc = _load(args.sdr, args, known=bdoc.known)
    name, spec = _single(sdoc.sdrs, "sdr section", args.sdr)
    B = bdoc.known.get(name) or sdoc.known[name]
    data = SDRData(B, spec.A_module, spec.d, spec.alpha, spec.beta, spec.h)
    rep = check_sdr(data)
    if not rep.passed:
        print("SDR conditions violated: %s" % ", ".join(rep.failures()), file=sys.stderr)
        return FAIL
    try:
        res = transfer(data, kmax=bdoc.arity, name="A")
    except TransferError as e:
        print("transfer failed: %s" % e, file=sys.stderr)
        return FAIL
    out = document_for(B.ring, bdoc.arity, [("algebra", B.name, B), ("algebra", "A", res.algebra),
                                            ("morphism", "alpha", res.alpha)])
    _write(serialize(out), args.output)
    return OK


def cmd_cocylinder(args):
    bdoc = _load(args.algebra, args)
    sdoc = _load(args.splitting, args, known=bdoc.known)
    name, sp = _single(sdoc.splittings, "splitting section", args.splitting)
    B = bdoc.known.get(name) or sdoc.known[name]
    try:
        dec = recognize(B, sp["minus"], sp["zero"], sp["plus"])
        theta, _ = cocylinder_to_morphism(dec, kmax=bdoc.arity)
    except (RecognitionError, TransferError) as e:
        print("cocylinder conditions violated: %s" % e, file=sys.stderr)
        return FAIL
    out = document_for(B.ring, bdoc.arity, [("algebra", "A-", theta.source),
                                            ("algebra", "A+", theta.target),
                                            ("morphism", "Theta", theta)])
    _write(serialize(out), args.output)
    return OK


def cmd_cylinder(args):
    doc = _load(args.morphism, args)
    name, f = _single(doc.morphisms, "morphism", args.morphism)
    dec = mapping_cocylinder(f)
    B = dec.B.replace(name="B")
    out = document_for(B.ring, doc.arity, [("algebra", "B", B)])
    out.add("splitting", "B", {"minus": dec.minus, "zero": dec.zero, "plus": dec.plus})
    _write(serialize(out), args.output)
    return OK


# ---------- scenarios and trees ----------

def cmd_scenario(args):
    from .scenarios import SCENARIOS, ScenarioError, run_scenario
    if args.name not in SCENARIOS:
        print("unknown scenario %r (known: %s)" % (args.name, ", ".join(sorted(SCENARIOS))),
              file=sys.stderr)
        return BAD
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = env_cutoffs()["degree"]
    try:
        rep = run_scenario(args.name, cutoff)
    except ScenarioError as e:
        print("scenario %s failed: %s" % (args.name, e), file=sys.stderr)
        return FAIL
    print(rep.machine() if args.format == "machine" else rep.text())
    return OK if rep.passed else FAIL


def cmd_trees(args):
    if args.leaves < 0 or args.internal < 0:
        raise InputError("leaf counts must be non-negative")
    trees = enumerate_stable_trees(args.leaves, args.internal, args.max_arity)
    if args.format == "machine":
        import json
        print(json.dumps({"leaves": args.leaves, "internal": args.internal,
                          "max_arity": args.max_arity, "count": len(trees),
                          "trees": [format_tree(t) for t in trees] if args.list else None},
                         sort_keys=True))
        return OK
    print(len(trees))
    if args.list:
        for t in trees:
            print(format_tree(t))
    return OK


# ---------- examples ----------

def example_exterior(ring=None):
    """Exterior algebra on two odd generators a, b over F_2 (strict, uncurved)."""
    from .core import curved_dga
    from .linear import FilteredModule
    ring = ring or NovikovRing(3, 2)
    mod = FilteredModule([("e", 0), ("a", 1), ("b", 1), ("ab", 2)], ring)
    one = ring.one()
    mult = {(x, y): {z: one} for x, y, z in [
        ("e", "e", "e"), ("e", "a", "a"), ("a", "e", "a"), ("e", "b", "b"), ("b", "e", "b"),
        ("e", "ab", "ab"), ("ab", "e", "ab"), ("a", "b", "ab"), ("b", "a", "ab")]}
    return curved_dga(mod, mult, unit="e", name="B")


def cmd_example(args):
    rng = random.Random(args.seed)
    if args.kind == "exterior":
        B = example_exterior()
        doc = document_for(B.ring, 3, [("algebra", "B", B)])
    elif args.kind == "random-sdr":
        from .generators import random_sdr
        while True:
            data = random_sdr(rng)
            if data.A_module.rank():
                break
        B = data.B.replace(name="B")
        data = SDRData(B, data.A_module, data.d_A, data.alpha, data.beta, data.h)
        doc = document_for(B.ring, 3, [("algebra", "B", B), ("sdr", "B", sdr_spec(data))])
    elif args.kind == "random-morphism":
        from .generators import random_morphism
        A, f = random_morphism(rng, kmax=3)
        A = A.replace(name="A")
        B = f.target.replace(name="B")
        from .morphisms import AInftyMorphism
        f = AInftyMorphism(A, B, dict(f.comps), kmax=f.kmax, complete=f.complete, name="f")
        doc = document_for(B.ring, 3, [("algebra", "A", A), ("algebra", "B", B),
                                       ("morphism", "f", f)])
    else:
        raise InputError("unknown example %r" % args.kind)
    _write(serialize(doc), args.output)
    return OK


# ---------- entry point ----------

def build_parser():
    p = argparse.ArgumentParser(prog="ainfty", description="Filtered A-infinity algebra toolkit.",
                                allow_abbrev=False)
    p.add_argument("--cutoff-energy", type=_energy, help="energy cutoff a/b (overrides documents)")
    p.add_argument("--cutoff-arity", type=int, help="arity cutoff (overrides documents)")
    p.add_argument("--field", choices=("q", "f2", "chart"), help="coefficient field for documents without one")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("check", help="check every structure in a document")
    s.add_argument("document")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("transfer", help="homotopy transfer along SDR data")
    s.add_argument("algebra")
    s.add_argument("sdr")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("cocylinder", help="morphism Theta of a mapping cocylinder")
    s.add_argument("algebra")
    s.add_argument("splitting")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_cocylinder)

    s = sub.add_parser("cylinder", help="mapping cocylinder B_f of a morphism, with its splitting")
    s.add_argument("morphism")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_cylinder)

    s = sub.add_parser("scenario", help="run a named scenario")
    s.add_argument("name")
    s.add_argument("--cutoff", type=int)
    s.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_scenario)

    s = sub.add_parser("trees", help="count (and list) stable trees")
    s.add_argument("--leaves", type=int, required=True)
    s.add_argument("--internal", type=int, default=0)
    s.add_argument("--max-arity", type=int)
    s.add_argument("--list", action="store_true")
    s.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("example", help="write an example document")
    s.add_argument("kind", choices=("exterior", "random-sdr", "random-morphism"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return BAD if e.code else OK
    try:
        return args.func(args)
    except (InputError, DocumentError) as e:
        print("error: %s" % e, file=sys.stderr)
        return BAD


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 when everything checked holds, 1 when a mathematical
violation was found (the report names a witness), 2 for unreadable input or
bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from typing import Any, Sequence

from . import __version__
from .builders import BOUNDED, EXTENDED, build_cech, build_sd
from .generate import random_complexes
from .homology import RealizationError, constant_realization, homology_groups, realize
from .io import (
    DocumentError,
    complex_to_dict,
    load_complex,
    load_json,
    profile_from_dict,
    quotient_from_dict,
    realization_from_dict,
)
from .lattice import check_complex as check_lattice, is_smooth, maximal_multiplicities, toric_resolve
from .strata import ValidationReport, validate_complex
from .subdivide import (
    IntersectionProfile,
    barycentric,
    blowup_subdivide,
    star_subdivide,
    verify_barycentric,
    verify_star,
)
from .verify import SUITES, comparison_report, run_suite
from .volume import apply_quotient, format_volume, is_trivial_class, motivic_volume_formula, volume_order

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _report_dict(rep: ValidationReport) -> dict:
    return {
        "ok": rep.ok,
        "checks": sorted(Counter(_check_family(c) for c in rep.checks).items()),
        "violations": [{"kind": v.kind, "ids": list(v.ids), "detail": v.detail} for v in rep.violations],
    }


def _check_family(name: str) -> str:
    """``"h[2]: arrows reachable"`` and ``"h[3]: ..."`` count as one check."""
    head, _, tail = name.partition(":")
    if "[" in head:
        head = head[: head.index("[")].rstrip()
    if tail:
        return f"{head}:{tail}"
    if "[" in name:
        return name[: name.index("[")].rstrip()
    return name


def _report_text(rep: ValidationReport) -> list[str]:
    lines = [f"{'pass' if rep.ok else 'ran '} {name}" + (f" (x{n})" if n > 1 else "") for name, n in sorted(Counter(_check_family(c) for c in rep.checks).items())]
    lines += [f"violation: {v}" for v in rep.violations]
    lines.append(f"{len(rep.checks)} checks, {len(rep.violations)} violations")
    return lines


def _load(path: str):
    c, lat = load_complex(path)
    rep = validate_complex(c)
    return c, lat, rep


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _invalid(args, rep: ValidationReport) -> int:
    _emit(args, {"valid": False, **_report_dict(rep)}, ["invalid complex"] + [f"violation: {v}" for v in rep.violations])
    return VIOLATION


# -- commands -------------------------------------------------------------------

def cmd_validate(args) -> int:
    c, lat, rep = _load(args.file)
    if lat is not None:
        rep.extend(check_lattice(lat))
    lines = [f"{c.name}: {len(c.strata)} strata, {len(c.vertex_ids)} divisors, max codimension {c.max_codim}, {'simplicial' if c.is_simplicial else 'not simplicial'}"]
    lines += ["valid" if rep.ok else "invalid"] + [f"violation: {v}" for v in rep.violations]
    _emit(args, {"name": c.name, "strata": len(c.strata), "simplicial": c.is_simplicial, "valid": rep.ok, **_report_dict(rep)}, lines)
    return OK if rep.ok else VIOLATION


def _build(args, kind: str) -> int:
    c, _, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    mode = EXTENDED if args.extended is not None else BOUNDED
    if kind == "cech" and not c.is_simplicial:
        raise UsageError("the Čech complex needs an ordered simplicial complex")
    b = (build_sd if kind == "sd" else build_cech)(c, mode, args.extended)
    from .chain import verify_complex

    vr = verify_complex(b.complex, kind)
    terms = {n: ["<=".join(k) if kind == "sd" else f"{k[0]}:{','.join(k[1])}" for k in b.keys(n)] for n in b.complex.degrees()}
    lines = [f"{kind}{'+' if mode == EXTENDED else ''} of {c.name}: ranks {b.ranks()}"]
    if args.list:
        for n, ks in terms.items():
            lines.append(f"  degree {n}: " + " ".join(ks))
    lines += _report_text(vr)
    payload = {"complex": c.name, "kind": kind, "mode": mode, "bound": b.bound, "ranks": b.ranks(), **_report_dict(vr)}
    if args.list:
        payload["terms"] = {str(n): ks for n, ks in terms.items()}
    _emit(args, payload, lines)
    return OK if vr.ok else VIOLATION


def cmd_compare(args) -> int:
    c, _, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    if not c.is_simplicial:
        raise UsageError("comparison needs an ordered simplicial complex")
    r = comparison_report(c)
    _emit(args, {"complex": c.name, **_report_dict(r)}, _report_text(r))
    return OK if r.ok else VIOLATION


def cmd_subdivide(args) -> int:
    c, _, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    try:
        if args.barycentric:
            r = barycentric(c)
            vr = verify_barycentric(r)
        elif args.star:
            r = star_subdivide(c, args.star)
            vr = verify_star(r)
        else:
            profile = profile_from_dict(load_json(args.profile), args.profile) if args.profile else IntersectionProfile(args.blowup)
            r = blowup_subdivide(c, args.blowup, profile)
            vr = verify_star(r)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    doc = complex_to_dict(r.derived)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    lines = [f"{r.kind} subdivision of {c.name}" + (f" at {r.center}" if r.center else "") + f": {len(r.derived.strata)} strata"]
    lines += _report_text(vr)
    if not args.output and not args.json:
        lines.append(json.dumps(doc, indent=2, ensure_ascii=False))
    payload = {"kind": r.kind, "center": r.center, "derived": doc, **_report_dict(vr)}
    _emit(args, payload, lines)
    return OK if vr.ok else VIOLATION


def cmd_resolve(args) -> int:
    c, lat, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    if lat is None:
        raise UsageError("the document has no lattice section")
    lrep = check_lattice(lat)
    if not lrep.ok:
        return _invalid(args, lrep)
    out, steps = toric_resolve(lat)
    smooth, witness = is_smooth(out)
    lines = [f"{len(steps)} steps"]
    for i, s in enumerate(steps, 1):
        lines.append(f"  {i}: cone {s.cone} star at face {s.face} point {list(s.point)} -> new ray {s.new_vertex}; multiplicities {list(s.multiplicities_before)} -> {list(s.multiplicities_after)}")
    lines.append("smooth" if smooth else f"not smooth at {witness}")
    doc = complex_to_dict(out.complex, out)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    payload = {
        "steps": [
            {"cone": s.cone, "face": s.face, "point": list(s.point), "new_vertex": s.new_vertex,
             "before": list(s.multiplicities_before), "after": list(s.multiplicities_after)}
            for s in steps
        ],
        "smooth": smooth,
        "multiplicities": list(maximal_multiplicities(out)),
    }
    _emit(args, payload, lines)
    return OK if smooth else VIOLATION


def cmd_homology(args) -> int:
    c, _, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    use_cech = args.complex == "cech"
    if use_cech and not c.is_simplicial:
        raise UsageError("the Čech complex needs an ordered simplicial complex; use --complex sd")
    b = build_cech(c) if use_cech else build_sd(c)
    r = realization_from_dict(load_json(args.realization), args.realization) if args.realization else constant_realization(c)
    try:
        ic = realize(b, r)
    except RealizationError as e:
        vr = e.report or ValidationReport()
        if e.report is None:
            vr.add("realization error", [], str(e))
        _emit(args, {"ok": False, **_report_dict(vr)}, [f"realization rejected: {e}"] + _report_text(vr))
        return VIOLATION
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    groups = homology_groups(ic)
    lines = [f"H_{h.degree} = {h}" for h in groups]
    lines.append(f"Euler characteristic {ic.euler_characteristic()}")
    payload = {
        "complex": c.name,
        "groups": [{"degree": h.degree, "betti": h.betti, "torsion": list(h.torsion)} for h in groups],
        "ranks": ic.ranks,
        "euler_characteristic": ic.euler_characteristic(),
    }
    _emit(args, payload, lines)
    return OK


def cmd_volume(args) -> int:
    c, _, rep = _load(args.file)
    if not rep.ok:
        return _invalid(args, rep)
    k = motivic_volume_formula(c)
    q = quotient_from_dict(load_json(args.quotient), args.quotient) if args.quotient else None
    if q is not None:
        k = apply_quotient(k, q)
    order = volume_order(c)
    text = k.format(order) if q is not None else format_volume(c)
    lines = [text]
    payload: dict[str, Any] = {"complex": c.name, "class": dict(sorted(k.coefficients.items())), "text": text}
    if args.point:
        trivial = is_trivial_class(k, args.point, q)
        lines.append(f"{'trivial' if trivial else 'not trivial'} against [{args.point}]")
        payload["trivial"] = trivial
    _emit(args, payload, lines)
    return OK


def cmd_verify(args) -> int:
    if args.file:
        c, _, rep = _load(args.file)
        if not rep.ok:
            return _invalid(args, rep)
        complexes = [c]
    else:
        complexes = random_complexes(args.seed, args.cases)
    total = ValidationReport()
    per = []
    for c in complexes:
        r = run_suite(c, args.suite)
        total.extend(r)
        per.append({"complex": c.name, "ok": r.ok, "violations": len(r.violations)})
    lines = [f"suite {args.suite} on {len(complexes)} complex{'es' if len(complexes) != 1 else ''}"] + _report_text(total)
    _emit(args, {"suite": args.suite, "complexes": per, **_report_dict(total)}, lines)
    return OK if total.ok else VIOLATION


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stratcx", description="Chain-level checks for stratified complexes.")
    p.add_argument("--version", action="version", version=f"stratcx {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a complex document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    for kind in ("sd", "cech"):
        s = sub.add_parser(kind, parents=[common], help=f"build the {'subdivision' if kind == 'sd' else 'Čech'} complex")
        s.add_argument("file")
        s.add_argument("--extended", type=int, metavar="N", help="include degenerate summands up to degree N")
        s.add_argument("--list", action="store_true", help="list the summands")
        s.set_defaults(func=lambda a, k=kind: _build(a, k))

    s = sub.add_parser("compare", parents=[common], help="verify λ, sd and the comparison homotopy")
    s.add_argument("file")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("subdivide", parents=[common], help="subdivide and verify")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--barycentric", action="store_true")
    g.add_argument("--star", metavar="STRATUM")
    g.add_argument("--blowup", metavar="STRATUM")
    s.add_argument("--profile", metavar="FILE", help="intersection profile for --blowup")
    s.add_argument("--output", "-o", metavar="FILE", help="write the derived complex here")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("resolve", parents=[common], help="resolve the lattice cone complex")
    s.add_argument("file")
    s.add_argument("--output", "-o", metavar="FILE")
    s.set_defaults(func=cmd_resolve)

    s = sub.add_parser("homology", parents=[common], help="homology of a realization")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--constant", action="store_true", help="dual-complex homology (default)")
    g.add_argument("--realization", metavar="FILE")
    s.add_argument("--complex", choices=("cech", "sd"), default="cech")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("volume", parents=[common], help="alternating class of the strata")
    s.add_argument("file")
    s.add_argument("--quotient", metavar="FILE")
    s.add_argument("--point", metavar="LABEL")
    s.set_defaults(func=cmd_volume)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("file", nargs="?", help="a complex; random complexes when omitted")
    s.add_argument("--suite", choices=SUITES, default="full")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=20)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    if getattr(args, "profile", None) and not getattr(args, "blowup", None):
        print("error: --profile only applies to --blowup", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

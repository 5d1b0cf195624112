"""Verification suites: every identity the toolkit constructs, checked
exactly on one complex at a time."""

from __future__ import annotations

from .builders import Comparison, build_comparison, comparison_parts, degeneracy_splitting
from .chain import (
    compose_chain_maps,
    is_identity,
    verify_chain_map,
    verify_complex,
    verify_homotopy,
)
from .freecat import FreeMorphism, differing_entries
from .homology import constant_homology
from .strata import StratifiedComplex, ValidationReport, validate_complex
from .subdivide import (
    IntersectionProfile,
    barycentric,
    blowup_subdivide,
    normalized,
    star_subdivide,
    verify_barycentric,
    verify_star,
)
from .volume import k0_class_of_complex, motivic_volume_formula, pushforward_labels

SUITES = ("complex", "maps", "homotopies", "k0", "homology", "full")


def _same(rep: ValidationReport, a: FreeMorphism, b: FreeMorphism, what: str) -> None:
    rep.checks.append(what)
    if a.cols != b.cols:
        i, j, x, y = differing_entries(a, b, 1)[0]
        rep.add("identity fails", [what], f"entry ({i},{j}): {x} != {y}")


def check_complexes(cmp: Comparison) -> ValidationReport:
    rep = ValidationReport()
    for b, nm in ((cmp.sd, "Sd"), (cmp.cech, "Č"), (cmp.sd_ext, "Sd+"), (cmp.cech_ext, "Č+")):
        rep.extend(verify_complex(b.complex, nm))
    return rep


def check_maps(cmp: Comparison) -> ValidationReport:
    rep = ValidationReport()
    for f, nm in ((cmp.lam, "λ"), (cmp.sdmap, "sd"), (cmp.lam_ext, "λ+"), (cmp.sdmap_ext, "sd+")):
        rep.extend(verify_chain_map(f, nm))
    rep.extend(is_identity(compose_chain_maps(cmp.lam, cmp.sdmap), "λ o sd"))
    return rep


def check_parts(cmp: Comparison) -> ValidationReport:
    """The five sign identities of the pieces of ``d h + h d``."""
    rep = ValidationReport()
    sdl = compose_chain_maps(cmp.sdmap_ext, cmp.lam_ext)
    for n, p in comparison_parts(cmp.source, cmp.sd_ext).items():
        obj = cmp.sd_ext.term(n)
        zero = FreeMorphism.zero(obj, obj)
        _same(rep, p["A"], FreeMorphism.identity(obj), f"A = id [{n}]")
        _same(rep, p["B"], -sdl[n], f"B = -sd+ λ+ [{n}]")
        _same(rep, p["C"], zero, f"C = 0 [{n}]")
        _same(rep, p["D"] + p["UT"], zero, f"D + UT = 0 [{n}]")
        _same(rep, p["UD"] + p["LD"] + p["LT"], zero, f"UD + LD + LT = 0 [{n}]")
    return rep


def check_homotopies(cmp: Comparison) -> ValidationReport:
    rep = ValidationReport()
    rep.extend(verify_homotopy(cmp.homotopy, "id - sd+ λ+"))
    rep.extend(check_parts(cmp))
    for b, nm in ((cmp.sd_ext, "Sd+"), (cmp.cech_ext, "Č+")):
        s = degeneracy_splitting(b)
        rep.extend(verify_chain_map(s.inclusion, f"{nm} inclusion"))
        rep.extend(verify_chain_map(s.projection, f"{nm} projection"))
        rep.extend(is_identity(compose_chain_maps(s.projection, s.inclusion), f"{nm} proj o incl"))
        rep.extend(verify_homotopy(s.homotopy, f"{nm} degenerate splitting"))
    return rep


def subdivisions(c: StratifiedComplex, centers: list[str] | None = None):
    """Barycentric, and for simplicial input every star and blowup."""
    yield barycentric(c)
    if not c.is_simplicial:
        return
    for s in centers if centers is not None else c.ids:
        yield star_subdivide(c, s)
        yield blowup_subdivide(c, s)
        yield blowup_subdivide(c, s, IntersectionProfile(s, "none"))


def check_subdivisions(c: StratifiedComplex, centers: list[str] | None = None) -> ValidationReport:
    rep = ValidationReport()
    for r in subdivisions(c, centers):
        if r.kind == "barycentric":
            rep.extend(verify_barycentric(r))
        else:
            rep.extend(verify_star(r))
            if r.kind == "star":
                other = blowup_subdivide(c, r.center, IntersectionProfile(r.center, "stratum"))
                rep.checks.append(f"blowup at {r.center} with Z the stratum = star")
                if normalized(other) != normalized(r):
                    rep.add("blowup differs from star", [c.name, r.center])
    return rep


def check_k0(c: StratifiedComplex, cmp: Comparison | None = None, centers: list[str] | None = None) -> ValidationReport:
    from .builders import build_cech, build_sd

    rep = ValidationReport(checks=["K0: Sd and Č agree with the volume formula", "K0: subdivisions"])
    vol = motivic_volume_formula(c)
    sd = cmp.sd if cmp else build_sd(c)
    if k0_class_of_complex(sd) != vol:
        rep.add("K0 mismatch", [c.name, "Sd"], f"{k0_class_of_complex(sd)} != {vol}")
    if c.is_simplicial:
        ch = cmp.cech if cmp else build_cech(c)
        if k0_class_of_complex(ch) != vol:
            rep.add("K0 mismatch", [c.name, "Č"], f"{k0_class_of_complex(ch)} != {vol}")
    for r in subdivisions(c, centers):
        k = pushforward_labels(k0_class_of_complex(r.maps.cech_derived), r)
        if k != motivic_volume_formula(r.base):
            rep.add("K0 not preserved", [c.name, r.kind, r.center or ""], f"{k} != {vol}")
    return rep


def trimmed(groups):
    """Drop trailing zero groups so complexes of different length compare."""
    out = list(groups)
    while out and not out[-1].betti and not out[-1].torsion:
        out.pop()
    return out


def check_homology(c: StratifiedComplex, centers: list[str] | None = None) -> ValidationReport:
    from .builders import build_cech, build_sd

    rep = ValidationReport(checks=["homology: invariant under subdivision"])
    ref = trimmed(constant_homology(build_cech(c) if c.is_simplicial else build_sd(c)))
    if c.is_simplicial:
        other = trimmed(constant_homology(build_sd(c)))
        if other != ref:
            rep.add("homology differs", [c.name, "Sd vs Č"])
    for r in subdivisions(c, centers):
        got = trimmed(constant_homology(r.maps.cech_derived))
        if got != ref:
            rep.add("homology changed", [c.name, r.kind, r.center or ""], f"{[str(h) for h in got]} != {[str(h) for h in ref]}")
    return rep


def run_suite(c: StratifiedComplex, suite: str = "full") -> ValidationReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    rep = ValidationReport()
    rep.extend(validate_complex(c))
    if not rep.ok:
        return rep
    cmp = build_comparison(c) if c.is_simplicial else None
    if suite in ("complex", "full") and cmp:
        rep.extend(check_complexes(cmp))
    if suite in ("maps", "full") and cmp:
        rep.extend(check_maps(cmp))
    if suite in ("homotopies", "full"):
        if cmp:
            rep.extend(check_homotopies(cmp))
        rep.extend(check_subdivisions(c))
    if suite in ("k0", "full"):
        rep.extend(check_k0(c, cmp))
    if suite in ("homology", "full"):
        rep.extend(check_homology(c))
    return rep


def comparison_report(c: StratifiedComplex) -> ValidationReport:
    """Everything about ``Sd`` versus ``Č`` on one complex."""
    cmp = build_comparison(c)
    rep = check_complexes(cmp)
    rep.extend(check_maps(cmp))
    rep.extend(check_homotopies(cmp))
    return rep

"""JSON documents for complexes, realizations, profiles and label quotients.

The field names are described in ``docs/schema.md``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .catalog import NAMED
from .homology import AbelianRealization, realization_from_mapping
from .lattice import LatticeCone, LatticeConeComplex
from .strata import KNOWN_FLAGS, Stratum, StratifiedComplex, VertexId
from .subdivide import IntersectionProfile
from .volume import LabelQuotient


class DocumentError(ValueError):
    """A document that cannot be read; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def _load_text(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, f"{source}:{e.lineno}:{e.colno}") from None


def load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(str(e.strerror or e), str(p)) from None
    return _load_text(text, str(p))


def _expect(cond: bool, message: str, where: str) -> None:
    if not cond:
        raise DocumentError(message, where)


def _str(x: Any, where: str) -> str:
    _expect(isinstance(x, str) and x != "", "expected a non-empty string", where)
    return x


def _int(x: Any, where: str) -> int:
    _expect(isinstance(x, int) and not isinstance(x, bool), "expected an integer", where)
    return x


def _matrix(x: Any, where: str) -> list[list[int]]:
    _expect(isinstance(x, list), "expected a list of rows", where)
    rows = []
    for i, r in enumerate(x):
        _expect(isinstance(r, list), "expected a row", f"{where}[{i}]")
        rows.append([_int(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)])
    return rows


# -- complexes -----------------------------------------------------------------

def complex_from_dict(doc: Any, source: str = "document") -> tuple[StratifiedComplex, LatticeConeComplex | None]:
    _expect(isinstance(doc, dict), "expected an object", source)
    name = _str(doc.get("name", Path(source).stem or "complex"), f"{source}.name")
    base = doc.get("base", "k")
    if isinstance(base, dict):
        _expect(set(base) == {"R_d"}, "base must be \"k\" or {\"R_d\": d}", f"{source}.base")
        base = ("R_d", _int(base["R_d"], f"{source}.base.R_d"))
    else:
        _expect(base == "k", "base must be \"k\" or {\"R_d\": d}", f"{source}.base")

    vdocs = doc.get("vertices")
    _expect(isinstance(vdocs, list), "expected a list", f"{source}.vertices")
    vertices: list[VertexId] = []
    vclass: dict[str, str] = {}
    for i, v in enumerate(vdocs):
        w = f"{source}.vertices[{i}]"
        _expect(isinstance(v, dict), "expected an object", w)
        vid = _str(v.get("id"), f"{w}.id")
        order = v.get("order")
        key, prec = None, ()
        if isinstance(order, list):
            prec = tuple(_str(x, f"{w}.order[{j}]") for j, x in enumerate(order))
        elif isinstance(order, dict):
            key = _int(order.get("level"), f"{w}.order.level")
            prec = tuple(_str(x, f"{w}.order.precedes[{j}]") for j, x in enumerate(order.get("precedes", [])))
        else:
            key = _int(order, f"{w}.order")
        vertices.append(VertexId(vid, key, prec))
        vclass[vid] = _str(v.get("class", vid), f"{w}.class")

    sdocs = doc.get("strata", [])
    _expect(isinstance(sdocs, list), "expected a list", f"{source}.strata")
    parsed: list[tuple[str, dict, str]] = []
    for i, s in enumerate(sdocs):
        w = f"{source}.strata[{i}]"
        _expect(isinstance(s, dict), "expected an object", w)
        parsed.append((_str(s.get("id"), f"{w}.id"), s, w))
    listed_singletons = {tuple(s.get("vertices", [])) for _, s, _ in parsed if len(s.get("vertices", [])) == 1}

    strata: list[Stratum] = []
    for v in vertices:
        if (v.id,) not in listed_singletons:
            strata.append(Stratum(v.id, (v.id,), (), vclass[v.id]))
    by_vertices: dict[frozenset, list[str]] = {}
    for sid, s, w in parsed:
        by_vertices.setdefault(frozenset(s.get("vertices", [])), []).append(sid)
    for s in strata:
        by_vertices.setdefault(frozenset(s.vertices), []).append(s.id)

    for sid, s, w in parsed:
        vs = s.get("vertices")
        _expect(isinstance(vs, list) and vs, "expected a non-empty list of vertex ids", f"{w}.vertices")
        vs = tuple(_str(x, f"{w}.vertices[{j}]") for j, x in enumerate(vs))
        label = _str(s.get("class", sid), f"{w}.class")
        flags = s.get("flags", [])
        _expect(isinstance(flags, list), "expected a list", f"{w}.flags")
        for j, f in enumerate(flags):
            _expect(f in KNOWN_FLAGS, f"unknown flag {f!r}", f"{w}.flags[{j}]")
        flags = frozenset(flags)
        if "covers" in s or "codim" in s:
            covers = tuple(_str(x, f"{w}.covers[{j}]") for j, x in enumerate(s.get("covers", [])))
            grade = _int(s.get("codim"), f"{w}.codim")
            strata.append(Stratum(sid, vs, (), label, flags, covers, grade))
            continue
        faces_doc = s.get("faces")
        if len(vs) == 1:
            faces = ()
        elif faces_doc is None:
            faces_l = []
            for j in range(len(vs)):
                cand = by_vertices.get(frozenset(vs[:j] + vs[j + 1:]), [])
                _expect(len(cand) == 1, f"face {j} is {'ambiguous' if cand else 'missing'}; list faces explicitly", f"{w}.faces")
                faces_l.append(cand[0])
            faces = tuple(faces_l)
        else:
            _expect(isinstance(faces_doc, (dict, list)), "expected an object {index: id} or a list", f"{w}.faces")
            if isinstance(faces_doc, list):
                faces = tuple(_str(x, f"{w}.faces[{j}]") for j, x in enumerate(faces_doc))
            else:
                idx = {}
                for k, x in faces_doc.items():
                    _expect(k.isdigit(), "face keys are vertex positions", f"{w}.faces.{k}")
                    idx[int(k)] = _str(x, f"{w}.faces.{k}")
                _expect(sorted(idx) == list(range(len(vs))), f"expected faces 0..{len(vs) - 1}", f"{w}.faces")
                faces = tuple(idx[j] for j in range(len(vs)))
        strata.append(Stratum(sid, vs, faces, label, flags))

    c = StratifiedComplex(name, vertices, strata, base)
    lat = None
    if "lattice" in doc:
        lat = _lattice_from_dict(c, doc["lattice"], f"{source}.lattice")
    return c, lat


def _lattice_from_dict(c: StratifiedComplex, doc: Any, where: str) -> LatticeConeComplex:
    _expect(isinstance(doc, dict), "expected an object", where)
    if "rays" in doc:
        rays = doc["rays"]
        _expect(isinstance(rays, dict), "expected {vertex: vector}", f"{where}.rays")
        vec = {}
        for v in c.vertex_ids:
            _expect(v in rays, f"no ray for vertex {v!r}", f"{where}.rays")
            vec[v] = [_int(x, f"{where}.rays.{v}[{i}]") for i, x in enumerate(rays[v])]
        try:
            return LatticeConeComplex.from_global_rays(c, vec)
        except ValueError as e:
            raise DocumentError(str(e), where) from None
    cones_doc = doc.get("cones")
    _expect(isinstance(cones_doc, dict), "expected \"rays\" or \"cones\"", where)
    cones = {}
    for sid in c.ids:
        w = f"{where}.cones.{sid}"
        _expect(sid in cones_doc, "missing cone", w)
        d = cones_doc[sid]
        rays = tuple(tuple(r) for r in _matrix(d.get("rays"), f"{w}.rays"))
        dim = len(rays[0]) if rays else 0
        embs = {f: tuple(tuple(r) for r in _matrix(m, f"{w}.face_embeddings.{f}")) for f, m in d.get("face_embeddings", {}).items()}
        cones[sid] = LatticeCone(sid, dim, rays, embs)
    return LatticeConeComplex(c, cones)


def complex_to_dict(c: StratifiedComplex, lattice: LatticeConeComplex | None = None) -> dict:
    """Canonical document: everything sorted by id."""
    vstrata = {}
    for s in c.strata:
        if s.codim == 1 and s.simplicial and s.id == s.vertices[0] and not s.flags:
            vstrata[s.id] = s
    vertices = []
    for v in sorted(c.vertices, key=lambda x: x.id):
        if v.order_key is not None and not v.precedes:
            order: Any = v.order_key
        elif v.order_key is None:
            order = sorted(v.precedes)
        else:
            order = {"level": v.order_key, "precedes": sorted(v.precedes)}
        entry = {"id": v.id, "order": order}
        if v.id in vstrata:
            entry["class"] = vstrata[v.id].label
        vertices.append(entry)
    strata = []
    for s in c.strata:
        if s.id in vstrata:
            continue
        d: dict[str, Any] = {"id": s.id, "vertices": list(s.vertices)}
        if s.covers is not None or s.grade is not None:
            d["covers"] = sorted(s.covers or ())
            d["codim"] = s.grade
        elif len(s.vertices) > 1:
            d["faces"] = {str(j): f for j, f in enumerate(s.faces)}
        d["class"] = s.label
        if s.flags:
            d["flags"] = sorted(s.flags)
        strata.append(d)
    doc: dict[str, Any] = {
        "name": c.name,
        "base": c.base if isinstance(c.base, str) else {"R_d": c.base[1]},
        "vertices": vertices,
        "strata": strata,
    }
    if lattice is not None:
        doc["lattice"] = {
            "cones": {
                sid: {
                    "rays": [list(r) for r in lattice.cones[sid].rays],
                    "face_embeddings": {f: [list(r) for r in m] for f, m in sorted(lattice.cones[sid].face_embeddings.items())},
                }
                for sid in c.ids
            }
        }
    return doc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def load_complex(path: str) -> tuple[StratifiedComplex, LatticeConeComplex | None]:
    """Read a document; ``catalog:<name>`` loads a built-in complex."""
    if path.startswith("catalog:"):
        key = path.split(":", 1)[1]
        if key not in NAMED:
            raise DocumentError(f"unknown catalog complex; known: {', '.join(sorted(NAMED))}", path)
        return NAMED[key](), None
    return complex_from_dict(load_json(path), path)


def parse_complex(text: str, source: str = "<string>") -> tuple[StratifiedComplex, LatticeConeComplex | None]:
    return complex_from_dict(_load_text(text, source), source)


# -- auxiliary documents ---------------------------------------------------------

def realization_from_dict(doc: Any, where: str = "realization") -> AbelianRealization:
    _expect(isinstance(doc, dict), "expected an object", where)
    ranks = doc.get("ranks")
    _expect(isinstance(ranks, dict), "expected {class: rank}", f"{where}.ranks")
    ranks = {k: _int(v, f"{where}.ranks.{k}") for k, v in ranks.items()}
    mats = doc.get("matrices", {})
    _expect(isinstance(mats, dict), "expected {\"src->dst\": rows}", f"{where}.matrices")
    mats = {k: _matrix(v, f"{where}.matrices.{k}") for k, v in mats.items()}
    default = doc.get("default")
    _expect(default in (None, "constant"), "default must be \"constant\" if present", f"{where}.default")
    try:
        return realization_from_mapping(ranks, mats, default)
    except ValueError as e:
        raise DocumentError(str(e), where) from None


def realization_to_dict(r: AbelianRealization) -> dict:
    doc: dict[str, Any] = {
        "ranks": dict(sorted(r.ranks.items())),
        "matrices": {f"{x}->{y}": [list(row) for row in m] for (x, y), m in sorted(r.matrices.items())},
    }
    if r.default:
        doc["default"] = r.default
    return doc


def profile_from_dict(doc: Any, where: str = "profile") -> IntersectionProfile:
    _expect(isinstance(doc, dict), "expected an object", where)
    center = _str(doc.get("center"), f"{where}.center")
    mode = doc.get("mode", "proper")
    _expect(mode in ("proper", "stratum", "none"), "mode must be proper, stratum or none", f"{where}.mode")
    counts = doc.get("counts", {})
    _expect(isinstance(counts, dict), "expected {stratum: count}", f"{where}.counts")
    counts = {k: _int(v, f"{where}.counts.{k}") for k, v in counts.items()}
    return IntersectionProfile(center, mode, counts, _str(doc.get("label", "Z"), f"{where}.label"))


def quotient_from_dict(doc: Any, where: str = "quotient") -> LabelQuotient:
    """``{"merge": [[a, b], ...], "into": {rep: [labels]}}``."""
    _expect(isinstance(doc, dict), "expected an object", where)
    q = LabelQuotient()
    for i, group in enumerate(doc.get("merge", [])):
        _expect(isinstance(group, list), "expected a list of labels", f"{where}.merge[{i}]")
        q.merge(*[_str(x, f"{where}.merge[{i}][{j}]") for j, x in enumerate(group)])
    into = doc.get("into", {})
    _expect(isinstance(into, dict), "expected {representative: [labels]}", f"{where}.into")
    for rep, group in into.items():
        _expect(isinstance(group, list), "expected a list of labels", f"{where}.into.{rep}")
        try:
            q.merge(*[_str(x, f"{where}.into.{rep}[{j}]") for j, x in enumerate(group)], into=rep)
        except ValueError as e:
            raise DocumentError(str(e), f"{where}.into.{rep}") from None
    return q

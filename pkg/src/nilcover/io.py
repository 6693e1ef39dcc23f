"""Reading and writing surfaces and curve triples in the structured-text schema.

Schema::

    {"vertices":  [{"id": 0, "rotation": [d, ...]}, ...],
     "edges":     [{"id": 0, "darts": [d1, d2]}, ...],
     "faces":     [{"walk": [d, ...], "genus": 0, "boundary": false}, ...],
     "curves":    {"alpha": [...], "beta": [...], "tau": [...]},
     "basepoints": {"v": 0, "w": 0}}

Dart labels are arbitrary integers; they are renumbered so that edge ``i``
(in id order) owns darts ``2i`` and ``2i + 1``.  Errors name the offending
field with a JSON path such as ``$.faces[3].walk``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .surface import CurveArcTriple, Surface, SurfaceError, insert_handles, make_triple


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class InputBundle:
    name: str
    surface: Surface
    triple: Optional[CurveArcTriple]
    notes: List[str] = field(default_factory=list)


def _need(d: Any, key: str, path: str, kind=None):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    if key not in d:
        raise SchemaError(path, f"missing field {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{path}.{key}", f"expected {kind.__name__}")
    return v


def _int_list(v: Any, path: str) -> List[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError(path, "expected a list of integers")
    return list(v)


def _cyclic_key(walk: List[int]) -> Tuple[int, ...]:
    if not walk:
        return ()
    k = walk.index(min(walk))
    return tuple(walk[k:] + walk[:k])


def surface_from_dict(d: Dict[str, Any], path: str = "$") -> Tuple[Surface, Dict[int, int], List[int], List[str]]:
    """Build a surface; returns it with the dart relabeling and vertex ids."""
    verts = _need(d, "vertices", path, list)
    edges = _need(d, "edges", path, list)
    faces = _need(d, "faces", path, list)
    notes: List[str] = []

    # edges and dart relabeling
    dmap: Dict[int, int] = {}
    seen_ids = set()
    order = []
    for i, e in enumerate(edges):
        p = f"{path}.edges[{i}]"
        eid = _need(e, "id", p, int)
        if eid in seen_ids:
            raise SchemaError(f"{p}.id", f"duplicate edge id {eid}")
        seen_ids.add(eid)
        darts = _int_list(_need(e, "darts", p), f"{p}.darts")
        if len(darts) != 2 or darts[0] == darts[1]:
            raise SchemaError(f"{p}.darts", "an edge has exactly two distinct darts")
        order.append((eid, darts, p))
    order.sort(key=lambda x: x[0])
    for k, (_, darts, p) in enumerate(order):
        for j, x in enumerate(darts):
            if x in dmap:
                raise SchemaError(f"{p}.darts[{j}]", f"dart {x} belongs to two edges")
            dmap[x] = 2 * k + j

    label = {v: k for k, v in dmap.items()}

    # vertices
    vids = []
    rot_by_id: Dict[int, List[int]] = {}
    used: Dict[int, str] = {}
    for i, v in enumerate(verts):
        p = f"{path}.vertices[{i}]"
        vid = _need(v, "id", p, int)
        if vid in rot_by_id:
            raise SchemaError(f"{p}.id", f"duplicate vertex id {vid}")
        rot = _int_list(_need(v, "rotation", p), f"{p}.rotation")
        if not rot:
            raise SchemaError(f"{p}.rotation", "a vertex needs at least one dart")
        for j, x in enumerate(rot):
            q = f"{p}.rotation[{j}]"
            if x not in dmap:
                raise SchemaError(q, f"dart {x} is not on any edge")
            if x in used:
                raise SchemaError(q, f"dart {x} already leaves {used[x]}")
            used[x] = p
        vids.append(vid)
        rot_by_id[vid] = [dmap[x] for x in rot]
    missing = sorted(set(dmap) - set(used))
    if missing:
        raise SchemaError(f"{path}.vertices", f"dart {missing[0]} leaves no vertex")
    vids.sort()
    rotations = [rot_by_id[v] for v in vids]

    # faces: parse, check the gluing, compare with the trace of the rotation
    parsed = []
    corner_of: Dict[int, str] = {}
    for i, f in enumerate(faces):
        p = f"{path}.faces[{i}]"
        walk = _int_list(_need(f, "walk", p), f"{p}.walk")
        genus = f.get("genus", 0) if isinstance(f, dict) else 0
        bd = f.get("boundary", False) if isinstance(f, dict) else False
        if not isinstance(genus, int) or isinstance(genus, bool) or genus < 0:
            raise SchemaError(f"{p}.genus", "expected a non-negative integer")
        if not isinstance(bd, bool):
            raise SchemaError(f"{p}.boundary", "expected true or false")
        if not walk:
            raise SchemaError(f"{p}.walk", "a face walk cannot be empty")
        for j, x in enumerate(walk):
            q = f"{p}.walk[{j}]"
            if x not in dmap:
                raise SchemaError(q, f"dart {x} is not on any edge")
            if x in corner_of:
                partner = label[dmap[x] ^ 1]
                if partner not in corner_of and partner not in walk:
                    raise SchemaError(q, f"non-orientable gluing: edge of dart {x} is traversed twice in the same direction")
                raise SchemaError(q, f"non-surface gluing: dart {x} already bounds {corner_of[x]}")
            corner_of[x] = p
        parsed.append(([dmap[x] for x in walk], genus, bd, p))
    missing = sorted(set(dmap) - set(corner_of))
    if missing:
        raise SchemaError(f"{path}.faces", f"dart {missing[0]} bounds no face")

    try:
        s = Surface(rotations, [d for w, _, bd, _ in parsed if bd for d in w])
    except SurfaceError as exc:
        if "partially" in str(exc):
            raise SchemaError(f"{path}.faces", "a boundary walk is not a face of the rotation system") from None
        raise SchemaError(path, str(exc)) from None
    traced = {_cyclic_key(list(w)): f for f, w in enumerate(s.faces)}
    for walk, genus, bd, p in parsed:
        if _cyclic_key(walk) in traced:
            continue
        rev = [x ^ 1 for x in reversed(walk)]
        if _cyclic_key(rev) in traced:
            raise SchemaError(f"{p}.walk", "non-orientable gluing: face runs against the orientation of the rotation")
        raise SchemaError(f"{p}.walk", "face walk does not match the rotation system")
    if len(parsed) != len(s.faces):
        raise SchemaError(f"{path}.faces", f"{len(parsed)} faces listed but the rotation traces {len(s.faces)}")

    # faces carrying genus become disc faces with handles attached
    for walk, genus, bd, p in parsed:
        if genus and bd:
            raise SchemaError(f"{p}.genus", "a boundary face cannot carry genus")
        if genus:
            s = insert_handles(s, walk[0], genus)
            notes.append(f"{p}: attached {genus} handle(s)")
    return s, dmap, vids, notes


def triple_from_dict(d: Dict[str, Any], path: str = "$") -> CurveArcTriple:
    b = bundle_from_dict(d, "input", path)
    if b.triple is None:
        raise SchemaError(path, "missing field 'curves'")
    return b.triple


def bundle_from_dict(d: Dict[str, Any], name: str = "input", path: str = "$") -> InputBundle:
    s, dmap, vids, notes = surface_from_dict(d, path)
    if not isinstance(d, dict) or "curves" not in d:
        return InputBundle(name, s, None, notes)
    curves = _need(d, "curves", path, dict)
    walks = {}
    for key in ("alpha", "beta", "tau"):
        p = f"{path}.curves.{key}"
        if key not in curves and key != "tau":
            raise SchemaError(f"{path}.curves", f"missing field {key!r}")
        raw = _int_list(curves.get(key, []), p)
        for j, x in enumerate(raw):
            if x not in dmap:
                raise SchemaError(f"{p}[{j}]", f"dart {x} is not on any edge")
        walks[key] = [dmap[x] for x in raw]
    bp = d.get("basepoints", {})
    if not isinstance(bp, dict):
        raise SchemaError(f"{path}.basepoints", "expected an object")
    vidx = {v: i for i, v in enumerate(vids)}
    pts = {}
    for key in ("v", "w"):
        if key in bp:
            if bp[key] not in vidx:
                raise SchemaError(f"{path}.basepoints.{key}", f"unknown vertex {bp[key]}")
            pts[key] = vidx[bp[key]]
    try:
        t = make_triple(s, walks["alpha"], walks["beta"], walks["tau"], pts.get("v"), pts.get("w"))
    except (SurfaceError, ValueError) as exc:
        raise SchemaError(f"{path}.curves", str(exc)) from None
    return InputBundle(name, s, t, notes)


def load_json(path: Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load_bundle(path: Path) -> InputBundle:
    data = load_json(path)
    name = data.get("name", Path(path).stem) if isinstance(data, dict) else Path(path).stem
    return bundle_from_dict(data, name)


def dump_triple(t: CurveArcTriple, name: Optional[str] = None) -> str:
    d = t.to_dict()
    if name:
        d["name"] = name
    return json.dumps(d, sort_keys=True, indent=1)

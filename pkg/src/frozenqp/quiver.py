"""Quivers, frozen vertex data, subquivers, DOT and JSON serialization."""

import json
from dataclasses import dataclass, field


class QuiverError(Exception):
    pass


class DanglingArrow(QuiverError):
    pass


class DuplicateArrowId(QuiverError):
    pass


class UnknownVertex(QuiverError):
    pass


class UnknownArrow(QuiverError):
    pass


class SchemaViolation(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: int
    src: int
    tgt: int
    name: str = None


class Quiver:
    """Finite directed multigraph.  Immutable after construction.

    Vertices are opaque integers.  Parallel arrows and loops are allowed;
    constructions that forbid them check locally.  Arrow names are optional
    and used only for display and potential entry.
    """

    def __init__(self, vertices, arrows):
        self.vertices = tuple(sorted(set(vertices)))
        self._vset = frozenset(self.vertices)
        arr = {}
        for a in arrows:
            if a.id in arr:
                raise DuplicateArrowId("duplicate arrow id %r" % (a.id,))
            if a.src not in self._vset or a.tgt not in self._vset:
                raise DanglingArrow("arrow %r has endpoint outside the vertex set" % (a.id,))
            arr[a.id] = a
        self.arrows = dict(sorted(arr.items()))
        self._by_name = {a.name: a for a in self.arrows.values() if a.name is not None}

    def has_vertex(self, v):
        return v in self._vset

    def arrow(self, aid) -> Arrow:
        try:
            return self.arrows[aid]
        except KeyError:
            raise UnknownArrow("no arrow with id %r" % (aid,))

    def arrow_by_name(self, name) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownArrow("no arrow named %r" % (name,))

    def src(self, aid):
        return self.arrow(aid).src

    def tgt(self, aid):
        return self.arrow(aid).tgt

    def arrow_ids(self):
        return list(self.arrows)

    def arrows_from(self, v):
        return [a for a in self.arrows.values() if a.src == v]

    def arrows_to(self, v):
        return [a for a in self.arrows.values() if a.tgt == v]

    def opposite(self):
        """Same vertices and arrow ids, every arrow reversed."""
        return Quiver(self.vertices, [Arrow(a.id, a.tgt, a.src, a.name) for a in self.arrows.values()])

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __repr__(self):
        return "Quiver(%d vertices, %d arrows)" % (len(self.vertices), len(self.arrows))


@dataclass(frozen=True)
class FrozenData:
    """Frozen vertices F0 and the induced frozen arrows F1.

    F1 is always recomputed from F0: exactly the arrows with both endpoints
    frozen.
    """

    frozen_vertices: frozenset
    frozen_arrows: frozenset


def build_quiver(vertex_ids, arrow_specs) -> Quiver:
    """Validated quiver from vertex ids and (id, src, tgt[, name]) specs."""
    arrows = []
    for spec in arrow_specs:
        if isinstance(spec, Arrow):
            arrows.append(spec)
        else:
            aid, src, tgt = spec[0], spec[1], spec[2]
            name = spec[3] if len(spec) > 3 else None
            arrows.append(Arrow(aid, src, tgt, name))
    return Quiver(vertex_ids, arrows)


def freeze(quiver: Quiver, f0) -> FrozenData:
    f0 = frozenset(f0)
    for v in f0:
        if not quiver.has_vertex(v):
            raise UnknownVertex("frozen vertex %r not in quiver" % (v,))
    f1 = frozenset(a.id for a in quiver.arrows.values() if a.src in f0 and a.tgt in f0)
    return FrozenData(f0, f1)


def full_subquiver(quiver: Quiver, delete) -> Quiver:
    """Full subquiver on the surviving vertices: drop `delete` and every
    arrow touching it."""
    delete = frozenset(delete)
    for v in delete:
        if not quiver.has_vertex(v):
            raise UnknownVertex("vertex %r not in quiver" % (v,))
    keep = [v for v in quiver.vertices if v not in delete]
    arrows = [a for a in quiver.arrows.values() if a.src not in delete and a.tgt not in delete]
    return Quiver(keep, arrows)


def _arrow_label(a, degrees):
    name = a.name if a.name is not None else "a%d" % a.id
    if degrees is not None:
        return "%s|%d" % (name, degrees[a.id])
    return name


def to_dot(quiver: Quiver, frozen: FrozenData = None, degrees=None) -> str:
    """Deterministic DOT text; frozen vertices boxed, edge labels name|deg."""
    if degrees is not None:
        for aid in quiver.arrows:
            if aid not in degrees:
                raise UnknownArrow("degree map misses arrow %r" % (aid,))
    f0 = frozen.frozen_vertices if frozen is not None else frozenset()
    lines = ["digraph quiver {"]
    for v in quiver.vertices:
        shape = "box" if v in f0 else "circle"
        lines.append('  v%s [label="%s", shape=%s];' % (v, v, shape))
    for aid in sorted(quiver.arrows):
        a = quiver.arrows[aid]
        lines.append('  v%s -> v%s [label="%s"];' % (a.src, a.tgt, _arrow_label(a, degrees)))
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON wire format
#
# quiver = {"vertices":[int], "arrows":[{"id":int,"name":str?,"src":int,
#           "tgt":int,"deg":0|1?}]}
# frozen = {"frozen_vertices":[int]}


def quiver_to_json(quiver: Quiver, degrees=None) -> dict:
    arrows = []
    for aid in sorted(quiver.arrows):
        a = quiver.arrows[aid]
        d = {"id": a.id, "src": a.src, "tgt": a.tgt}
        if a.name is not None:
            d["name"] = a.name
        if degrees is not None:
            d["deg"] = int(degrees[aid])
        arrows.append(d)
    return {"vertices": list(quiver.vertices), "arrows": arrows}


def quiver_from_json(data) -> Quiver:
    if not isinstance(data, dict) or "vertices" not in data or "arrows" not in data:
        raise SchemaViolation("quiver JSON needs 'vertices' and 'arrows'")
    if not isinstance(data["vertices"], list) or not all(isinstance(v, int) for v in data["vertices"]):
        raise SchemaViolation("'vertices' must be a list of ints")
    arrows = []
    for d in data["arrows"]:
        if not isinstance(d, dict):
            raise SchemaViolation("arrow entries must be objects")
        try:
            aid, src, tgt = d["id"], d["src"], d["tgt"]
        except KeyError as e:
            raise SchemaViolation("arrow entry missing field %s" % e)
        if not all(isinstance(x, int) for x in (aid, src, tgt)):
            raise SchemaViolation("arrow id/src/tgt must be ints")
        deg = d.get("deg")
        if deg is not None and deg not in (0, 1):
            raise SchemaViolation("arrow deg must be 0 or 1")
        arrows.append(Arrow(aid, src, tgt, d.get("name")))
    try:
        return Quiver(data["vertices"], arrows)
    except QuiverError as e:
        raise SchemaViolation(str(e))


def quiver_degrees_from_json(data):
    """The optional per-arrow 'deg' fields as a map, or None when absent."""
    degs = {d["id"]: d["deg"] for d in data.get("arrows", []) if isinstance(d, dict) and "deg" in d}
    return degs or None


def frozen_to_json(frozen: FrozenData) -> dict:
    return {"frozen_vertices": sorted(frozen.frozen_vertices)}


def frozen_from_json(data, quiver: Quiver) -> FrozenData:
    if not isinstance(data, dict) or "frozen_vertices" not in data:
        raise SchemaViolation("frozen JSON needs 'frozen_vertices'")
    return freeze(quiver, data["frozen_vertices"])


def json_roundtrip(value):
    """parse(serialize(x)) for quivers; identity by construction, returned
    so tests can compare."""
    if isinstance(value, Quiver):
        return quiver_from_json(json.loads(json.dumps(quiver_to_json(value))))
    raise TypeError("json_roundtrip expects a Quiver here; QP round trips live in potential_qp")

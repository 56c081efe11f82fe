"""Strong admissible partitions of Coxeter graphs and the folded Coxeter matrix."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructureError
from .realisation import INF, CoxeterMatrix
from .reflection_geometry import RealRealisation, coxeter_number


@dataclass(frozen=True)
class Partition:
    """Surjection from graph vertices onto an ordered label set."""

    assignment: tuple   # label index per vertex
    labels: tuple       # ordered label names

    def __post_init__(self):
        k = len(self.labels)
        if any(not 0 <= a < k for a in self.assignment):
            raise StructureError("partition assigns an unknown label")
        hit = set(self.assignment)
        empty = [self.labels[i] for i in range(k) if i not in hit]
        if empty:
            raise StructureError(f"empty fiber for label(s) {', '.join(map(str, empty))}")

    @classmethod
    def from_mapping(cls, graph: CoxeterMatrix, mapping: dict, order=None) -> "Partition":
        """``mapping`` sends vertex names (or indices) to label names."""
        by_name = {}
        for key, label in mapping.items():
            idx = key if isinstance(key, int) else _vertex_index(graph, key)
            by_name[idx] = str(label)
        missing = [graph.names[v] for v in range(graph.rank) if v not in by_name]
        if missing:
            raise StructureError(f"unlabelled vertices: {', '.join(missing)}")
        if order is None:
            # labels ordered by first appearance in vertex order
            order = []
            for v in range(graph.rank):
                if by_name[v] not in order:
                    order.append(by_name[v])
        order = [str(x) for x in order]
        pos = {name: i for i, name in enumerate(order)}
        unknown = sorted(set(by_name.values()) - set(pos))
        if unknown:
            raise StructureError(f"labels not in order: {unknown}")
        return cls(tuple(pos[by_name[v]] for v in range(graph.rank)), tuple(order))

    def fiber(self, label: int):
        return [v for v, a in enumerate(self.assignment) if a == label]

    def relabel(self, perm) -> "Partition":
        """Rename label ``i`` to position ``perm[i]``."""
        labels = [None] * len(self.labels)
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        return Partition(tuple(perm[a] for a in self.assignment), tuple(labels))


def _vertex_index(graph: CoxeterMatrix, name: str) -> int:
    try:
        return graph.names.index(name)
    except ValueError:
        raise StructureError(f"unknown vertex {name!r}") from None


@dataclass
class FoldResult:
    ok: bool
    folded: CoxeterMatrix | None
    failure: dict | None
    pairs: list

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "folded": None if self.folded is None else _rows(self.folded),
            "failure": self.failure,
            "pairs": self.pairs,
        }


def _rows(cm: CoxeterMatrix):
    return [[0 if x == INF else int(x) for x in row] for row in cm.entries]


def _components(graph: CoxeterMatrix, verts):
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if graph.label(a, b) != 2:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    comps = {}
    for v in verts:
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def check_strong_admissible(graph: CoxeterMatrix, part: Partition) -> FoldResult:
    if len(part.assignment) != graph.rank:
        raise StructureError("partition size differs from the number of vertices")
    names = graph.names
    k = len(part.labels)
    fibers = [part.fiber(a) for a in range(k)]

    for a, fib in enumerate(fibers):
        for i, u in enumerate(fib):
            for v in fib[i + 1:]:
                if graph.label(u, v) != 2:
                    failure = {"condition": "fiber-independent", "label": part.labels[a],
                               "vertices": [names[u], names[v]]}
                    return FoldResult(False, None, failure, [])

    rr = RealRealisation.from_coxeter(graph)
    folded = [[1] * k for _ in range(k)]
    pairs = []
    for a in range(k):
        for b in range(a + 1, k):
            verts = sorted(fibers[a] + fibers[b])
            comps = _components(graph, verts)
            numbers = [coxeter_number(rr, c) for c in comps]
            entry = {"pair": [part.labels[a], part.labels[b]],
                     "components": [[names[v] for v in c] for c in comps],
                     "coxeter_numbers": [0 if h == INF else h for h in numbers]}
            pairs.append(entry)
            if len(set(numbers)) != 1:
                failure = {"condition": "common-coxeter-number", **entry}
                return FoldResult(False, None, failure, pairs)
            folded[a][b] = folded[b][a] = numbers[0]
    cm = CoxeterMatrix(tuple(tuple(r) for r in folded), tuple(part.labels))
    return FoldResult(True, cm, None, pairs)


def canonical_partition(u) -> Partition:
    """``(b, s) -> s`` on an unfolded system."""
    return Partition(tuple(s for _, s in u.vertices), tuple(u.source.coxeter.names))


def verify_unfolding_is_strong_admissible(u, categorifiable=None) -> dict:
    """Fold the unfolded graph along its fibers and compare with the source.

    ``categorifiable`` only tags the report: ``False`` marks the instance as
    conjectural evidence rather than a theorem instance.
    """
    res = check_strong_admissible(u.graph, canonical_partition(u))
    source = u.source.coxeter
    matches = res.ok and res.folded.entries == source.entries
    scope = {True: "theorem", False: "conjecture-instance", None: "unspecified"}[categorifiable]
    out = res.to_dict()
    out.update({"ok": bool(matches), "matches_source": bool(matches),
                "source": _rows(source), "scope": scope})
    return out

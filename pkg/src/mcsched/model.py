"""Core domain types for mixed-criticality periodic DAG systems.

Times are non-negative integers (discrete slots). All values are frozen
after construction and safe to share between threads.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

MAX_TIME = 2**63 - 1


class Criticality(Enum):
    LO = "LO"
    HI = "HI"


@dataclass(frozen=True)
class Vertex:
    """A task vertex with per-mode budgets.

    Low-criticality vertices carry a single budget (c_hi is 0: they do not
    run in the degraded mode); high-criticality vertices need c_hi >= c_lo.
    """

    id: int
    name: str
    criticality: Criticality
    c_lo: int
    c_hi: int = 0


@dataclass(frozen=True)
class MCDag:
    """A periodic DAG of vertices with implicit deadline (= period)."""

    id: int
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int], ...]
    period: int
    deadline: Optional[int] = None

    def __post_init__(self) -> None:
        if self.deadline is None:
            object.__setattr__(self, "deadline", self.period)
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "edges", tuple((int(a), int(b)) for a, b in self.edges)
        )

    def vertex(self, vid: int) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(f"dag {self.id} has no vertex {vid}")

    @property
    def vertex_map(self) -> dict[int, Vertex]:
        return {v.id: v for v in self.vertices}


@dataclass(frozen=True)
class MCSystem:
    """An ordered set of MC-DAGs plus the core count; the schedulable unit."""

    dags: tuple[MCDag, ...]
    cores: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "dags", tuple(self.dags))

    def dag(self, did: int) -> MCDag:
        for d in self.dags:
            if d.id == did:
                return d
        raise KeyError(f"no dag {did}")


@dataclass(frozen=True)
class PeriodicTask:
    """Periodic task triple: period T, capacity C, deadline D (0 < C <= D <= T)."""

    id: int
    period: int
    capacity: int
    deadline: int

    def __post_init__(self) -> None:
        if not (0 < self.capacity <= self.deadline <= self.period):
            raise ValueError(
                f"task {self.id}: need 0 < C <= D <= T, "
                f"got C={self.capacity} D={self.deadline} T={self.period}"
            )


def _cycle_exists(vertex_ids: Iterable[int], edges: Iterable[tuple[int, int]]) -> bool:
    # Kahn peeling; anything left after removing all sources sits on a cycle.
    ids = set(vertex_ids)
    indeg = {v: 0 for v in ids}
    out: dict[int, list[int]] = {v: [] for v in ids}
    for a, b in edges:
        if a in ids and b in ids and a != b:
            indeg[b] += 1
            out[a].append(b)
    queue = [v for v in ids if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen != len(ids)


def validate(system: MCSystem) -> list[str]:
    """Return every invariant violation in the system; empty list iff well-formed."""
    bad: list[str] = []
    if not system.dags:
        bad.append("system: must contain at least one dag")
    if system.cores < 1:
        bad.append(f"system: cores must be >= 1, got {system.cores}")

    seen_dags: set[int] = set()
    for dag in system.dags:
        tag = f"dag {dag.id}"
        if dag.id in seen_dags:
            bad.append(f"{tag}: duplicate dag id")
        seen_dags.add(dag.id)
        if dag.period <= 0:
            bad.append(f"{tag}: period must be positive, got {dag.period}")
        if dag.deadline != dag.period:
            bad.append(
                f"{tag}: deadline {dag.deadline} != period {dag.period}"
                " (implicit deadlines)"
            )

        ids: set[int] = set()
        for v in dag.vertices:
            vtag = f"{tag} vertex {v.id}"
            if v.id < 0:
                bad.append(f"{vtag}: id must be non-negative")
            if v.id in ids:
                bad.append(f"{vtag}: duplicate vertex id")
            ids.add(v.id)
            if v.c_lo < 1:
                bad.append(f"{vtag}: c_lo must be >= 1, got {v.c_lo}")
            if v.criticality is Criticality.HI:
                if v.c_hi < v.c_lo:
                    bad.append(f"{vtag}: HI vertex needs c_hi >= c_lo "
                               f"({v.c_hi} < {v.c_lo})")
            elif v.c_hi != 0:
                bad.append(f"{vtag}: LO vertex must have c_hi = 0, got {v.c_hi}")

        seen_edges: set[tuple[int, int]] = set()
        for a, b in dag.edges:
            etag = f"{tag} edge ({a}->{b})"
            if a == b:
                bad.append(f"{etag}: self-edge")
                continue
            if a not in ids or b not in ids:
                bad.append(f"{etag}: endpoint names a missing vertex")
                continue
            if (a, b) in seen_edges:
                bad.append(f"{etag}: duplicate edge")
            seen_edges.add((a, b))
        if ids and _cycle_exists(ids, seen_edges):
            bad.append(f"{tag}: precedence relation contains a cycle")
    return bad


def hyperperiod(system: MCSystem) -> int:
    """Least common multiple of the dag periods."""
    h = 1
    for dag in system.dags:
        h = math.lcm(h, dag.period)
        if h > MAX_TIME:
            raise OverflowError(
                f"hyperperiod exceeds {MAX_TIME} (periods "
                f"{[d.period for d in system.dags]})"
            )
    return h


def utilization(system: MCSystem, mode: Criticality) -> Fraction:
    """Total utilization in the given mode.

    LO mode sums c_lo/T over every vertex; HI mode sums c_hi/T over
    high-criticality vertices only.
    """
    total = Fraction(0)
    for dag in system.dags:
        for v in dag.vertices:
            if mode is Criticality.LO:
                total += Fraction(v.c_lo, dag.period)
            elif v.criticality is Criticality.HI:
                total += Fraction(v.c_hi, dag.period)
    return total


def has_lo_to_hi_edges(system: MCSystem) -> bool:
    """True if some LO vertex precedes a HI vertex (edge dropped in HI mode)."""
    for dag in system.dags:
        vm = dag.vertex_map
        for a, b in dag.edges:
            if a in vm and b in vm:
                if (vm[a].criticality is Criticality.LO
                        and vm[b].criticality is Criticality.HI):
                    return True
    return False


# -- JSON system document ----------------------------------------------------

def system_to_doc(system: MCSystem) -> dict:
    return {
        "cores": system.cores,
        "dags": [
            {
                "id": dag.id,
                "period": dag.period,
                "vertices": [
                    {
                        "id": v.id,
                        "name": v.name,
                        "crit": v.criticality.value,
                        "c_lo": v.c_lo,
                        "c_hi": v.c_hi,
                    }
                    for v in dag.vertices
                ],
                "edges": [[a, b] for a, b in dag.edges],
            }
            for dag in system.dags
        ],
    }


def system_from_doc(doc: dict) -> MCSystem:
    try:
        dags = []
        for d in doc["dags"]:
            vertices = tuple(
                Vertex(
                    id=int(v["id"]),
                    name=str(v.get("name", f"v{v['id']}")),
                    criticality=Criticality(v["crit"]),
                    c_lo=int(v["c_lo"]),
                    c_hi=int(v.get("c_hi", 0)),
                )
                for v in d["vertices"]
            )
            edges = tuple((int(a), int(b)) for a, b in d.get("edges", []))
            dags.append(
                MCDag(id=int(d["id"]), vertices=vertices, edges=edges,
                      period=int(d["period"]))
            )
        return MCSystem(dags=tuple(dags), cores=int(doc["cores"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed system document: {exc}") from exc


def dumps_system(system: MCSystem) -> str:
    """Canonical JSON text; identical systems serialize byte-identically."""
    return json.dumps(system_to_doc(system), indent=2, sort_keys=True) + "\n"


def loads_system(text: str) -> MCSystem:
    return system_from_doc(json.loads(text))


def to_dot(system: MCSystem) -> str:
    """DOT text, one digraph per dag; HI vertices carry crit=HI."""
    blocks = []
    for dag in system.dags:
        lines = [f"digraph dag{dag.id} {{"]
        for v in dag.vertices:
            attrs = [f'label="{v.name}"']
            if v.criticality is Criticality.HI:
                attrs.append("crit=HI")
            lines.append(f"  v{v.id} [{', '.join(attrs)}];")
        for a, b in dag.edges:
            lines.append(f"  v{a} -> v{b};")
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n".join(blocks) + "\n"

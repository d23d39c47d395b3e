"""Census records and pipeline configuration."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..errors import DomainError, IntegrityError
from ..graphs import Graph, is_grr, is_vertex_transitive, s_arc_transitivity
from ..presentations import DEFAULT_COSET_CAP

S_CHECK = 6  # one past Tutte's bound for cubic graphs


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs shared by the pipelines.

    ``m`` fixes the target order 2^m; with ``m=None`` every codimension in
    ``s_window`` (default: all) is tried.  ``k_values`` and ``order_cap`` only
    matter for the five-arc search.
    """

    d: int = 3
    c: int = 3
    m: int | None = None
    s_window: tuple[int, int] | None = None
    coset_cap: int = DEFAULT_COSET_CAP
    workers: int = 1
    output: str | None = None
    k_values: tuple[int, ...] = (0,)
    order_cap: int = 480
    h_index: int | None = None

    def __post_init__(self):
        if self.d < 3:
            raise DomainError("pipelines need d >= 3")
        if self.c < 1:
            raise DomainError("class c must be positive")
        if self.coset_cap <= 0 or self.workers <= 0 or self.order_cap <= 0:
            raise DomainError("caps and worker count must be positive")
        if self.s_window is not None and not 0 <= self.s_window[0] <= self.s_window[1]:
            raise DomainError("s_window must be an increasing pair of non-negative integers")
        if any(k < 0 for k in self.k_values):
            raise DomainError("k values must be non-negative")


@dataclass(frozen=True)
class CensusRecord:
    certificate: bytes
    order: int
    valency: int
    vertex_transitive: bool
    grr: bool
    max_s: int
    aut_order: int
    provenance: dict = field(default_factory=dict, compare=False)
    graph6: str = ""

    def __post_init__(self):
        if self.vertex_transitive and self.aut_order % self.order:
            raise IntegrityError("aut_order must be divisible by the order of a vertex-transitive graph")

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.certificate).hexdigest()

    @property
    def graph(self) -> Graph:
        return Graph.from_graph6(self.graph6)

    @classmethod
    def from_graph(cls, g: Graph, provenance: dict) -> CensusRecord:
        """Derive every flag from scratch."""
        aut = g.automorphism_group()
        vt = is_vertex_transitive(g)
        max_s = s_arc_transitivity(g, S_CHECK).max_s if g.is_connected() and vt else -1
        return cls(
            certificate=g.certificate(),
            order=g.n,
            valency=g.valency if g.valency is not None else -1,
            vertex_transitive=vt,
            grr=is_grr(g),
            max_s=max_s,
            aut_order=aut.order(),
            provenance=dict(provenance),
            graph6=g.to_graph6(),
        )

    def to_json(self) -> dict:
        return {
            "certificate": self.certificate.hex(),
            "order": self.order,
            "valency": self.valency,
            "vertex_transitive": self.vertex_transitive,
            "grr": self.grr,
            "max_s": self.max_s,
            "aut_order": self.aut_order,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict, graph6: str) -> CensusRecord:
        return cls(
            certificate=bytes.fromhex(data["certificate"]),
            order=int(data["order"]),
            valency=int(data["valency"]),
            vertex_transitive=bool(data["vertex_transitive"]),
            grr=bool(data["grr"]),
            max_s=int(data["max_s"]),
            aut_order=int(data["aut_order"]),
            provenance=data.get("provenance", {}),
            graph6=graph6,
        )

    def flags(self) -> tuple:
        return (self.order, self.valency, self.vertex_transitive, self.grr, self.max_s, self.aut_order)


def dedup_records(records) -> list[CensusRecord]:
    """Keep the first record per certificate, then sort by certificate."""
    seen: dict[bytes, CensusRecord] = {}
    for rec in records:
        seen.setdefault(rec.certificate, rec)
    return [seen[c] for c in sorted(seen)]

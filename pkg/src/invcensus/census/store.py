"""On-disk census store, JSON report and external census cross-check.

Layout of a store directory::

    index.txt               one sha256 certificate digest per line, sorted
    records/<digest>.g6     the graph in graph6
    records/<digest>.json   the record's flags, certificate and provenance

Everything is written with sorted keys and no timestamps, so equal inputs
give byte-identical stores.
"""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

from ..errors import IntegrityError, ParseError, PreconditionError
from ..graphs import Graph, read_graph6_file
from .records import CensusRecord, dedup_records

INDEX = "index.txt"
RECORDS = "records"


class CensusStore:
    def __init__(self, path):
        self.path = Path(path)

    @property
    def index_path(self) -> Path:
        return self.path / INDEX

    def exists(self) -> bool:
        return self.index_path.is_file()

    def init(self) -> CensusStore:
        (self.path / RECORDS).mkdir(parents=True, exist_ok=True)
        if not self.index_path.exists():
            self.index_path.write_text("")
        return self

    def digests(self) -> list[str]:
        if not self.exists():
            raise PreconditionError(f"no census store at {self.path}")
        return [ln.strip() for ln in self.index_path.read_text().splitlines() if ln.strip()]

    def add(self, records) -> int:
        """Append records not already present (by certificate); returns how many were new."""
        self.init()
        have = set(self.digests())
        new = 0
        for rec in dedup_records(records):
            dg = rec.digest
            if dg in have:
                continue
            base = self.path / RECORDS / dg
            base.with_suffix(".g6").write_text(rec.graph6 + "\n")
            base.with_suffix(".json").write_text(json.dumps(rec.to_json(), sort_keys=True, indent=1) + "\n")
            have.add(dg)
            new += 1
        self.index_path.write_text("".join(d + "\n" for d in sorted(have)))
        return new

    def load(self, verify: bool = False) -> list[CensusRecord]:
        """Read every record; ``verify`` re-canonicalises each graph."""
        digests = self.digests()
        if len(set(digests)) != len(digests):
            raise IntegrityError("index lists a certificate twice")
        on_disk = {p.stem for p in (self.path / RECORDS).glob("*.json")}
        stray = on_disk - set(digests)
        if stray:
            raise IntegrityError(f"record {sorted(stray)[0]} is missing from the index")
        out = []
        for dg in digests:
            base = self.path / RECORDS / dg
            try:
                data = json.loads(base.with_suffix(".json").read_text())
                g6 = base.with_suffix(".g6").read_text().strip()
                rec = CensusRecord.from_json(data, g6)
                graph = Graph.from_graph6(g6)
            except (OSError, ValueError, KeyError, ParseError, PreconditionError) as exc:
                raise IntegrityError(f"record {dg}: {exc}") from None
            if rec.digest != dg:
                raise IntegrityError(f"record {dg}: certificate does not match its digest")
            if graph.n != rec.order:
                raise IntegrityError(f"record {dg}: graph order differs from the stored order")
            if verify and graph.certificate() != rec.certificate:
                raise IntegrityError(f"record {dg}: graph does not have the stored certificate")
            out.append(rec)
        return out


def store_records(path, records) -> int:
    return CensusStore(path).add(records)


def _zero_row(order: int, valency: int) -> dict:
    return {"order": order, "valency": valency, "count_vt": 0, "count_cay_found": 0, "count_grr": 0, "count_5at": 0}


def census_report(path) -> dict:
    """Per-(valency, order) tallies plus cumulative counts of orders <= n.

    All counts are of records found by the pipelines: lower bounds, not
    complete enumerations.
    """
    store = CensusStore(path)
    records = store.load(verify=True)
    rows: dict[tuple[int, int], dict] = {}
    for rec in records:
        row = rows.setdefault((rec.valency, rec.order), _zero_row(rec.order, rec.valency))
        row["count_vt"] += rec.vertex_transitive
        row["count_cay_found"] += bool(rec.provenance.get("cayley", False))
        row["count_grr"] += rec.grr
        row["count_5at"] += rec.max_s >= 5
    table = [rows[k] for k in sorted(rows)]
    cumulative = []
    running: dict[int, dict] = defaultdict(lambda: dict.fromkeys(("count_vt", "count_cay_found", "count_grr", "count_5at"), 0))
    for row in table:
        acc = running[row["valency"]]
        for key in acc:
            acc[key] += row[key]
        cumulative.append({"order_at_most": row["order"], "valency": row["valency"], **acc})
    totals = dict.fromkeys(("count_vt", "count_cay_found", "count_grr", "count_5at"), 0)
    for row in table:
        for key in totals:
            totals[key] += row[key]
    by_pipeline: dict[str, int] = defaultdict(int)
    for rec in records:
        by_pipeline[rec.provenance.get("pipeline", "unknown")] += 1
    return {
        "records": len(records),
        "rows": table,
        "cumulative": cumulative,
        "totals": totals,
        "by_pipeline": dict(sorted(by_pipeline.items())),
        "lower_bounds_only": True,
    }


def ingest_census_crosscheck(path, order_cap: int = 48) -> dict:
    """Count graphs of order <= order_cap with |Aut| > n^2 in a graph6 file."""
    graphs = read_graph6_file(path)
    hits = []
    considered = 0
    for i, g in enumerate(graphs):
        if g.n > order_cap:
            continue
        considered += 1
        a = g.automorphism_group().order()
        if a > g.n * g.n:
            hits.append({"index": i, "order": g.n, "aut_order": a})
    return {"ingested": len(graphs), "considered": considered, "order_cap": order_cap, "count": len(hits), "graphs": hits}

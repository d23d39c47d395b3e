import json

import pytest

from invcensus.census import (
    CensusRecord,
    CensusStore,
    PipelineConfig,
    achievable_orders,
    census_report,
    dedup_records,
    five_arc_pipeline,
    g_count,
    generated_by_involutions,
    grr_lower_pipeline,
    ingest_census_crosscheck,
    small_group_catalog,
    store_records,
)
from invcensus.census.catalog import group_from_letters
from invcensus.errors import DomainError, IntegrityError, ParseError, PreconditionError, ResourceError, UnsupportedScaleError
from invcensus.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    is_grr,
    petersen_graph,
    tutte_coxeter_graph,
)
from invcensus.permgroup import are_isomorphic, cyclic_group, set_preserving_automorphisms


# -- catalogue ----------------------------------------------------------------------


def test_catalog_small_orders():
    cat = small_group_catalog(8)
    assert [len(cat.of_order(n)) for n in range(1, 9)] == [1, 1, 1, 2, 1, 2, 1, 5]
    assert not cat.partial
    for n in range(1, 9):
        gs = cat.of_order(n)
        for i, a in enumerate(gs):
            for b in gs[i + 1:]:
                assert not are_isomorphic(a, b)


def test_catalog_families_partial():
    cat = small_group_catalog(16)
    assert cat.partial
    names = {g.name for g in cat.of_order(16)}
    assert len(cat.of_order(16)) == 3 and len(names) == 3
    with pytest.raises(DomainError):
        small_group_catalog(65)


def test_generated_by_involutions():
    d8 = group_from_letters("D8", 2, ("aaaa", "bb", "abab"))
    q8 = group_from_letters("Q8", 2, ("aaaa", "aaBB", "Baba"))
    assert generated_by_involutions(d8, 2)
    assert not generated_by_involutions(q8, 3)
    assert not generated_by_involutions(cyclic_group(4), 3)


def test_g_count():
    assert [g_count(3, m) for m in range(4)] == [0, 0, 1, 2]
    assert g_count(2, 1) == 0  # needs two distinct involutions
    assert g_count(1, 1) == 1
    with pytest.raises(UnsupportedScaleError):
        g_count(3, 4)
    with pytest.raises(DomainError):
        g_count(0, 2)


# -- records -------------------------------------------------------------------------


def test_record_from_graph_and_json():
    rec = CensusRecord.from_graph(petersen_graph(), {"source": "test"})
    assert rec.flags() == (10, 3, True, False, 3, 120)
    back = CensusRecord.from_json(json.loads(json.dumps(rec.to_json())), rec.graph6)
    assert back == rec and back.provenance == {"source": "test"}
    assert rec.graph.certificate() == rec.certificate


def test_record_invariant():
    with pytest.raises(IntegrityError):
        CensusRecord(b"x", order=10, valency=3, vertex_transitive=True, grr=False, max_s=1, aut_order=15)


def test_dedup_records(rng):
    from conftest import random_relabel

    g = petersen_graph()
    a = CensusRecord.from_graph(g, {"i": 1})
    b = CensusRecord.from_graph(random_relabel(g, rng), {"i": 2})
    c = CensusRecord.from_graph(complete_graph(4), {})
    out = dedup_records([a, c, b])
    assert len(out) == 2 and out[[r.order for r in out].index(10)].provenance == {"i": 1}


def test_config_validation():
    with pytest.raises(DomainError):
        PipelineConfig(d=2)
    with pytest.raises(DomainError):
        PipelineConfig(workers=0)
    with pytest.raises(DomainError):
        PipelineConfig(s_window=(3, 1))
    with pytest.raises(DomainError):
        PipelineConfig(k_values=(-1,))


# -- pipelines ---------------------------------------------------------------------


def verify_grr_record(rec, d):
    """Independent re-derivation of every claim made by a GRR pipeline record."""
    g = Graph.from_graph6(rec.graph6)
    assert g.valency == d and g.is_connected()
    assert g.n == rec.order and rec.order & (rec.order - 1) == 0
    assert g.certificate() == rec.certificate
    assert is_grr(g) and rec.grr
    # rebuild the group as the regular action and check Aut(G, S) is trivial
    from invcensus.graphs import permgroup_to_table

    aut = g.automorphism_group()
    table, elems = permgroup_to_table(aut)
    index = {p: i for i, p in enumerate(elems)}
    S = [index[p] for p in aut.elements() if p[0] in g.adj[0]]
    assert set_preserving_automorphisms(table, S).order() == 1


@pytest.mark.parametrize("m,expected", [(7, 2), (8, 17)])
def test_grr_pipeline_records(m, expected):
    stats = {}
    recs = grr_lower_pipeline(PipelineConfig(d=3, c=3, m=m), stats)
    assert len(recs) == expected and stats["records"] == expected
    for rec in recs:
        assert rec.order == 2**m and rec.provenance["m"] == m
        verify_grr_record(rec, 3)


def test_grr_pipeline_no_free_subspaces_at_class_2():
    assert grr_lower_pipeline(PipelineConfig(d=3, c=2)) == []


def test_grr_pipeline_unreachable_order():
    cfg = PipelineConfig(d=3, c=3, m=20)
    assert achievable_orders(cfg) == list(range(6, 12))
    with pytest.raises(DomainError, match="6..11"):
        grr_lower_pipeline(cfg)


def test_grr_pipeline_workers_agree():
    one = grr_lower_pipeline(PipelineConfig(m=8))
    two = grr_lower_pipeline(PipelineConfig(m=8, workers=2))
    assert [r.certificate for r in one] == [r.certificate for r in two]


def test_five_arc_pipeline():
    stats = {}
    recs = five_arc_pipeline(PipelineConfig(k_values=(0, 1, 2), order_cap=480), stats)
    tc = CensusRecord.from_graph(tutte_coxeter_graph(), {})
    assert stats["disconnected"] >= 1 and stats["candidates_k1"] > 1
    assert [r.certificate for r in recs] == [tc.certificate]
    for r in recs:
        assert r.max_s == 5 and r.aut_order == 48 * r.order
        assert r.aut_order // r.order == 48


def test_five_arc_order_cap():
    with pytest.raises(ResourceError):
        five_arc_pipeline(PipelineConfig(k_values=(3,), order_cap=100))


# -- store and reports ---------------------------------------------------------------


def snapshot(path):
    return {p.relative_to(path).as_posix(): p.read_bytes() for p in sorted(path.rglob("*")) if p.is_file()}


def test_store_dedup_idempotent(tmp_path):
    recs = [CensusRecord.from_graph(g, {"pipeline": "test"}) for g in (petersen_graph(), cycle_graph(5))]
    store = CensusStore(tmp_path / "s")
    assert store.add(recs) == 2
    first = snapshot(store.path)
    assert store.add(recs) == 0
    assert store.add(recs[::-1]) == 0
    assert snapshot(store.path) == first
    assert sorted(r.certificate for r in store.load(verify=True)) == sorted(r.certificate for r in recs)


def test_store_deterministic_reruns(tmp_path):
    for name in ("a", "b"):
        cfg = PipelineConfig(m=7, output=str(tmp_path / name))
        grr_lower_pipeline(cfg)
        five_arc_pipeline(PipelineConfig(k_values=(0,), output=str(tmp_path / name)))
    assert snapshot(tmp_path / "a") == snapshot(tmp_path / "b")
    assert len(CensusStore(tmp_path / "a").digests()) == 3


def test_store_integrity(tmp_path):
    store = CensusStore(tmp_path)
    store.add([CensusRecord.from_graph(petersen_graph(), {})])
    dg = store.digests()[0]
    g6 = tmp_path / "records" / f"{dg}.g6"
    g6.write_text(cycle_graph(10).to_graph6() + "\n")
    with pytest.raises(IntegrityError, match=dg):
        store.load(verify=True)
    g6.unlink()
    with pytest.raises(IntegrityError, match=dg):
        store.load()


def test_store_missing(tmp_path):
    with pytest.raises(PreconditionError):
        CensusStore(tmp_path / "nope").digests()


def test_records_rederivable(tmp_path):
    five_arc_pipeline(PipelineConfig(k_values=(0,), output=str(tmp_path)))
    for rec in CensusStore(tmp_path).load(verify=True):
        again = CensusRecord.from_graph(rec.graph, rec.provenance)
        assert again.flags() == rec.flags() and again.certificate == rec.certificate


def test_report_empty_and_tc(tmp_path):
    CensusStore(tmp_path / "empty").init()
    rep = census_report(tmp_path / "empty")
    assert rep["records"] == 0 and rep["rows"] == [] and rep["lower_bounds_only"]
    five_arc_pipeline(PipelineConfig(k_values=(0,), output=str(tmp_path / "tc")))
    rep = census_report(tmp_path / "tc")
    assert rep["rows"] == [
        {"order": 30, "valency": 3, "count_vt": 1, "count_cay_found": 0, "count_grr": 0, "count_5at": 1}
    ]
    assert rep["by_pipeline"] == {"five_arc": 1}


def test_report_cumulative(tmp_path):
    grr_lower_pipeline(PipelineConfig(m=7, output=str(tmp_path)))
    grr_lower_pipeline(PipelineConfig(m=8, output=str(tmp_path)))
    rep = census_report(tmp_path)
    assert [(r["order"], r["count_grr"], r["count_cay_found"]) for r in rep["rows"]] == [(128, 2, 2), (256, 17, 17)]
    assert rep["cumulative"][-1]["count_grr"] == 19 == rep["totals"]["count_grr"]


def test_crosscheck(tmp_path):
    empty = tmp_path / "empty.g6"
    empty.write_text("")
    assert ingest_census_crosscheck(empty)["count"] == 0
    one = tmp_path / "k4.g6"
    one.write_text(complete_graph(4).to_graph6() + "\n" + cycle_graph(7).to_graph6() + "\n")
    out = ingest_census_crosscheck(one)
    assert out["ingested"] == 2 and out["count"] == 1 and out["graphs"][0]["aut_order"] == 24
    small = ingest_census_crosscheck(one, order_cap=3)
    assert small["considered"] == 0 and small["count"] == 0
    bad = tmp_path / "bad.g6"
    bad.write_text("C~\nC~~~\n")
    with pytest.raises(ParseError) as exc:
        ingest_census_crosscheck(bad)
    assert exc.value.line == 2

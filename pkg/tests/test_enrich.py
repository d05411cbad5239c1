from collections import Counter
from itertools import combinations

import pytest

from litsqueeze.enrich import (
    GeneSet,
    benjamini_hochberg,
    default_pathway_sets,
    default_process_sets,
    enrich_genes,
    export_enrichment_csv,
    hypergeom_tail,
    load_gmt,
)
from litsqueeze.errors import ConfigurationError, DomainError


def exact_tail_table(N: int, K: int, n: int) -> dict[int, float]:
    """Enumerate all C(N, n) draws; tail fraction for every k."""
    marked = set(range(K))
    overlap_counts = Counter()
    total = 0
    for draw in combinations(range(N), n):
        total += 1
        overlap_counts[len(marked.intersection(draw))] += 1
    tails = {}
    for k in range(min(K, n) + 1):
        tails[k] = sum(c for o, c in overlap_counts.items() if o >= k) / total
    return tails


# ---------------------------------------------------------------------- gmt


def test_load_gmt_basic(tmp_path):
    path = tmp_path / "sets.gmt"
    path.write_text("S1\tdesc\tA\tB\n", encoding="utf-8")
    result = load_gmt(path)
    assert len(result.sets) == 1
    assert result.sets[0].genes == frozenset({"A", "B"})


def test_load_gmt_rejects_empty_gene_list(tmp_path):
    path = tmp_path / "sets.gmt"
    path.write_text("S1\tdesc\n", encoding="utf-8")
    result = load_gmt(path)
    assert result.sets == []
    assert len(result.rejects) == 1


def test_load_gmt_collapses_duplicate_genes(tmp_path):
    path = tmp_path / "sets.gmt"
    path.write_text("S1\tdesc\tA\ta\tA\n", encoding="utf-8")
    result = load_gmt(path)
    assert result.sets[0].genes == frozenset({"A"})


def test_load_gmt_uppercases_symbols(tmp_path):
    path = tmp_path / "sets.gmt"
    path.write_text("S1\tdesc\ttp53\tbrca1\n", encoding="utf-8")
    assert load_gmt(path).sets[0].genes == frozenset({"TP53", "BRCA1"})


def test_packaged_demo_collections():
    assert len(default_pathway_sets()) >= 3
    assert len(default_process_sets()) >= 3


# -------------------------------------------------------------- hypergeom


def test_tail_from_zero_is_one():
    assert hypergeom_tail(0, 5, 3, 20) == 1.0


def test_tail_fixture_two_of_two():
    # drawing 2 from 10 with 5 marked, both marked: C(5,2)/C(10,2) = 10/45
    assert hypergeom_tail(2, 5, 2, 10) == pytest.approx(10 / 45, rel=1e-12)


def test_tail_all_marked_population():
    assert hypergeom_tail(4, 10, 4, 10) == 1.0


def test_tail_matches_enumeration_small_populations():
    for N in range(1, 13):
        for K in range(N + 1):
            for n in range(N + 1):
                exact = exact_tail_table(N, K, n)
                for k, expected in exact.items():
                    got = hypergeom_tail(k, K, n, N)
                    assert got == pytest.approx(expected, rel=1e-9), (k, K, n, N)


def test_tail_invalid_parameters():
    with pytest.raises(DomainError):
        hypergeom_tail(3, 2, 5, 10)  # k > K
    with pytest.raises(DomainError):
        hypergeom_tail(0, 11, 5, 10)  # K > N
    with pytest.raises(DomainError):
        hypergeom_tail(-1, 2, 2, 10)


# --------------------------------------------------------------------- bh


def test_bh_preserves_order_and_caps_at_one():
    p = [0.01, 0.5, 0.03, 0.9, 0.04]
    q = benjamini_hochberg(p)
    assert all(0 < v <= 1 for v in q)
    order_p = sorted(range(len(p)), key=lambda i: p[i])
    order_q = sorted(range(len(p)), key=lambda i: (q[i], p[i]))
    assert order_p == order_q


def test_bh_known_values():
    # raw p*m/i = (0.04, 0.04, 0.0533, 0.05); running min from the tail
    # pulls rank 3 down to 0.05
    q = benjamini_hochberg([0.01, 0.02, 0.04, 0.05])
    assert q == pytest.approx([0.04, 0.04, 0.05, 0.05])
    q2 = benjamini_hochberg([0.01, 0.5, 0.03, 0.9, 0.04])
    assert q2 == pytest.approx([0.05, 0.625, 0.06666666666666667, 0.9, 0.06666666666666667])


def test_bh_identical_ps_get_identical_qs():
    q = benjamini_hochberg([0.02, 0.02, 0.5])
    assert q[0] == q[1]


def test_bh_empty():
    assert benjamini_hochberg([]) == []


# ------------------------------------------------------------------ enrich


def test_planted_set_ranks_first():
    universe = frozenset(f"G{i}" for i in range(30))
    planted = GeneSet("PLANT", "planted set", frozenset({"G0", "G1", "G2", "G3"}))
    decoy = GeneSet("DECOY", "decoy set", frozenset({"G10", "G11", "G12", "G13"}))
    results = enrich_genes({"G0", "G1", "G2", "G3"}, [decoy, planted], universe)
    assert results[0].set_id == "PLANT"
    assert results[0].overlap == 4
    # exact: C(4,4)*C(26,0)/C(30,4)
    assert results[0].p_value == pytest.approx(1 / 27405, rel=1e-9)


def test_empty_significant_all_p_one():
    universe = frozenset({"A", "B", "C"})
    sets = [GeneSet("S1", "s", frozenset({"A"})), GeneSet("S2", "s", frozenset({"B"}))]
    results = enrich_genes(set(), sets, universe)
    assert all(r.p_value == 1.0 for r in results)
    assert all(r.overlap == 0 for r in results)


def test_identical_sets_identical_p_and_q():
    universe = frozenset({"A", "B", "C", "D"})
    twin1 = GeneSet("T1", "twin", frozenset({"A", "B"}))
    twin2 = GeneSet("T2", "twin", frozenset({"A", "B"}))
    results = {r.set_id: r for r in enrich_genes({"A", "B"}, [twin1, twin2], universe)}
    assert results["T1"].p_value == results["T2"].p_value
    assert results["T1"].q_value == results["T2"].q_value


def test_collection_order_invariance():
    universe = frozenset({"A", "B", "C", "D", "E"})
    sets = [
        GeneSet("S1", "x", frozenset({"A", "B"})),
        GeneSet("S2", "y", frozenset({"C"})),
        GeneSet("S3", "z", frozenset({"D", "E"})),
    ]
    fwd = enrich_genes({"A", "B"}, sets, universe)
    rev = enrich_genes({"A", "B"}, list(reversed(sets)), universe)
    assert fwd == rev


def test_genes_outside_universe_dropped():
    universe = frozenset({"A", "B"})
    sets = [GeneSet("S1", "s", frozenset({"A"}))]
    results = enrich_genes({"A", "ZZZ"}, sets, universe)
    assert results[0].query_size == 1  # ZZZ dropped


def test_empty_universe_raises():
    with pytest.raises(ConfigurationError):
        enrich_genes({"A"}, [GeneSet("S", "s", frozenset({"A"}))], frozenset())


def test_enrichment_csv_export():
    universe = frozenset({"A", "B", "C"})
    sets = [GeneSet("S1", "my set", frozenset({"A", "B"}))]
    text = export_enrichment_csv(enrich_genes({"A"}, sets, universe))
    lines = text.splitlines()
    assert lines[0] == "set_id,name,k,K,n,N,p_value,q_value,overlap_genes"
    assert lines[1].startswith('S1,"my set",1,2,1,3,')
    assert lines[1].endswith(",A")

"""Gene-set over-representation: hypergeometric tail + BH correction.

Collections are flat GMT files (pathways, processes); the universe is the
set of dictionary genes observed in the background corpus, matching the
background-as-null philosophy of the term statistics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import exp, lgamma, log
from pathlib import Path
from typing import Iterable, Sequence

from litsqueeze.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneSet:
    set_id: str
    name: str
    genes: frozenset[str]
    source: str = ""


@dataclass(frozen=True)
class EnrichmentResult:
    set_id: str
    name: str
    overlap: int
    set_size: int
    query_size: int
    universe_size: int
    p_value: float
    q_value: float
    overlap_genes: frozenset[str]


@dataclass
class GmtLoadResult:
    sets: list[GeneSet]
    rejects: list[tuple[int, str]] = field(default_factory=list)


def load_gmt(path: str | Path, source: str = "") -> GmtLoadResult:
    """Read a GMT file: ``set_id<TAB>description<TAB>gene...`` per line.

    Symbols are uppercased; lines without at least one gene are rejected,
    not fatal.
    """
    path = Path(path)
    sets: list[GeneSet] = []
    rejects: list[tuple[int, str]] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                rejects.append((line_no, "fewer than three tab-separated fields"))
                continue
            set_id, name = parts[0].strip(), parts[1].strip()
            genes = frozenset(g.strip().upper() for g in parts[2:] if g.strip())
            if not set_id:
                rejects.append((line_no, "empty set id"))
                continue
            if not genes:
                rejects.append((line_no, "empty gene list"))
                continue
            if set_id in seen_ids:
                rejects.append((line_no, f"duplicate set id {set_id!r}"))
                continue
            seen_ids.add(set_id)
            sets.append(GeneSet(set_id=set_id, name=name, genes=genes, source=source))
    return GmtLoadResult(sets=sets, rejects=rejects)


def _log_comb(n: int, k: int) -> float:
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


def hypergeom_tail(k: int, K: int, n: int, N: int) -> float:
    """P(X >= k) for hypergeometric X ~ (N population, K marked, n drawn).

    Summed in log space for stability; exact to floating precision.
    """
    if not (0 <= k <= min(K, n) and K <= N and n <= N and K >= 0 and n >= 0):
        raise DomainError(f"invalid hypergeometric parameters k={k} K={K} n={n} N={N}")
    if k == 0:
        return 1.0
    log_denom = _log_comb(N, n)
    log_terms = [
        _log_comb(K, i) + _log_comb(N - K, n - i) - log_denom
        for i in range(k, min(K, n) + 1)
        if n - i <= N - K
    ]
    if not log_terms:
        return 0.0
    peak = max(log_terms)
    total = peak + log(sum(exp(t - peak) for t in log_terms))
    return min(1.0, exp(total))


def benjamini_hochberg(p_values: Sequence[float]) -> list[float]:
    """BH q-values: order-preserving, each in (0, 1]."""
    m = len(p_values)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: p_values[i])
    q = [0.0] * m
    running = 1.0
    for rank_from_end in range(m, 0, -1):
        idx = order[rank_from_end - 1]
        running = min(running, p_values[idx] * m / rank_from_end)
        q[idx] = running
    return q


def enrich_genes(
    significant: Iterable[str],
    sets: Sequence[GeneSet],
    universe: frozenset[str],
) -> list[EnrichmentResult]:
    """Over-representation of each gene set in a significant-gene list.

    Genes outside the universe are dropped (with a logged count).  Sets
    whose overlap is zero report p = 1.  Sorted ascending by p, tie order
    by set_id; the result is invariant under permutation of ``sets``.
    """
    if not universe:
        raise ConfigurationError("empty gene universe")
    significant = set(significant)
    inside = significant & universe
    dropped = len(significant) - len(inside)
    if dropped:
        logger.warning("%d significant genes outside the universe dropped", dropped)

    n = len(inside)
    N = len(universe)
    raw: list[tuple[GeneSet, int, int, frozenset[str]]] = []
    for gs in sorted(sets, key=lambda g: g.set_id):
        set_universe = gs.genes & universe
        overlap = frozenset(inside & set_universe)
        raw.append((gs, len(overlap), len(set_universe), overlap))

    p_values = [
        hypergeom_tail(k, K, n, N) if K > 0 else 1.0 for _, k, K, _ in raw
    ]
    q_values = benjamini_hochberg(p_values)

    results = [
        EnrichmentResult(
            set_id=gs.set_id,
            name=gs.name,
            overlap=k,
            set_size=K,
            query_size=n,
            universe_size=N,
            p_value=p,
            q_value=q,
            overlap_genes=genes,
        )
        for (gs, k, K, genes), p, q in zip(raw, p_values, q_values)
    ]
    results.sort(key=lambda r: (r.p_value, r.set_id))
    return results


def _data_path(name: str) -> Path:
    from importlib import resources

    return Path(str(resources.files("litsqueeze").joinpath("data", name)))


def default_pathway_sets() -> list[GeneSet]:
    """Small demo pathway collection; supply a real GMT for serious runs."""
    return load_gmt(_data_path("demo_pathways.gmt"), source="pathways").sets


def default_process_sets() -> list[GeneSet]:
    return load_gmt(_data_path("demo_processes.gmt"), source="processes").sets


def export_enrichment_csv(results: Sequence[EnrichmentResult]) -> str:
    """CSV set_id,name,k,K,n,N,p_value,q_value,overlap_genes (genes ;-joined)."""
    lines = ["set_id,name,k,K,n,N,p_value,q_value,overlap_genes"]
    for r in results:
        genes = ";".join(sorted(r.overlap_genes))
        name = r.name.replace('"', '""')
        lines.append(
            f'{r.set_id},"{name}",{r.overlap},{r.set_size},{r.query_size},'
            f"{r.universe_size},{r.p_value:.10g},{r.q_value:.10g},{genes}"
        )
    return "\n".join(lines) + "\n"

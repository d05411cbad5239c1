"""Condition similarity networks and heat-maps from analysis features.

Each analyzed condition becomes a sparse nonnegative feature vector over
namespaced keys (gene:SYMBOL, term:WORD, set:SET_ID) weighted by
-log10(p) (or -log10(q) for sets), clipped.  Cosine similarity between
vectors tolerates missing components; pairs above a threshold become the
edges of an undirected network whose payloads drive the node/edge click
views.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from litsqueeze.errors import NotFoundError, SimilarityError

NAMESPACES = ("gene", "term", "set")
DEFAULT_THRESHOLD = 0.3
DEFAULT_TOP_FEATURES = 20
WEIGHT_CLIP = 10.0


@dataclass(frozen=True)
class FeatureVector:
    condition: str
    features: Mapping[str, float]

    def __post_init__(self):
        for key, weight in self.features.items():
            if weight < 0:
                raise ValueError(f"negative weight for {key!r}")

    @property
    def is_zero(self) -> bool:
        return not any(w > 0 for w in self.features.values())

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.features.values()))


def clip_weight(p: float, clip: float = WEIGHT_CLIP) -> float:
    """-log10(p) bounded to [0, clip]; one extreme p must not own the direction."""
    if p <= 0:
        return clip
    return min(clip, max(0.0, -math.log10(p)))


def build_feature_vector(
    analysis: "AnalysisOutputs",
    namespaces: Iterable[str] = NAMESPACES,
    clip: float = WEIGHT_CLIP,
) -> FeatureVector:
    """Weighted features of one analyzed condition.

    Ranked genes/terms contribute -log10(p), enriched sets -log10(q); zero
    weights are omitted, so a vector with no significant items comes back
    empty (callers exclude those from networks).
    """
    selected = set(namespaces)
    unknown = selected - set(NAMESPACES)
    if unknown:
        raise ValueError(f"unknown namespaces: {sorted(unknown)}")

    features: dict[str, float] = {}
    if "gene" in selected:
        for r in analysis.ranked_genes.results:
            w = clip_weight(r.p_value, clip)
            if w > 0:
                features[f"gene:{r.term}"] = w
    if "term" in selected:
        for r in analysis.ranked_words.results:
            w = clip_weight(r.p_value, clip)
            if w > 0:
                features[f"term:{r.term}"] = w
    if "set" in selected:
        for res in list(analysis.pathways) + list(analysis.processes):
            w = clip_weight(res.q_value, clip)
            if w > 0:
                features[f"set:{res.set_id}"] = w
    return FeatureVector(condition=analysis.condition, features=features)


def cosine(u: FeatureVector, v: FeatureVector) -> float:
    """Cosine over the union key space; missing keys contribute zero."""
    if u.is_zero or v.is_zero:
        raise SimilarityError(
            f"cosine undefined for zero vector ({u.condition!r} / {v.condition!r})"
        )
    small, large = (u.features, v.features) if len(u.features) <= len(v.features) else (v.features, u.features)
    dot = sum(w * large.get(k, 0.0) for k, w in small.items())
    return dot / (u.norm() * v.norm())


def _split_namespace(key: str) -> tuple[str, str]:
    ns, _, rest = key.partition(":")
    return ns, rest


def _top_features(vec: FeatureVector, top_n: int) -> dict[str, list[dict]]:
    by_ns: dict[str, list[tuple[str, float]]] = {ns: [] for ns in NAMESPACES}
    for key, weight in vec.features.items():
        ns, name = _split_namespace(key)
        if ns in by_ns and weight > 0:
            by_ns[ns].append((name, weight))
    out: dict[str, list[dict]] = {}
    for ns, items in by_ns.items():
        items.sort(key=lambda nw: (-nw[1], nw[0]))
        out[ns] = [
            {"name": name, "weight": round(weight, 6)} for name, weight in items[:top_n]
        ]
    return out


def _shared_features(u: FeatureVector, v: FeatureVector) -> dict[str, list[dict]]:
    """Intersection keys with min(u, v) weight: what both agree on."""
    shared: dict[str, list[tuple[str, float]]] = {ns: [] for ns in NAMESPACES}
    for key, uw in u.features.items():
        vw = v.features.get(key)
        if vw is None:
            continue
        weight = min(uw, vw)
        if weight <= 0:
            continue
        ns, name = _split_namespace(key)
        if ns in shared:
            shared[ns].append((name, weight))
    out: dict[str, list[dict]] = {}
    for ns, items in shared.items():
        items.sort(key=lambda nw: (-nw[1], nw[0]))
        out[ns] = [{"name": name, "weight": round(weight, 6)} for name, weight in items]
    return out


@dataclass(frozen=True)
class NetworkNode:
    node_id: str
    top_features: dict[str, list[dict]] = field(compare=False)


@dataclass(frozen=True)
class NetworkEdge:
    a: str
    b: str
    similarity: float
    shared: dict[str, list[dict]] = field(compare=False)


@dataclass(frozen=True)
class SimilarityNetwork:
    nodes: tuple[NetworkNode, ...]
    edges: tuple[NetworkEdge, ...]
    threshold: float
    namespaces: tuple[str, ...]

    def to_document(self) -> dict:
        return {
            "threshold": self.threshold,
            "namespaces": list(self.namespaces),
            "nodes": [
                {"id": n.node_id, "top_features": n.top_features} for n in self.nodes
            ],
            "edges": [
                {
                    "a": e.a,
                    "b": e.b,
                    "similarity": round(e.similarity, 6),
                    "shared": e.shared,
                }
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"


def build_network(
    vectors: Sequence[FeatureVector],
    threshold: float = DEFAULT_THRESHOLD,
    top_n: int = DEFAULT_TOP_FEATURES,
    namespaces: Iterable[str] = NAMESPACES,
) -> SimilarityNetwork:
    """All-pairs cosine over nonzero vectors; keep pairs >= threshold.

    Zero vectors are silently excluded (they cannot participate in
    similarity).  The edge set is invariant under input order: nodes are
    sorted by condition and each unordered pair is visited once.
    """
    usable = sorted((v for v in vectors if not v.is_zero), key=lambda v: v.condition)
    nodes = tuple(
        NetworkNode(node_id=v.condition, top_features=_top_features(v, top_n))
        for v in usable
    )
    edges: list[NetworkEdge] = []
    for i in range(len(usable)):
        for j in range(i + 1, len(usable)):
            s = cosine(usable[i], usable[j])
            if s >= threshold:
                edges.append(
                    NetworkEdge(
                        a=usable[i].condition,
                        b=usable[j].condition,
                        similarity=s,
                        shared=_shared_features(usable[i], usable[j]),
                    )
                )
    edges.sort(key=lambda e: (e.a, e.b))
    return SimilarityNetwork(
        nodes=nodes,
        edges=tuple(edges),
        threshold=threshold,
        namespaces=tuple(namespaces),
    )


@dataclass(frozen=True)
class Heatmap:
    conditions: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]
    focus: str | None = None
    focus_row: tuple[tuple[str, float], ...] = ()

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.conditions)]
        for label, row in zip(self.conditions, self.matrix):
            lines.append(label + "," + ",".join(f"{v:.6f}" for v in row))
        return "\n".join(lines) + "\n"

    def focus_csv(self) -> str:
        lines = ["condition,similarity"]
        for label, value in self.focus_row:
            lines.append(f"{label},{value:.6f}")
        return "\n".join(lines) + "\n"


def build_heatmap(
    vectors: Sequence[FeatureVector], focus: str | None = None
) -> Heatmap:
    """Full symmetric similarity matrix with unit diagonal.

    With a focus condition, also produce that row sorted descending (the
    "one condition against all others" view).
    """
    usable = sorted((v for v in vectors if not v.is_zero), key=lambda v: v.condition)
    if len(usable) < 2:
        raise ValueError("heat-map needs at least two nonzero vectors")
    labels = tuple(v.condition for v in usable)
    size = len(usable)
    matrix = [[0.0] * size for _ in range(size)]
    for i in range(size):
        matrix[i][i] = 1.0
        for j in range(i + 1, size):
            s = cosine(usable[i], usable[j])
            matrix[i][j] = s
            matrix[j][i] = s

    focus_row: tuple[tuple[str, float], ...] = ()
    if focus is not None:
        if focus not in labels:
            raise NotFoundError(f"focus condition {focus!r} not among vectors")
        fi = labels.index(focus)
        others = [
            (labels[j], matrix[fi][j]) for j in range(size) if j != fi
        ]
        others.sort(key=lambda lv: (-lv[1], lv[0]))
        focus_row = tuple(others)
    return Heatmap(
        conditions=labels,
        matrix=tuple(tuple(row) for row in matrix),
        focus=focus,
        focus_row=focus_row,
    )

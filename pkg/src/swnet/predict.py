"""Node label prediction from network structure.

Each node carries a text label (a package path, author, version or other
category; missing values map to a reserved unknown category, which is a
legal prediction target).  A node's label is predicted from a candidate
set chosen by strategy:

* ``neighbors`` -- the node's neighborhood on the undirected view,
* ``groups``    -- nodes sharing at least one extracted group,
* ``network``   -- all other labeled nodes,
* ``majority`` / ``random`` -- baselines ignoring structure.

Every candidate votes for its label with weight equal to the Jaccard
similarity of the two nodes' neighborhoods; the heaviest label wins and
exact ties are broken uniformly at random under the run seed.  When all
candidate weights are zero the tie-break runs over all candidate labels,
and an empty candidate set falls back to the population majority.

Evaluation is leave-one-out over the nodes included in at least one group,
averaged over seeded runs.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .graph import DependencyNetwork
from .groups import DEFAULT_SEED, NodeGroup

logger = logging.getLogger(__name__)

UNKNOWN_LABEL = "(unknown)"
STRATEGIES = ("neighbors", "groups", "network", "majority", "random")


def labels_from_attributes(net: DependencyNetwork, key: str,
                           unknown: str = UNKNOWN_LABEL) -> list[str]:
    """Per-node labels from a node attribute; missing/empty -> ``unknown``."""
    out = []
    for i in range(net.n):
        value = net.attributes(i).get(key)
        out.append(str(value) if value not in (None, "") else unknown)
    return out


def jaccard_similarity(net: DependencyNetwork, i: int, j: int) -> float:
    """|Γ(i) ∩ Γ(j)| / |Γ(i) ∪ Γ(j)| on the undirected view; 0 if union empty."""
    und = net.undirected_view()
    a = und.neighbors(int(i))
    b = und.neighbors(int(j))
    if a.size == 0 and b.size == 0:
        return 0.0
    inter = np.intersect1d(a, b, assume_unique=True).size
    union = a.size + b.size - inter
    return inter / union if union else 0.0


def common_prefix_length(labels) -> int:
    """Longest run of leading dot-separated segments shared by all labels.

    The reserved unknown category is ignored so that a handful of
    unlabeled nodes cannot erase a corpus-wide package prefix.
    """
    split = [lab.split(".") for lab in labels if lab != UNKNOWN_LABEL]
    if not split:
        return 0
    depth = min(len(s) for s in split)
    for k in range(depth):
        seg = split[0][k]
        if any(s[k] != seg for s in split[1:]):
            return k
    return depth


def truncate_label(label: str, depth: int, prefix_segments: int) -> str:
    """Keep ``depth`` segments after the first ``prefix_segments`` ones.

    Labels with fewer than ``prefix_segments + depth`` segments (and the
    unknown category) are returned unchanged.
    """
    if label == UNKNOWN_LABEL:
        return label
    parts = label.split(".")
    if len(parts) < prefix_segments + depth:
        return label
    return ".".join(parts[prefix_segments:prefix_segments + depth])


def truncate_labels(labels, depth: int | None, prefix: int | str = "auto") -> list[str]:
    """Corpus-level truncation; ``prefix='auto'`` detects the shared prefix.

    With a fixed numeric ``prefix`` this is idempotent at the same depth.
    Under ``'auto'`` a second application re-detects the prefix of the
    already-truncated labels, which can shorten them further.
    """
    labels = list(labels)
    if depth is None:
        return labels
    if depth < 1:
        raise ValueError("depth must be >= 1")
    p = common_prefix_length(labels) if prefix == "auto" else int(prefix)
    return [truncate_label(lab, depth, p) for lab in labels]


@dataclass
class PredictionConfig:
    strategy: str = "groups"
    depth: int | None = None
    runs: int = 100
    seed: int = DEFAULT_SEED
    include_pattern_nodes: bool = False  # group membership via S only, or S∪T

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass
class PredictionResult:
    strategy: str
    accuracy: float                 # mean over runs
    run_accuracies: np.ndarray
    n_evaluated: int
    n_labels: int
    modal_predictions: list[str]    # most frequent prediction per node
    node_ids: np.ndarray
    majority_accuracy: float
    random_accuracy: float
    fallback_nodes: int             # empty candidate set, majority used
    config: PredictionConfig = field(repr=False, default=None)


def _population(groups: list[NodeGroup], n: int, include_pattern: bool) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    for g in groups:
        for v in g.S:
            mask[v] = True
        if include_pattern:
            for v in g.T:
                mask[v] = True
    return np.flatnonzero(mask)


def _co_group_candidates(groups, n, include_pattern):
    members = [set() for _ in range(n)]
    for g in groups:
        nodes = set(g.S) | (set(g.T) if include_pattern else set())
        for v in nodes:
            members[v].update(nodes)
    return members


def _label_votes(net, i, candidates, labels):
    """Summed Jaccard weight per candidate label around node i."""
    votes: dict[str, float] = {}
    for j in candidates:
        votes[labels[j]] = votes.get(labels[j], 0.0) + jaccard_similarity(net, i, j)
    return votes


def _winners(votes: dict[str, float]) -> list[str]:
    """Labels tied at maximal weight; all-zero weights tie everyone."""
    if not votes:
        return []
    top = max(votes.values())
    return sorted(lab for lab, w in votes.items() if w == top)


def predict_label(net, groups, labels, i, config: PredictionConfig,
                  rng: np.random.Generator) -> str:
    """Predict one node's label; the node's own label is never consulted."""
    candidates = _candidates_for(net, groups, labels, i, config)
    votes = _label_votes(net, i, candidates, labels)
    winners = _winners(votes)
    if not winners:
        logger.debug("node %d: no candidates, falling back to majority", i)
        pop = _population(groups, net.n, config.include_pattern_nodes)
        return _majority_label([labels[v] for v in pop])
    if len(winners) == 1:
        return winners[0]
    return winners[int(rng.integers(len(winners)))]


def _candidates_for(net, groups, labels, i, config):
    if config.strategy == "neighbors":
        return [int(j) for j in net.undirected_view().neighbors(int(i))]
    if config.strategy == "groups":
        co = _co_group_candidates(groups, net.n, config.include_pattern_nodes)
        return sorted(co[i] - {i})
    if config.strategy == "network":
        return [j for j in range(net.n) if j != i]
    raise ValueError(f"strategy {config.strategy!r} has no candidate set")


def _majority_label(labels: list[str]) -> str:
    counts = Counter(labels)
    top = max(counts.values())
    return min(lab for lab, c in counts.items() if c == top)


def evaluate(net: DependencyNetwork, groups: list[NodeGroup], labels,
             config: PredictionConfig | None = None) -> PredictionResult:
    """Leave-one-out accuracy over grouped nodes, averaged over seeded runs."""
    config = config or PredictionConfig()
    labels = truncate_labels(labels, config.depth)
    if len(labels) != net.n:
        raise ValueError("one label per node required")
    pop = _population(groups, net.n, config.include_pattern_nodes)
    if pop.size == 0:
        raise ValueError("no grouped nodes to evaluate")
    pop_labels = [labels[v] for v in pop]
    majority = _majority_label(pop_labels)
    majority_acc = pop_labels.count(majority) / len(pop_labels)
    distinct = sorted(set(pop_labels))

    strategy_ss, baseline_ss = np.random.SeedSequence(config.seed).spawn(2)
    runs = config.runs

    def _random_runs(rng):
        ps, acc = [], np.empty(runs)
        for r in range(runs):
            draw = rng.integers(len(distinct), size=pop.size)
            p = [distinct[k] for k in draw]
            ps.append(p)
            acc[r] = np.mean([a == b for a, b in zip(p, pop_labels)])
        return ps, acc

    _, baseline_acc = _random_runs(np.random.default_rng(baseline_ss))
    rng_master = np.random.default_rng(strategy_ss)

    overall = None
    if config.strategy == "majority":
        preds = [[majority] * pop.size] * runs
        run_acc = np.full(runs, majority_acc)
        overall = majority_acc  # constant across runs; averaging only adds noise
        fallbacks = 0
    elif config.strategy == "random":
        preds, run_acc = _random_runs(rng_master)
        fallbacks = 0
    else:
        # Vote weights are seed-independent; only tie-breaks vary by run.
        co = (_co_group_candidates(groups, net.n, config.include_pattern_nodes)
              if config.strategy == "groups" else None)
        fallbacks = 0
        node_winners: list[list[str]] = []
        for i in pop:
            if config.strategy == "groups":
                candidates = sorted(co[int(i)] - {int(i)})
            else:
                candidates = _candidates_for(net, groups, labels, int(i), config)
            votes = _label_votes(net, int(i), candidates, labels)
            winners = _winners(votes)
            if not winners:
                logger.debug("node %d: no candidates, falling back to majority", i)
                fallbacks += 1
                winners = [majority]
            node_winners.append(winners)
        preds = []
        run_acc = np.empty(runs)
        for r in range(runs):
            p = [
                w[0] if len(w) == 1 else w[int(rng_master.integers(len(w)))]
                for w in node_winners
            ]
            preds.append(p)
            run_acc[r] = np.mean([a == b for a, b in zip(p, pop_labels)])

    modal = []
    for k in range(pop.size):
        modal.append(_majority_label([preds[r][k] for r in range(runs)]))
    random_acc = float(baseline_acc.mean())
    return PredictionResult(
        strategy=config.strategy,
        accuracy=float(run_acc.mean()) if overall is None else float(overall),
        run_accuracies=run_acc,
        n_evaluated=int(pop.size),
        n_labels=len(distinct),
        modal_predictions=modal,
        node_ids=pop,
        majority_accuracy=float(majority_acc),
        random_accuracy=float(random_acc),
        fallback_nodes=fallbacks,
        config=config,
    )

"""Clustering baselines and the evaluation metrics, end to end.

Clusters a handful of sparse vectors with complete-link agglomeration and
seeded K-Means, then scores several candidate groupings with purity, NMI,
and micro/macro F1 to show what each metric rewards and punishes.

Run:  python3 demos/03_clustering_and_metrics.py
"""

from namesift import (
    NOISE_LABEL,
    assignment_to_clusters,
    hac_complete,
    kmeans,
    micro_macro_f1,
    nmi,
    purity,
    run_repetitions,
)

# Six documents in three tight topical pairs.  Feature ids are arbitrary;
# only overlap matters for cosine distance.
VECTORS = {
    "a1": {0: 2.0, 1: 1.0},
    "a2": {0: 1.5, 1: 0.9},
    "b1": {2: 1.0, 3: 2.0},
    "b2": {2: 1.2, 3: 1.7},
    "c1": {4: 1.0, 5: 1.0},
    "c2": {4: 0.8, 5: 1.3},
}
GOLD = {"a1": "A", "a2": "A", "b1": "B", "b2": "B", "c1": "C", "c2": "C"}


def show(title: str, clusters) -> None:
    groups = [sorted(c) for c in (clusters.clusters if hasattr(clusters, "clusters") else clusters)]
    groups.sort()
    p = purity(groups, GOLD)
    n = nmi(groups, GOLD)
    print(f"  {title:34} {groups}  purity={p:.3f}  nmi={n:.3f}")


def main() -> None:
    print("== complete-link agglomeration ==")
    for k in (3, 2, 1):
        show(f"hac_complete, k={k}", hac_complete(VECTORS, k))

    print("\n== seeded K-Means ==")
    for seed in (1, 2, 3):
        result = kmeans(VECTORS, 3, seed)
        show(f"kmeans, k=3, seed={seed}", result)
    runs = run_repetitions(VECTORS, 3, reps=10)
    mean_nmi = sum(nmi(r, GOLD) for r in runs) / len(runs)
    print(f"  mean NMI over seeds 1..10: {mean_nmi:.3f}")

    print("\n== what the metrics reward ==")
    show("perfect partition", [["a1", "a2"], ["b1", "b2"], ["c1", "c2"]])
    show("one merge too few", [["a1", "a2", "b1", "b2"], ["c1", "c2"]])
    show("all singletons (purity flatters)", [[d] for d in GOLD])
    show("everything together", [list(GOLD)])

    print("\n== classification F1 on the same task ==")
    # F1 needs labeled predictions, not anonymous clusters.  NOISE is a
    # class like any other here; the universe is the gold label set.
    gold = dict(GOLD, x1=NOISE_LABEL)
    for title, predicted in (
        ("perfect", dict(gold)),
        ("one doc astray", dict(gold, a2="B")),
        ("noise doc mislabeled", dict(gold, x1="A")),
    ):
        micro, macro = micro_macro_f1(predicted, gold)
        print(f"  {title:22} micro={micro:.3f}  macro={macro:.3f}  mean={(micro + macro) / 2:.3f}")

    print("\n== grouping an assignment for the clustering protocol ==")
    predicted = dict(GOLD, a2="B")
    kept = [d for d in predicted if gold.get(d) != NOISE_LABEL]
    clusters = assignment_to_clusters(predicted, kept)
    show("clusters from labels", clusters)


if __name__ == "__main__":
    main()

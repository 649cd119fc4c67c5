"""
OWL CLUSTER V8.0
The Niche Finder for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
K-means over the reduced embedding (k-means++ seeding, Lloyd iterations,
best of several seeded restarts), elbow and silhouette scans for picking k,
and the niche index itself: 1 - |own cluster| / |largest cluster|.
Small clusters are niches; the biggest cluster scores exactly 0.

CORE CAPABILITIES:
1. kmeans_fit with per-iteration inertia monotonicity check.
2. Silhouette (per-sample, singletons score 0).
3. Elbow scan over a k grid; default coarse/fine grids.
4. Niche index, 0.1-wide histogram, cluster audit sampling.

INTEGRATIONS:
- scipy.spatial.distance (cdist)
- Bananas (ConfigSlip / DataSlip / NumericSlip)
- Monkey Heart (Logging)
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from bananas import ConfigSlip, DataSlip, NumericSlip
from monkey_heart import MonkeyHeart


MONOTONE_SLACK = 1e-10
SILHOUETTE_CHUNK = 1024
AUDIT_RANGES = {"A": (0.9, 1.0), "B": (0.2, 0.7), "C": (0.0, 0.1)}


@dataclass(frozen=True)
class ClusterModel:
    k: int
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    seed: int
    iterations_run: int
    inertia_trace: Tuple[float, ...] = ()

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


@dataclass(frozen=True)
class NicheIndex:
    scores: pd.Series                       # app_id -> niche
    clusters: pd.Series                     # app_id -> cluster id
    cluster_sizes: Mapping[int, int] = field(default_factory=dict)

    def cluster_score(self, cluster: int) -> float:
        largest = max(self.cluster_sizes.values())
        return 1.0 - self.cluster_sizes[cluster] / largest

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "app_id": self.scores.index.astype(str),
            "cluster": self.clusters.to_numpy(dtype=int),
            "cluster_size": self.clusters.map(self.cluster_sizes).to_numpy(dtype=int),
            "niche": self.scores.to_numpy(dtype=float),
        })


@dataclass(frozen=True)
class AuditReport:
    index_range: Tuple[float, float]
    samples: Tuple[Tuple[int, int, float, Tuple[Tuple[str, str], ...]], ...]  # (cluster, size, score, docs)
    notice: str = ""

    def render(self, title: str = "") -> str:
        lo, hi = self.index_range
        prefix = f"{title} " if title else ""
        lines = [f"== {prefix}niche index in [{lo}, {hi}] =="]
        if self.notice:
            lines.append(self.notice)
        for cluster, size, score, docs in self.samples:
            lines.append(f"cluster {cluster}: {size} apps, niche index {score:.2f}")
            for app_id, text in docs:
                lines.append(f"  [{app_id}] {text}")
        return "\n".join(lines)


# ==============================================================================
# 🦉 OWL CLUSTER CLASS
# ==============================================================================

class OwlCluster:

    # ==========================================================================
    # 🎯 K-MEANS
    # ==========================================================================

    @staticmethod
    def kmeans_fit(
        embedding: np.ndarray,
        k: int,
        seed: int = 0,
        n_restarts: int = 10,
        max_iter: int = 300,
        tol: float = 1e-6,
    ) -> ClusterModel:
        """
        Best-of-n_restarts Lloyd k-means with k-means++ seeding. Restart r
        draws from the r-th child of SeedSequence(seed).
        """
        X = np.asarray(embedding, dtype=float)
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise DataSlip("embedding must be a finite 2-D array")
        n = X.shape[0]
        if not 2 <= k <= n - 1:
            raise ConfigSlip(f"k={k} outside [2, {n - 1}]", {"k": k, "n": n})

        best: Optional[ClusterModel] = None
        for child in np.random.SeedSequence(seed).spawn(n_restarts):
            model = OwlCluster._lloyd(X, k, np.random.default_rng(child), seed, max_iter, tol)
            if best is None or model.inertia < best.inertia:
                best = model
        MonkeyHeart.log_numeric_event("KMEANS", {"k": k, "inertia": round(best.inertia, 6), "iterations": best.iterations_run})
        return best

    @staticmethod
    def _kmeans_pp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
        n = X.shape[0]
        centers = np.empty((k, X.shape[1]))
        centers[0] = X[rng.integers(n)]
        closest = ((X - centers[0]) ** 2).sum(axis=1)
        for j in range(1, k):
            total = closest.sum()
            probs = closest / total if total > 0 else np.full(n, 1.0 / n)
            pick = rng.choice(n, p=probs)
            centers[j] = X[pick]
            closest = np.minimum(closest, ((X - centers[j]) ** 2).sum(axis=1))
        return centers

    @staticmethod
    def _assign(X: np.ndarray, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        d2 = cdist(X, centers, "sqeuclidean")
        labels = np.argmin(d2, axis=1)
        return labels, d2[np.arange(X.shape[0]), labels]

    @staticmethod
    def _fill_empty(X: np.ndarray, labels: np.ndarray, centers: np.ndarray, own: np.ndarray) -> None:
        """Moves each empty cluster onto the point farthest from its own center."""
        k = centers.shape[0]
        for cluster in np.flatnonzero(np.bincount(labels, minlength=k) == 0):
            sizes = np.bincount(labels, minlength=k)
            movable = sizes[labels] > 1
            candidates = np.where(movable, own, -np.inf)
            point = int(np.argmax(candidates))
            labels[point] = cluster
            centers[cluster] = X[point]
            own[point] = 0.0

    @staticmethod
    def _lloyd(X, k, rng, seed, max_iter, tol) -> ClusterModel:
        centers = OwlCluster._kmeans_pp(X, k, rng)
        labels, own = OwlCluster._assign(X, centers)
        OwlCluster._fill_empty(X, labels, centers, own)
        trace = [float(own.sum())]

        iterations = 0
        for iterations in range(1, max_iter + 1):
            updated = centers.copy()
            counts = np.bincount(labels, minlength=k)
            sums = np.zeros_like(centers)
            np.add.at(sums, labels, X)
            filled = counts > 0
            updated[filled] = sums[filled] / counts[filled, None]
            shift = float(np.sqrt(((updated - centers) ** 2).sum(axis=1)).max())
            centers = updated

            labels, own = OwlCluster._assign(X, centers)
            OwlCluster._fill_empty(X, labels, centers, own)
            current = float(own.sum())
            if current > trace[-1] * (1.0 + MONOTONE_SLACK) + MONOTONE_SLACK:
                raise NumericSlip(
                    f"inertia rose from {trace[-1]} to {current} at iteration {iterations}",
                    {"trace": trace[-10:]},
                )
            trace.append(current)
            if shift < tol:
                break

        inertia = float(((X - centers[labels]) ** 2).sum())
        return ClusterModel(k, labels.copy(), centers, inertia, seed, iterations, tuple(trace))

    @staticmethod
    def inertia(model: ClusterModel, embedding: np.ndarray) -> float:
        """Sum of squared distances to the assigned center."""
        X = np.asarray(embedding, dtype=float)
        return float(((X - model.centers[model.labels]) ** 2).sum())

    # ==========================================================================
    # 📏 SILHOUETTE
    # ==========================================================================

    @staticmethod
    def silhouette(model: ClusterModel, embedding: np.ndarray) -> float:
        return OwlCluster.silhouette_from_labels(model.labels, embedding, model.k)

    @staticmethod
    def silhouette_from_labels(labels: np.ndarray, embedding: np.ndarray, k: Optional[int] = None) -> float:
        """
        Mean of (b - a) / max(a, b) over samples, Euclidean distance.
        Members of singleton clusters score 0.
        """
        X = np.asarray(embedding, dtype=float)
        labels = np.asarray(labels, dtype=int)
        k = int(labels.max()) + 1 if k is None else k
        if k < 2:
            raise ConfigSlip("silhouette is undefined for k < 2")
        sizes = np.bincount(labels, minlength=k).astype(float)
        onehot = np.zeros((X.shape[0], k))
        onehot[np.arange(X.shape[0]), labels] = 1.0

        scores = np.zeros(X.shape[0])
        for start in range(0, X.shape[0], SILHOUETTE_CHUNK):
            stop = min(start + SILHOUETTE_CHUNK, X.shape[0])
            sums = cdist(X[start:stop], X) @ onehot
            own = labels[start:stop]
            rows = np.arange(stop - start)
            own_size = sizes[own]
            a = np.divide(sums[rows, own], own_size - 1, out=np.zeros(stop - start), where=own_size > 1)
            means = np.divide(sums, sizes, out=np.full_like(sums, np.inf), where=sizes > 0)
            means[rows, own] = np.inf
            b = means.min(axis=1)
            denom = np.maximum(a, b)
            s = np.divide(b - a, denom, out=np.zeros(stop - start), where=(denom > 0) & np.isfinite(denom))
            s[own_size <= 1] = 0.0
            scores[start:stop] = s
        return float(scores.mean())

    # ==========================================================================
    # 📈 MODEL SELECTION
    # ==========================================================================

    @staticmethod
    def default_k_grids(n: int) -> Tuple[List[int], List[int]]:
        """
        Coarse: 5 points at 20% spacing of [2, n-1]. Fine: 30 equally spaced
        candidates in [2, first coarse point].
        """
        top = n - 1
        if top < 2:
            raise ConfigSlip(f"need at least 3 documents to cluster, got {n}")
        coarse = sorted({max(2, min(top, int(round(2 + f * (top - 2))))) for f in (0.2, 0.4, 0.6, 0.8, 1.0)})
        fine = sorted({int(round(v)) for v in np.linspace(2, max(coarse[0], 3), 30)})
        fine = [k for k in fine if 2 <= k <= top]
        return coarse, fine

    @staticmethod
    def elbow_scan(
        embedding: np.ndarray,
        k_grid: Sequence[int],
        seed: int = 0,
        with_silhouette: bool = True,
        n_restarts: int = 10,
        max_iter: int = 300,
        tol: float = 1e-6,
    ) -> pd.DataFrame:
        """(k, inertia, silhouette) per k; silhouette left empty when not requested."""
        grid = list(k_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigSlip("k grid must be strictly ascending")
        table = []
        for k in grid:
            model = OwlCluster.kmeans_fit(embedding, k, seed, n_restarts, max_iter, tol)
            table.append({
                "k": k,
                "inertia": model.inertia,
                "silhouette": OwlCluster.silhouette(model, embedding) if with_silhouette else np.nan,
            })
        return pd.DataFrame(table, columns=["k", "inertia", "silhouette"])

    # ==========================================================================
    # 🏝️ NICHE INDEX
    # ==========================================================================

    @staticmethod
    def niche_index(model: ClusterModel, app_ids: Sequence[str]) -> NicheIndex:
        """niche_i = 1 - |cluster(i)| / |largest cluster|."""
        sizes = model.sizes
        largest = sizes.max()
        scores = 1.0 - sizes[model.labels] / largest
        ids = pd.Index([str(a) for a in app_ids], name="app_id")
        return NicheIndex(
            scores=pd.Series(scores, index=ids, name="niche"),
            clusters=pd.Series(model.labels, index=ids, name="cluster"),
            cluster_sizes={int(c): int(s) for c, s in enumerate(sizes)},
        )

    @staticmethod
    def niche_histogram(scores: Sequence[float], bin_width: float = 0.1) -> pd.DataFrame:
        """Bins [0,0.1), ..., [0.9,1.0]; the last bin is closed on the right."""
        values = np.asarray(scores, dtype=float)
        n_bins = int(round(1.0 / bin_width))
        # multiply, not divide: 0.3 / 0.1 floors to 2
        slots = np.clip(np.floor(values * n_bins + 1e-9).astype(int), 0, n_bins - 1)
        counts = np.bincount(slots, minlength=n_bins)
        starts = np.round(np.arange(n_bins) / n_bins, 10)
        return pd.DataFrame({"bin_start": starts, "bin_end": np.round(starts + 1.0 / n_bins, 10), "count": counts})

    @staticmethod
    def sample_cluster_descriptions(
        model: ClusterModel,
        index: NicheIndex,
        corpus: Mapping[str, str],
        index_range: Tuple[float, float],
        n_clusters: int = 1,
        n_docs: int = 2,
        seed: int = 0,
    ) -> AuditReport:
        """
        Uniformly samples clusters whose niche score lies in index_range
        (inclusive), then documents inside them.
        """
        lo, hi = index_range
        if not 0.0 <= lo <= hi <= 1.0:
            raise ConfigSlip(f"index range ({lo}, {hi}) must lie inside [0, 1]")
        eligible = [c for c in sorted(index.cluster_sizes) if lo <= index.cluster_score(c) <= hi]
        if not eligible:
            return AuditReport((lo, hi), (), f"no cluster with niche index in [{lo}, {hi}]")

        rng = np.random.default_rng(seed)
        chosen = sorted(rng.choice(eligible, size=min(n_clusters, len(eligible)), replace=False).tolist())
        samples = []
        for cluster in chosen:
            members = sorted(index.clusters.index[index.clusters == cluster])
            picks = sorted(rng.choice(members, size=min(n_docs, len(members)), replace=False).tolist())
            docs = tuple((app_id, str(corpus.get(app_id, ""))) for app_id in picks)
            samples.append((int(cluster), index.cluster_sizes[cluster], index.cluster_score(cluster), docs))
        return AuditReport((lo, hi), tuple(samples))


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦉 OWL CLUSTER V8.0 DIAGNOSTIC\n" + "=" * 40)

    rng = np.random.default_rng(7)
    blobs = np.vstack([rng.normal(0, 0.1, (5, 2)), rng.normal(10, 0.1, (5, 2))])

    print("\n[TEST 1] Two blobs...")
    fit = OwlCluster.kmeans_fit(blobs, 2, seed=1)
    print(f" > labels={fit.labels.tolist()} inertia={fit.inertia:.4f}")

    print("\n[TEST 2] Silhouette...")
    print(f" > {OwlCluster.silhouette(fit, blobs):.4f}")

    print("\n[TEST 3] Niche index 1 - 8/231...")
    print(f" > {1 - 8 / 231:.4f}")

    print("\n" + "=" * 40)
    print("🦉 OWL CLUSTER SYSTEM: OPERATIONAL")

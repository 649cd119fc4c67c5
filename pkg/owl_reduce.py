"""
OWL REDUCE V8.0
The Latent Semantic Reducer for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Truncated SVD of the TF-IDF matrix. Document scores U_r * S_r become the
embedding the clusterer works on; the cumulative explained ratio (squared
singular values over the squared Frobenius norm) picks the rank.

CORE CAPABILITIES:
1. Truncated SVD (dense LAPACK for small problems, seeded ARPACK otherwise).
2. Deterministic sign convention.
3. Explained-ratio curve and rank selection at a target ratio.
4. Optional column centering.

INTEGRATIONS:
- scipy.linalg / scipy.sparse.linalg
- Bananas (ConfigSlip / NumericSlip)
- Monkey Heart (Logging)
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg, sparse
from scipy.sparse.linalg import svds

from bananas import ConfigSlip, NumericSlip
from monkey_heart import MonkeyHeart


# Problems whose smaller side is at most this size go through a dense SVD.
DENSE_LIMIT = 2000
RATIO_SLACK = 1e-12

MatrixLike = Union[np.ndarray, sparse.spmatrix]


@dataclass(frozen=True)
class ReducedMatrix:
    embedding: np.ndarray
    singular_values: np.ndarray
    components: np.ndarray
    explained_ratio: np.ndarray
    total_energy: float

    @property
    def rank(self) -> int:
        return int(self.singular_values.size)

    def truncate(self, rank: int) -> "ReducedMatrix":
        if not 1 <= rank <= self.rank:
            raise ConfigSlip(f"rank {rank} outside [1, {self.rank}]")
        return ReducedMatrix(
            self.embedding[:, :rank].copy(),
            self.singular_values[:rank].copy(),
            self.components[:rank].copy(),
            self.explained_ratio[:rank].copy(),
            self.total_energy,
        )


class OwlReduce:

    @staticmethod
    def _prepare(matrix: MatrixLike, center: bool) -> Tuple[MatrixLike, float]:
        if center:
            dense = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix, dtype=float)
            dense = dense - dense.mean(axis=0)
            return dense, float(np.sum(dense * dense))
        if sparse.issparse(matrix):
            matrix = sparse.csr_matrix(matrix, dtype=float)
            return matrix, float(matrix.multiply(matrix).sum())
        dense = np.asarray(matrix, dtype=float)
        return dense, float(np.sum(dense * dense))

    @staticmethod
    def _singular_triples(matrix: MatrixLike, rank: int, seed: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        smaller = min(matrix.shape)
        if smaller <= DENSE_LIMIT or rank >= smaller:
            dense = matrix.toarray() if sparse.issparse(matrix) else matrix
            u, s, vt = linalg.svd(dense, full_matrices=False, lapack_driver="gesdd")
            u, s, vt = u[:, :rank], s[:rank], vt[:rank]
        else:
            rng = np.random.default_rng(seed)
            v0 = rng.uniform(-1.0, 1.0, size=smaller)
            u, s, vt = svds(matrix, k=rank, v0=v0, solver="arpack")
            order = np.argsort(-s, kind="stable")
            u, s, vt = u[:, order], s[order], vt[order]

        # largest-magnitude entry of each component made nonnegative
        pivots = np.argmax(np.abs(vt), axis=1)
        signs = np.sign(vt[np.arange(vt.shape[0]), pivots])
        signs[signs == 0] = 1.0
        return u * signs, s, vt * signs[:, None]

    @staticmethod
    def truncated_svd(matrix: MatrixLike, rank: int, seed: int = 0, center: bool = False) -> ReducedMatrix:
        """
        Rank-r decomposition; embedding = U_r S_r. Requires 1 <= r <= min(N, C) - 1.
        """
        limit = min(matrix.shape) - 1
        if not 1 <= rank <= limit:
            raise ConfigSlip(f"rank {rank} outside [1, {limit}]", {"rank": rank})
        return OwlReduce._decompose(matrix, rank, seed, center)

    @staticmethod
    def _decompose(matrix: MatrixLike, rank: int, seed: int, center: bool) -> ReducedMatrix:
        prepared, energy = OwlReduce._prepare(matrix, center)
        if not np.isfinite(energy):
            raise NumericSlip("matrix has non-finite entries")
        u, s, vt = OwlReduce._singular_triples(prepared, rank, seed)
        ratio = np.cumsum(s ** 2) / energy if energy > 0 else np.ones_like(s)
        MonkeyHeart.log_numeric_event("SVD", {"rank": rank, "explained_ratio": round(float(ratio[-1]), 6)})
        return ReducedMatrix(u * s, s, vt, ratio, energy)

    @staticmethod
    def explained_ratio_curve(matrix: MatrixLike, max_rank: int, seed: int = 0, center: bool = False) -> pd.DataFrame:
        """(rank, sigma, cumulative_ratio) for ranks 1..max_rank; max_rank may be full rank."""
        limit = min(matrix.shape)
        if not 1 <= max_rank <= limit:
            raise ConfigSlip(f"max_rank {max_rank} outside [1, {limit}]")
        reduced = OwlReduce._decompose(matrix, max_rank, seed, center)
        return OwlReduce.curve_of(reduced)

    @staticmethod
    def curve_of(reduced: ReducedMatrix) -> pd.DataFrame:
        return pd.DataFrame({
            "rank": np.arange(1, reduced.rank + 1),
            "sigma": reduced.singular_values,
            "cumulative_ratio": reduced.explained_ratio,
        })

    @staticmethod
    def select_rank_at_ratio(curve: pd.DataFrame, target: float = 0.95) -> int:
        """Smallest rank whose cumulative ratio reaches the target."""
        if curve.empty:
            raise ConfigSlip("explained-ratio curve is empty")
        hits = curve[curve["cumulative_ratio"] >= target - RATIO_SLACK]
        if hits.empty:
            best = float(curve["cumulative_ratio"].max())
            raise NumericSlip(
                f"explained ratio {target} unreachable (max {best:.6f} at rank {int(curve['rank'].max())}); "
                "increase svd_max_rank"
            )
        return int(hits["rank"].min())

    @staticmethod
    def reduce_to_ratio(
        matrix: MatrixLike, target: float, max_rank: int, seed: int = 0, center: bool = False
    ) -> Tuple[ReducedMatrix, pd.DataFrame]:
        """Decomposes once at max_rank and slices to the selected rank."""
        limit = min(matrix.shape)
        max_rank = min(max_rank, limit)
        reduced = OwlReduce._decompose(matrix, max_rank, seed, center)
        curve = OwlReduce.curve_of(reduced)
        rank = OwlReduce.select_rank_at_ratio(curve, target)
        if rank > limit - 1:
            raise NumericSlip(f"ratio {target} needs full rank {rank}; lower svd_ratio")
        return reduced.truncate(rank), curve


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦉 OWL REDUCE V8.0 DIAGNOSTIC\n" + "=" * 40)

    diag = np.diag([3.0, 2.0, 1.0])

    print("\n[TEST 1] Singular values of diag(3,2,1) at rank 2...")
    print(f" > {OwlReduce.truncated_svd(diag, 2).singular_values}")

    print("\n[TEST 2] Explained ratio curve...")
    print(OwlReduce.explained_ratio_curve(diag, 3))

    print("\n" + "=" * 40)
    print("🦉 OWL REDUCE SYSTEM: OPERATIONAL")

"""
OWL VECTORIZE V8.0
The TF-IDF Engine for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Weights every (document, term) cell as log(1 + freq) * log(N / df) with
natural logs, stored as a compressed-row sparse matrix. Rows follow the
document order, columns follow the vocabulary's lexicographic term order.

INTEGRATIONS:
- scipy.sparse (CSR storage)
- Bananas (ConfigSlip)
- Monkey Heart (Logging)
"""

from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import sparse

from bananas import Bananas, ConfigSlip
from monkey_heart import MonkeyHeart
from rabbit_textprep import TokenizedDoc, Vocabulary


@dataclass(frozen=True)
class TfIdfMatrix:
    matrix: sparse.csr_matrix
    row_ids: Tuple[str, ...]
    terms: Tuple[str, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def to_coordinate_lines(self) -> List[str]:
        """'N C NNZ' header, then one 'row col value' line per stored cell."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"{self.shape[0]} {self.shape[1]} {self.nnz}"]
        lines.extend(f"{coo.row[i]} {coo.col[i]} {coo.data[i]:.17g}" for i in order)
        return lines


class OwlVectorize:

    @staticmethod
    def compute_tf(freq):
        """Natural log of (1 + freq)."""
        return np.log(1.0 + np.asarray(freq, dtype=float)) if np.ndim(freq) else float(np.log(1.0 + float(freq)))

    @staticmethod
    def compute_idf(n_docs: int, df, smooth: bool = False):
        """
        ln(N / df). With smooth: ln((1 + N) / (1 + df)) + 1.
        """
        counts = np.asarray(df, dtype=float)
        if np.any(counts < 1) or np.any(counts > n_docs):
            raise ConfigSlip(f"document frequency must lie in [1, {n_docs}]", {"n_docs": n_docs})
        if smooth:
            values = np.log((1.0 + n_docs) / (1.0 + counts)) + 1.0
        else:
            values = np.log(n_docs / counts)
        return values if np.ndim(df) else float(values)

    @staticmethod
    def tfidf_matrix(
        docs: Sequence[TokenizedDoc],
        vocab: Vocabulary,
        idf_smooth: bool = False,
        l2_normalize: bool = False,
    ) -> TfIdfMatrix:
        """
        One row per doc. Terms outside the vocabulary are ignored; cells whose
        weight is exactly 0 (df = N) are not stored.
        """
        index = vocab.index
        idf = OwlVectorize.compute_idf(vocab.n_docs, [vocab.df[t] for t in vocab.terms], smooth=idf_smooth)
        idf = np.atleast_1d(idf)

        rows, cols, freqs = [], [], []
        empty = 0
        for row, doc in enumerate(docs):
            counts = Counter(t for t in doc.tokens if t in index)
            if not counts:
                empty += 1
            for term, freq in sorted(counts.items()):
                rows.append(row)
                cols.append(index[term])
                freqs.append(freq)

        cols_arr = np.asarray(cols, dtype=np.int64)
        values = OwlVectorize.compute_tf(np.asarray(freqs, dtype=float)) * idf[cols_arr] if cols else np.zeros(0)
        matrix = sparse.csr_matrix(
            (values, (np.asarray(rows, dtype=np.int64), cols_arr)),
            shape=(len(docs), vocab.size),
        )
        matrix.eliminate_zeros()
        matrix.sort_indices()

        if l2_normalize:
            norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
            norms[norms == 0] = 1.0
            matrix = sparse.csr_matrix(sparse.diags(1.0 / norms) @ matrix)

        if empty:
            Bananas.notify("WARNING", f"{empty} document(s) have no in-vocabulary terms; kept as all-zero rows")
        MonkeyHeart.log_numeric_event("TFIDF", {"rows": matrix.shape[0], "columns": matrix.shape[1], "nnz": int(matrix.nnz)})
        return TfIdfMatrix(matrix, tuple(d.app_id for d in docs), vocab.terms)


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🦉 OWL VECTORIZE V8.0 DIAGNOSTIC\n" + "=" * 40)

    print("\n[TEST 1] tf / idf...")
    print(f" > tf(1)={OwlVectorize.compute_tf(1):.6f} idf(4,2)={OwlVectorize.compute_idf(4, 2):.6f}")

    print("\n[TEST 2] Matrix...")
    docs = [
        TokenizedDoc("a", ("x", "y")),
        TokenizedDoc("b", ("x",)),
        TokenizedDoc("c", ("z",)),
        TokenizedDoc("d", ("z", "w")),
    ]
    vocab = Vocabulary(("w", "x", "y", "z"), {"w": 1, "x": 2, "y": 1, "z": 2}, 4)
    tfidf = OwlVectorize.tfidf_matrix(docs, vocab)
    print("\n".join(tfidf.to_coordinate_lines()))

    print("\n" + "=" * 40)
    print("🦉 OWL VECTORIZE SYSTEM: OPERATIONAL")

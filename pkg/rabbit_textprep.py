"""
RABBIT TEXTPREP V8.0
The Description Cleaner & Vocabulary Builder for Just-In-Niche.

AUTHOR: Justin (King Kong)
DATE: 2026-10-16
VERSION: 8.0.0

DESCRIPTION:
Turns raw app descriptions into stemmed token lists, throws out the ones that
cannot be compared (empty, not English, too short, too long), and builds the
document-frequency vocabulary the TF-IDF matrix is indexed by.

CORE CAPABILITIES:
1. Cleaning: basic-Latin language gate, punctuation/numeral strip, Porter stem.
2. Word-count filter with before/after histograms.
3. Vocabulary build (mergeable reduction) and df-threshold pruning.
4. Threshold sweep (column count over a grid of bounds).

INTEGRATIONS:
- nltk (Porter stemmer)
- Bananas (ConfigSlip / DataSlip)
- Monkey Heart (Logging)
"""

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from nltk.stem.porter import PorterStemmer

from bananas import Bananas, ConfigSlip, DataSlip
from monkey_heart import MonkeyHeart


LATIN_RATIO_FLOOR = 0.8
NON_WORD = re.compile(r"[^a-z]+")
_STEMMER = PorterStemmer()


@dataclass(frozen=True)
class TokenizedDoc:
    app_id: str
    tokens: Tuple[str, ...]
    excluded: Optional[str] = None

    @property
    def n_words(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Vocabulary:
    """Terms in lexicographic order with their document frequencies."""

    terms: Tuple[str, ...]
    df: Mapping[str, int]
    n_docs: int

    @property
    def size(self) -> int:
        return len(self.terms)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {term: column for column, term in enumerate(self.terms)}

    def ratios(self) -> np.ndarray:
        return np.array([self.df[t] for t in self.terms], dtype=float) / self.n_docs


@lru_cache(maxsize=200_000)
def _stem(word: str) -> str:
    # stem to a fixpoint so cleaning an already-cleaned stream changes nothing
    current = word
    for _ in range(10):
        stemmed = _STEMMER.stem(current)
        if stemmed == current or not stemmed:
            break
        current = stemmed
    return current


# ==============================================================================
# 🐰 RABBIT TEXTPREP CLASS
# ==============================================================================

class RabbitTextprep:

    @staticmethod
    def clean_description(text: Optional[str], app_id: str = "") -> TokenizedDoc:
        """
        Language gate, then lowercase, strip accents, punctuation and
        numerals, split on whitespace and stem each word.
        """
        if text is None or not str(text).strip():
            return TokenizedDoc(app_id, (), "empty")

        letters = [ch for ch in str(text) if ch.isalpha()]
        if not letters:
            return TokenizedDoc(app_id, (), "empty")
        latin = sum(1 for ch in letters if ch.isascii())
        if latin / len(letters) < LATIN_RATIO_FLOOR:
            return TokenizedDoc(app_id, (), "non-english")

        folded = unicodedata.normalize("NFKD", str(text).lower())
        folded = "".join(ch for ch in folded if not unicodedata.combining(ch))
        words = NON_WORD.sub(" ", folded).split()
        tokens = tuple(stem for stem in (_stem(w) for w in words) if stem)
        if not tokens:
            return TokenizedDoc(app_id, (), "empty")
        return TokenizedDoc(app_id, tokens)

    @staticmethod
    def clean_corpus(descriptions: Mapping[str, Optional[str]]) -> List[TokenizedDoc]:
        """Cleans every description, in app_id order."""
        docs = [RabbitTextprep.clean_description(descriptions[a], a) for a in sorted(descriptions)]
        reasons = Counter(d.excluded for d in docs if d.excluded)
        MonkeyHeart.log_numeric_event("CLEAN", {"docs": len(docs), **{f"excluded_{k}": v for k, v in sorted(reasons.items())}})
        return docs

    @staticmethod
    def partition_by_length(
        docs: Iterable[TokenizedDoc], min_words: int = 20, max_words: int = 400
    ) -> Tuple[List[TokenizedDoc], List[TokenizedDoc]]:
        """Bounds are inclusive. Dropped docs carry reason too-short / too-long."""
        kept, dropped = [], []
        for doc in docs:
            if doc.excluded:
                dropped.append(doc)
            elif doc.n_words < min_words:
                dropped.append(TokenizedDoc(doc.app_id, doc.tokens, "too-short"))
            elif doc.n_words > max_words:
                dropped.append(TokenizedDoc(doc.app_id, doc.tokens, "too-long"))
            else:
                kept.append(doc)
        return kept, dropped

    @staticmethod
    def filter_by_length(docs: Iterable[TokenizedDoc], min_words: int = 20, max_words: int = 400) -> List[TokenizedDoc]:
        return RabbitTextprep.partition_by_length(docs, min_words, max_words)[0]

    @staticmethod
    def word_count_histogram(docs: Sequence[TokenizedDoc], bin_width: int = 25) -> pd.DataFrame:
        """(bin_start, bin_end, count) with half-open bins [start, end)."""
        counts = np.array([d.n_words for d in docs if not d.excluded], dtype=int)
        top = int(counts.max()) if counts.size else 0
        edges = np.arange(0, top + bin_width + 1, bin_width)
        # last edge lies above the max count, so every bin is effectively half-open
        hist, _ = np.histogram(counts, bins=edges)
        return pd.DataFrame({"bin_start": edges[:-1], "bin_end": edges[1:], "count": hist})

    @staticmethod
    def exclusion_log(dropped: Iterable[TokenizedDoc]) -> pd.DataFrame:
        table = sorted((d.app_id, d.excluded) for d in dropped)
        return pd.DataFrame(table, columns=["app_id", "reason"])

    # ==========================================================================
    # 📚 VOCABULARY
    # ==========================================================================

    @staticmethod
    def build_vocabulary(docs: Sequence[TokenizedDoc]) -> Vocabulary:
        """All unique tokens with document frequencies."""
        docs = [d for d in docs if not d.excluded]
        if not docs:
            raise DataSlip("cannot build a vocabulary from zero documents")
        partial = Counter()
        for doc in docs:
            partial.update(set(doc.tokens))
        vocab = Vocabulary(tuple(sorted(partial)), dict(partial), len(docs))
        MonkeyHeart.log_numeric_event("VOCAB", {"docs": vocab.n_docs, "terms": vocab.size})
        return vocab

    @staticmethod
    def merge_vocabularies(left: Vocabulary, right: Vocabulary) -> Vocabulary:
        """Associative merge of vocabularies built on disjoint document sets."""
        df = Counter(left.df)
        df.update(right.df)
        return Vocabulary(tuple(sorted(df)), dict(df), left.n_docs + right.n_docs)

    @staticmethod
    def _check_band(threshold_min: float, threshold_max: float) -> None:
        if not (0.0 <= threshold_min < threshold_max <= 1.0):
            raise ConfigSlip(f"need 0 <= threshold_min < threshold_max <= 1, got ({threshold_min}, {threshold_max})")

    @staticmethod
    def prune_vocabulary(vocab: Vocabulary, threshold_min: float = 0.004, threshold_max: float = 0.7) -> Vocabulary:
        """Keeps terms with threshold_min <= df/N <= threshold_max."""
        RabbitTextprep._check_band(threshold_min, threshold_max)
        terms = tuple(
            t for t in vocab.terms
            if threshold_min <= vocab.df[t] / vocab.n_docs <= threshold_max
        )
        if not terms:
            raise DataSlip("vocabulary empty after pruning", {"threshold_min": threshold_min, "threshold_max": threshold_max})
        pruned = Vocabulary(terms, {t: vocab.df[t] for t in terms}, vocab.n_docs)
        MonkeyHeart.log_numeric_event("PRUNE", {"columns": pruned.size, "dropped": vocab.size - pruned.size})
        return pruned

    @staticmethod
    def threshold_sweep(vocab: Vocabulary, min_grid: Sequence[float], max_grid: Sequence[float]) -> pd.DataFrame:
        """Retained column count for every (threshold_min, threshold_max) pair."""
        if not len(min_grid) or not len(max_grid):
            raise ConfigSlip("threshold sweep needs nonempty grids")
        ratios = np.array([vocab.df[t] / vocab.n_docs for t in vocab.terms], dtype=float)
        table = []
        for lo in min_grid:
            for hi in max_grid:
                if not lo < hi:
                    Bananas.notify("WARNING", f"sweep point ({lo}, {hi}) skipped: min >= max")
                    continue
                table.append({
                    "threshold_min": lo,
                    "threshold_max": hi,
                    "columns": int(((ratios >= lo) & (ratios <= hi)).sum()),
                })
        return pd.DataFrame(table, columns=["threshold_min", "threshold_max", "columns"])


# ==============================================================================
# 🧪 SELF-DIAGNOSTIC (The Friday Test)
# ==============================================================================
if __name__ == "__main__":
    print("\n🐰 RABBIT TEXTPREP V8.0 DIAGNOSTIC\n" + "=" * 40)

    print("\n[TEST 1] Cleaning...")
    print(f" > {RabbitTextprep.clean_description('Running, runs, ran 123!').tokens}")

    print("\n[TEST 2] Language gate...")
    print(f" > {RabbitTextprep.clean_description('天气预报应用').excluded}")

    print("\n[TEST 3] Vocabulary...")
    docs = [TokenizedDoc("1", ("a", "b")), TokenizedDoc("2", ("b", "c"))]
    vocab = RabbitTextprep.build_vocabulary(docs)
    print(f" > terms={vocab.terms} df={vocab.df}")

    print("\n" + "=" * 40)
    print("🐰 RABBIT TEXTPREP SYSTEM: OPERATIONAL")

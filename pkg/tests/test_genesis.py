"""Synthetic panel generator: determinism, planted structure and recovery."""

import json

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from genesis import GenesisProtocol, SyntheticSpec
from owl_cluster import OwlCluster
from owl_econometrics import OwlEconometrics, RegressionSpec
from owl_reduce import OwlReduce
from owl_vectorize import OwlVectorize
from rabbit_corpus import RabbitCorpus
from rabbit_textprep import RabbitTextprep


def _panel(corpus):
    lines = enumerate(corpus.lines, start=1)
    return RabbitCorpus.parse_lines(lines, top_firms=corpus.top_firms)


def _imputed(panel):
    panel = RabbitCorpus.impute_stable(panel)
    panel = RabbitCorpus.impute_monetization_flags(panel)
    panel = RabbitCorpus.impute_locf(panel)
    return RabbitCorpus.drop_flagged(panel)


class TestSpec:

    def test_default_shares_unequal(self):
        shares = SyntheticSpec(n_topics=3).shares()
        np.testing.assert_allclose(shares, [4 / 9, 3 / 9, 2 / 9])

    def test_shares_from_string(self):
        spec = SyntheticSpec(n_topics=2, topic_shares="0.25, 0.75")
        assert spec.topic_shares == (0.25, 0.75)

    @pytest.mark.parametrize(
        "fields",
        [
            {"n_apps": 3},
            {"min_doc_words": 50, "max_doc_words": 40},
            {"n_firms": 2, "n_top_firms": 3},
            {"n_topics": 2, "topic_shares": (0.5, 0.6)},
            {"n_topics": 3, "topic_shares": (0.5, 0.5)},
            {"colour": "red"},
        ],
    )
    def test_rejects_inconsistent_fields(self, fields):
        with pytest.raises(ValidationError):
            SyntheticSpec(**fields)

    def test_fingerprint_tracks_fields(self):
        assert SyntheticSpec(seed=1).fingerprint() == SyntheticSpec(seed=1).fingerprint()
        assert SyntheticSpec(seed=1).fingerprint() != SyntheticSpec(seed=2).fingerprint()


class TestGenerate:

    def test_deterministic(self):
        spec = SyntheticSpec(n_apps=30, n_months=3, missing_rate=0.2, seed=4)
        first, second = GenesisProtocol.generate(spec), GenesisProtocol.generate(spec)
        assert first.lines == second.lines
        assert first.manifest == second.manifest

    def test_rectangular_record_count(self):
        spec = SyntheticSpec(n_apps=25, n_months=4, death_rate=0.3, gap_rate=0.2, seed=1)
        corpus = GenesisProtocol.generate(spec)
        assert len(corpus.lines) == 25 * 4 == corpus.manifest["records"]
        assert sum(corpus.manifest["topic_sizes"]) == 25

    def test_every_line_parses(self):
        corpus = GenesisProtocol.generate(SyntheticSpec(n_apps=20, n_months=2, missing_rate=0.3, seed=2))
        panel = _panel(corpus)
        assert panel.n_apps == 20
        assert panel.n_months == 2

    def test_complete_panel_needs_no_imputation(self):
        corpus = GenesisProtocol.generate(SyntheticSpec(n_apps=20, n_months=3, seed=3))
        panel = _panel(corpus)
        imputed, deleted = _imputed(panel)
        assert deleted.empty
        pd.testing.assert_frame_equal(imputed.frame, panel.frame)

    def test_deleted_apps_match_manifest(self):
        spec = SyntheticSpec(n_apps=60, n_months=2, deletion_rate=0.2, seed=5)
        corpus = GenesisProtocol.generate(spec)
        _, deleted = _imputed(_panel(corpus))
        assert deleted["app_id"].tolist() == sorted(corpus.manifest["deleted_apps"])
        assert set(deleted["reason"]) <= {"installs_lb absent at month 0"}

    def test_death_months_match_manifest(self):
        spec = SyntheticSpec(n_apps=40, n_months=5, death_rate=0.4, seed=6)
        corpus = GenesisProtocol.generate(spec)
        panel = _panel(corpus)
        death = RabbitCorpus.detect_app_death(panel)
        frame = panel.frame.assign(app_death=death.to_numpy())
        dead = corpus.manifest["dead_apps"]
        assert dead
        for app_id, month in dead.items():
            flags = frame.loc[frame["app_id"] == app_id, "app_death"].tolist()
            assert flags == [m >= month for m in range(5)]
        survivor = next(a for a in panel.app_ids if a not in dead)
        assert not frame.loc[frame["app_id"] == survivor, "app_death"].any()

    def test_short_descriptions_fall_below_length_floor(self):
        corpus = GenesisProtocol.generate(SyntheticSpec(n_apps=40, n_months=1, short_rate=0.25, seed=7))
        descriptions = {}
        for line in corpus.lines:
            record = json.loads(line)
            descriptions[record["app_id"]] = record["description"]
        docs = RabbitTextprep.clean_corpus(descriptions)
        _, dropped = RabbitTextprep.partition_by_length(docs)
        assert sorted(d.app_id for d in dropped) == sorted(corpus.manifest["short_apps"])

    def test_month0_flag_gaps_filled_from_later_months(self):
        spec = SyntheticSpec(n_apps=60, n_months=3, flag_gap_rate=0.3, seed=11)
        corpus = GenesisProtocol.generate(spec)
        gapped = set(corpus.manifest["flag_gap_apps"])
        assert gapped
        panel = _panel(corpus)
        frame = panel.frame.set_index(["app_id", "month"])
        for column in ("contains_ads", "offers_iap"):
            month0 = frame.xs(0, level="month")[column]
            assert set(month0.index[month0.isna()]) == gapped
            assert frame.loc[frame.index.get_level_values("month") > 0, column].notna().all()

        filled = RabbitCorpus.impute_monetization_flags(panel).frame.set_index(["app_id", "month"])
        for app_id in gapped:
            for column in ("contains_ads", "offers_iap"):
                assert filled.loc[(app_id, 0), column] == frame.loc[(app_id, 1), column]

    def test_fields_absent_everywhere_flag_deletion(self):
        spec = SyntheticSpec(n_apps=60, n_months=3, absent_rate=0.2, seed=12)
        corpus = GenesisProtocol.generate(spec)
        absent = corpus.manifest["absent_fields"]
        assert absent
        _, deleted = _imputed(_panel(corpus))
        reasons = dict(zip(deleted["app_id"], deleted["reason"]))
        assert reasons == {a: f"{field} absent in all months" for a, field in absent.items()}

    def test_damage_rates_do_not_shift_other_draws(self):
        plain = GenesisProtocol.generate(SyntheticSpec(n_apps=30, n_months=2, seed=13))
        damaged = GenesisProtocol.generate(SyntheticSpec(n_apps=30, n_months=2, flag_gap_rate=0.5, seed=13))
        assert plain.manifest["niche_true"] == damaged.manifest["niche_true"]
        for before, after in zip(plain.lines, damaged.lines):
            record = json.loads(after)
            assert {k: v for k, v in json.loads(before).items() if k in record} == record

    def test_ignite_writes_headed_files(self, tmp_path):
        spec = SyntheticSpec(n_apps=10, n_months=2, n_top_firms=2, seed=8)
        written = GenesisProtocol.ignite(spec, tmp_path)
        assert set(written) == {"panel", "top_firms", "manifest"}
        header = written["panel"].read_text(encoding="utf-8").splitlines()[0]
        assert header.startswith(f"# config={spec.fingerprint()} ")
        panel = RabbitCorpus.ingest_jsonl(written["panel"])
        assert panel.n_apps == 10
        assert RabbitCorpus.load_top_firms(written["top_firms"]) == {"Studio 00", "Studio 01"}
        manifest = json.loads(written["manifest"].read_text(encoding="utf-8"))
        assert manifest["_meta"]["config"] == spec.fingerprint()


class TestRecovery:

    def test_topics_recovered_as_clusters(self):
        spec = SyntheticSpec(n_apps=150, n_months=1, n_topics=3, seed=9)
        corpus = GenesisProtocol.generate(spec)
        descriptions = {json.loads(line)["app_id"]: json.loads(line)["description"] for line in corpus.lines}
        docs = RabbitTextprep.filter_by_length(RabbitTextprep.clean_corpus(descriptions))
        vocab = RabbitTextprep.prune_vocabulary(RabbitTextprep.build_vocabulary(docs))
        tfidf = OwlVectorize.tfidf_matrix(docs, vocab, l2_normalize=True)
        reduced, _ = OwlReduce.reduce_to_ratio(tfidf.matrix, 0.9, min(tfidf.shape))
        model = OwlCluster.kmeans_fit(reduced.embedding, 3, seed=0)

        topics = np.array([corpus.manifest["topics"][a] for a in tfidf.row_ids])
        for cluster in range(3):
            assert len(set(topics[model.labels == cluster])) == 1

        index = OwlCluster.niche_index(model, tfidf.row_ids)
        expected = pd.Series(corpus.manifest["niche_true"])
        np.testing.assert_allclose(index.scores.to_numpy(), expected[list(tfidf.row_ids)].to_numpy())

    def test_planted_coefficients_recovered(self):
        spec = SyntheticSpec(n_apps=1500, n_months=1, seed=10)
        corpus = GenesisProtocol.generate(spec)
        panel, _ = _imputed(_panel(corpus))
        rows = RabbitCorpus.derive_variables(panel, corpus.manifest["niche_true"])
        fit = OwlEconometrics.fit_spec(rows, RegressionSpec(outcome="log_price", controls=("log_reviews",)))
        planted = corpus.manifest["planted"]
        for term in ("niche", "log_reviews"):
            gap = abs(fit.coefficients[term] - planted[term])
            assert gap <= 3.0 * fit.std_errors[term], term

    def test_recovery_rate_over_replications(self):
        spec_model = RegressionSpec(outcome="log_price", controls=("log_reviews",))
        hits = 0
        for seed in range(200):
            corpus = GenesisProtocol.generate(SyntheticSpec(n_apps=200, n_months=1, seed=seed))
            panel, _ = _imputed(_panel(corpus))
            rows = RabbitCorpus.derive_variables(panel, corpus.manifest["niche_true"])
            fit = OwlEconometrics.fit_spec(rows, spec_model)
            planted = corpus.manifest["planted"]
            hits += all(
                abs(fit.coefficients[term] - planted[term]) <= 3.0 * fit.std_errors[term]
                for term in ("niche", "log_reviews")
            )
        assert hits >= 190

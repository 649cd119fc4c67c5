"""
JUST-IN-NICHE V1.0 | THE COMMAND DECK
One command per pipeline stage, chained through artifacts on disk:
ingest -> impute -> niche -> describe -> regress -> report,
plus the theory calculator (equilibrium) and the synthetic seeder (gen-synthetic).

Every stage command accepts --config FILE and one flag per PipelineConfig
field (kebab-case). Exit codes: 0 ok, 2 config / missing upstream,
3 data, 4 numeric.
"""

import argparse
import sys
from datetime import date
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from pydantic import ValidationError

from bananas import BananaSlip, Bananas, ConfigSlip
from genesis import GenesisProtocol, SyntheticSpec
from monkey_brain import TOOL_NAME, TOOL_VERSION, MonkeyBrain
from monkey_heart import MonkeyHeart
from owl_cluster import AUDIT_RANGES, OwlCluster
from owl_econometrics import FitResult, OwlEconometrics, RegressionSpec
from owl_equilibrium import BorensteinParams, OwlEquilibrium, SZParams
from owl_reduce import OwlReduce
from owl_vectorize import OwlVectorize
from rabbit_corpus import CONTROLS, OUTCOMES, PanelDataset, RabbitCorpus
from rabbit_textprep import RabbitTextprep
from raptor_admin import PipelineConfig, RaptorAdmin


TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"
SAMPLES = (("FULL", "full"), ("ML", "market_leader"), ("MF", "market_follower"))
SWEEP_MIN_GRID = (0.001, 0.002, 0.004, 0.008, 0.016)
SWEEP_MAX_GRID = (0.5, 0.6, 0.7, 0.8, 0.9)
THETA_GRID = tuple(np.round(np.linspace(0.5, 1.0, 11), 10))
RATIO_GRID = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0)


# ==============================================================================
# 🔧 SHARED PLUMBING
# ==============================================================================

def _load_config(args: argparse.Namespace) -> PipelineConfig:
    file_values = RaptorAdmin.load_config_file(args.config) if args.config else {}
    cli_values = {name: getattr(args, name, None) for name in PipelineConfig.model_fields}
    return RaptorAdmin.build_config(file_values, cli_values)


def _brain(config: PipelineConfig) -> MonkeyBrain:
    return MonkeyBrain(config.output_dir, RaptorAdmin.config_hash(config))


def _load_panel(brain: MonkeyBrain, name: str, command: str) -> PanelDataset:
    meta = brain.read_json("panel_meta.json", "ingest")
    waves = {int(m): date.fromisoformat(d) for m, d in meta["wave_dates"].items()}
    lines = brain.read_lines(name, command)
    # line 1 of the file is the header comment
    return RabbitCorpus.parse_lines(enumerate(lines, start=2), waves, meta["top_firms"])


def _descriptions(panel: PanelDataset) -> Dict[str, Optional[str]]:
    frame = panel.frame
    first = frame.dropna(subset=["description"]).groupby("app_id", sort=True)["description"].first()
    texts = {str(a): None for a in panel.app_ids}
    texts.update({str(a): str(t) for a, t in first.items()})
    return texts


def _labelled(frame: pd.DataFrame, **labels: Any) -> pd.DataFrame:
    for position, (key, value) in enumerate(labels.items()):
        frame.insert(position, key, value)
    return frame


# ==============================================================================
# 📥 INGEST / IMPUTE
# ==============================================================================

def cmd_ingest(config: PipelineConfig) -> int:
    if config.input is None:
        raise ConfigSlip("ingest needs --input (or NICHE_INPUT)")
    waves = RabbitCorpus.load_wave_dates(config.wave_dates) if config.wave_dates else None
    top_firms = RabbitCorpus.load_top_firms(config.top_firms) if config.top_firms else frozenset()
    panel = RabbitCorpus.ingest_jsonl(config.input, waves, top_firms)

    brain = _brain(config)
    brain.write_lines("panel_raw.jsonl", RabbitCorpus.panel_to_lines(panel))
    brain.write_json("panel_meta.json", {
        "wave_dates": {str(m): d.isoformat() for m, d in sorted(panel.wave_dates.items())},
        "top_firms": sorted(panel.top_firms),
    })
    frame = panel.frame
    scraped = frame[frame["scraped"]]
    brain.write_json("ingest_summary.json", {
        "apps": panel.n_apps,
        "months": panel.n_months,
        "rows": len(frame),
        "scraped_rows": len(scraped),
        "missing_in_scraped_rows": {c: int(scraped[c].isna().sum()) for c in frame.columns if c not in ("app_id", "month", "scraped")},
    })
    Bananas.notify("SUCCESS", f"Ingested {panel.n_apps} apps over {panel.n_months} months")
    return 0


def cmd_impute(config: PipelineConfig) -> int:
    brain = _brain(config)
    panel = _load_panel(brain, "panel_raw.jsonl", "ingest")
    panel = RabbitCorpus.impute_stable(panel)
    panel = RabbitCorpus.impute_monetization_flags(panel)
    panel = RabbitCorpus.impute_locf(panel)
    panel, deleted = RabbitCorpus.drop_flagged(panel)

    brain.write_lines("panel_imputed.jsonl", RabbitCorpus.panel_to_lines(panel))
    brain.write_csv("deleted_apps.csv", deleted)
    Bananas.notify("SUCCESS", f"Imputed panel: {panel.n_apps} apps kept, {len(deleted)} deleted")
    return 0


# ==============================================================================
# 🏝️ NICHE
# ==============================================================================

def cmd_niche(config: PipelineConfig) -> int:
    brain = _brain(config)
    panel = _load_panel(brain, "panel_imputed.jsonl", "impute")
    texts = _descriptions(panel)

    docs = RabbitTextprep.clean_corpus(texts)
    kept, dropped = RabbitTextprep.partition_by_length(docs, config.min_words, config.max_words)
    brain.write_csv("exclusions.csv", RabbitTextprep.exclusion_log(dropped))
    brain.write_csv("word_counts_before.csv", RabbitTextprep.word_count_histogram(docs))
    brain.write_csv("word_counts_after.csv", RabbitTextprep.word_count_histogram(kept))

    vocab = RabbitTextprep.build_vocabulary(kept)
    brain.write_csv("threshold_sweep.csv", RabbitTextprep.threshold_sweep(vocab, SWEEP_MIN_GRID, SWEEP_MAX_GRID))
    pruned = RabbitTextprep.prune_vocabulary(vocab, config.threshold_min, config.threshold_max)

    tfidf = OwlVectorize.tfidf_matrix(kept, pruned, config.idf_smooth, config.l2_normalize)
    if config.dump_matrix:
        brain.write_lines("tfidf_matrix.txt", tfidf.to_coordinate_lines())

    max_rank = config.svd_max_rank or min(tfidf.shape)
    reduced, curve = OwlReduce.reduce_to_ratio(tfidf.matrix, config.svd_ratio, max_rank, config.seed, config.svd_center)
    brain.write_csv("svd_curve.csv", curve)
    embedding = reduced.embedding

    default_coarse, default_fine = OwlCluster.default_k_grids(embedding.shape[0])
    fit_args = dict(seed=config.seed, n_restarts=config.n_restarts, max_iter=config.max_iter, tol=config.tol)
    coarse = OwlCluster.elbow_scan(embedding, config.k_coarse or default_coarse, **fit_args)
    fine = OwlCluster.elbow_scan(embedding, config.k_fine or default_fine, **fit_args)
    brain.write_csv("elbow_coarse.csv", coarse)
    brain.write_csv("elbow_fine.csv", fine)

    if config.chosen_k is not None:
        chosen_k, selection = config.chosen_k, "configured"
    else:
        best = fine.sort_values(["silhouette", "k"], ascending=[False, True], kind="stable").iloc[0]
        chosen_k, selection = int(best["k"]), "max-silhouette"

    audits: List[str] = []
    robustness: List[pd.DataFrame] = []
    chosen_index = None
    cluster_sizes: Dict[int, int] = {}
    for k in [chosen_k] + [k for k in config.k_alternatives if k != chosen_k]:
        model = OwlCluster.kmeans_fit(embedding, k, **fit_args)
        index = OwlCluster.niche_index(model, tfidf.row_ids)
        histogram = OwlCluster.niche_histogram(index.scores.to_numpy())
        robustness.append(_labelled(histogram, k=k))
        for label, index_range in AUDIT_RANGES.items():
            report = OwlCluster.sample_cluster_descriptions(
                model, index, texts, index_range, config.audit_clusters, config.audit_docs, config.seed,
            )
            audits.append(report.render(f"k={k} {label}"))
        if k == chosen_k:
            chosen_index, cluster_sizes = index, dict(index.cluster_sizes)
            brain.write_csv("niche.csv", index.to_frame())
            brain.write_csv("niche_histogram.csv", histogram)

    brain.write_csv("niche_robustness.csv", pd.concat(robustness, ignore_index=True))
    brain.write_text("cluster_audit.txt", "\n\n".join(audits))
    brain.write_json("niche_summary.json", {
        "documents": len(docs),
        "documents_kept": len(kept),
        "vocabulary": vocab.size,
        "vocabulary_pruned": pruned.size,
        "tfidf_nnz": tfidf.nnz,
        "svd_rank": reduced.rank,
        "explained_ratio": float(reduced.explained_ratio[-1]),
        "chosen_k": chosen_k,
        "k_selection": selection,
        "cluster_sizes": {str(c): s for c, s in sorted(cluster_sizes.items())},
        "mean_niche": float(chosen_index.scores.mean()),
    })
    Bananas.notify("SUCCESS", f"Niche index for {len(kept)} apps at k={chosen_k} (rank {reduced.rank})")
    return 0


# ==============================================================================
# 📊 DESCRIBE
# ==============================================================================

def cmd_describe(config: PipelineConfig) -> int:
    brain = _brain(config)
    panel = _load_panel(brain, "panel_imputed.jsonl", "impute")
    niche = brain.read_csv("niche.csv", "niche", dtype={"app_id": str}).set_index("app_id")["niche"]
    rows = RabbitCorpus.derive_variables(panel, niche, anchor_date=config.anchor_date)
    brain.write_csv("derived_rows.csv", rows)

    section = RabbitCorpus.cross_section(rows)
    brain.write_csv("summary.csv", RabbitCorpus.summarize(section, "sample"))
    brain.write_csv("summary_category.csv", RabbitCorpus.summarize(section, "category"))
    brain.write_csv("sample_counts.csv", RabbitCorpus.sample_counts(rows))

    raw = _load_panel(brain, "panel_raw.jsonl", "ingest")
    complete = RabbitCorpus.raw_complete_cases(raw, int(section["month"].iloc[0]) if len(section) else None)
    if len(complete):
        raw_columns = [c for c in complete.columns if c != "app_id"]
        brain.write_csv("summary_raw.csv", RabbitCorpus.summarize(complete, "all", raw_columns, ()))
    else:
        Bananas.notify("WARNING", "no complete raw rows in the cross-section month; summary_raw.csv skipped")

    independent = ["niche"] + list(CONTROLS)
    dependent = ["niche"] + list(OUTCOMES)
    brain.write_csv("corr_x.csv", RabbitCorpus.correlation_matrix(section, independent).reset_index(names="variable"))
    brain.write_csv("corr_y.csv", RabbitCorpus.correlation_matrix(section, dependent).reset_index(names="variable"))
    Bananas.notify("SUCCESS", f"Derived {len(rows)} analysis rows; cross-section has {len(section)} apps")
    return 0


# ==============================================================================
# 📐 REGRESS
# ==============================================================================

def _fit_label(outcome: str, sample: str) -> str:
    return f"{outcome} ({sample})"


def cmd_regress(config: PipelineConfig) -> int:
    brain = _brain(config)
    rows = brain.read_csv("derived_rows.csv", "describe", dtype={"app_id": str})
    se_mode = config.se_mode

    scores, step_tables, step_markdown = [], [], []
    choices: Dict[str, Dict[str, Any]] = {}
    fits: Dict[str, FitResult] = {}
    controls_for: Dict[Tuple[str, str], Tuple[str, ...]] = {}

    for outcome in OUTCOMES:
        for sample, sample_filter in SAMPLES:
            spec = RegressionSpec(outcome=outcome, sample_filter=sample_filter)
            try:
                ladder = OwlEconometrics.step_ladder(rows, spec, se_mode, config.workers)
            except BananaSlip as slip:
                Bananas.notify("WARNING", f"step ladder {outcome}/{sample} skipped: {slip}")
                continue
            for step in ladder:
                scores.append(_labelled(step.scores.copy(), outcome=outcome, sample=sample))
            choice = OwlEconometrics.select_step_model(ladder, config.near_tie_margin)
            chosen = ladder[choice.step]
            controls_for[(outcome, sample)] = chosen.controls
            choices[_fit_label(outcome, sample)] = {
                "step": choice.step,
                "aic_step": choice.aic_step,
                "bic_step": choice.bic_step,
                "bic_agrees": choice.bic_agrees,
                "controls": list(chosen.controls),
            }
            fits[f"step:{outcome}:{sample}"] = chosen.fit

            table = OwlEconometrics.regression_table(
                {f"Step {s.step}": s.fit for s in ladder}, star_thresholds=config.star_thresholds,
            )
            step_tables.append(_labelled(table.copy(), outcome=outcome, sample=sample))
            step_markdown.append(
                f"### {outcome} ({sample}): chosen step {choice.step}"
                f"{'' if choice.bic_agrees else f' (BIC prefers step {choice.bic_step})'}\n\n"
                + OwlEconometrics.to_markdown(table)
            )

    if not scores:
        raise ConfigSlip("no regression could be fitted; check derived_rows.csv")
    brain.write_csv("step_scores.csv", pd.concat(scores, ignore_index=True))
    brain.write_csv("step_models.csv", pd.concat(step_tables, ignore_index=True))
    brain.write_text("step_models.md", "\n\n".join(step_markdown))

    interaction_runs = [
        ("period", True, list(SAMPLES)),
        ("category", False, list(SAMPLES)),
        ("ml", False, [SAMPLES[0]]),
    ]
    for scheme, pooled, samples in interaction_runs:
        scheme_fits: Dict[str, FitResult] = {}
        for outcome in OUTCOMES:
            for sample, sample_filter in samples:
                controls = controls_for.get((outcome, sample), controls_for.get((outcome, "FULL")))
                if controls is None:
                    continue
                spec = RegressionSpec(
                    outcome=outcome, controls=controls, interactions=(scheme,),
                    sample_filter=sample_filter, pooled=pooled,
                )
                try:
                    if pooled:
                        fit = OwlEconometrics.pooled_ols(rows, spec, se_mode)
                    else:
                        fit = OwlEconometrics.fit_spec(rows, spec, se_mode)
                except BananaSlip as slip:
                    Bananas.notify("WARNING", f"{scheme} x niche {outcome}/{sample} skipped: {slip}")
                    continue
                scheme_fits[_fit_label(outcome, sample)] = fit
                fits[f"{scheme}:{outcome}:{sample}"] = fit
        if not scheme_fits:
            continue
        table = OwlEconometrics.regression_table(scheme_fits, star_thresholds=config.star_thresholds)
        brain.write_csv(f"interaction_{scheme}.csv", table)
        brain.write_text(f"interaction_{scheme}.md", OwlEconometrics.to_markdown(table))

    brain.write_json("fits.json", {
        "se_mode": se_mode,
        "choices": choices,
        "fits": {key: fit.to_dict() for key, fit in sorted(fits.items())},
    })
    Bananas.notify("SUCCESS", f"Regressions done: {len(choices)} step ladders, {len(fits)} fits")
    return 0


# ==============================================================================
# ⚖️ EQUILIBRIUM
# ==============================================================================

SZ_FLAGS = {"theta": "theta", "l_alpha": "l_alpha", "l_beta": "l_beta", "c": "c", "discrimination": "discrimination"}
B_FLAGS = {
    "n_brands": "n_brands", "A": "A", "c_strength": "c_strength", "L": "L", "F": "F", "m": "m",
    "segment_share": "segment_share", "low_value_ratio": "low_value_ratio",
}


def _model_values(args: argparse.Namespace, mapping: Dict[str, str]) -> Dict[str, Any]:
    return {field: getattr(args, attr) for field, attr in mapping.items() if getattr(args, attr, None) is not None}


def cmd_equilibrium(config: PipelineConfig, args: argparse.Namespace) -> int:
    brain = _brain(config)
    if args.model == "sz":
        params = SZParams(**_model_values(args, SZ_FLAGS))
        prices, profits = OwlEquilibrium.sz_equilibrium(params)
        report = OwlEquilibrium.sz_verify_nash(params, prices)
        payload: Dict[str, Any] = {
            "model": "sz",
            "params": params.model_dump(),
            "prices": prices.model_dump(),
            "profits": {"A": profits[0], "B": profits[1]},
            "realized_profits": dict(zip(("A", "B"), OwlEquilibrium.sz_profits(params, prices))),
            "verification": report.to_dict(),
        }
        if params.discrimination:
            gradient = OwlEquilibrium.sz_profit_theta_gradient(params)
            payload["theta_gradient"] = {"A": gradient[0], "B": gradient[1]}
            payload["market_leader_view"] = OwlEquilibrium.sz_market_leader_view(params)
        brain.write_json("equilibrium_sz.json", payload)
        if args.sweep == "theta":
            brain.write_csv("sweep_sz_theta.csv", OwlEquilibrium.sz_theta_sweep(params, THETA_GRID))
        elif args.sweep == "ratio":
            brain.write_csv("sweep_sz_ratio.csv", OwlEquilibrium.sz_loyalty_ratio_sweep(params, RATIO_GRID))
        Bananas.notify("SUCCESS", f"SZ prices A={prices.p_A:.6g} B={prices.p_B:.6g}; certified={report.certified}")
    else:
        params = BorensteinParams(**_model_values(args, B_FLAGS))
        result = OwlEquilibrium.b_symmetric_equilibrium(params, args.two_price)
        payload = {
            "model": "borenstein",
            "params": params.model_dump(),
            "equilibrium": result.to_dict(),
            "own_price_gradient": OwlEquilibrium.b_profit_gradient(params, result.price)
            if not args.two_price else None,
            "kink_price": OwlEquilibrium.b_kink_price(params, result.price),
        }
        if args.A_niche is not None:
            payload["niche_vs_common"] = OwlEquilibrium.b_niche_vs_common(params, args.A_niche, params.A, result.price)
        brain.write_json("equilibrium_borenstein.json", payload)
        if args.sweep == "brands":
            table = []
            for n_brands in range(2, 11):
                point = BorensteinParams(**{**params.model_dump(), "n_brands": n_brands})
                table.append({"n_brands": n_brands, **OwlEquilibrium.b_symmetric_equilibrium(point, args.two_price).to_dict()})
            brain.write_csv("sweep_borenstein_brands.csv", pd.DataFrame(table))
        Bananas.notify("SUCCESS", f"Symmetric price {result.price:.6g} ({result.regime})")
    return 0


# ==============================================================================
# 📰 REPORT
# ==============================================================================

def _markdown_csv(brain: MonkeyBrain, name: str) -> Optional[str]:
    if not brain.exists(name):
        return None
    return OwlEconometrics.to_markdown(brain.read_csv(name).fillna(""))


def cmd_report(config: PipelineConfig) -> int:
    """Formats existing artifacts; nothing is recomputed."""
    brain = _brain(config)
    brain.read_json("fits.json", "regress")
    artifacts = [name for name in brain.listing() if name != "report.md"]
    checksums = {name: brain.checksum(name) for name in artifacts}

    def optional_json(name: str) -> Optional[Dict[str, Any]]:
        return brain.read_json(name) if brain.exists(name) else None

    def optional_text(name: str) -> Optional[str]:
        return brain.read_text(name).rstrip("\n") if brain.exists(name) else None

    context = {
        "tool": f"{TOOL_NAME}/{TOOL_VERSION}",
        "config_hash": brain.config_hash,
        "checksums": checksums,
        "ingest": optional_json("ingest_summary.json"),
        "deleted": _markdown_csv(brain, "deleted_apps.csv"),
        "niche": optional_json("niche_summary.json"),
        "niche_histogram": _markdown_csv(brain, "niche_histogram.csv"),
        "sample_counts": _markdown_csv(brain, "sample_counts.csv"),
        "summary": _markdown_csv(brain, "summary.csv"),
        "summary_raw": _markdown_csv(brain, "summary_raw.csv"),
        "corr_x": _markdown_csv(brain, "corr_x.csv"),
        "corr_y": _markdown_csv(brain, "corr_y.csv"),
        "choices": brain.read_json("fits.json").get("choices", {}),
        "step_models": optional_text("step_models.md"),
        "interactions": {
            scheme: optional_text(f"interaction_{scheme}.md") for scheme in ("period", "category", "ml")
        },
        "equilibria": {
            name: optional_json(f"equilibrium_{name}.json") for name in ("sz", "borenstein")
        },
    }
    environment = Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    body = environment.get_template("report.md.j2").render(**context)
    brain.write_text("report.md", body)
    Bananas.notify("SUCCESS", f"Report assembled from {len(artifacts)} artifacts")
    return 0


# ==============================================================================
# 🌱 GEN-SYNTHETIC
# ==============================================================================

def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    values = {name: getattr(args, name) for name in SyntheticSpec.model_fields if getattr(args, name, None) is not None}
    spec = SyntheticSpec(**values)
    written = GenesisProtocol.ignite(spec, Path(args.output_dir))
    Bananas.notify("SUCCESS", f"Synthetic corpus written to {written['panel']}")
    return 0


# ==============================================================================
# 🧭 ARGUMENT PARSING
# ==============================================================================

def _annotation_type(annotation: Any) -> Callable[[str], Any]:
    # anything richer than a scalar is parsed by the model from its string form
    if annotation in (bool, Optional[bool]):
        return _parse_bool
    if annotation in (int, Optional[int]):
        return int
    if annotation in (float, Optional[float]):
        return float
    return str


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got '{value}'")


def _add_model_flags(parser: argparse.ArgumentParser, model: type) -> None:
    """One --kebab-case flag per model field; every flag defaults to None."""
    for name, info in model.model_fields.items():
        flag = "--" + name.replace("_", "-")
        parser.add_argument(
            flag, dest=name, default=None, type=_annotation_type(info.annotation),
            metavar=name.upper(), help=info.description or f"default: {info.default}",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="just-in-niche", description="App-store niche index pipeline.")
    parser.add_argument("--verbose", action="store_true", help="log DEBUG events to the console")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("ingest", "impute", "niche", "describe", "regress", "report", "equilibrium"):
        sub = commands.add_parser(name)
        sub.add_argument("--config", type=Path, default=None, help="key=value config file")
        _add_model_flags(sub, PipelineConfig)
        if name == "equilibrium":
            sub.add_argument("--model", choices=("sz", "borenstein"), default="sz")
            sub.add_argument("--theta", type=float)
            sub.add_argument("--l-alpha", dest="l_alpha", type=float)
            sub.add_argument("--l-beta", dest="l_beta", type=float)
            sub.add_argument("--c", type=float)
            sub.add_argument("--discrimination", action="store_true", default=None)
            sub.add_argument("--n-brands", dest="n_brands", type=int)
            sub.add_argument("--A", dest="A", type=float)
            sub.add_argument("--c-strength", dest="c_strength", type=float)
            sub.add_argument("--L", dest="L", type=float)
            sub.add_argument("--F", dest="F", type=float)
            sub.add_argument("--m", type=float)
            sub.add_argument("--segment-share", dest="segment_share", type=float)
            sub.add_argument("--low-value-ratio", dest="low_value_ratio", type=float)
            sub.add_argument("--A-niche", dest="A_niche", type=float)
            sub.add_argument("--two-price", dest="two_price", action="store_true")
            sub.add_argument("--sweep", choices=("theta", "ratio", "brands"), default=None)

    synthetic = commands.add_parser("gen-synthetic")
    synthetic.add_argument("--output-dir", dest="output_dir", type=Path, default=Path("synthetic"))
    _add_model_flags(synthetic, SyntheticSpec)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    MonkeyHeart.configure(verbose=args.verbose)

    stages = {
        "ingest": cmd_ingest,
        "impute": cmd_impute,
        "niche": cmd_niche,
        "describe": cmd_describe,
        "regress": cmd_regress,
        "report": cmd_report,
    }
    try:
        if args.command == "gen-synthetic":
            return cmd_gen_synthetic(args)
        config = _load_config(args)
        if args.command == "equilibrium":
            return cmd_equilibrium(config, args)
        return stages[args.command](config)
    except ValidationError as exc:
        return Bananas.report_collision(ConfigSlip(f"invalid parameters: {exc}"), args.command.upper())
    except BananaSlip as slip:
        return Bananas.report_collision(slip, args.command.upper())


if __name__ == "__main__":
    sys.exit(main())

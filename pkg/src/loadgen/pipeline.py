"""End-to-end pipeline stages: simulate, prep, train, generate, evaluate.

Each stage is a plain function over a RunConfig, returning a pydantic
result model; the HTTP service and the CLI both dispatch to these. All
randomness is derived from the master seed, so rerunning any stage with
identical inputs reproduces its outputs byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from loadgen.config import RunConfig
from loadgen.cvae import (
    Checkpoint,
    class_sample_conditions,
    generate,
    load_checkpoint,
    match_training_conditions,
    save_checkpoint,
    train,
)
from loadgen.datapipe import (
    assemble_days,
    compute_intensities,
    filter_and_scale,
    ingest_csv,
    load_prepared,
    rank_intensity,
    save_prepared,
    simulate_dataset,
    week_block_split,
)
from loadgen.errors import ConfigError, PipelineError
from loadgen.evalsuite import (
    AutoencoderConfig,
    SampleSet,
    ae_recon_errors,
    cdf_columns,
    cluster_compare,
    energy_distance,
    kmeans_fit,
    ks_per_dimension,
    load_sample_set,
    mean_profile_table,
    save_sample_set,
    train_reference_ae,
)
from loadgen.evalsuite.reporting import (
    write_cdf_csv,
    write_cluster_csv,
    write_json,
    write_mean_profile_csv,
)

GENERATION_MODES = ("match-training", "class-sample")
_METRIC_PAIRS = (
    ("train", "test"),
    ("train", "gen-noisy"),
    ("train", "gen-noisefree"),
    ("test", "gen-noisy"),
    ("test", "gen-noisefree"),
)


class SimulateResult(BaseModel):
    rows: int
    users: int
    archetypes: dict[str, int]
    path: str
    sha256: str


class PrepResult(BaseModel):
    users_retained: int
    users_dropped_over_limit: int
    users_excluded_all_zero: int
    train_profiles: int
    test_profiles: int
    days_dropped: int
    malformed_rows: int
    path: str
    sha256: str


class TrainStepResult(BaseModel):
    epochs: int
    final_train_total: float | None
    final_test_total: float | None
    checkpoint_path: str
    history_path: str


class GenerateResult(BaseModel):
    count: int
    mode: str
    noise: bool
    label: str
    path: str


class EvaluateResult(BaseModel):
    summary: dict
    report_dir: str
    files: list[str]


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def run_simulate(config: RunConfig) -> SimulateResult:
    sim = config.simulator.model_copy(update={"seed": config.seed_for("simulate")})
    path = config.raw_csv_path
    counts = simulate_dataset(sim, path)
    return SimulateResult(
        rows=counts["rows"], users=counts["users"], archetypes=counts["archetypes"],
        path=str(path), sha256=_sha256(path),
    )


def run_prep(config: RunConfig) -> PrepResult:
    raw = config.raw_csv_path
    if not raw.exists():
        raise PipelineError(f"raw CSV not found: {raw}")
    source_hash = _sha256(raw)

    records, ingest_report = ingest_csv(raw)
    days, assembly = assemble_days(records)
    if len(days) == 0:
        raise PipelineError("no complete day profiles after assembly")
    table, excluded = compute_intensities(days)
    ranked = rank_intensity(table)
    dataset, survivors = filter_and_scale(days, ranked)

    split = week_block_split(dataset.dates, config.seed_for("split"))
    if split.is_test.all() or not split.is_test.any():
        raise PipelineError(
            "the week-block split left one side empty; use more weeks or a "
            "different master seed"
        )
    dataset.is_test = split.is_test
    dataset.meta.update({
        "master_seed": config.master_seed,
        "split_seed": split.seed,
        "source_sha256": source_hash,
        "users_excluded_all_zero": len(excluded),
        "days_dropped": assembly.days_dropped,
        "train_profiles": int((~split.is_test).sum()),
        "test_profiles": int(split.is_test.sum()),
    })
    path = config.prepared_path
    path.parent.mkdir(parents=True, exist_ok=True)
    save_prepared(path, dataset)
    return PrepResult(
        users_retained=dataset.meta["users_retained"],
        users_dropped_over_limit=dataset.meta["users_dropped_over_limit"],
        users_excluded_all_zero=len(excluded),
        train_profiles=dataset.meta["train_profiles"],
        test_profiles=dataset.meta["test_profiles"],
        days_dropped=assembly.days_dropped,
        malformed_rows=ingest_report.malformed_total,
        path=str(path),
        sha256=_sha256(path),
    )


def _write_history_csv(path: Path, history) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_kl_beta", "train_recon", "test_kl_beta", "test_recon"])
        for e in history:
            writer.writerow([
                e.epoch, repr(e.train_kl_beta), repr(e.train_recon),
                repr(e.test_kl_beta), repr(e.test_recon),
            ])


def run_train(config: RunConfig) -> TrainStepResult:
    prepared = load_prepared(config.prepared_path)
    train_ds = prepared.train
    test_ds = prepared.test
    if len(train_ds) == 0:
        raise PipelineError("prepared dataset has no training profiles")

    cvae_config = config.cvae.model_copy(update={"seed": config.seed_for("train")})
    result = train(
        train_ds.values, train_ds.conditions, test_ds.values, test_ds.conditions,
        cvae_config,
    )
    checkpoint = Checkpoint(
        config=cvae_config,
        model=result.model,
        scale_kw=prepared.meta.get("scale_kw", 100.0),
        history=result.history,
    )
    ckpt_path = config.checkpoint_path
    ckpt_path.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(ckpt_path, checkpoint)
    _write_history_csv(config.history_path, result.history)
    last = result.history[-1] if result.history else None
    return TrainStepResult(
        epochs=cvae_config.epochs,
        final_train_total=last.train_total if last else None,
        final_test_total=last.test_total if last else None,
        checkpoint_path=str(ckpt_path),
        history_path=str(config.history_path),
    )


def parse_generation_mode(mode: str) -> tuple[str, str | None]:
    """'match-training' or 'class-sample:<small|medium|large>'."""
    if mode == "match-training":
        return "match-training", None
    base, _, size_class = mode.partition(":")
    if base == "class-sample" and size_class in ("small", "medium", "large"):
        return base, size_class
    raise ConfigError(
        f"invalid generation mode {mode!r}; expected 'match-training' or "
        "'class-sample:<small|medium|large>'"
    )


def run_generate(config: RunConfig, mode: str = "match-training", noise: bool = True) -> GenerateResult:
    base, size_class = parse_generation_mode(mode)
    if not config.checkpoint_path.exists():
        raise PipelineError(f"checkpoint not found: {config.checkpoint_path}")
    checkpoint = load_checkpoint(config.checkpoint_path)

    if base == "match-training":
        prepared = load_prepared(config.prepared_path)
        train_ds = prepared.train
        if len(train_ds) == 0:
            raise PipelineError("prepared dataset has no training profiles to match")
        months = train_ds.months.astype(np.float64)
        ranks = train_ds.ranks
        conditions = match_training_conditions(months, ranks)
        label = "gen-noisy" if noise else "gen-noisefree"
        filename = f"gen_{'noisy' if noise else 'noisefree'}.npz"
    else:
        months = np.full(config.generation.count, float(config.generation.month))
        conditions = class_sample_conditions(
            config.generation.month, size_class, config.generation.count,
            config.seed_for(f"class:{size_class}"),
        )
        ranks = conditions[:, 2]
        label = f"gen-{size_class}-{'noisy' if noise else 'noisefree'}"
        filename = f"gen_class_{size_class}_{'noisy' if noise else 'noisefree'}.npz"

    # Noisy and noise-free variants share the seed (and thus the latent draws).
    gen_seed = config.seed_for("generate")
    values = generate(checkpoint.model, conditions, noise=noise, seed=gen_seed)
    samples = SampleSet(
        label=label, values=values, months=months, ranks=ranks,
        meta={"noise": noise, "seed": gen_seed, "mode": mode},
    )
    out_dir = config.generated_dir_path
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / filename
    save_sample_set(path, samples)
    return GenerateResult(count=len(samples), mode=mode, noise=noise, label=label, path=str(path))


def _interpolation_sets(config: RunConfig, checkpoint) -> list[SampleSet]:
    """Generated sets that differ only in the month condition."""
    rng = np.random.default_rng(config.seed_for("eval:interp:ranks"))
    ranks = rng.uniform(0.0, 1.0, size=config.evaluation.interpolation_count)
    seed = config.seed_for("eval:interp:draws")
    sets = []
    for month in config.evaluation.interpolation_months:
        conditions = match_training_conditions(np.full(ranks.shape, float(month)), ranks)
        values = generate(checkpoint.model, conditions, noise=True, seed=seed)
        sets.append(SampleSet(
            label=f"gen-m{month:g}", values=values,
            months=np.full(ranks.shape, float(month)), ranks=ranks,
        ))
    return sets


def run_evaluate(config: RunConfig) -> EvaluateResult:
    prepared = load_prepared(config.prepared_path)
    checkpoint = load_checkpoint(config.checkpoint_path)
    gen_dir = config.generated_dir_path
    sets = {
        "train": SampleSet(
            "train", prepared.train.values, prepared.train.months.astype(np.float64),
            prepared.train.ranks,
        ),
        "test": SampleSet(
            "test", prepared.test.values, prepared.test.months.astype(np.float64),
            prepared.test.ranks,
        ),
    }
    for filename, expected in (("gen_noisy.npz", "gen-noisy"), ("gen_noisefree.npz", "gen-noisefree")):
        path = gen_dir / filename
        if not path.exists():
            raise PipelineError(
                f"missing generated set {path}; run generate with --noise "
                f"{'on' if expected == 'gen-noisy' else 'off'} first"
            )
        sets[expected] = load_sample_set(path)

    report_dir = config.reports_dir_path
    report_dir.mkdir(parents=True, exist_ok=True)
    files: list[str] = []
    ev = config.evaluation
    summary: dict = {
        "master_seed": config.master_seed,
        "seeds": {
            role: config.seed_for(role)
            for role in ("eval:kmeans", "eval:ae", "eval:interp:ranks", "eval:interp:draws")
        },
        "sets": {label: len(s) for label, s in sets.items()},
    }

    # Marginal distributions: per-dimension KS for every comparison pair.
    summary["ks"] = {}
    for a, b in _METRIC_PAIRS:
        report = ks_per_dimension(sets[a].values, sets[b].values)
        summary["ks"][f"{a}|{b}"] = {"mean": report.mean, "max": report.max}

    # Population-level multivariate similarity: subsampled energy distance.
    summary["energy"] = {}
    for a, b in _METRIC_PAIRS:
        n_sub = min(ev.energy_subsample, len(sets[a]), len(sets[b]))
        report = energy_distance(
            sets[a].values, sets[b].values, subsample=n_sub,
            repeats=ev.energy_repeats, seed=config.seed_for(f"eval:energy:{a}:{b}"),
        )
        summary["energy"][f"{a}|{b}"] = {
            "estimate": report.estimate, "stderr": report.stderr,
            "subsample": report.subsample, "repeats": report.repeats,
        }

    # Profile-level realism: reconstruction errors under a reference autoencoder.
    ae_config = AutoencoderConfig(
        data_dim=checkpoint.config.data_dim,
        hidden=ev.ae_hidden or checkpoint.config.encoder_hidden,
        latent_dim=ev.ae_latent or checkpoint.config.latent_dim,
        epochs=ev.ae_epochs,
        batch_size=ev.ae_batch_size,
        learning_rate=ev.ae_learning_rate,
        seed=config.seed_for("eval:ae"),
    )
    ae, ae_history = train_reference_ae(sets["train"].values, ae_config)
    summary["ae"] = {"final_train_mse": ae_history[-1] if ae_history else None}
    deciles = np.linspace(0.1, 0.9, 9)
    for label, s in sets.items():
        errors = ae_recon_errors(ae, s.values)
        summary["ae"][label] = {
            "median": float(np.median(errors)),
            "mean": float(errors.mean()),
            "deciles": np.quantile(errors, deciles).tolist(),
        }

    # Cluster structure: k-means on train, nearest-cluster comparison.
    centroids = kmeans_fit(sets["train"].values, ev.kmeans_k, config.seed_for("eval:kmeans"))
    cluster_report = cluster_compare(centroids, list(sets.values()))
    gaps = []
    for j in range(cluster_report.k):
        train_mean = cluster_report.means["train"][j]
        gen_mean = cluster_report.means["gen-noisy"][j]
        gap = float(np.nanmax(np.abs(gen_mean - train_mean))) if not (
            np.isnan(gen_mean).all() or np.isnan(train_mean).all()
        ) else None
        gaps.append(gap)
    summary["clusters"] = {
        "k": cluster_report.k,
        "counts": {label: c.tolist() for label, c in cluster_report.counts.items()},
        "gen_noisy_mean_gap": gaps,
    }
    cluster_path = report_dir / "clusters.csv"
    write_cluster_csv(cluster_path, cluster_report)
    files.append(str(cluster_path))

    # Mean profiles per (month, size class), Fig.-style comparison tables.
    profile_sets = [sets["train"], sets["gen-noisy"], sets["gen-noisefree"]]
    for month in ev.mean_profile_months:
        for size_class in ev.mean_profile_classes:
            table = mean_profile_table(
                profile_sets, float(month), size_class,
                seed=config.seed_for(f"eval:samples:{month}:{size_class}"),
            )
            path = report_dir / f"mean_profiles_m{month:g}_{size_class}.csv"
            write_mean_profile_csv(path, table)
            files.append(str(path))

    # Grouped CDF tables.
    cdf_inputs = {
        "month": list(sets.values()),
        "hour": list(sets.values()),
        "size": list(sets.values()),
        "interpolation": _interpolation_sets(config, checkpoint),
    }
    cdf_results = {}
    for grouping, group_sets in cdf_inputs.items():
        grid, columns = cdf_columns(group_sets, grouping)
        path = report_dir / f"cdf_{grouping}.csv"
        write_cdf_csv(path, grid, columns)
        files.append(str(path))
        cdf_results[grouping] = (grid, columns)
    interp_grid, interp_columns = cdf_results["interpolation"]
    summary["interpolation"] = {
        "months": list(ev.interpolation_months),
        "between_fraction": _between_fraction(interp_columns, ev.interpolation_months),
    }

    if ev.charts:
        from loadgen.evalsuite import charts

        chart_dir = report_dir / "charts"
        chart_dir.mkdir(exist_ok=True)
        for month in ev.mean_profile_months:
            for size_class in ev.mean_profile_classes:
                table = mean_profile_table(
                    profile_sets, float(month), size_class,
                    seed=config.seed_for(f"eval:samples:{month}:{size_class}"),
                )
                path = chart_dir / f"mean_profiles_m{month:g}_{size_class}.svg"
                charts.chart_mean_profiles(table, path, f"month {month}, {size_class} customers")
                files.append(str(path))
        for grouping in ("month", "hour", "size", "interpolation"):
            grid, columns = cdf_results[grouping]
            path = chart_dir / f"cdf_{grouping}.svg"
            charts.chart_cdfs(grid, columns, path, f"CDF comparison by {grouping}")
            files.append(str(path))
        path = chart_dir / "clusters.svg"
        charts.chart_clusters(cluster_report, path)
        files.append(str(path))

    summary_path = report_dir / "summary.json"
    write_json(summary_path, summary)
    files.append(str(summary_path))
    return EvaluateResult(summary=summary, report_dir=str(report_dir), files=files)


def _between_fraction(columns: dict, months: list[float]) -> float | None:
    """Fraction of grid points where the middle month's CDF lies between the outer two."""
    if len(months) != 3:
        return None
    lo, mid, hi = (columns.get(f"gen-m{m:g}") for m in months)
    if lo is None or mid is None or hi is None:
        return None
    lower = np.minimum(lo, hi)
    upper = np.maximum(lo, hi)
    ok = (mid >= lower) & (mid <= upper)
    return float(ok.mean())

"""Command-line surface.

Exit codes: 0 success, 2 input error, 3 numeric failure, 4 the
empty-Wishart-selection outcome (distinct so scripts can branch on it).
Standardization uses the population (1/T) standard deviation; all
clustering defaults are echoed into every report.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import experiment as exp
from .config import PipelineConfig, load_config, save_config
from .emd import first_imf_matrix
from .errors import EmptySelection, InputError, NumericError
from .io import export_plot_data, read_csv, report_dict, write_csv, write_report
from .kmeans import kmeans
from .matrix import DataMatrix, correlation_matrix, standardize, symmetric_eigen
from .pca import project, select_kaiser, select_wishart, wishart_bound
from .validity import DbParams, sweep_optimal_k

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_EMPTY_SELECTION = 4


def _add_common(parser: argparse.ArgumentParser, with_input: bool = True):
    if with_input:
        parser.add_argument("--in", dest="input", required=True, help="input CSV")
        parser.add_argument(
            "--transpose",
            action="store_true",
            help="transpose the CSV so columns become variables",
        )
    parser.add_argument("--seed", type=int, default=None, help="override the K-Means seed")
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", default=None, help="output path")


def _load(args) -> tuple[DataMatrix, PipelineConfig]:
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        config = dataclasses.replace(config, kmeans_seed=args.seed)
    matrix = read_csv(args.input, transpose=args.transpose) if hasattr(args, "input") else None
    return matrix, config


def _emit_json(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_condition(args) -> int:
    m, config = _load(args)
    report = exp.run_experiment(m, config, include_sweep=False)
    doc = report_dict(report)
    print("variant\tcondition_number")
    for name, value in doc["condition_numbers"].items():
        print(f"{name}\t{value}")
    if args.out:
        write_report(report, args.out)
    return EXIT_EMPTY_SELECTION if report.empty_wishart else EXIT_OK


def _cmd_emd(args) -> int:
    m, config = _load(args)
    result = first_imf_matrix(standardize(m), max_imfs=config.emd_max_imfs)
    if result.passthrough_rows:
        print(
            f"warning: rows passed through unchanged (no mode): "
            f"{list(result.passthrough_rows)}",
            file=sys.stderr,
        )
    if args.out:
        write_csv(result.matrix, args.out)
    print(f"first-mode matrix: {result.matrix.n_vars}x{result.matrix.n_samples}")
    return EXIT_OK


def _cmd_pca(args) -> int:
    m, config = _load(args)
    std = standardize(m)
    spectrum = symmetric_eigen(correlation_matrix(std))
    bound = wishart_bound(std.n_vars, std.n_samples)
    if args.select == "kaiser":
        indices = select_kaiser(spectrum, inclusive=config.kaiser_inclusive)
    elif args.select == "wishart":
        indices = select_wishart(spectrum, bound, strict=config.wishart_strict)
    elif args.select.startswith("top:"):
        indices = list(range(int(args.select[4:])))
    else:
        raise InputError(f"unknown selection rule {args.select!r}")
    reduction = project(
        std,
        spectrum,
        indices,
        normalized=config.score_normalization == "unit_variance",
        criterion=args.select,
    )
    print(
        f"selected {len(indices)} components "
        f"(criterion {args.select}, lambda_plus {bound.lambda_plus:.4f}, "
        f"explained fraction {reduction.explained_fraction:.4f})"
    )
    if args.out:
        _write_scores(reduction.scores, args.out)
    return EXIT_OK


def _write_scores(scores: np.ndarray, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        for row in scores:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _cmd_kmeans(args) -> int:
    m, config = _load(args)
    points = m.values if config.orientation == "cluster_variables" else m.values.T
    part = kmeans(
        points,
        args.k,
        seed=config.kmeans_seed,
        restarts=config.kmeans_restarts,
        max_iters=config.kmeans_max_iters,
    )
    doc = {
        "k": part.k,
        "objective_j": part.objective_j,
        "iterations": part.iterations,
        "restarts_used": part.restarts_used,
        "assignments": part.assignments.tolist(),
        "centroids": [list(map(float, c)) for c in part.centroids],
    }
    _emit_json(doc, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    m, config = _load(args)
    points = m.values if config.orientation == "cluster_variables" else m.values.T
    result = sweep_optimal_k(
        points,
        k_min=args.kmin if args.kmin else config.k_min,
        k_max=args.kmax if args.kmax else config.k_max,
        seed=config.kmeans_seed,
        restarts=config.kmeans_restarts,
        max_iters=config.kmeans_max_iters,
        params=DbParams(q=config.db_q, p=config.db_p),
    )
    doc = {
        "k_values": list(result.k_values),
        "db_scores": list(result.db_scores),
        "optimal_k": result.optimal_k,
    }
    _emit_json(doc, args.out)
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    m, config = _load(args)
    if args.variant != "all":
        config = dataclasses.replace(config, variants=(args.variant,))
    report = exp.run_experiment(m, config)
    if args.out:
        write_report(report, args.out)
    else:
        _emit_json(report_dict(report), None)
    if args.plot_dir:
        export_plot_data(report, args.plot_dir)
    return EXIT_EMPTY_SELECTION if report.empty_wishart else EXIT_OK


def _cmd_theorem(args) -> int:
    m, config = _load(args)
    report = exp.run_experiment(m, config)
    if report.verdict is not None:
        v = report.verdict
        print(
            f"K*={v.k_star}  C_kaiser={v.c_kaiser}  C_wishart={v.c_wishart}  "
            f"gap_kaiser={v.gap_kaiser}  gap_wishart={v.gap_wishart}"
        )
        print(
            f"K* ~ C_kaiser: {'holds' if v.verdict_kaiser else 'fails'}; "
            f"K* ~ C_wishart: {'holds' if v.verdict_wishart else 'fails'} "
            f"(tolerance {v.similarity_tolerance})"
        )
    if args.out:
        write_report(report, args.out)
    return EXIT_EMPTY_SELECTION if report.empty_wishart else EXIT_OK


def _cmd_synth(args) -> int:
    generator = (
        exp.generate_smooth_synthetic if args.smooth else exp.generate_synthetic
    )
    matrix, labels = generator(
        n_vars=args.n_vars,
        n_samples=args.n_samples,
        true_k=args.true_k,
        separation=args.separation,
        noise_sd=args.noise_sd,
        seed=args.seed if args.seed is not None else 0,
    )
    out = args.out or "synthetic.csv"
    write_csv(matrix, out)
    if args.labels_out:
        with open(args.labels_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(str(int(x)) for x in labels) + "\n")
    print(f"wrote {matrix.n_vars}x{matrix.n_samples} matrix to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="illclust",
        description=(
            "Clustering as an ill-posed inverse problem: reduce a variables-by-"
            "samples matrix (EMD first mode, PCA with Kaiser or Wishart "
            "selection), cluster the samples with K-Means, pick K by the "
            "Davies-Bouldin index, and compare cluster and component counts."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("condition", help="condition numbers of the four variants")
    _add_common(p)
    p.set_defaults(func=_cmd_condition)

    p = sub.add_parser("emd", help="replace each row with its first mode")
    _add_common(p)
    p.set_defaults(func=_cmd_emd)

    p = sub.add_parser("pca", help="project onto selected components")
    _add_common(p)
    p.add_argument(
        "--select",
        default="kaiser",
        help="kaiser, wishart, or top:C",
    )
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("kmeans", help="cluster the samples at a fixed K")
    _add_common(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_kmeans)

    p = sub.add_parser("sweep", help="Davies-Bouldin sweep over K")
    _add_common(p)
    p.add_argument("--kmin", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("pipeline", help="run pipeline variants and report")
    _add_common(p)
    p.add_argument(
        "--variant",
        default="all",
        choices=["raw", "emd", "pca-k", "pca-w", "all"],
    )
    p.add_argument("--plot-dir", default=None, help="also export TSV plot data here")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("theorem", help="cluster-count vs component-count comparison")
    _add_common(p)
    p.set_defaults(func=_cmd_theorem)

    p = sub.add_parser("synth", help="generate a synthetic benchmark matrix")
    _add_common(p, with_input=False)
    p.add_argument("--n-vars", type=int, default=96)
    p.add_argument("--n-samples", type=int, default=208)
    p.add_argument("--true-k", type=int, default=3)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--noise-sd", type=float, default=1.0)
    p.add_argument("--smooth", action="store_true",
                   help="add a shared slow trend and autocorrelated noise")
    p.add_argument("--labels-out", default=None, help="write ground-truth labels here")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("write-config", help="write the default config file")
    _add_common(p, with_input=False)
    p.set_defaults(func=_cmd_write_config)

    return parser


def _cmd_write_config(args) -> int:
    config = load_config(args.config) if args.config else PipelineConfig()
    save_config(config, args.out or "illclust.cfg")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EmptySelection as e:
        print(f"empty selection: {e}", file=sys.stderr)
        return EXIT_EMPTY_SELECTION
    except (InputError, FileNotFoundError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
